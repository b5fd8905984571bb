#include "slimnet/profile.hpp"
#include "slimnet/errors.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace slimnet {

std::size_t ActivationProfile::neuron_total() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.counts.size();
    return n;
}

ActivationProfile profile(const Network& net,
                          const std::vector<std::vector<double>>& inputs) {
    if (inputs.empty()) throw UsageError("profiling input set is empty");

    ActivationProfile prof;
    prof.sample_count = inputs.size();
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        if (net.layer(k).activation == Activation::ReLU)
            prof.layers.push_back({k, std::vector<std::uint64_t>(net.layer(k).out_width, 0)});
    }

    for (const auto& input : inputs) {
        const ForwardTrace trace = net.forward(input);
        for (auto& lc : prof.layers) {
            const auto& post = trace.activations[lc.layer_index];
            for (std::size_t j = 0; j < post.size(); ++j)
                if (post[j] > 0.0) ++lc.counts[j];
        }
    }
    return prof;
}

namespace {

HistogramResult histogram_over(const ActivationProfile& prof, double threshold,
                               const std::vector<const ActivationProfile::LayerCounts*>& layers) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw UsageError("histogram threshold must lie in (0,1)");

    std::size_t total = 0;
    std::size_t below = 0;
    for (const auto* lc : layers) {
        total += lc->counts.size();
        for (std::uint64_t c : lc->counts) {
            if (double(c) / double(prof.sample_count) < threshold) ++below;
        }
    }
    if (total == 0) throw UsageError("profile covers no neurons");
    return {below, double(below) / double(total)};
}

} // namespace

HistogramResult frequency_histogram(const ActivationProfile& prof, double threshold) {
    std::vector<const ActivationProfile::LayerCounts*> all;
    for (const auto& lc : prof.layers) all.push_back(&lc);
    return histogram_over(prof, threshold, all);
}

HistogramResult frequency_histogram(const ActivationProfile& prof, double threshold,
                                    std::size_t layer_index) {
    for (const auto& lc : prof.layers) {
        if (lc.layer_index == layer_index)
            return histogram_over(prof, threshold, {&lc});
    }
    throw UsageError("layer " + std::to_string(layer_index) + " is not in the profile");
}

void write_profile(std::ostream& os, const ActivationProfile& prof) {
    os << "# samples=" << prof.sample_count << "\n";
    char buf[64];
    for (const auto& lc : prof.layers) {
        for (std::size_t j = 0; j < lc.counts.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.6f",
                          double(lc.counts[j]) / double(prof.sample_count));
            os << lc.layer_index << ' ' << j << ' ' << lc.counts[j] << ' ' << buf << "\n";
        }
    }
}

} // namespace slimnet
