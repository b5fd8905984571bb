#ifndef SLIMNET_PROFILE_HPP
#define SLIMNET_PROFILE_HPP

#include "slimnet/net.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace slimnet {

/// Per-neuron activation counts over a profiling set, for ReLU layers only.
/// A neuron counts as activated on an input when its post-activation output
/// is strictly greater than zero. Frequencies are integer counts divided by
/// the sample count, computed once on demand.
struct ActivationProfile {
    struct LayerCounts {
        std::size_t layer_index = 0; // index into the profiled network
        std::vector<std::uint64_t> counts;
    };
    std::vector<LayerCounts> layers;
    std::uint64_t sample_count = 0;

    double frequency(std::size_t layer_pos, std::size_t neuron) const {
        return double(layers[layer_pos].counts[neuron]) / double(sample_count);
    }
    std::size_t neuron_total() const;
};

/// Counts activations of every ReLU neuron over the inputs.
/// Throws UsageError on an empty input set.
ActivationProfile profile(const Network& net,
                          const std::vector<std::vector<double>>& inputs);

struct HistogramResult {
    std::size_t below_count = 0;
    double below_fraction = 0.0;
};

/// Neurons with activation frequency strictly below `threshold`, over all
/// profiled layers. threshold must lie in (0,1).
HistogramResult frequency_histogram(const ActivationProfile& profile,
                                    double threshold);

/// Same, restricted to the profiled layer with the given network layer index.
HistogramResult frequency_histogram(const ActivationProfile& profile,
                                    double threshold, std::size_t layer_index);

/// Text export: header "# samples=<N>", then one line per neuron,
/// "layer_index neuron_index count frequency" with 6-decimal frequency.
void write_profile(std::ostream& os, const ActivationProfile& profile);

} // namespace slimnet

#endif
