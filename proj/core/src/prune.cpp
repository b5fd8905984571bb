#include "slimnet/prune.hpp"
#include "slimnet/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace slimnet {

bool PruneSelection::empty() const {
    for (const auto& l : layers)
        if (!l.indices.empty()) return false;
    return true;
}

std::size_t PruneSelection::total_removed() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.indices.size();
    return n;
}

std::size_t PruneReport::total_removed() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.removed_count;
    return n;
}

PruneSelection select_prunable(const ActivationProfile& prof, double tau) {
    if (!(tau > 0.0 && tau < 1.0))
        throw UsageError("prune threshold must lie in (0,1)");

    PruneSelection sel;
    for (const auto& lc : prof.layers) {
        PruneSelection::LayerSelection ls;
        ls.layer_index = lc.layer_index;
        for (std::size_t j = 0; j < lc.counts.size(); ++j) {
            if (double(lc.counts[j]) / double(prof.sample_count) < tau)
                ls.indices.push_back(j);
        }
        if (ls.indices.size() == lc.counts.size() && !ls.indices.empty()) {
            // Whole layer below threshold: keep the most active neuron
            // (lowest index on ties) so the layer survives.
            std::size_t best = 0;
            for (std::size_t j = 1; j < lc.counts.size(); ++j)
                if (lc.counts[j] > lc.counts[best]) best = j;
            ls.indices.erase(std::find(ls.indices.begin(), ls.indices.end(), best));
            sel.warnings.push_back("layer " + std::to_string(lc.layer_index) +
                                   ": all neurons below threshold, keeping neuron " +
                                   std::to_string(best));
        }
        if (!ls.indices.empty()) sel.layers.push_back(std::move(ls));
    }
    return sel;
}

namespace {

// Validated lookup: removal indices for layer k, or nullptr.
const std::vector<std::size_t>* selection_for(const PruneSelection& sel,
                                              std::size_t layer_index) {
    for (const auto& l : sel.layers)
        if (l.layer_index == layer_index) return &l.indices;
    return nullptr;
}

} // namespace

PruneReport prune(Network& net, const PruneSelection& sel) {
    const std::size_t n_layers = net.layer_count();
    for (const auto& ls : sel.layers) {
        if (ls.layer_index >= n_layers)
            throw StructuralError("selection names layer " +
                                  std::to_string(ls.layer_index) +
                                  " but the network has " +
                                  std::to_string(n_layers) + " layers");
        const std::size_t width = net.layer(ls.layer_index).out_width;
        if (!std::is_sorted(ls.indices.begin(), ls.indices.end()) ||
            std::adjacent_find(ls.indices.begin(), ls.indices.end()) != ls.indices.end())
            throw StructuralError("selection indices must be sorted and unique");
        if (!ls.indices.empty() && ls.indices.back() >= width)
            throw StructuralError("selection index " +
                                  std::to_string(ls.indices.back()) +
                                  " out of range for layer " +
                                  std::to_string(ls.layer_index) + " of width " +
                                  std::to_string(width));
        if (ls.indices.size() >= width)
            throw StructuralError("selection would empty layer " +
                                  std::to_string(ls.layer_index));
    }

    PruneReport report;
    report.layers.reserve(n_layers);

    for (std::size_t k = 0; k < n_layers; ++k) {
        DenseLayer& l = net.layer(k);
        const auto* removed = selection_for(sel, k);
        const std::size_t width_before = l.out_width;
        const std::size_t removed_count = removed ? removed->size() : 0;

        if (removed_count > 0) {
            std::vector<bool> drop(width_before, false);
            for (std::size_t j : *removed) drop[j] = true;

            // Drop weight row j and bias j of this layer.
            std::vector<float> weights;
            std::vector<float> biases;
            weights.reserve((width_before - removed_count) * l.in_width);
            biases.reserve(width_before - removed_count);
            for (std::size_t j = 0; j < width_before; ++j) {
                if (drop[j]) continue;
                const float* row = l.weights.data() + j * l.in_width;
                weights.insert(weights.end(), row, row + l.in_width);
                biases.push_back(l.biases[j]);
            }
            l.weights = std::move(weights);
            l.biases = std::move(biases);
            l.out_width = width_before - removed_count;

            // Drop the matching input columns of the next layer.
            if (k + 1 < n_layers) {
                DenseLayer& next = net.layer(k + 1);
                std::vector<float> trimmed;
                trimmed.reserve(next.out_width * l.out_width);
                for (std::size_t j = 0; j < next.out_width; ++j) {
                    const float* row = next.weights.data() + j * next.in_width;
                    for (std::size_t i = 0; i < next.in_width; ++i)
                        if (!drop[i]) trimmed.push_back(row[i]);
                }
                next.weights = std::move(trimmed);
                next.in_width = l.out_width;
            }
        }

        report.layers.push_back({"FC" + std::to_string(k + 1), width_before,
                                 l.out_width, removed_count,
                                 double(removed_count) / double(width_before)});
    }
    return report;
}

LoopResult adaptive_loop(Network& net, const PairSet& train_pairs,
                         const PairSet& val_pairs, const LoopConfig& cfg) {
    if (cfg.max_iterations < 1)
        throw UsageError("max_iterations must be >= 1");
    if (!(cfg.tau > 0.0 && cfg.tau < 1.0))
        throw UsageError("prune threshold must lie in (0,1)");
    if (cfg.rollback_tolerance < 0.0)
        throw UsageError("rollback tolerance must be nonnegative");
    if (train_pairs.pairs.empty() || val_pairs.pairs.empty())
        throw UsageError("adaptive loop needs nonempty train and validation pairs");

    const auto val_patches = collect_pair_patches(val_pairs);

    LoopResult result;
    Network snapshot;              // state before the most recent prune
    double preprune_error = 0.0;   // Error@95% of that snapshot, in percent
    bool have_snapshot = false;

    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        train(net, train_pairs, cfg.retrain);

        EvalReport eval = error_at_95(score_pairs(net, val_pairs));
        const double error_pct = eval.error_at_95 * 100.0;
        result.eval_reports.push_back(std::move(eval));

        if (have_snapshot && error_pct > preprune_error + cfg.rollback_tolerance) {
            net = snapshot;
            result.rolled_back = true;
            result.rollback_iteration = iter;
            break;
        }

        const ActivationProfile prof = profile(net, val_patches);
        const PruneSelection sel = select_prunable(prof, cfg.tau);

        if (sel.empty()) {
            PruneReport report = prune(net, sel); // all-zero rows
            report.iteration = iter;
            result.prune_reports.push_back(std::move(report));
            break;
        }

        snapshot = net;
        preprune_error = error_pct;
        have_snapshot = true;

        PruneReport report = prune(net, sel);
        report.iteration = iter;
        result.prune_reports.push_back(std::move(report));
    }
    return result;
}

void write_prune_report(std::ostream& os, const PruneReport& report) {
    os << "name before after removed_ratio_percent\n";
    char buf[32];
    for (const auto& l : report.layers) {
        std::snprintf(buf, sizeof buf, "%.1f", l.removed_ratio * 100.0);
        os << l.name << ' ' << l.width_before << ' ' << l.width_after << ' '
           << buf << "\n";
    }
}

} // namespace slimnet
