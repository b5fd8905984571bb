#ifndef SLIMNET_PRUNE_HPP
#define SLIMNET_PRUNE_HPP

#include "slimnet/data.hpp"
#include "slimnet/eval.hpp"
#include "slimnet/net.hpp"
#include "slimnet/profile.hpp"
#include "slimnet/train.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace slimnet {

/// Neurons chosen for removal, per network layer. Indices are sorted and
/// unique; a selection never empties a layer (the keep-one guard retains
/// the highest-frequency neuron and records a warning instead).
struct PruneSelection {
    struct LayerSelection {
        std::size_t layer_index = 0;
        std::vector<std::size_t> indices; // sorted ascending
    };
    std::vector<LayerSelection> layers;
    std::vector<std::string> warnings;

    bool empty() const;
    std::size_t total_removed() const;
};

/// Per-layer before/after widths of one prune step. Rows cover every
/// network layer; removed_ratio = removed_count / width_before.
struct PruneReport {
    struct Layer {
        std::string name; // FC1, FC2, ...
        std::size_t width_before = 0;
        std::size_t width_after = 0;
        std::size_t removed_count = 0;
        double removed_ratio = 0.0;
    };
    std::vector<Layer> layers;
    std::size_t iteration = 0;

    std::size_t total_removed() const;
};

/// Selects every ReLU neuron with activation frequency strictly below tau.
/// The final descriptor layer participates when it is ReLU. tau must lie
/// in (0,1).
PruneSelection select_prunable(const ActivationProfile& profile, double tau);

/// Removes the selected neurons: for neuron j of layer l, weight row j and
/// bias j of layer l and weight column j of layer l+1 go away; if l is the
/// last layer the descriptor width shrinks. Surviving parameters are copied
/// bit-exactly. Throws StructuralError if a selection would empty a layer
/// or indexes out of range.
PruneReport prune(Network& net, const PruneSelection& sel);

struct LoopConfig {
    double tau = 0.01;
    std::size_t max_iterations = 5;
    TrainConfig retrain;              // used for every iteration's retrain
    double rollback_tolerance = 1.0;  // max Error@95% increase, percentage points
};

struct LoopResult {
    std::vector<PruneReport> prune_reports;
    std::vector<EvalReport> eval_reports;
    bool rolled_back = false;
    std::size_t rollback_iteration = 0; // 1-based, valid when rolled_back
};

/// The iterative shrink loop: per iteration, retrain; evaluate Error@95% on
/// the validation pairs; profile on the validation patches (both members of
/// each pair); select and prune at tau. Stops when a selection is empty,
/// when max_iterations is reached, or when the evaluation after a
/// post-prune retrain worsens by more than rollback_tolerance percentage
/// points over the pre-prune evaluation, in which case the pre-prune
/// network is restored and returned.
LoopResult adaptive_loop(Network& net, const PairSet& train_pairs,
                         const PairSet& val_pairs, const LoopConfig& cfg);

/// Text export, one row per layer: "name before after removed_ratio_percent"
/// with the ratio printed to 1 decimal place.
void write_prune_report(std::ostream& os, const PruneReport& report);

} // namespace slimnet

#endif
