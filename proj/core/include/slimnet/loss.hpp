#ifndef SLIMNET_LOSS_HPP
#define SLIMNET_LOSS_HPP

#include <cstddef>
#include <vector>

namespace slimnet {

/// A batch of descriptor pairs with binary match labels. `a[n]` and `b[n]`
/// are the two descriptors of pair n, `labels[n]` is 1 for a matching pair
/// and 0 otherwise. The margin is the push-apart distance for non-matches.
struct PairBatch {
    std::vector<std::vector<double>> a;
    std::vector<std::vector<double>> b;
    std::vector<int> labels;
    double margin = 1.0;

    std::size_t size() const { return labels.size(); }
};

/// Per-pair loss gradients w.r.t. the two descriptors. db == -da always.
struct PairGrad {
    std::vector<double> da;
    std::vector<double> db;
};

/// Euclidean distance between two equal-length descriptors.
double pair_distance(const std::vector<double>& a, const std::vector<double>& b);

/// Contrastive loss over the batch:
///   E = 1/(2N) * sum_n [ y_n d_n^2 + (1 - y_n) max(margin - d_n, 0)^2 ]
/// with d_n the Euclidean descriptor distance. Nonnegative; zero exactly
/// when every match pair coincides and every non-match is at least the
/// margin apart.
double contrastive_loss(const PairBatch& batch);

/// Gradients of the batch loss w.r.t. every descriptor. The match branch
/// reduces to (a - b) / N, so d = 0 causes no singularity; for non-match
/// pairs at d = 0 the gradient is defined as zero, and it vanishes for
/// non-matches at or beyond the margin.
std::vector<PairGrad> loss_grad(const PairBatch& batch);

} // namespace slimnet

#endif
