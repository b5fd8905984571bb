#ifndef SLIMNET_EVAL_HPP
#define SLIMNET_EVAL_HPP

#include "slimnet/data.hpp"
#include "slimnet/net.hpp"

#include <iosfwd>
#include <vector>

namespace slimnet {

struct ScoredPair {
    double distance = 0.0;
    int label = 0; // 1 match, 0 non-match
};

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

/// Error@95%: the false positive rate at the distance threshold reaching
/// 95% recall on match pairs. Lower is better.
struct EvalReport {
    double error_at_95 = 0.0;   // in [0,1]
    double threshold_used = 0.0;
    std::size_t n_match = 0;
    std::size_t n_nonmatch = 0;
    std::vector<RocPoint> roc;  // filled only when requested
};

/// Descriptor distance for every pair under the current network.
std::vector<ScoredPair> score_pairs(const Network& net, const PairSet& pairs);

/// Computes Error@95% from scored pairs. A pair is predicted "match" when
/// its distance is <= t. The operating threshold is the ceil(0.95 * n_match)-th
/// smallest match distance; ties at the threshold count on both sides.
/// Requires at least one match and one non-match.
EvalReport error_at_95(const std::vector<ScoredPair>& scores, bool with_roc = false);

/// Text export: "error_at_95_percent=<v>" (2 decimals), "threshold=<t>",
/// "n_match=<..>", "n_nonmatch=<..>".
void write_eval(std::ostream& os, const EvalReport& report);

/// CSV export of the ROC operating points: "threshold,tpr,fpr".
void write_roc_csv(std::ostream& os, const EvalReport& report);

} // namespace slimnet

#endif
