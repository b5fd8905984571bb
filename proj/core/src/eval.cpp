#include "slimnet/eval.hpp"
#include "slimnet/errors.hpp"
#include "slimnet/loss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace slimnet {

std::vector<ScoredPair> score_pairs(const Network& net, const PairSet& pairs) {
    if (pairs.pairs.empty()) throw UsageError("no pairs to score");

    std::vector<ScoredPair> scores;
    scores.reserve(pairs.pairs.size());
    for (std::size_t n = 0; n < pairs.pairs.size(); ++n) {
        const auto da = net.forward(pairs.pair_a(n)).descriptor();
        const auto db = net.forward(pairs.pair_b(n)).descriptor();
        scores.push_back({pair_distance(da, db), pairs.pairs[n].y});
    }
    return scores;
}

EvalReport error_at_95(const std::vector<ScoredPair>& scores, bool with_roc) {
    std::vector<double> match, nonmatch;
    for (const auto& s : scores) {
        if (!std::isfinite(s.distance))
            throw InputError("non-finite pair distance");
        (s.label == 1 ? match : nonmatch).push_back(s.distance);
    }
    if (match.empty() || nonmatch.empty())
        throw UsageError("Error@95% needs at least one match and one non-match");

    std::sort(match.begin(), match.end());

    // 95th-percentile match distance by ceiling index.
    const std::size_t k = std::size_t(std::ceil(0.95 * double(match.size())));
    const double t = match[k - 1];

    std::size_t false_pos = 0;
    for (double d : nonmatch)
        if (d <= t) ++false_pos;

    EvalReport report;
    report.threshold_used = t;
    report.n_match = match.size();
    report.n_nonmatch = nonmatch.size();
    report.error_at_95 = double(false_pos) / double(nonmatch.size());

    if (with_roc) {
        std::vector<double> thresholds;
        thresholds.reserve(scores.size());
        for (const auto& s : scores) thresholds.push_back(s.distance);
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                         thresholds.end());

        for (double th : thresholds) {
            const auto tp = std::size_t(
                std::upper_bound(match.begin(), match.end(), th) - match.begin());
            std::size_t fp = 0;
            for (double d : nonmatch)
                if (d <= th) ++fp;
            report.roc.push_back({th, double(tp) / double(match.size()),
                                  double(fp) / double(nonmatch.size())});
        }
    }
    return report;
}

void write_eval(std::ostream& os, const EvalReport& report) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", report.error_at_95 * 100.0);
    os << "error_at_95_percent=" << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.9g", report.threshold_used);
    os << "threshold=" << buf << "\n";
    os << "n_match=" << report.n_match << "\n";
    os << "n_nonmatch=" << report.n_nonmatch << "\n";
}

void write_roc_csv(std::ostream& os, const EvalReport& report) {
    os << "threshold,tpr,fpr\n";
    char buf[96];
    for (const auto& p : report.roc) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g", p.threshold, p.tpr, p.fpr);
        os << buf << "\n";
    }
}

} // namespace slimnet
