#ifndef SLIMNET_TESTS_SUPPORT_HPP
#define SLIMNET_TESTS_SUPPORT_HPP

// Test-only oracles and generators. The oracles here are deliberately
// independent of the code paths they check: finite differences use only
// loss evaluations, and the Error@95% sweep tries every candidate
// threshold exhaustively.

#include "slimnet/eval.hpp"
#include "slimnet/loss.hpp"
#include "slimnet/net.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace slimnet::testing {

struct TestPair {
    std::vector<double> x_a;
    std::vector<double> x_b;
    int label = 0;
};

inline std::vector<TestPair> random_pairs(std::size_t n, std::size_t dim,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution lab(0.5);
    std::vector<TestPair> pairs(n);
    for (auto& p : pairs) {
        p.x_a.resize(dim);
        p.x_b.resize(dim);
        for (auto& v : p.x_a) v = val(rng);
        for (auto& v : p.x_b) v = val(rng);
        p.label = lab(rng) ? 1 : 0;
    }
    return pairs;
}

/// Batch contrastive loss of the network over raw input pairs; the scalar
/// the finite-difference oracle probes.
inline double batch_loss(const Network& net, const std::vector<TestPair>& pairs,
                         double margin) {
    PairBatch batch;
    batch.margin = margin;
    for (const auto& p : pairs) {
        batch.a.push_back(net.forward(p.x_a).descriptor());
        batch.b.push_back(net.forward(p.x_b).descriptor());
        batch.labels.push_back(p.label);
    }
    return contrastive_loss(batch);
}

/// Analytic gradient of batch_loss w.r.t. all network parameters, via
/// loss_grad + backprop_pair.
inline Gradients analytic_gradient(const Network& net,
                                   const std::vector<TestPair>& pairs,
                                   double margin) {
    PairBatch batch;
    batch.margin = margin;
    std::vector<ForwardTrace> ta, tb;
    for (const auto& p : pairs) {
        ta.push_back(net.forward(p.x_a));
        tb.push_back(net.forward(p.x_b));
        batch.a.push_back(ta.back().descriptor());
        batch.b.push_back(tb.back().descriptor());
        batch.labels.push_back(p.label);
    }
    const auto pair_grads = loss_grad(batch);
    Gradients grads = net.zero_gradients();
    for (std::size_t k = 0; k < pairs.size(); ++k)
        backprop_pair_into(net, ta[k], tb[k], pair_grads[k].da, pair_grads[k].db,
                           grads);
    return grads;
}

/// Central finite difference on one stored float32 parameter. The realized
/// perturbed values (after float rounding) form the denominator, so the
/// quotient is an honest central difference around the parameter.
inline double fd_param(Network& net, float& param,
                       const std::vector<TestPair>& pairs, double margin,
                       double h = 1e-4) {
    const float orig = param;
    const float up = float(double(orig) + h);
    const float down = float(double(orig) - h);
    param = up;
    const double loss_up = batch_loss(net, pairs, margin);
    param = down;
    const double loss_down = batch_loss(net, pairs, margin);
    param = orig;
    return (loss_up - loss_down) / (double(up) - double(down));
}

/// True when every ReLU pre-activation and every pair distance stays at
/// least `band` away from a loss kink (zero for ReLU; zero and the margin
/// for non-match distances). On such fixtures a central difference with
/// step well under `band` is a valid derivative estimate for every
/// parameter; fixtures failing this are rejected, never loosened.
inline bool clear_of_kinks(const Network& net, const std::vector<TestPair>& pairs,
                           double margin, double band) {
    for (const auto& p : pairs) {
        for (const auto* x : {&p.x_a, &p.x_b}) {
            std::vector<double> cur = *x;
            for (std::size_t k = 0; k < net.layer_count(); ++k) {
                const auto& l = net.layer(k);
                std::vector<double> next(l.out_width);
                for (std::size_t j = 0; j < l.out_width; ++j) {
                    double acc = double(l.biases[j]);
                    for (std::size_t i = 0; i < l.in_width; ++i)
                        acc += double(l.w(j, i)) * cur[i];
                    if (l.activation == Activation::ReLU) {
                        if (std::abs(acc) < band) return false;
                        next[j] = std::max(acc, 0.0);
                    } else {
                        next[j] = acc;
                    }
                }
                cur = std::move(next);
            }
        }
        if (p.label == 0) {
            const double d = pair_distance(net.forward(p.x_a).descriptor(),
                                           net.forward(p.x_b).descriptor());
            if (d < band || std::abs(d - margin) < band) return false;
        }
    }
    return true;
}

/// Worst relative disagreement between the analytic gradient and finite
/// differences over every parameter of the network. Only meaningful on
/// fixtures that are clear_of_kinks.
inline double max_gradient_mismatch(Network& net,
                                    const std::vector<TestPair>& pairs,
                                    double margin) {
    const Gradients grads = analytic_gradient(net, pairs, margin);
    double worst = 0.0;
    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        auto& layer = net.layer(k);
        for (std::size_t i = 0; i < layer.weights.size(); ++i) {
            const double fd = fd_param(net, layer.weights[i], pairs, margin);
            const double rel =
                std::abs(grads.layers[k].weights[i] - fd) / std::max(1.0, std::abs(fd));
            worst = std::max(worst, rel);
        }
        for (std::size_t i = 0; i < layer.biases.size(); ++i) {
            const double fd = fd_param(net, layer.biases[i], pairs, margin);
            const double rel =
                std::abs(grads.layers[k].biases[i] - fd) / std::max(1.0, std::abs(fd));
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

/// Exhaustive Error@95% oracle: tries every distance as the threshold and
/// takes the smallest one reaching 95% recall.
inline double sweep_error_at_95(const std::vector<ScoredPair>& scores) {
    std::size_t n_match = 0, n_nonmatch = 0;
    for (const auto& s : scores) (s.label == 1 ? n_match : n_nonmatch)++;

    double best_threshold = 0.0;
    bool found = false;
    for (const auto& cand : scores) {
        std::size_t tp = 0;
        for (const auto& s : scores)
            if (s.label == 1 && s.distance <= cand.distance) ++tp;
        if (double(tp) / double(n_match) >= 0.95) {
            if (!found || cand.distance < best_threshold) {
                best_threshold = cand.distance;
                found = true;
            }
        }
    }
    std::size_t fp = 0;
    for (const auto& s : scores)
        if (s.label == 0 && s.distance <= best_threshold) ++fp;
    return double(fp) / double(n_nonmatch);
}

} // namespace slimnet::testing

#endif
