#include "slimnet/train.hpp"
#include "slimnet/errors.hpp"
#include "slimnet/loss.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace slimnet {

namespace {

void validate(const Network& net, const PairSet& pairs, const TrainConfig& cfg) {
    if (pairs.pairs.empty()) throw UsageError("training pair set is empty");
    if (!(cfg.learning_rate >= 0.0)) throw UsageError("learning rate must be >= 0");
    if (cfg.epochs < 1) throw UsageError("epochs must be >= 1");
    if (cfg.batch_size < 1) throw UsageError("batch size must be >= 1");
    if (!(cfg.margin > 0.0)) throw UsageError("margin must be positive");
    if (cfg.momentum < 0.0 || cfg.momentum >= 1.0)
        throw UsageError("momentum must lie in [0,1)");
    for (const auto& v : pairs.vectors) {
        if (v.size() != net.input_width())
            throw InputError("pair vector length " + std::to_string(v.size()) +
                             " does not match network input width " +
                             std::to_string(net.input_width()));
    }
}

} // namespace

double dataset_loss(const Network& net, const PairSet& pairs, double margin) {
    PairBatch batch;
    batch.margin = margin;
    batch.a.reserve(pairs.pairs.size());
    batch.b.reserve(pairs.pairs.size());
    batch.labels.reserve(pairs.pairs.size());
    for (std::size_t n = 0; n < pairs.pairs.size(); ++n) {
        batch.a.push_back(net.forward(pairs.pair_a(n)).descriptor());
        batch.b.push_back(net.forward(pairs.pair_b(n)).descriptor());
        batch.labels.push_back(pairs.pairs[n].y);
    }
    return contrastive_loss(batch);
}

TrainRecord train(Network& net, const PairSet& pairs, const TrainConfig& cfg,
                  const PairSet* val) {
    validate(net, pairs, cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t n_pairs = pairs.pairs.size();
    std::vector<std::size_t> order(n_pairs);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(cfg.shuffle_seed);

    Gradients velocity;
    if (cfg.momentum > 0.0) velocity = net.zero_gradients();

    TrainRecord record;
    record.epoch_loss.reserve(cfg.epochs);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);

        double loss_sum = 0.0; // sum of per-pair loss terms, already /2
        for (std::size_t start = 0; start < n_pairs; start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, n_pairs);
            const std::size_t batch_n = end - start;

            PairBatch batch;
            batch.margin = cfg.margin;
            batch.a.reserve(batch_n);
            batch.b.reserve(batch_n);
            batch.labels.reserve(batch_n);
            std::vector<ForwardTrace> traces_a, traces_b;
            traces_a.reserve(batch_n);
            traces_b.reserve(batch_n);

            for (std::size_t k = start; k < end; ++k) {
                const std::size_t n = order[k];
                traces_a.push_back(net.forward(pairs.pair_a(n)));
                traces_b.push_back(net.forward(pairs.pair_b(n)));
                batch.a.push_back(traces_a.back().descriptor());
                batch.b.push_back(traces_b.back().descriptor());
                batch.labels.push_back(pairs.pairs[n].y);
            }

            const double batch_loss = contrastive_loss(batch);
            if (!std::isfinite(batch_loss))
                throw DivergenceError("non-finite loss at epoch " +
                                      std::to_string(epoch) + ", batch " +
                                      std::to_string(start / cfg.batch_size));
            loss_sum += batch_loss * double(batch_n);

            const auto pair_grads = loss_grad(batch);
            Gradients grads = net.zero_gradients();
            for (std::size_t k = 0; k < batch_n; ++k) {
                backprop_pair_into(net, traces_a[k], traces_b[k],
                                   pair_grads[k].da, pair_grads[k].db, grads);
            }

            if (cfg.momentum > 0.0) {
                velocity.scale(cfg.momentum);
                velocity.add(grads);
                net.apply_step(velocity, cfg.learning_rate);
            } else {
                net.apply_step(grads, cfg.learning_rate);
            }
        }

        record.epoch_loss.push_back(loss_sum / double(n_pairs));
        if (val != nullptr)
            record.epoch_val_loss.push_back(dataset_loss(net, *val, cfg.margin));
    }

    record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return record;
}

} // namespace slimnet
