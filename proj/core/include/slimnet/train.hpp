#ifndef SLIMNET_TRAIN_HPP
#define SLIMNET_TRAIN_HPP

#include "slimnet/data.hpp"
#include "slimnet/net.hpp"

#include <cstdint>
#include <vector>

namespace slimnet {

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t epochs = 30;
    std::size_t batch_size = 32;
    double margin = 1.0;
    std::uint64_t shuffle_seed = 0;
    double momentum = 0.0; // classical momentum, in [0,1)
};

struct TrainRecord {
    std::vector<double> epoch_loss;      // mean training loss per epoch
    std::vector<double> epoch_val_loss;  // empty when no validation set given
    double wall_seconds = 0.0;
};

/// Shuffled mini-batch SGD on the contrastive loss, mutating `net` in
/// place. One full-dataset permutation per epoch from shuffle_seed; a
/// short final batch is kept. Deterministic for fixed inputs and config.
/// Throws DivergenceError (naming epoch and batch) if the loss goes
/// non-finite.
TrainRecord train(Network& net, const PairSet& pairs, const TrainConfig& cfg,
                  const PairSet* val = nullptr);

/// Mean contrastive loss of the whole pair set under the current weights.
double dataset_loss(const Network& net, const PairSet& pairs, double margin);

} // namespace slimnet

#endif
