#include <benchmark/benchmark.h>

#include "slimnet/data.hpp"
#include "slimnet/eval.hpp"
#include "slimnet/loss.hpp"
#include "slimnet/net.hpp"
#include "slimnet/profile.hpp"
#include "slimnet/prune.hpp"
#include "slimnet/train.hpp"

#include <random>
#include <vector>

using namespace slimnet;

namespace {

Network desk_net(std::uint64_t seed) {
    return Network::init({{256, 128, Activation::ReLU},
                          {128, 128, Activation::ReLU},
                          {128, 64, Activation::ReLU}},
                         seed);
}

PairSet desk_pairs(std::size_t n_pairs, std::uint64_t seed) {
    SyntheticConfig cfg;
    cfg.seed = seed;
    cfg.n_points = 20;
    cfg.patches_per_point = 6;
    cfg.n_train_pairs = n_pairs;
    cfg.n_val_pairs = 2;
    return to_pair_set(generate_synthetic(cfg).train_set());
}

} // namespace

static void BM_Forward(benchmark::State& state) {
    const Network net = desk_net(1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(256);
    for (auto& v : x) v = unit(rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(net.forward(x).descriptor());
}
BENCHMARK(BM_Forward);

static void BM_PairBackprop(benchmark::State& state) {
    const Network net = desk_net(3);
    const PairSet ps = desk_pairs(2, 4);
    const auto& a = ps.pair_a(0);
    const auto& b = ps.pair_b(0);
    for (auto _ : state) {
        const ForwardTrace ta = net.forward(a);
        const ForwardTrace tb = net.forward(b);
        PairBatch batch;
        batch.a.push_back(ta.descriptor());
        batch.b.push_back(tb.descriptor());
        batch.labels.push_back(1);
        const auto pg = loss_grad(batch);
        Gradients grads = net.zero_gradients();
        backprop_pair_into(net, ta, tb, pg[0].da, pg[0].db, grads);
        benchmark::DoNotOptimize(grads);
    }
}
BENCHMARK(BM_PairBackprop);

static void BM_TrainEpoch(benchmark::State& state) {
    const PairSet ps = desk_pairs(std::size_t(state.range(0)), 5);
    TrainConfig cfg;
    cfg.epochs = 1;
    for (auto _ : state) {
        state.PauseTiming();
        Network net = desk_net(6);
        state.ResumeTiming();
        benchmark::DoNotOptimize(train(net, ps, cfg));
    }
}
BENCHMARK(BM_TrainEpoch)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_Profile(benchmark::State& state) {
    const Network net = desk_net(7);
    const PairSet ps = desk_pairs(std::size_t(state.range(0)), 8);
    const auto patches = collect_pair_patches(ps);
    for (auto _ : state)
        benchmark::DoNotOptimize(profile(net, patches));
}
BENCHMARK(BM_Profile)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_ErrorAt95(benchmark::State& state) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> dist(0.0, 4.0);
    std::vector<ScoredPair> scores;
    for (std::size_t i = 0; i < std::size_t(state.range(0)); ++i)
        scores.push_back({dist(rng), int(i % 2)});
    for (auto _ : state)
        benchmark::DoNotOptimize(error_at_95(scores));
}
BENCHMARK(BM_ErrorAt95)->Arg(1000)->Arg(10000);

static void BM_Prune(benchmark::State& state) {
    const PairSet ps = desk_pairs(64, 10);
    const auto patches = collect_pair_patches(ps);
    for (auto _ : state) {
        state.PauseTiming();
        Network net = desk_net(11);
        const ActivationProfile prof = profile(net, patches);
        const PruneSelection sel = select_prunable(prof, 0.4);
        state.ResumeTiming();
        benchmark::DoNotOptimize(prune(net, sel));
    }
}
BENCHMARK(BM_Prune);

BENCHMARK_MAIN();
