#include "doctest.h"

#include "slimnet/errors.hpp"
#include "slimnet/prune.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace slimnet;

namespace {

ActivationProfile fabricated(std::vector<std::vector<std::uint64_t>> layer_counts,
                             std::uint64_t samples) {
    ActivationProfile prof;
    prof.sample_count = samples;
    for (std::size_t l = 0; l < layer_counts.size(); ++l)
        prof.layers.push_back({l, std::move(layer_counts[l])});
    return prof;
}

bool same_params(const Network& x, const Network& y) {
    if (x.layer_count() != y.layer_count()) return false;
    for (std::size_t k = 0; k < x.layer_count(); ++k) {
        if (x.layer(k).weights != y.layer(k).weights) return false;
        if (x.layer(k).biases != y.layer(k).biases) return false;
    }
    return true;
}

} // namespace

TEST_CASE("select_prunable picks exactly the sub-threshold neurons") {
    // Frequencies 0.0, 0.5, 0.005 out of 1000 samples.
    const auto prof = fabricated({{0, 500, 5}}, 1000);
    const auto sel = select_prunable(prof, 0.01);
    REQUIRE(sel.layers.size() == 1);
    CHECK(sel.layers[0].indices == std::vector<std::size_t>{0, 2});
    CHECK(sel.warnings.empty());
}

TEST_CASE("select_prunable returns empty when everything is active enough") {
    const auto prof = fabricated({{500, 999, 10}}, 1000);
    const auto sel = select_prunable(prof, 0.01);
    CHECK(sel.empty());
}

TEST_CASE("378 dead of 1024 selects the FC2 shrinkage") {
    std::vector<std::uint64_t> counts(1024, 500);
    for (std::size_t j = 100; j < 478; ++j) counts[j] = 0;
    const auto prof = fabricated({std::move(counts)}, 1000);
    const auto sel = select_prunable(prof, 0.01);
    CHECK(sel.total_removed() == 378);
}

TEST_CASE("keep-one guard retains the most active neuron of a dead layer") {
    const auto prof = fabricated({{0, 3, 1}}, 1000);
    const auto sel = select_prunable(prof, 0.01);
    REQUIRE(sel.layers.size() == 1);
    CHECK(sel.layers[0].indices == std::vector<std::size_t>{0, 2});
    REQUIRE(sel.warnings.size() == 1);
    CHECK(sel.warnings[0].find("keeping neuron 1") != std::string::npos);
}

TEST_CASE("empty selection is a parameter-identical no-op with zero ratios") {
    auto net = Network::init({{4, 6, Activation::ReLU},
                              {6, 3, Activation::ReLU}}, 50);
    const auto before = net;
    const auto report = prune(net, PruneSelection{});
    CHECK(same_params(net, before));
    REQUIRE(report.layers.size() == 2);
    for (const auto& l : report.layers) {
        CHECK(l.removed_count == 0);
        CHECK(l.removed_ratio == 0.0);
        CHECK(l.width_before == l.width_after);
    }
}

TEST_CASE("Table-style widths: removing (222,378,326) from (4096,1024,1024)") {
    auto net = Network::init({{64, 4096, Activation::ReLU},
                              {4096, 1024, Activation::ReLU},
                              {1024, 1024, Activation::ReLU}}, 1);
    PruneSelection sel;
    auto first_n = [](std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    };
    sel.layers = {{0, first_n(222)}, {1, first_n(378)}, {2, first_n(326)}};

    const auto report = prune(net, sel);
    REQUIRE(report.layers.size() == 3);
    CHECK(report.layers[0].width_after == 3874);
    CHECK(report.layers[1].width_after == 646);
    CHECK(report.layers[2].width_after == 698);
    CHECK(net.descriptor_width() == 698);

    // removed/before ratios, printed to one decimal place.
    std::ostringstream os;
    write_prune_report(os, report);
    CHECK(os.str() ==
          "name before after removed_ratio_percent\n"
          "FC1 4096 3874 5.4\n"
          "FC2 1024 646 36.9\n"
          "FC3 1024 698 31.8\n");
}

TEST_CASE("report arithmetic is exact on integers") {
    auto net = Network::init({{8, 10, Activation::ReLU},
                              {10, 6, Activation::ReLU}}, 2);
    PruneSelection sel;
    sel.layers = {{0, {1, 3, 7}}, {1, {0}}};
    const auto report = prune(net, sel);
    for (const auto& l : report.layers) {
        CHECK(l.width_after == l.width_before - l.removed_count);
        CHECK(l.removed_ratio ==
              double(l.removed_count) / double(l.width_before));
        CHECK(l.removed_ratio >= 0.0);
        CHECK(l.removed_ratio < 1.0);
    }
}

TEST_CASE("surviving parameters are copied bit-exactly") {
    auto net = Network::init({{3, 4, Activation::ReLU},
                              {4, 2, Activation::Linear}}, 3);
    const auto before = net;
    PruneSelection sel;
    sel.layers = {{0, {1, 2}}};
    prune(net, sel);

    REQUIRE(net.layer(0).out_width == 2);
    REQUIRE(net.layer(1).in_width == 2);
    // Survivors are rows 0 and 3 of layer 0 and columns 0 and 3 of layer 1.
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(net.layer(0).w(0, i) == before.layer(0).w(0, i));
        CHECK(net.layer(0).w(1, i) == before.layer(0).w(3, i));
    }
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(net.layer(1).w(j, 0) == before.layer(1).w(j, 0));
        CHECK(net.layer(1).w(j, 1) == before.layer(1).w(j, 3));
    }
    CHECK(net.layer(0).biases[0] == before.layer(0).biases[0]);
    CHECK(net.layer(0).biases[1] == before.layer(0).biases[3]);
}

TEST_CASE("removing a never-active neuron preserves every descriptor") {
    std::mt19937_64 rng(60);
    std::uniform_real_distribution<double> v(0.0, 1.0);

    auto net = Network::init({{4, 6, Activation::ReLU},
                              {6, 3, Activation::ReLU}}, 61);
    net.layer(0).biases[1] = -50.0f; // dead for inputs in [0,1]^4

    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 30; ++i) {
        std::vector<double> x(4);
        for (auto& e : x) e = v(rng);
        inputs.push_back(x);
    }

    const auto prof = profile(net, inputs);
    REQUIRE(prof.layers[0].counts[1] == 0);

    auto pruned = net;
    PruneSelection sel;
    sel.layers = {{0, {1}}};
    prune(pruned, sel);

    for (const auto& x : inputs) {
        const auto full = net.forward(x).descriptor();
        const auto cut = pruned.forward(x).descriptor();
        REQUIRE(full.size() == cut.size());
        for (std::size_t j = 0; j < full.size(); ++j)
            CHECK(std::abs(full[j] - cut[j]) <= 1e-12);
    }
}

TEST_CASE("select-then-prune at a vanishing threshold is the identity") {
    const auto net = Network::init({{3, 8, Activation::ReLU}}, 62);
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> v(-1.0, 1.0);
    std::vector<std::vector<double>> inputs;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> x(3);
        for (auto& e : x) e = v(rng);
        inputs.push_back(x);
    }
    auto prof = profile(net, inputs);
    // Ensure no zero-frequency neurons, otherwise the premise does not hold.
    bool has_dead = false;
    for (auto c : prof.layers[0].counts)
        if (c == 0) has_dead = true;
    if (!has_dead) {
        const auto sel = select_prunable(prof, 1e-9);
        CHECK(sel.empty());
    }
}

TEST_CASE("selection validation: out of range, duplicates, emptying a layer") {
    auto net = Network::init({{3, 4, Activation::ReLU}}, 64);

    PruneSelection out_of_range;
    out_of_range.layers = {{0, {4}}};
    CHECK_THROWS_AS(prune(net, out_of_range), StructuralError);

    PruneSelection duplicate;
    duplicate.layers = {{0, {1, 1}}};
    CHECK_THROWS_AS(prune(net, duplicate), StructuralError);

    PruneSelection everything;
    everything.layers = {{0, {0, 1, 2, 3}}};
    CHECK_THROWS_AS(prune(net, everything), StructuralError);

    PruneSelection bad_layer;
    bad_layer.layers = {{5, {0}}};
    CHECK_THROWS_AS(prune(net, bad_layer), StructuralError);
}

TEST_CASE("re-applying a selection against shrunk widths is rejected") {
    auto net = Network::init({{3, 4, Activation::ReLU}}, 65);
    PruneSelection sel;
    sel.layers = {{0, {3}}};
    prune(net, sel);
    CHECK(net.layer(0).out_width == 3);
    CHECK_THROWS_AS(prune(net, sel), StructuralError);
}

namespace {

// Always-active single-layer net: positive weights and bias on positive
// inputs. Training with lr=0 keeps it that way.
PairSet positive_pairs() {
    PairSet ps;
    ps.vectors = {{0.2, 0.4}, {0.3, 0.5}, {0.8, 0.9}, {0.9, 0.7}};
    ps.pairs = {{0, 1, 1}, {2, 3, 1}, {0, 2, 0}, {1, 3, 0}};
    return ps;
}

} // namespace

TEST_CASE("adaptive loop stops on an empty selection without touching the net") {
    DenseLayer l;
    l.in_width = 2;
    l.out_width = 3;
    l.activation = Activation::ReLU;
    l.weights = {1, 1, 1, 2, 2, 1};
    l.biases = {0.5f, 0.5f, 0.5f};
    auto net = Network::from_layers({l});
    const auto before = net;

    LoopConfig cfg;
    cfg.max_iterations = 7;
    cfg.retrain.learning_rate = 0.0;
    cfg.retrain.epochs = 1;

    const auto pairs = positive_pairs();
    const auto result = adaptive_loop(net, pairs, pairs, cfg);

    CHECK(same_params(net, before));
    REQUIRE(result.prune_reports.size() == 1);
    CHECK(result.prune_reports[0].total_removed() == 0);
    CHECK(result.eval_reports.size() == 1);
    CHECK_FALSE(result.rolled_back);
}

TEST_CASE("max_iterations=1 runs exactly one cycle even when more is prunable") {
    auto net = Network::init({{2, 8, Activation::ReLU},
                              {8, 4, Activation::ReLU}}, 70);
    net.layer(0).biases[2] = -50.0f;
    net.layer(0).biases[5] = -50.0f;

    LoopConfig cfg;
    cfg.max_iterations = 1;
    cfg.retrain.learning_rate = 0.0;
    cfg.retrain.epochs = 1;

    const auto pairs = positive_pairs();
    const auto result = adaptive_loop(net, pairs, pairs, cfg);

    REQUIRE(result.prune_reports.size() == 1);
    CHECK(result.prune_reports[0].total_removed() >= 2);
    CHECK(net.layer(0).out_width <= 6);
}

TEST_CASE("loop widths shrink monotonically across iterations") {
    SyntheticConfig scfg;
    scfg.seed = 5;
    scfg.n_points = 8;
    scfg.patches_per_point = 4;
    scfg.dim = 12;
    scfg.noise_sigma = 0.05;
    scfg.n_train_pairs = 60;
    scfg.n_val_pairs = 40;
    const auto data = generate_synthetic(scfg);
    const auto train_ps = to_pair_set(data.train_set());
    const auto val_ps = to_pair_set(data.val_set());

    auto net = Network::init({{12, 24, Activation::ReLU},
                              {24, 16, Activation::ReLU},
                              {16, 8, Activation::ReLU}}, 71);

    LoopConfig cfg;
    cfg.max_iterations = 4;
    cfg.retrain.learning_rate = 0.05;
    cfg.retrain.epochs = 8;
    cfg.retrain.batch_size = 16;
    cfg.retrain.shuffle_seed = 72;

    const auto result = adaptive_loop(net, train_ps, val_ps, cfg);

    std::vector<std::size_t> prev;
    for (const auto& report : result.prune_reports) {
        std::vector<std::size_t> widths;
        for (const auto& l : report.layers) {
            CHECK(l.width_after <= l.width_before);
            CHECK(l.width_after >= 1);
            widths.push_back(l.width_before);
        }
        if (!prev.empty()) {
            for (std::size_t k = 0; k < widths.size(); ++k)
                CHECK(widths[k] <= prev[k]);
        }
        prev.clear();
        for (const auto& l : report.layers) prev.push_back(l.width_after);
    }
    CHECK(result.eval_reports.size() >= result.prune_reports.size());
}
