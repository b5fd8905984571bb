#include "doctest.h"

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "slimnet/data.hpp"
#include "slimnet/model_io.hpp"
#include "slimnet/net.hpp"

#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() /
               ("slimnet_cli_" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(SLIMNET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp_text(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    REQUIRE(bool(is));
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

json slurp_json(const fs::path& p) { return json::parse(slurp_text(p)); }

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

} // namespace

TEST_CASE("gen writes byte-identical files when rerun with the same flags") {
    TempDir tmp;
    const std::string flags =
        "gen --seed 42 --points 10 --per-point 4 --dim 16 --sigma 0.05 "
        "--train-pairs 60 --val-pairs 40 --out ";
    REQUIRE(run_cli(flags + (tmp.path / "a").string()) == 0);
    REQUIRE(run_cli(flags + (tmp.path / "b").string()) == 0);

    for (const char* name : {"train.spds", "val.spds", "gen_summary.json"})
        CHECK(slurp_text(tmp.path / "a" / name) ==
              slurp_text(tmp.path / "b" / name));
}

TEST_CASE("gen rejects degenerate parameters with a usage exit") {
    TempDir tmp;
    CHECK(run_cli("gen --points 1 --out " + (tmp.path / "x").string()) == 2);
}

TEST_CASE("missing subcommand or unknown flags exit with code 2") {
    TempDir tmp;
    CHECK(run_cli("") == 2);
    CHECK(run_cli("bogus") == 2);
    CHECK(run_cli("gen --no-such-flag 1 --out " + tmp.path.string()) == 2);
}

TEST_CASE("eval on the zero-noise corpus with an untrained net is perfect") {
    TempDir tmp;
    const auto dir = tmp.path.string();
    REQUIRE(run_cli("gen --seed 1 --points 8 --per-point 4 --dim 16 --sigma 0 "
                    "--train-pairs 40 --val-pairs 40 --out " + dir) == 0);
    // lr 0 keeps the freshly initialized weights; matches are identical
    // inputs, so their descriptor distance is exactly zero.
    REQUIRE(run_cli("train --data " + dir + "/train.spds --arch 16,12,6 "
                    "--seed 1 --lr 0 --epochs 1 --out " + dir) == 0);
    REQUIRE(run_cli("eval --model " + dir + "/model.spnn --data " + dir +
                    "/val.spds --out " + dir) == 0);

    const auto text = slurp_text(tmp.path / "eval.txt");
    CHECK(text.rfind("error_at_95_percent=0.00\n", 0) == 0);
}

TEST_CASE("loop --max-iter 1 emits exactly one prune report") {
    TempDir tmp;
    const auto dir = tmp.path.string();
    REQUIRE(run_cli("gen --seed 3 --points 10 --per-point 4 --dim 24 "
                    "--train-pairs 80 --val-pairs 60 --out " + dir) == 0);
    REQUIRE(run_cli("loop --data " + dir + "/train.spds --val " + dir +
                    "/val.spds --arch 24,20,12 --seed 3 --epochs 5 "
                    "--max-iter 1 --out " + dir) == 0);

    CHECK(fs::exists(tmp.path / "prune_report_1.txt"));
    CHECK_FALSE(fs::exists(tmp.path / "prune_report_2.txt"));
    CHECK(fs::exists(tmp.path / "model_final.spnn"));
    CHECK(fs::exists(tmp.path / "eval_final.txt"));

    const auto summary = slurp_json(tmp.path / "loop_summary.json");
    CHECK(summary["iterations"] == 1);
}

TEST_CASE("JSON summaries carry the same numbers as the text reports") {
    TempDir tmp;
    const auto dir = tmp.path.string();
    REQUIRE(run_cli("gen --seed 4 --points 10 --per-point 4 --dim 24 "
                    "--train-pairs 100 --val-pairs 80 --out " + dir) == 0);
    REQUIRE(run_cli("train --data " + dir + "/train.spds --arch 24,16,8 "
                    "--seed 4 --epochs 6 --out " + dir) == 0);
    REQUIRE(run_cli("eval --model " + dir + "/model.spnn --data " + dir +
                    "/val.spds --out " + dir) == 0);
    REQUIRE(run_cli("profile --model " + dir + "/model.spnn --data " + dir +
                    "/val.spds --out " + dir) == 0);
    REQUIRE(run_cli("prune --model " + dir + "/model.spnn --data " + dir +
                    "/val.spds --out " + dir) == 0);

    const auto eval_text = slurp_text(tmp.path / "eval.txt");
    const auto eval_sum = slurp_json(tmp.path / "eval_summary.json");
    CHECK(eval_text.find("error_at_95_percent=" +
                         fmt("%.2f", eval_sum["error_at_95_percent"]) +
                         "\n") != std::string::npos);
    CHECK(eval_text.find("threshold=" +
                         fmt("%.9g", eval_sum["threshold"]) + "\n") !=
          std::string::npos);
    CHECK(eval_text.find("n_match=" +
                         std::to_string(std::uint64_t(eval_sum["n_match"])) +
                         "\n") != std::string::npos);

    const auto prune_text = slurp_text(tmp.path / "prune_report.txt");
    const auto prune_sum = slurp_json(tmp.path / "prune_summary.json");
    for (const auto& layer : prune_sum["layers"]) {
        const std::string row =
            std::string(layer["name"]) + " " +
            std::to_string(std::uint64_t(layer["before"])) + " " +
            std::to_string(std::uint64_t(layer["after"])) + " " +
            fmt("%.1f", layer["removed_ratio_percent"]);
        CHECK(prune_text.find(row + "\n") != std::string::npos);
    }

    const auto prof_text = slurp_text(tmp.path / "profile.txt");
    const auto prof_sum = slurp_json(tmp.path / "profile_summary.json");
    CHECK(prof_text.rfind("# samples=" +
                          std::to_string(std::uint64_t(prof_sum["samples"])) +
                          "\n", 0) == 0);
    const auto& layer0 = prof_sum["layers"][0];
    const std::string line0 =
        "0 0 " + std::to_string(std::uint64_t(layer0["counts"][0])) + " " +
        fmt("%.6f", layer0["frequencies"][0]);
    CHECK(prof_text.find(line0 + "\n") != std::string::npos);
}

TEST_CASE("config file values apply unless overridden by flags") {
    TempDir tmp;
    const auto cfg = tmp.path / "run.cfg";
    {
        std::ofstream os(cfg);
        os << "# pipeline defaults\n"
           << "points = 9\n"
           << "per_point = 4\n"
           << "dim = 16\n"
           << "train_pairs = 30\n"
           << "val_pairs = 30\n"
           << "seed = 11\n";
    }
    const auto a = (tmp.path / "a").string();
    REQUIRE(run_cli("gen --config " + cfg.string() + " --out " + a) == 0);
    auto sum = slurp_json(tmp.path / "a" / "gen_summary.json");
    CHECK(sum["n_points"] == 9);
    CHECK(sum["seed"] == 11);
    CHECK(sum["data_seed"] == 14);

    const auto b = (tmp.path / "b").string();
    REQUIRE(run_cli("gen --config " + cfg.string() + " --points 5 --out " + b) == 0);
    CHECK(slurp_json(tmp.path / "b" / "gen_summary.json")["n_points"] == 5);

    const auto bad = tmp.path / "bad.cfg";
    { std::ofstream os(bad); os << "epochz=3\n"; }
    CHECK(run_cli("gen --config " + bad.string() + " --out " + a) == 2);
}

TEST_CASE("corrupt input datasets exit with the format code") {
    TempDir tmp;
    const auto bad = tmp.path / "bad.spds";
    { std::ofstream os(bad, std::ios::binary); os << "not a dataset"; }
    REQUIRE(run_cli("gen --seed 2 --points 8 --per-point 4 --dim 16 "
                    "--train-pairs 30 --val-pairs 30 --out " +
                    tmp.path.string()) == 0);
    REQUIRE(run_cli("train --data " + tmp.path.string() +
                    "/train.spds --arch 16,8 --seed 2 --epochs 1 --out " +
                    tmp.path.string()) == 0);
    CHECK(run_cli("eval --model " + tmp.path.string() + "/model.spnn --data " +
                  bad.string() + " --out " + tmp.path.string()) == 3);
}

TEST_CASE("a mismatched architecture is a usage failure, not a crash") {
    TempDir tmp;
    const auto dir = tmp.path.string();
    REQUIRE(run_cli("gen --seed 5 --points 8 --per-point 4 --dim 16 "
                    "--train-pairs 30 --val-pairs 30 --out " + dir) == 0);
    CHECK(run_cli("train --data " + dir + "/train.spds --arch 24,8 "
                  "--seed 5 --epochs 1 --out " + dir) == 2);
    CHECK(run_cli("train --data " + dir + "/train.spds --arch 16,0,8 "
                  "--seed 5 --epochs 1 --out " + dir) == 2);
    CHECK(run_cli("train --data " + dir + "/train.spds --arch 16 "
                  "--seed 5 --epochs 1 --out " + dir) == 2);
}

TEST_CASE("a diverging loss exits with code 4 and leaves no outputs") {
    TempDir tmp;
    // All-positive 3e38 weights push descriptors to ~1e155: every
    // coordinate stays finite but the squared pair distance overflows,
    // so the first batch loss is infinite.
    slimnet::Network net = slimnet::Network::init(
        {{2, 4, slimnet::Activation::ReLU},
         {4, 4, slimnet::Activation::ReLU},
         {4, 4, slimnet::Activation::ReLU}},
        1);
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        for (auto& w : net.layer(l).weights) w = 3e38f;
        for (auto& b : net.layer(l).biases) b = 0.0f;
    }
    slimnet::save_model(net, tmp.path / "big.spnn");

    slimnet::Dataset ds;
    ds.dim = 2;
    ds.vectors = {{3e38f, 3e38f}, {1e38f, 1e38f}};
    ds.pairs = {{0, 1, 1}};
    slimnet::write_dataset(tmp.path / "big.spds", ds);

    const int rc = run_cli("train --model " + (tmp.path / "big.spnn").string() +
                           " --data " + (tmp.path / "big.spds").string() +
                           " --epochs 1 --out " + tmp.path.string());
    CHECK(rc == 4);
    CHECK_FALSE(fs::exists(tmp.path / "model.spnn"));
    CHECK_FALSE(fs::exists(tmp.path / "model.spnn.tmp"));
    CHECK_FALSE(fs::exists(tmp.path / "train_report.txt"));
}
