#include "CLI11.hpp"
#include "json.hpp"

#include "slimnet/errors.hpp"
#include "slimnet/eval.hpp"
#include "slimnet/model_io.hpp"
#include "slimnet/prune.hpp"
#include "slimnet/train.hpp"
#include "slimnet/ubc.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace slimnet;

namespace {

struct Opts {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out = ".";

    std::string data_path;
    std::string val_path;
    std::string ubc_dir;
    std::string pair_file;
    std::string val_pair_file;

    std::string model_path;
    std::string arch = "256,128,128,64";

    std::size_t points = 50;
    std::size_t per_point = 8;
    std::size_t dim = 256;
    double sigma = 0.05;
    std::size_t train_pairs = 2000;
    std::size_t val_pairs = 2000;

    double lr = 0.05;
    std::size_t epochs = 30;
    std::size_t batch = 32;
    double margin = 1.0;
    double momentum = 0.0;

    std::size_t target_side = 16;
    std::string normalization = "standardize";

    double tau = 0.01;
    std::size_t max_iter = 5;
    double rollback_tol = 1.0;

    bool roc = false;
};

// ---------------------------------------------------------------------------
// Flat key=value config file; explicit flags take precedence.
// ---------------------------------------------------------------------------

template <typename T>
T parse_value(const std::string& key, const std::string& text);

template <>
std::string parse_value<std::string>(const std::string&, const std::string& text) {
    return text;
}

template <>
std::uint64_t parse_value<std::uint64_t>(const std::string& key,
                                         const std::string& text) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + text +
                          "' is not an unsigned integer");
    }
}

template <>
double parse_value<double>(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': '" + text +
                          "' is not a number");
    }
}

template <>
bool parse_value<bool>(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw ConfigError("config key '" + key + "': '" + text +
                      "' is not a boolean");
}

struct CfgEntry {
    CLI::Option* opt = nullptr;
    std::function<void(const std::string&)> apply;
};
using CfgTable = std::map<std::string, CfgEntry>;

std::string config_key(const std::string& flag) {
    std::string key = flag.substr(2);
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

template <typename T>
void add_cfg(CLI::App* cmd, CfgTable& table, const std::string& flag, T& var,
             const std::string& help) {
    const std::string key = config_key(flag);
    CLI::Option* opt = cmd->add_option(flag, var, help);
    table[key] = {opt, [key, &var](const std::string& s) {
                      var = parse_value<T>(key, s);
                  }};
}

void add_cfg_flag(CLI::App* cmd, CfgTable& table, const std::string& flag,
                  bool& var, const std::string& help) {
    const std::string key = config_key(flag);
    CLI::Option* opt = cmd->add_flag(flag, var, help);
    table[key] = {opt, [key, &var](const std::string& s) {
                      var = parse_value<bool>(key, s);
                  }};
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::map<std::string, std::string> read_config(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());

    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key=value");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": empty key");
        kv[key] = trim(stripped.substr(eq + 1));
    }
    return kv;
}

void apply_config(const std::map<std::string, std::string>& kv,
                  const CfgTable& active, const CfgTable& common,
                  const std::set<std::string>& vocabulary) {
    for (const auto& [key, value] : kv) {
        if (!vocabulary.count(key))
            throw ConfigError("unknown config key '" + key + "'");
        auto it = active.find(key);
        if (it == active.end()) {
            it = common.find(key);
            if (it == common.end()) continue; // belongs to another command
        }
        if (it->second.opt->count() > 0) continue;
        it->second.apply(value);
    }
}

// ---------------------------------------------------------------------------
// Output plumbing: everything lands under --out, written to a temp name
// and renamed only on success.
// ---------------------------------------------------------------------------

fs::path out_dir(const Opts& o) {
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw UsageError("cannot create output directory " + dir.string() +
                         ": " + ec.message());
    return dir;
}

void commit_file(const fs::path& tmp, const fs::path& final_path) {
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) {
        fs::remove(tmp);
        throw FormatError("cannot move " + tmp.string() + " to " +
                          final_path.string() + ": " + ec.message());
    }
}

void write_text_file(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw FormatError("cannot open " + tmp.string() + " for writing");
        os << content;
        if (!os) throw FormatError("write failure on " + tmp.string());
    }
    commit_file(tmp, path);
}

void write_json_file(const fs::path& path, const json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void save_model_atomic(const Network& net, const fs::path& path) {
    const fs::path tmp = path.string() + ".tmp";
    save_model(net, tmp);
    commit_file(tmp, path);
}

void write_dataset_atomic(const fs::path& path, const Dataset& ds) {
    const fs::path tmp = path.string() + ".tmp";
    write_dataset(tmp, ds);
    commit_file(tmp, path);
}

// ---------------------------------------------------------------------------
// Inputs
// ---------------------------------------------------------------------------

Normalization parse_normalization(const std::string& s) {
    if (s == "standardize") return Normalization::PerPatchStandardize;
    if (s == "scale01") return Normalization::Scale01;
    throw ConfigError("unknown normalization '" + s +
                      "' (use standardize or scale01)");
}

Dataset load_ubc_dataset(const Opts& o, const std::string& pair_file) {
    if (pair_file.empty())
        throw UsageError("--ubc-dir needs a pair file");
    const auto patches = load_ubc_patches(o.ubc_dir);
    const auto pairs = load_pair_file(pair_file, patches.size());

    PreprocessConfig pcfg;
    pcfg.target_side = o.target_side;
    pcfg.normalization = parse_normalization(o.normalization);

    Dataset ds;
    ds.dim = std::uint32_t(pcfg.target_side * pcfg.target_side);
    ds.vectors.reserve(patches.size());
    for (const auto& p : patches) ds.vectors.push_back(preprocess(p, pcfg));
    ds.pairs = pairs;
    return ds;
}

Dataset load_primary_dataset(const Opts& o) {
    if (!o.data_path.empty() && !o.ubc_dir.empty())
        throw UsageError("choose one input mode: --data or --ubc-dir");
    if (!o.data_path.empty()) return read_dataset(o.data_path);
    if (!o.ubc_dir.empty()) return load_ubc_dataset(o, o.pair_file);
    throw UsageError(
        "no input data: pass --data <file.spds> or --ubc-dir <dir> --pair-file <file>");
}

bool has_val(const Opts& o) {
    return !o.val_path.empty() ||
           (!o.ubc_dir.empty() && !o.val_pair_file.empty());
}

Dataset load_val_dataset(const Opts& o) {
    if (!o.val_path.empty()) return read_dataset(o.val_path);
    if (!o.ubc_dir.empty() && !o.val_pair_file.empty())
        return load_ubc_dataset(o, o.val_pair_file);
    throw UsageError(
        "no validation data: pass --val <file.spds> or --val-pair-file with --ubc-dir");
}

std::vector<LayerSpec> parse_arch(const std::string& text) {
    std::vector<std::size_t> widths;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const std::string t = trim(tok);
        std::size_t w = 0;
        try {
            std::size_t used = 0;
            w = std::stoull(t, &used);
            if (used != t.size()) throw std::invalid_argument(t);
        } catch (const std::exception&) {
            throw ConfigError("bad architecture '" + text +
                              "': '" + t + "' is not a width");
        }
        if (w == 0)
            throw ConfigError("bad architecture '" + text + "': zero width");
        widths.push_back(w);
    }
    if (widths.size() < 2)
        throw ConfigError("architecture needs an input width and at least one layer");

    std::vector<LayerSpec> specs;
    for (std::size_t k = 1; k < widths.size(); ++k)
        specs.push_back({widths[k - 1], widths[k], Activation::ReLU});
    return specs;
}

Network open_model(const Opts& o) {
    if (o.model_path.empty())
        throw UsageError("this command needs --model <file.spnn>");
    return load_model(o.model_path);
}

Network open_or_init_model(const Opts& o) {
    if (!o.model_path.empty()) return load_model(o.model_path);
    return Network::init(parse_arch(o.arch), o.seed + 1);
}

TrainConfig train_config(const Opts& o) {
    TrainConfig cfg;
    cfg.learning_rate = o.lr;
    cfg.epochs = o.epochs;
    cfg.batch_size = o.batch;
    cfg.margin = o.margin;
    cfg.momentum = o.momentum;
    cfg.shuffle_seed = o.seed + 2;
    return cfg;
}

json eval_json(const EvalReport& r) {
    return json{{"error_at_95_percent", r.error_at_95 * 100.0},
                {"threshold", r.threshold_used},
                {"n_match", r.n_match},
                {"n_nonmatch", r.n_nonmatch}};
}

json prune_json(const PruneReport& r) {
    json layers = json::array();
    for (const auto& l : r.layers)
        layers.push_back({{"name", l.name},
                          {"before", l.width_before},
                          {"after", l.width_after},
                          {"removed", l.removed_count},
                          {"removed_ratio_percent", l.removed_ratio * 100.0}});
    return json{{"iteration", r.iteration},
                {"total_removed", r.total_removed()},
                {"layers", layers}};
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

int run_gen(const Opts& o) {
    SyntheticConfig cfg;
    cfg.seed = o.seed + 3;
    cfg.n_points = o.points;
    cfg.patches_per_point = o.per_point;
    cfg.dim = o.dim;
    cfg.noise_sigma = o.sigma;
    cfg.n_train_pairs = o.train_pairs;
    cfg.n_val_pairs = o.val_pairs;

    const auto data = generate_synthetic(cfg);
    const auto dir = out_dir(o);
    write_dataset_atomic(dir / "train.spds", data.train_set());
    write_dataset_atomic(dir / "val.spds", data.val_set());

    write_json_file(dir / "gen_summary.json",
                    json{{"seed", o.seed},
                         {"data_seed", cfg.seed},
                         {"n_points", cfg.n_points},
                         {"patches_per_point", cfg.patches_per_point},
                         {"dim", cfg.dim},
                         {"noise_sigma", cfg.noise_sigma},
                         {"n_vectors", data.vectors.size()},
                         {"n_train_pairs", data.train_pairs.size()},
                         {"n_val_pairs", data.val_pairs.size()},
                         {"train_file", "train.spds"},
                         {"val_file", "val.spds"}});
    return 0;
}

int run_train(const Opts& o) {
    const PairSet train_ps = to_pair_set(load_primary_dataset(o));
    std::optional<PairSet> val_ps;
    if (has_val(o)) val_ps = to_pair_set(load_val_dataset(o));

    Network net = open_or_init_model(o);
    const TrainConfig cfg = train_config(o);
    const TrainRecord record =
        train(net, train_ps, cfg, val_ps ? &*val_ps : nullptr);

    const auto dir = out_dir(o);
    save_model_atomic(net, dir / "model.spnn");

    std::ostringstream report;
    char buf[64];
    for (std::size_t e = 0; e < record.epoch_loss.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%.6f", record.epoch_loss[e]);
        report << "epoch " << (e + 1) << " loss=" << buf;
        if (e < record.epoch_val_loss.size()) {
            std::snprintf(buf, sizeof buf, "%.6f", record.epoch_val_loss[e]);
            report << " val_loss=" << buf;
        }
        report << "\n";
    }
    write_text_file(dir / "train_report.txt", report.str());

    json summary{{"seed", o.seed},
                 {"epochs", record.epoch_loss.size()},
                 {"final_loss", record.epoch_loss.back()},
                 {"epoch_loss", record.epoch_loss},
                 {"learning_rate", cfg.learning_rate},
                 {"batch_size", cfg.batch_size},
                 {"margin", cfg.margin},
                 {"momentum", cfg.momentum},
                 {"model_file", "model.spnn"}};
    if (!record.epoch_val_loss.empty()) {
        summary["epoch_val_loss"] = record.epoch_val_loss;
        summary["final_val_loss"] = record.epoch_val_loss.back();
    }
    write_json_file(dir / "train_summary.json", summary);
    return 0;
}

int run_profile(const Opts& o) {
    const Network net = open_model(o);
    const PairSet ps = to_pair_set(load_primary_dataset(o));
    const ActivationProfile prof = profile(net, collect_pair_patches(ps));

    const auto dir = out_dir(o);
    std::ostringstream text;
    write_profile(text, prof);
    write_text_file(dir / "profile.txt", text.str());

    json layers = json::array();
    for (std::size_t l = 0; l < prof.layers.size(); ++l) {
        const auto& lc = prof.layers[l];
        json freq = json::array();
        for (std::size_t j = 0; j < lc.counts.size(); ++j)
            freq.push_back(prof.frequency(l, j));
        layers.push_back({{"layer_index", lc.layer_index},
                          {"counts", lc.counts},
                          {"frequencies", freq}});
    }
    const HistogramResult hist = frequency_histogram(prof, o.tau);
    write_json_file(dir / "profile_summary.json",
                    json{{"samples", prof.sample_count},
                         {"neurons", prof.neuron_total()},
                         {"tau", o.tau},
                         {"below_tau", hist.below_count},
                         {"below_tau_fraction", hist.below_fraction},
                         {"layers", layers}});
    return 0;
}

int run_prune(const Opts& o) {
    Network net = open_model(o);
    const PairSet ps = to_pair_set(load_primary_dataset(o));
    const ActivationProfile prof = profile(net, collect_pair_patches(ps));
    const PruneSelection sel = select_prunable(prof, o.tau);
    for (const auto& w : sel.warnings)
        std::fprintf(stderr, "warning: %s\n", w.c_str());

    const PruneReport report = prune(net, sel);

    const auto dir = out_dir(o);
    save_model_atomic(net, dir / "model_pruned.spnn");

    std::ostringstream text;
    write_prune_report(text, report);
    write_text_file(dir / "prune_report.txt", text.str());

    json summary = prune_json(report);
    summary["tau"] = o.tau;
    summary["warnings"] = sel.warnings;
    summary["model_file"] = "model_pruned.spnn";
    write_json_file(dir / "prune_summary.json", summary);
    return 0;
}

int run_loop(const Opts& o) {
    const PairSet train_ps = to_pair_set(load_primary_dataset(o));
    const PairSet val_ps = to_pair_set(load_val_dataset(o));

    Network net = open_or_init_model(o);
    const std::size_t initial_neurons = net.neuron_count();

    LoopConfig cfg;
    cfg.tau = o.tau;
    cfg.max_iterations = o.max_iter;
    cfg.retrain = train_config(o);
    cfg.rollback_tolerance = o.rollback_tol;

    const LoopResult result = adaptive_loop(net, train_ps, val_ps, cfg);
    const EvalReport final_eval = error_at_95(score_pairs(net, val_ps));

    const auto dir = out_dir(o);
    save_model_atomic(net, dir / "model_final.spnn");

    for (const auto& pr : result.prune_reports) {
        std::ostringstream text;
        write_prune_report(text, pr);
        write_text_file(dir / ("prune_report_" + std::to_string(pr.iteration) +
                               ".txt"),
                        text.str());
    }
    for (std::size_t i = 0; i < result.eval_reports.size(); ++i) {
        std::ostringstream text;
        write_eval(text, result.eval_reports[i]);
        write_text_file(dir / ("eval_" + std::to_string(i + 1) + ".txt"),
                        text.str());
    }
    {
        std::ostringstream text;
        write_eval(text, final_eval);
        write_text_file(dir / "eval_final.txt", text.str());
    }

    json prunes = json::array();
    for (const auto& pr : result.prune_reports) prunes.push_back(prune_json(pr));
    json evals = json::array();
    for (const auto& er : result.eval_reports) evals.push_back(eval_json(er));

    json summary{{"seed", o.seed},
                 {"tau", cfg.tau},
                 {"max_iterations", cfg.max_iterations},
                 {"rollback_tolerance", cfg.rollback_tolerance},
                 {"iterations", result.prune_reports.size()},
                 {"rolled_back", result.rolled_back},
                 {"initial_neurons", initial_neurons},
                 {"final_neurons", net.neuron_count()},
                 {"initial_error_at_95_percent",
                  result.eval_reports.front().error_at_95 * 100.0},
                 {"final_error_at_95_percent", final_eval.error_at_95 * 100.0},
                 {"final_eval", eval_json(final_eval)},
                 {"prunes", prunes},
                 {"evals", evals},
                 {"model_file", "model_final.spnn"}};
    if (result.rolled_back)
        summary["rollback_iteration"] = result.rollback_iteration;
    write_json_file(dir / "loop_summary.json", summary);
    return 0;
}

int run_eval(const Opts& o) {
    const Network net = open_model(o);
    const PairSet ps = to_pair_set(load_primary_dataset(o));
    const EvalReport report = error_at_95(score_pairs(net, ps), o.roc);

    const auto dir = out_dir(o);
    std::ostringstream text;
    write_eval(text, report);
    write_text_file(dir / "eval.txt", text.str());
    if (o.roc) {
        std::ostringstream roc;
        write_roc_csv(roc, report);
        write_text_file(dir / "roc.csv", roc.str());
    }

    json summary = eval_json(report);
    summary["pairs_file"] =
        !o.data_path.empty() ? o.data_path : o.pair_file;
    write_json_file(dir / "eval_summary.json", summary);
    return 0;
}

// ---------------------------------------------------------------------------

void add_data_opts(CLI::App* cmd, CfgTable& t, Opts& o, bool with_val) {
    add_cfg(cmd, t, "--data", o.data_path, "Interchange dataset (.spds)");
    add_cfg(cmd, t, "--ubc-dir", o.ubc_dir, "UBC patch directory (info.txt + mosaics)");
    add_cfg(cmd, t, "--pair-file", o.pair_file, "UBC pair file for --ubc-dir");
    add_cfg(cmd, t, "--target-side", o.target_side, "Resampled patch side for UBC input");
    add_cfg(cmd, t, "--normalization", o.normalization,
            "Patch normalization: standardize or scale01");
    if (with_val) {
        add_cfg(cmd, t, "--val", o.val_path, "Validation dataset (.spds)");
        add_cfg(cmd, t, "--val-pair-file", o.val_pair_file,
                "UBC validation pair file");
    }
}

void add_train_opts(CLI::App* cmd, CfgTable& t, Opts& o) {
    add_cfg(cmd, t, "--lr", o.lr, "SGD learning rate");
    add_cfg(cmd, t, "--epochs", o.epochs, "Training epochs");
    add_cfg(cmd, t, "--batch", o.batch, "Mini-batch size");
    add_cfg(cmd, t, "--margin", o.margin, "Contrastive loss margin");
    add_cfg(cmd, t, "--momentum", o.momentum, "Classical momentum in [0,1)");
}

} // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"Siamese descriptor learning with activation-frequency pruning"};
    app.require_subcommand(1);
    app.fallthrough();

    CfgTable common;
    add_cfg(&app, common, "--config", o.config_path,
            "Flat key=value config file; explicit flags win");
    add_cfg(&app, common, "--seed", o.seed,
            "Global seed (derives init, shuffle, and data streams)");
    add_cfg(&app, common, "--out", o.out, "Output directory");

    std::map<std::string, CfgTable> tables;
    std::map<std::string, std::function<int(const Opts&)>> runners;

    {
        auto* cmd = app.add_subcommand("gen", "Generate a synthetic patch-pair corpus");
        auto& t = tables["gen"];
        add_cfg(cmd, t, "--points", o.points, "Number of 3D points");
        add_cfg(cmd, t, "--per-point", o.per_point, "Patches per point");
        add_cfg(cmd, t, "--dim", o.dim, "Patch vector dimension");
        add_cfg(cmd, t, "--sigma", o.sigma, "Per-patch noise sigma");
        add_cfg(cmd, t, "--train-pairs", o.train_pairs, "Training pair count");
        add_cfg(cmd, t, "--val-pairs", o.val_pairs, "Validation pair count");
        runners["gen"] = run_gen;
    }
    {
        auto* cmd = app.add_subcommand("train", "Train a Siamese descriptor network");
        auto& t = tables["train"];
        add_data_opts(cmd, t, o, true);
        add_cfg(cmd, t, "--model", o.model_path, "Continue from this model");
        add_cfg(cmd, t, "--arch", o.arch,
                "Comma-separated widths, input first (fresh init)");
        add_train_opts(cmd, t, o);
        runners["train"] = run_train;
    }
    {
        auto* cmd = app.add_subcommand("profile", "Profile per-neuron activation frequency");
        auto& t = tables["profile"];
        add_data_opts(cmd, t, o, false);
        add_cfg(cmd, t, "--model", o.model_path, "Model to profile");
        add_cfg(cmd, t, "--tau", o.tau, "Frequency threshold for the summary histogram");
        runners["profile"] = run_profile;
    }
    {
        auto* cmd = app.add_subcommand("prune", "One profile-and-prune step");
        auto& t = tables["prune"];
        add_data_opts(cmd, t, o, false);
        add_cfg(cmd, t, "--model", o.model_path, "Model to prune");
        add_cfg(cmd, t, "--tau", o.tau, "Prune neurons with frequency below tau");
        runners["prune"] = run_prune;
    }
    {
        auto* cmd = app.add_subcommand("loop", "Iterative train-profile-prune-retrain loop");
        auto& t = tables["loop"];
        add_data_opts(cmd, t, o, true);
        add_cfg(cmd, t, "--model", o.model_path, "Start from this model");
        add_cfg(cmd, t, "--arch", o.arch,
                "Comma-separated widths, input first (fresh init)");
        add_train_opts(cmd, t, o);
        add_cfg(cmd, t, "--tau", o.tau, "Prune neurons with frequency below tau");
        add_cfg(cmd, t, "--max-iter", o.max_iter, "Iteration budget");
        add_cfg(cmd, t, "--rollback-tol", o.rollback_tol,
                "Allowed Error@95% increase in percentage points");
        runners["loop"] = run_loop;
    }
    {
        auto* cmd = app.add_subcommand("eval", "Evaluate Error@95% on labeled pairs");
        auto& t = tables["eval"];
        add_data_opts(cmd, t, o, false);
        add_cfg(cmd, t, "--model", o.model_path, "Model to evaluate");
        add_cfg_flag(cmd, t, "--roc", o.roc, "Also write the ROC curve as CSV");
        runners["eval"] = run_eval;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string chosen = app.get_subcommands().front()->get_name();
    try {
        if (!o.config_path.empty()) {
            std::set<std::string> vocabulary;
            for (const auto& [name, table] : tables)
                for (const auto& [key, entry] : table) vocabulary.insert(key);
            for (const auto& [key, entry] : common) vocabulary.insert(key);
            apply_config(read_config(o.config_path), tables[chosen], common,
                         vocabulary);
        }
        return runners[chosen](o);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
