#include "slimnet/data.hpp"
#include "slimnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

namespace slimnet {

PairSet to_pair_set(const Dataset& ds) {
    PairSet ps;
    ps.vectors.reserve(ds.vectors.size());
    for (const auto& v : ds.vectors)
        ps.vectors.emplace_back(v.begin(), v.end());
    ps.pairs = ds.pairs;
    for (const auto& p : ps.pairs) {
        if (p.a >= ps.vectors.size() || p.b >= ps.vectors.size())
            throw StructuralError("pair index out of range");
    }
    return ps;
}

std::vector<std::vector<double>> collect_pair_patches(const PairSet& ps) {
    std::vector<std::vector<double>> out;
    out.reserve(2 * ps.pairs.size());
    for (const auto& p : ps.pairs) {
        out.push_back(ps.vectors[p.a]);
        out.push_back(ps.vectors[p.b]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interchange file
// ---------------------------------------------------------------------------

namespace {

constexpr char kDatasetMagic[4] = {'S', 'P', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;

template <typename T>
void put(std::ostream& os, T value) {
    // Little-endian host assumed; values are written byte for byte.
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

[[noreturn]] void truncated(const std::filesystem::path& path, std::uint64_t offset) {
    throw FormatError(path.string() + ": truncated at byte offset " +
                      std::to_string(offset));
}

} // namespace

void write_dataset(const std::filesystem::path& path, const Dataset& ds) {
    for (const auto& v : ds.vectors) {
        if (v.size() != ds.dim)
            throw StructuralError("vector length does not match dataset dim");
    }
    for (const auto& p : ds.pairs) {
        if (p.a >= ds.vectors.size() || p.b >= ds.vectors.size())
            throw StructuralError("pair index out of range");
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os.write(kDatasetMagic, 4);
    put(os, kDatasetVersion);
    put(os, ds.dim);
    put(os, std::uint64_t(ds.vectors.size()));
    for (const auto& v : ds.vectors)
        os.write(reinterpret_cast<const char*>(v.data()),
                 std::streamsize(v.size() * sizeof(float)));
    put(os, std::uint64_t(ds.pairs.size()));
    for (const auto& p : ds.pairs) {
        put(os, p.a);
        put(os, p.b);
        put(os, p.y);
    }
    if (!os) throw FormatError("write failure on " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());

    std::uint64_t offset = 0;
    auto read_bytes = [&](void* dst, std::size_t n) {
        is.read(reinterpret_cast<char*>(dst), std::streamsize(n));
        if (!is) truncated(path, offset);
        offset += n;
    };

    char magic[4];
    read_bytes(magic, 4);
    if (std::memcmp(magic, kDatasetMagic, 4) != 0)
        throw FormatError(path.string() + ": bad magic, expected SPDS");

    std::uint32_t version = 0;
    read_bytes(&version, sizeof version);
    if (version != kDatasetVersion)
        throw FormatError(path.string() + ": unsupported version " +
                          std::to_string(version));

    Dataset ds;
    read_bytes(&ds.dim, sizeof ds.dim);
    std::uint64_t n_vectors = 0;
    read_bytes(&n_vectors, sizeof n_vectors);
    ds.vectors.resize(n_vectors);
    for (auto& v : ds.vectors) {
        v.resize(ds.dim);
        read_bytes(v.data(), ds.dim * sizeof(float));
    }

    std::uint64_t n_pairs = 0;
    read_bytes(&n_pairs, sizeof n_pairs);
    ds.pairs.resize(n_pairs);
    for (auto& p : ds.pairs) {
        read_bytes(&p.a, sizeof p.a);
        read_bytes(&p.b, sizeof p.b);
        read_bytes(&p.y, sizeof p.y);
        if (p.a >= n_vectors || p.b >= n_vectors)
            throw FormatError(path.string() + ": pair index out of range at byte offset " +
                              std::to_string(offset));
    }
    return ds;
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

std::vector<double> resample_bilinear(const std::vector<double>& src,
                                      std::size_t src_side,
                                      std::size_t dst_side) {
    if (src.size() != src_side * src_side)
        throw DimensionError("source image size does not match its side length");
    if (src_side == 0 || dst_side == 0)
        throw UsageError("image side must be positive");

    std::vector<double> dst(dst_side * dst_side);
    const double scale = double(src_side) / double(dst_side);
    for (std::size_t r = 0; r < dst_side; ++r) {
        double sy = (double(r) + 0.5) * scale - 0.5;
        sy = std::clamp(sy, 0.0, double(src_side - 1));
        const std::size_t y0 = std::size_t(sy);
        const std::size_t y1 = std::min(y0 + 1, src_side - 1);
        const double fy = sy - double(y0);
        for (std::size_t c = 0; c < dst_side; ++c) {
            double sx = (double(c) + 0.5) * scale - 0.5;
            sx = std::clamp(sx, 0.0, double(src_side - 1));
            const std::size_t x0 = std::size_t(sx);
            const std::size_t x1 = std::min(x0 + 1, src_side - 1);
            const double fx = sx - double(x0);

            const double top = src[y0 * src_side + x0] * (1.0 - fx) +
                               src[y0 * src_side + x1] * fx;
            const double bot = src[y1 * src_side + x0] * (1.0 - fx) +
                               src[y1 * src_side + x1] * fx;
            dst[r * dst_side + c] = top * (1.0 - fy) + bot * fy;
        }
    }
    return dst;
}

std::vector<float> preprocess(const Patch& patch, const PreprocessConfig& cfg) {
    if (cfg.target_side == 0)
        throw UsageError("target_side must be positive");

    std::vector<double> full(patch.pixels.begin(), patch.pixels.end());
    std::vector<double> small = resample_bilinear(full, kPatchSide, cfg.target_side);

    const std::size_t n = small.size();
    std::vector<float> out(n);
    if (cfg.normalization == Normalization::Scale01) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = float(small[i] / 255.0);
    } else {
        double mean = 0.0;
        for (double v : small) mean += v;
        mean /= double(n);
        double var = 0.0;
        for (double v : small) {
            const double d = v - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / double(n));
        const double inv = 1.0 / std::max(sd, 1e-6);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = float((small[i] - mean) * inv);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

namespace {

std::vector<PairRecord> sample_balanced_pairs(std::uint64_t seed,
                                              std::size_t n_points,
                                              std::size_t per_point,
                                              std::size_t n_pairs) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> point_dist(0, n_points - 1);
    std::uniform_int_distribution<std::size_t> member_dist(0, per_point - 1);

    const std::size_t n_match = n_pairs / 2;
    std::vector<PairRecord> pairs;
    pairs.reserve(2 * n_match);
    for (std::size_t k = 0; k < n_match; ++k) {
        const std::size_t pt = point_dist(rng);
        std::size_t i = member_dist(rng);
        std::size_t j = member_dist(rng);
        while (j == i) j = member_dist(rng);
        pairs.push_back({std::uint64_t(pt * per_point + i),
                         std::uint64_t(pt * per_point + j), 1});
    }
    for (std::size_t k = 0; k < n_match; ++k) {
        std::size_t p = point_dist(rng);
        std::size_t q = point_dist(rng);
        while (q == p) q = point_dist(rng);
        const std::size_t i = member_dist(rng);
        const std::size_t j = member_dist(rng);
        pairs.push_back({std::uint64_t(p * per_point + i),
                         std::uint64_t(q * per_point + j), 0});
    }
    return pairs;
}

} // namespace

SyntheticData generate_synthetic(const SyntheticConfig& cfg) {
    if (cfg.n_points < 2 || cfg.patches_per_point < 2)
        throw UsageError("synthetic corpus needs at least 2 points with 2 patches each");
    if (cfg.dim == 0) throw UsageError("synthetic dim must be positive");
    if (cfg.noise_sigma < 0.0) throw UsageError("noise sigma must be nonnegative");
    if (cfg.n_train_pairs < 2 || cfg.n_val_pairs < 2)
        throw UsageError("pair counts must be at least 2");

    SyntheticData data;
    data.vectors.reserve(cfg.n_points * cfg.patches_per_point);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> proto_dist(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<std::vector<double>> prototypes(cfg.n_points);
    for (auto& proto : prototypes) {
        proto.resize(cfg.dim);
        for (auto& v : proto) v = proto_dist(rng);
    }
    for (const auto& proto : prototypes) {
        for (std::size_t k = 0; k < cfg.patches_per_point; ++k) {
            std::vector<float> v(cfg.dim);
            for (std::size_t d = 0; d < cfg.dim; ++d)
                v[d] = float(proto[d] + cfg.noise_sigma * noise(rng));
            data.vectors.push_back(std::move(v));
        }
    }

    data.train_pairs = sample_balanced_pairs(cfg.seed + 1, cfg.n_points,
                                             cfg.patches_per_point, cfg.n_train_pairs);
    data.val_pairs = sample_balanced_pairs(cfg.seed + 2, cfg.n_points,
                                           cfg.patches_per_point, cfg.n_val_pairs);
    return data;
}

Dataset SyntheticData::train_set() const {
    Dataset ds;
    ds.dim = std::uint32_t(vectors.empty() ? 0 : vectors.front().size());
    ds.vectors = vectors;
    ds.pairs = train_pairs;
    return ds;
}

Dataset SyntheticData::val_set() const {
    Dataset ds;
    ds.dim = std::uint32_t(vectors.empty() ? 0 : vectors.front().size());
    ds.vectors = vectors;
    ds.pairs = val_pairs;
    return ds;
}

} // namespace slimnet
