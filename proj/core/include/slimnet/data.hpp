#ifndef SLIMNET_DATA_HPP
#define SLIMNET_DATA_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace slimnet {

/// One labeled pair by index into a vector corpus: y = 1 for a match.
struct PairRecord {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint8_t y = 0;
};

/// Preprocessed patch vectors plus a labeled pair list. Vectors are stored
/// as float32, exactly what the interchange file holds, so a write/read
/// round trip is bit-exact.
struct Dataset {
    std::uint32_t dim = 0;
    std::vector<std::vector<float>> vectors;
    std::vector<PairRecord> pairs;
};

/// Dataset promoted to double for network consumption.
struct PairSet {
    std::vector<std::vector<double>> vectors;
    std::vector<PairRecord> pairs;

    const std::vector<double>& pair_a(std::size_t n) const { return vectors[pairs[n].a]; }
    const std::vector<double>& pair_b(std::size_t n) const { return vectors[pairs[n].b]; }
};

PairSet to_pair_set(const Dataset& ds);

/// Profiling inputs from a pair list: both members of every pair, in pair
/// order, each pair contributing two samples.
std::vector<std::vector<double>> collect_pair_patches(const PairSet& ps);

// ---------------------------------------------------------------------------
// Interchange dataset file (.spds)
//
// Little-endian binary: magic "SPDS", u32 version = 1, u32 dim,
// u64 n_vectors, n_vectors * dim float32, u64 n_pairs, then per pair
// u64 a, u64 b, u8 y.
// ---------------------------------------------------------------------------

void write_dataset(const std::filesystem::path& path, const Dataset& ds);
Dataset read_dataset(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Raw 64x64 patches and preprocessing
// ---------------------------------------------------------------------------

inline constexpr std::size_t kPatchSide = 64;

/// One 64x64 grayscale patch with its global index and 3D-point label.
struct Patch {
    std::array<std::uint8_t, kPatchSide * kPatchSide> pixels{};
    std::int64_t patch_id = 0;
    std::int64_t point3d_id = 0;
};

enum class Normalization { PerPatchStandardize, Scale01 };

struct PreprocessConfig {
    std::size_t target_side = 16;
    Normalization normalization = Normalization::PerPatchStandardize;
};

/// Bilinear resampling of a square image with half-pixel center alignment.
/// Downsampling a 2x2 block to 1x1 yields the mean of the four pixels.
std::vector<double> resample_bilinear(const std::vector<double>& src,
                                      std::size_t src_side,
                                      std::size_t dst_side);

/// Resamples to target_side x target_side, flattens row-major, then
/// normalizes: PerPatchStandardize subtracts the patch mean and divides by
/// max(stddev, 1e-6); Scale01 maps [0,255] to [0,1].
std::vector<float> preprocess(const Patch& patch, const PreprocessConfig& cfg);

// ---------------------------------------------------------------------------
// Synthetic pair corpus
// ---------------------------------------------------------------------------

struct SyntheticConfig {
    std::uint64_t seed = 0;
    std::size_t n_points = 50;
    std::size_t patches_per_point = 8;
    std::size_t dim = 256;
    double noise_sigma = 0.05;
    std::size_t n_train_pairs = 2000;
    std::size_t n_val_pairs = 2000;
};

/// Patch corpus of n_points prototypes (uniform in [0,1]^dim) with
/// patches_per_point noisy copies each, plus balanced train and validation
/// pair lists drawn from derived streams (seed for patches, seed+1 and
/// seed+2 for the two pair lists). Deterministic per seed.
struct SyntheticData {
    std::vector<std::vector<float>> vectors;
    std::vector<PairRecord> train_pairs;
    std::vector<PairRecord> val_pairs;

    Dataset train_set() const;
    Dataset val_set() const;
};

SyntheticData generate_synthetic(const SyntheticConfig& cfg);

} // namespace slimnet

#endif
