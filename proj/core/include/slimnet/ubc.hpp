#ifndef SLIMNET_UBC_HPP
#define SLIMNET_UBC_HPP

#include "slimnet/data.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace slimnet {

/// 8-bit grayscale image.
struct Image8 {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels; // row-major, top-left origin
};

/// Reads an uncompressed 8-bit grayscale BMP. Anything else (other bit
/// depths, compression, a non-grayscale palette) is a FormatError.
Image8 read_bmp_gray8(const std::filesystem::path& path);

/// Writes an uncompressed 8-bit grayscale BMP with a linear palette.
void write_bmp_gray8(const std::filesystem::path& path, const Image8& img);

// ---------------------------------------------------------------------------
// UBC patch dataset directory layout:
//   <dir>/info.txt           one line per patch, first integer = 3D point id
//   <dir>/*.bmp              1024x1024 mosaics, each a 16x16 grid of 64x64
//                            patches, filename order defining patch index
// The last mosaic may be padded with unused tiles; the patch count is the
// info.txt line count.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMosaicSide = 1024;
inline constexpr std::size_t kMosaicGrid = kMosaicSide / kPatchSide; // 16

std::vector<Patch> load_ubc_patches(const std::filesystem::path& dir);

/// Parses a UBC pair file. Each line carries six integers
///   id1 point3d_1 unused id2 point3d_2 unused
/// (extra trailing integer columns are tolerated); the label is 1 exactly
/// when the two 3D point ids agree. Ids are validated against patch_count.
std::vector<PairRecord> load_pair_file(const std::filesystem::path& path,
                                       std::size_t patch_count);

} // namespace slimnet

#endif
