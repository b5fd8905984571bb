#include "slimnet/ubc.hpp"
#include "slimnet/errors.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace slimnet {

namespace {

std::uint16_t get_u16(const std::uint8_t* p) {
    return std::uint16_t(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v & 0xff));
    out.push_back(std::uint8_t(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v & 0xff));
    out.push_back(std::uint8_t((v >> 8) & 0xff));
    out.push_back(std::uint8_t((v >> 16) & 0xff));
    out.push_back(std::uint8_t((v >> 24) & 0xff));
}

} // namespace

Image8 read_bmp_gray8(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());

    if (data.size() < 54)
        throw FormatError(path.string() + ": too short for a BMP header");
    if (data[0] != 'B' || data[1] != 'M')
        throw FormatError(path.string() + ": not a BMP file");

    const std::uint32_t pixel_offset = get_u32(&data[10]);
    const std::uint32_t header_size = get_u32(&data[14]);
    if (header_size < 40)
        throw FormatError(path.string() + ": unsupported BMP header size " +
                          std::to_string(header_size));

    const std::int32_t width = std::int32_t(get_u32(&data[18]));
    const std::int32_t height_raw = std::int32_t(get_u32(&data[22]));
    const std::uint16_t bit_count = get_u16(&data[28]);
    const std::uint32_t compression = get_u32(&data[30]);
    std::uint32_t colors_used = get_u32(&data[46]);

    if (bit_count != 8)
        throw FormatError(path.string() + ": expected 8-bit BMP, got " +
                          std::to_string(bit_count) + "-bit");
    if (compression != 0)
        throw FormatError(path.string() + ": compressed BMP not supported");
    if (width <= 0 || height_raw == 0)
        throw FormatError(path.string() + ": bad image dimensions");

    const bool top_down = height_raw < 0;
    const std::size_t w = std::size_t(width);
    const std::size_t h = std::size_t(top_down ? -height_raw : height_raw);

    if (colors_used == 0) colors_used = 256;
    const std::size_t palette_at = 14 + header_size;
    if (data.size() < palette_at + colors_used * 4)
        throw FormatError(path.string() + ": truncated palette");

    // Map palette index to gray; the palette must itself be grayscale.
    std::array<std::uint8_t, 256> gray{};
    for (std::uint32_t i = 0; i < colors_used; ++i) {
        const std::uint8_t b = data[palette_at + i * 4 + 0];
        const std::uint8_t g = data[palette_at + i * 4 + 1];
        const std::uint8_t r = data[palette_at + i * 4 + 2];
        if (b != g || g != r)
            throw FormatError(path.string() + ": palette entry " +
                              std::to_string(i) + " is not grayscale");
        gray[i] = r;
    }

    const std::size_t stride = (w + 3) & ~std::size_t(3);
    if (data.size() < pixel_offset + stride * h)
        throw FormatError(path.string() + ": truncated pixel data");

    Image8 img;
    img.width = w;
    img.height = h;
    img.pixels.resize(w * h);
    for (std::size_t row = 0; row < h; ++row) {
        const std::size_t src_row = top_down ? row : (h - 1 - row);
        const std::uint8_t* src = data.data() + pixel_offset + src_row * stride;
        for (std::size_t col = 0; col < w; ++col)
            img.pixels[row * w + col] = gray[src[col]];
    }
    return img;
}

void write_bmp_gray8(const std::filesystem::path& path, const Image8& img) {
    if (img.pixels.size() != img.width * img.height)
        throw StructuralError("image pixel buffer does not match its dimensions");

    const std::size_t stride = (img.width + 3) & ~std::size_t(3);
    const std::uint32_t pixel_offset = 14 + 40 + 256 * 4;
    const std::uint32_t file_size =
        pixel_offset + std::uint32_t(stride * img.height);

    std::vector<std::uint8_t> out;
    out.reserve(file_size);
    out.push_back('B');
    out.push_back('M');
    put_u32(out, file_size);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u32(out, pixel_offset);

    put_u32(out, 40); // BITMAPINFOHEADER
    put_u32(out, std::uint32_t(img.width));
    put_u32(out, std::uint32_t(img.height)); // bottom-up
    put_u16(out, 1);
    put_u16(out, 8);
    put_u32(out, 0); // BI_RGB
    put_u32(out, std::uint32_t(stride * img.height));
    put_u32(out, 2835);
    put_u32(out, 2835);
    put_u32(out, 256);
    put_u32(out, 0);

    for (std::uint32_t i = 0; i < 256; ++i) {
        out.push_back(std::uint8_t(i));
        out.push_back(std::uint8_t(i));
        out.push_back(std::uint8_t(i));
        out.push_back(0);
    }

    for (std::size_t row = 0; row < img.height; ++row) {
        const std::size_t src_row = img.height - 1 - row;
        const std::uint8_t* src = img.pixels.data() + src_row * img.width;
        out.insert(out.end(), src, src + img.width);
        out.insert(out.end(), stride - img.width, 0);
    }

    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
    if (!os) throw FormatError("write failure on " + path.string());
}

std::vector<Patch> load_ubc_patches(const std::filesystem::path& dir) {
    const auto info_path = dir / "info.txt";
    if (!std::filesystem::exists(info_path))
        throw FormatError(dir.string() + ": missing info.txt");

    std::vector<std::filesystem::path> mosaics;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".bmp")
            mosaics.push_back(entry.path());
    }
    std::sort(mosaics.begin(), mosaics.end());
    if (mosaics.empty())
        throw FormatError(dir.string() + ": no mosaic .bmp files");

    std::vector<std::int64_t> point_ids;
    {
        std::ifstream is(info_path);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(is, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::int64_t id = 0;
            if (!(ss >> id))
                throw FormatError(info_path.string() + ":" + std::to_string(line_no) +
                                  ": expected an integer 3D point id");
            point_ids.push_back(id);
        }
    }

    const std::size_t tiles_per_mosaic = kMosaicGrid * kMosaicGrid;
    const std::size_t total_tiles = mosaics.size() * tiles_per_mosaic;
    if (point_ids.size() > total_tiles ||
        point_ids.size() + tiles_per_mosaic <= total_tiles)
        throw FormatError(dir.string() + ": info.txt has " +
                          std::to_string(point_ids.size()) + " lines but the " +
                          std::to_string(mosaics.size()) + " mosaics hold " +
                          std::to_string(total_tiles) +
                          " tiles (padding only allowed in the last mosaic)");

    std::vector<Patch> patches;
    patches.reserve(point_ids.size());

    for (std::size_t m = 0; m < mosaics.size() && patches.size() < point_ids.size(); ++m) {
        const Image8 img = read_bmp_gray8(mosaics[m]);
        if (img.width != kMosaicSide || img.height != kMosaicSide)
            throw FormatError(mosaics[m].string() + ": mosaic must be " +
                              std::to_string(kMosaicSide) + "x" +
                              std::to_string(kMosaicSide) + ", got " +
                              std::to_string(img.width) + "x" +
                              std::to_string(img.height));

        for (std::size_t tile = 0;
             tile < tiles_per_mosaic && patches.size() < point_ids.size(); ++tile) {
            const std::size_t gr = tile / kMosaicGrid;
            const std::size_t gc = tile % kMosaicGrid;
            Patch p;
            p.patch_id = std::int64_t(patches.size());
            p.point3d_id = point_ids[patches.size()];
            for (std::size_t r = 0; r < kPatchSide; ++r) {
                const std::uint8_t* src =
                    img.pixels.data() + (gr * kPatchSide + r) * kMosaicSide +
                    gc * kPatchSide;
                std::memcpy(p.pixels.data() + r * kPatchSide, src, kPatchSide);
            }
            patches.push_back(std::move(p));
        }
    }
    return patches;
}

std::vector<PairRecord> load_pair_file(const std::filesystem::path& path,
                                       std::size_t patch_count) {
    std::ifstream is(path);
    if (!is) throw FormatError("cannot open " + path.string());

    std::vector<PairRecord> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        std::istringstream ss(line);
        long long v[6];
        for (int i = 0; i < 6; ++i) {
            if (!(ss >> v[i]))
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 6 integers (id1 p1 u1 id2 p2 u2)");
        }
        const long long id1 = v[0], p1 = v[1], id2 = v[3], p2 = v[4];
        if (id1 < 0 || id2 < 0 || std::size_t(id1) >= patch_count ||
            std::size_t(id2) >= patch_count)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": patch id out of range (have " +
                              std::to_string(patch_count) + " patches)");
        pairs.push_back({std::uint64_t(id1), std::uint64_t(id2),
                         std::uint8_t(p1 == p2 ? 1 : 0)});
    }
    return pairs;
}

} // namespace slimnet
