#include "slimnet/model_io.hpp"
#include "slimnet/errors.hpp"

#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace slimnet {

namespace {

constexpr char kModelMagic[4] = {'S', 'P', 'N', 'N'};
constexpr std::uint32_t kModelVersion = 1;

} // namespace

void save_model(const Network& net, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path.string() + " for writing");

    os.write(kModelMagic, 4);
    const std::uint32_t version = kModelVersion;
    os.write(reinterpret_cast<const char*>(&version), 4);
    const std::uint32_t n_layers = std::uint32_t(net.layer_count());
    os.write(reinterpret_cast<const char*>(&n_layers), 4);

    for (std::size_t k = 0; k < net.layer_count(); ++k) {
        const DenseLayer& l = net.layer(k);
        const std::uint32_t in = std::uint32_t(l.in_width);
        const std::uint32_t out = std::uint32_t(l.out_width);
        const std::uint8_t act = std::uint8_t(l.activation);
        os.write(reinterpret_cast<const char*>(&in), 4);
        os.write(reinterpret_cast<const char*>(&out), 4);
        os.write(reinterpret_cast<const char*>(&act), 1);
        os.write(reinterpret_cast<const char*>(l.weights.data()),
                 std::streamsize(l.weights.size() * sizeof(float)));
        os.write(reinterpret_cast<const char*>(l.biases.data()),
                 std::streamsize(l.biases.size() * sizeof(float)));
    }
    if (!os) throw FormatError("write failure on " + path.string());
}

Network load_model(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path.string());

    std::uint64_t offset = 0;
    auto read_bytes = [&](void* dst, std::size_t n) {
        is.read(reinterpret_cast<char*>(dst), std::streamsize(n));
        if (!is)
            throw FormatError(path.string() + ": truncated at byte offset " +
                              std::to_string(offset));
        offset += n;
    };

    char magic[4];
    read_bytes(magic, 4);
    if (std::memcmp(magic, kModelMagic, 4) != 0)
        throw FormatError(path.string() + ": bad magic, expected SPNN");

    std::uint32_t version = 0;
    read_bytes(&version, 4);
    if (version != kModelVersion)
        throw FormatError(path.string() + ": unsupported version " +
                          std::to_string(version));

    std::uint32_t n_layers = 0;
    read_bytes(&n_layers, 4);
    if (n_layers == 0)
        throw FormatError(path.string() + ": zero layers");

    std::vector<DenseLayer> layers;
    layers.reserve(n_layers);
    for (std::uint32_t k = 0; k < n_layers; ++k) {
        const std::uint64_t layer_offset = offset;
        DenseLayer l;
        std::uint32_t in = 0, out = 0;
        std::uint8_t act = 0;
        read_bytes(&in, 4);
        read_bytes(&out, 4);
        read_bytes(&act, 1);
        if (in == 0 || out == 0)
            throw FormatError(path.string() + ": zero layer width at byte offset " +
                              std::to_string(layer_offset));
        if (act > 1)
            throw FormatError(path.string() + ": unknown activation tag " +
                              std::to_string(act) + " at byte offset " +
                              std::to_string(layer_offset + 8));
        if (k > 0 && layers.back().out_width != in)
            throw FormatError(path.string() + ": layer chain mismatch between layers " +
                              std::to_string(k - 1) + " and " + std::to_string(k) +
                              " at byte offset " + std::to_string(layer_offset));
        l.in_width = in;
        l.out_width = out;
        l.activation = Activation(act);
        l.weights.resize(std::size_t(in) * out);
        l.biases.resize(out);
        read_bytes(l.weights.data(), l.weights.size() * sizeof(float));
        read_bytes(l.biases.data(), l.biases.size() * sizeof(float));
        layers.push_back(std::move(l));
    }
    return Network::from_layers(std::move(layers));
}

} // namespace slimnet
