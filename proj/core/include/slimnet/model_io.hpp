#ifndef SLIMNET_MODEL_IO_HPP
#define SLIMNET_MODEL_IO_HPP

#include "slimnet/net.hpp"

#include <filesystem>

namespace slimnet {

// Model file (.spnn), little-endian binary: magic "SPNN", u32 version = 1,
// u32 n_layers, then per layer u32 in_width, u32 out_width, u8 activation
// (0 = ReLU, 1 = Linear), row-major float32 weights, float32 biases.
// Parameters are float32 in memory, so save/load is bit-exact.

void save_model(const Network& net, const std::filesystem::path& path);

/// Validates magic, version and layer chaining; format errors report the
/// byte offset of the problem.
Network load_model(const std::filesystem::path& path);

} // namespace slimnet

#endif
