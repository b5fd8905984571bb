#ifndef SLIMNET_NET_HPP
#define SLIMNET_NET_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace slimnet {

enum class Activation : std::uint8_t { ReLU = 0, Linear = 1 };

struct LayerSpec {
    std::size_t in_width = 0;
    std::size_t out_width = 0;
    Activation activation = Activation::ReLU;
};

/// One dense layer. Weights are row-major: weights[j * in_width + i] is the
/// connection from input i to neuron j. Parameters are stored as float32
/// (what the model file holds); all arithmetic on them runs in double.
struct DenseLayer {
    std::size_t in_width = 0;
    std::size_t out_width = 0;
    Activation activation = Activation::ReLU;
    std::vector<float> weights; // out_width * in_width
    std::vector<float> biases;  // out_width

    float& w(std::size_t j, std::size_t i) { return weights[j * in_width + i]; }
    float w(std::size_t j, std::size_t i) const { return weights[j * in_width + i]; }
};

/// Post-activation record of one forward pass. `activations[k]` is the output
/// of layer k; the last entry is the descriptor. The input is kept so the
/// trace is sufficient for backpropagation.
struct ForwardTrace {
    std::vector<double> input;
    std::vector<std::vector<double>> activations;

    const std::vector<double>& descriptor() const { return activations.back(); }
};

/// Parameter gradients, same shapes as the network's layers, accumulated
/// in double.
struct Gradients {
    struct Layer {
        std::vector<double> weights;
        std::vector<double> biases;
    };
    std::vector<Layer> layers;

    void add(const Gradients& other);
    void scale(double factor);
};

/// Feed-forward stack of dense layers. Immutable during forward passes,
/// profiling and evaluation; training and pruning mutate it and need
/// exclusive access.
class Network {
public:
    Network() = default;

    /// He-scaled init: weights ~ N(0, 2/in_width), biases zero. The same
    /// seed and specs reproduce the parameters bit for bit.
    /// Throws ConfigError if consecutive specs do not chain.
    static Network init(const std::vector<LayerSpec>& specs, std::uint64_t seed);

    /// Builds a network directly from layers; validates chaining and
    /// parameter finiteness.
    static Network from_layers(std::vector<DenseLayer> layers);

    ForwardTrace forward(const std::vector<double>& input) const;

    std::size_t layer_count() const { return layers_.size(); }
    std::size_t input_width() const { return layers_.front().in_width; }
    std::size_t descriptor_width() const { return layers_.back().out_width; }

    const DenseLayer& layer(std::size_t k) const { return layers_[k]; }
    DenseLayer& layer(std::size_t k) { return layers_[k]; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    /// Total neuron count over all layers (hidden plus descriptor).
    std::size_t neuron_count() const;

    Gradients zero_gradients() const;

    /// One SGD step: p -= step * g for every parameter, rounded back to
    /// float32 storage.
    void apply_step(const Gradients& g, double step);

private:
    std::vector<DenseLayer> layers_;
};

/// Backpropagates one Siamese pair through the shared-weight network.
/// `grad_a`/`grad_b` are the loss gradients w.r.t. the two descriptors;
/// the result sums the contributions of both branches. The ReLU
/// subgradient at 0 is taken as 0.
Gradients backprop_pair(const Network& net,
                        const ForwardTrace& trace_a,
                        const ForwardTrace& trace_b,
                        const std::vector<double>& grad_a,
                        const std::vector<double>& grad_b);

/// Same as backprop_pair but accumulates into an existing gradient buffer.
void backprop_pair_into(const Network& net,
                        const ForwardTrace& trace_a,
                        const ForwardTrace& trace_b,
                        const std::vector<double>& grad_a,
                        const std::vector<double>& grad_b,
                        Gradients& out);

} // namespace slimnet

#endif
