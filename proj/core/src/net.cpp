#include "slimnet/net.hpp"
#include "slimnet/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace slimnet {

namespace {

void check_chain(std::size_t prev_out, std::size_t in, std::size_t k) {
    if (prev_out != in) {
        throw ConfigError("layer chain mismatch between layers " +
                          std::to_string(k - 1) + " and " + std::to_string(k) +
                          ": out_width " + std::to_string(prev_out) +
                          " vs in_width " + std::to_string(in));
    }
}

void check_finite_params(const DenseLayer& l, std::size_t k) {
    for (float v : l.weights) {
        if (!std::isfinite(v))
            throw InputError("non-finite weight in layer " + std::to_string(k));
    }
    for (float v : l.biases) {
        if (!std::isfinite(v))
            throw InputError("non-finite bias in layer " + std::to_string(k));
    }
}

} // namespace

void Gradients::add(const Gradients& other) {
    for (std::size_t k = 0; k < layers.size(); ++k) {
        auto& dst = layers[k];
        const auto& src = other.layers[k];
        for (std::size_t i = 0; i < dst.weights.size(); ++i)
            dst.weights[i] += src.weights[i];
        for (std::size_t i = 0; i < dst.biases.size(); ++i)
            dst.biases[i] += src.biases[i];
    }
}

void Gradients::scale(double factor) {
    for (auto& l : layers) {
        for (auto& v : l.weights) v *= factor;
        for (auto& v : l.biases) v *= factor;
    }
}

Network Network::init(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    if (specs.empty())
        throw ConfigError("network needs at least one layer");
    for (std::size_t k = 0; k < specs.size(); ++k) {
        if (specs[k].in_width == 0 || specs[k].out_width == 0)
            throw ConfigError("layer " + std::to_string(k) + " has zero width");
        if (k > 0) check_chain(specs[k - 1].out_width, specs[k].in_width, k);
    }

    std::mt19937_64 rng(seed);
    Network net;
    net.layers_.reserve(specs.size());
    for (const auto& spec : specs) {
        DenseLayer l;
        l.in_width = spec.in_width;
        l.out_width = spec.out_width;
        l.activation = spec.activation;
        l.weights.resize(l.out_width * l.in_width);
        l.biases.assign(l.out_width, 0.0f);
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / double(l.in_width)));
        for (auto& w : l.weights) w = float(dist(rng));
        net.layers_.push_back(std::move(l));
    }
    return net;
}

Network Network::from_layers(std::vector<DenseLayer> layers) {
    if (layers.empty())
        throw ConfigError("network needs at least one layer");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& l = layers[k];
        if (l.in_width == 0 || l.out_width == 0)
            throw ConfigError("layer " + std::to_string(k) + " has zero width");
        if (l.weights.size() != l.out_width * l.in_width ||
            l.biases.size() != l.out_width)
            throw StructuralError("layer " + std::to_string(k) +
                                  " parameter shapes do not match its widths");
        if (k > 0) check_chain(layers[k - 1].out_width, l.in_width, k);
        check_finite_params(l, k);
    }
    Network net;
    net.layers_ = std::move(layers);
    return net;
}

ForwardTrace Network::forward(const std::vector<double>& input) const {
    if (input.size() != input_width())
        throw DimensionError("input length " + std::to_string(input.size()) +
                             " does not match first layer in_width " +
                             std::to_string(input_width()));
    for (double v : input) {
        if (!std::isfinite(v)) throw InputError("non-finite input value");
    }

    ForwardTrace trace;
    trace.input = input;
    trace.activations.reserve(layers_.size());

    const std::vector<double>* x = &trace.input;
    for (const auto& l : layers_) {
        std::vector<double> out(l.out_width);
        const float* wrow = l.weights.data();
        for (std::size_t j = 0; j < l.out_width; ++j, wrow += l.in_width) {
            double acc = double(l.biases[j]);
            for (std::size_t i = 0; i < l.in_width; ++i)
                acc += double(wrow[i]) * (*x)[i];
            out[j] = (l.activation == Activation::ReLU) ? std::max(0.0, acc) : acc;
        }
        trace.activations.push_back(std::move(out));
        x = &trace.activations.back();
    }
    return trace;
}

std::size_t Network::neuron_count() const {
    std::size_t n = 0;
    for (const auto& l : layers_) n += l.out_width;
    return n;
}

Gradients Network::zero_gradients() const {
    Gradients g;
    g.layers.resize(layers_.size());
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        g.layers[k].weights.assign(layers_[k].weights.size(), 0.0);
        g.layers[k].biases.assign(layers_[k].biases.size(), 0.0);
    }
    return g;
}

void Network::apply_step(const Gradients& g, double step) {
    if (g.layers.size() != layers_.size())
        throw StructuralError("gradient layer count does not match network");
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        auto& l = layers_[k];
        const auto& gl = g.layers[k];
        for (std::size_t i = 0; i < l.weights.size(); ++i)
            l.weights[i] = float(double(l.weights[i]) - step * gl.weights[i]);
        for (std::size_t i = 0; i < l.biases.size(); ++i)
            l.biases[i] = float(double(l.biases[i]) - step * gl.biases[i]);
    }
}

namespace {

// One branch of the pair: accumulates dE/dW, dE/db into `grads` given the
// loss gradient w.r.t. this branch's descriptor.
void backprop_branch(const Network& net, const ForwardTrace& trace,
                     const std::vector<double>& descriptor_grad,
                     Gradients& grads) {
    const std::size_t n_layers = net.layer_count();
    if (trace.activations.size() != n_layers)
        throw StructuralError("trace layer count does not match network");
    if (descriptor_grad.size() != net.descriptor_width())
        throw DimensionError("loss gradient length does not match descriptor width");
    for (double v : descriptor_grad) {
        if (!std::isfinite(v)) throw InputError("non-finite loss gradient");
    }

    std::vector<double> delta = descriptor_grad;
    for (std::size_t k = n_layers; k-- > 0;) {
        const auto& l = net.layer(k);
        const auto& post = trace.activations[k];

        // Gate through the activation: post > 0 iff pre > 0 for ReLU, so
        // the stored post-activations are enough to pick the subgradient.
        if (l.activation == Activation::ReLU) {
            for (std::size_t j = 0; j < l.out_width; ++j)
                if (post[j] <= 0.0) delta[j] = 0.0;
        }

        const std::vector<double>& below =
            (k == 0) ? trace.input : trace.activations[k - 1];

        auto& gl = grads.layers[k];
        for (std::size_t j = 0; j < l.out_width; ++j) {
            const double dj = delta[j];
            gl.biases[j] += dj;
            if (dj == 0.0) continue;
            double* gw = gl.weights.data() + j * l.in_width;
            for (std::size_t i = 0; i < l.in_width; ++i)
                gw[i] += dj * below[i];
        }

        if (k == 0) break;
        std::vector<double> next(l.in_width, 0.0);
        const float* wrow = l.weights.data();
        for (std::size_t j = 0; j < l.out_width; ++j, wrow += l.in_width) {
            const double dj = delta[j];
            if (dj == 0.0) continue;
            for (std::size_t i = 0; i < l.in_width; ++i)
                next[i] += double(wrow[i]) * dj;
        }
        delta = std::move(next);
    }
}

} // namespace

Gradients backprop_pair(const Network& net,
                        const ForwardTrace& trace_a,
                        const ForwardTrace& trace_b,
                        const std::vector<double>& grad_a,
                        const std::vector<double>& grad_b) {
    Gradients grads = net.zero_gradients();
    backprop_branch(net, trace_a, grad_a, grads);
    backprop_branch(net, trace_b, grad_b, grads);
    return grads;
}

void backprop_pair_into(const Network& net,
                        const ForwardTrace& trace_a,
                        const ForwardTrace& trace_b,
                        const std::vector<double>& grad_a,
                        const std::vector<double>& grad_b,
                        Gradients& out) {
    if (out.layers.size() != net.layer_count())
        throw StructuralError("gradient layer count does not match network");
    backprop_branch(net, trace_a, grad_a, out);
    backprop_branch(net, trace_b, grad_b, out);
}

} // namespace slimnet
