#include "langnet/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace langnet {

std::size_t ApartmentTopology::total_hidden() const noexcept {
    std::size_t n = 0;
    for (const auto& ap : apartments) n += ap.hidden_count;
    return n;
}

std::size_t ApartmentTopology::total_outputs() const noexcept {
    std::size_t n = 0;
    for (const auto& ap : apartments) n += ap.output_count;
    return n;
}

std::optional<std::size_t> ApartmentTopology::apartment_of(WordId word) const noexcept {
    if (word.none()) return std::nullopt;
    for (std::size_t k = 0; k < apartments.size(); ++k) {
        if (apartments[k].word == word) return k;
    }
    return std::nullopt;
}

void validate_topology(const ApartmentTopology& topology) {
    if (topology.input_dim == 0) {
        throw std::invalid_argument("topology: input_dim must be positive");
    }
    std::unordered_set<std::uint32_t> seen;
    for (const auto& ap : topology.apartments) {
        if (ap.word.none()) {
            throw std::invalid_argument("topology: apartment word must be >= 1");
        }
        if (ap.hidden_count == 0 || ap.output_count == 0) {
            throw std::invalid_argument("topology: apartment blocks must be non-empty");
        }
        if (!seen.insert(ap.word.value).second) {
            throw std::invalid_argument("topology: duplicate apartment word " +
                                        std::to_string(ap.word.value));
        }
    }
}

void validate_network(const Network& net) {
    validate_topology(net.topology);
    if (net.hidden_layer.size() != net.topology.total_hidden() ||
        net.output_layer.size() != net.topology.total_outputs()) {
        throw std::invalid_argument("network: layer sizes disagree with topology");
    }
    std::size_t h = 0;
    std::size_t o = 0;
    for (const auto& ap : net.topology.apartments) {
        for (std::size_t j = 0; j < ap.hidden_count; ++j, ++h) {
            const Neuron& n = net.hidden_layer[h];
            if (n.weights.size() != net.topology.input_dim) {
                throw std::invalid_argument("network: hidden weight count != input_dim");
            }
            if (!n.word_weight || *n.word_weight != ap.word.value) {
                throw std::invalid_argument("network: hidden word_weight != apartment word");
            }
        }
        for (std::size_t j = 0; j < ap.output_count; ++j, ++o) {
            const Neuron& n = net.output_layer[o];
            if (n.weights.size() != ap.hidden_count) {
                throw std::invalid_argument("network: output weight count != apartment hidden_count");
            }
            if (n.word_weight) {
                throw std::invalid_argument("network: output neurons carry no word dendrite");
            }
        }
    }
}

double sigmoid(double x) {
    return 1.0 / (1.0 + std::exp(-x));
}

bool apartment_active(WordId x_word, std::uint32_t apartment_word) noexcept {
    return x_word.value == 0 || x_word.value == apartment_word;
}

double gated_sigmoid(double pre_activation, WordId x_word, std::uint32_t w_word) {
    if (w_word == 0) {
        throw std::invalid_argument("gated_sigmoid: word dendrite weight must be >= 1");
    }
    if (!apartment_active(x_word, w_word)) return 0.0;
    return sigmoid(pre_activation);
}

ForwardTrace forward_trace(const Network& net, std::span<const double> x, WordId word) {
    if (x.size() != net.topology.input_dim) {
        throw std::invalid_argument("forward: input dimension mismatch");
    }
    ForwardTrace trace;
    trace.hidden.resize(net.hidden_layer.size());
    trace.outputs.resize(net.output_layer.size());

    std::size_t h0 = 0;
    std::size_t o0 = 0;
    for (const auto& ap : net.topology.apartments) {
        const bool active = apartment_active(word, ap.word.value);
        for (std::size_t j = 0; j < ap.hidden_count; ++j) {
            if (!active) {
                trace.hidden[h0 + j] = 0.0;  // inhibited, pre-activation irrelevant
                continue;
            }
            const Neuron& n = net.hidden_layer[h0 + j];
            double z = n.threshold + static_cast<double>(*n.word_weight);
            for (std::size_t i = 0; i < x.size(); ++i) z += n.weights[i] * x[i];
            trace.hidden[h0 + j] = sigmoid(z);
        }
        for (std::size_t j = 0; j < ap.output_count; ++j) {
            const Neuron& n = net.output_layer[o0 + j];
            double z = n.threshold;
            if (active) {
                for (std::size_t i = 0; i < ap.hidden_count; ++i) {
                    z += n.weights[i] * trace.hidden[h0 + i];
                }
            }
            trace.outputs[o0 + j] = sigmoid(z);
        }
        h0 += ap.hidden_count;
        o0 += ap.output_count;
    }
    return trace;
}

std::vector<double> forward(const Network& net, std::span<const double> x, WordId word) {
    return forward_trace(net, x, word).outputs;
}

namespace {

Neuron make_neuron(std::size_t weight_count, std::size_t dendrite_count,
                   std::optional<std::uint32_t> word_weight, std::mt19937_64& rng) {
    const double bound = 2.0 / static_cast<double>(dendrite_count);
    std::uniform_real_distribution<double> dist(-bound, bound);
    Neuron n;
    n.threshold = dist(rng);
    n.weights.resize(weight_count);
    for (double& w : n.weights) w = dist(rng);
    n.word_weight = word_weight;
    if (word_weight) {
        // Start with the constant word-dendrite contribution cancelled.
        // Without this, apartments with large words begin deep in sigmoid
        // saturation and gradient descent cannot pull them out at the
        // learning rates the studies use.
        n.threshold -= static_cast<double>(*word_weight);
    }
    return n;
}

}  // namespace

Network allocate_apartment(const Network& net, WordId word, std::size_t hidden_count,
                           std::size_t output_count, std::mt19937_64& rng) {
    if (word.none()) {
        throw std::invalid_argument("allocate_apartment: word must be >= 1");
    }
    if (net.topology.apartment_of(word)) {
        throw std::invalid_argument("allocate_apartment: word " + std::to_string(word.value) +
                                    " already has an apartment");
    }
    if (hidden_count == 0 || output_count == 0) {
        throw std::invalid_argument("allocate_apartment: apartment blocks must be non-empty");
    }

    Network out = net;
    out.topology.apartments.push_back({word, hidden_count, output_count});

    // Dendrite counts include the threshold; hidden neurons also own the
    // constant word dendrite.
    const std::size_t hidden_nd = net.topology.input_dim + 2;
    const std::size_t output_nd = hidden_count + 1;
    for (std::size_t j = 0; j < hidden_count; ++j) {
        out.hidden_layer.push_back(make_neuron(net.topology.input_dim, hidden_nd, word.value, rng));
    }
    for (std::size_t j = 0; j < output_count; ++j) {
        out.output_layer.push_back(make_neuron(hidden_count, output_nd, std::nullopt, rng));
    }
    return out;
}

}  // namespace langnet
