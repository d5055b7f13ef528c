#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace langnet {

/// Integer identifier carried next to an input vector. Zero means "no word
/// present"; every real word is a positive integer.
struct WordId {
    std::uint32_t value = 0;

    constexpr bool none() const noexcept { return value == 0; }
    friend constexpr bool operator==(WordId, WordId) = default;
};

/// One isolated region of the network: a block of hidden neurons wired to a
/// block of output neurons, owned by a single word.
struct Apartment {
    WordId word;                   // >= 1, unique across the topology
    std::size_t hidden_count = 0;  // hidden neurons in this apartment
    std::size_t output_count = 0;  // output neurons in this apartment

    friend bool operator==(const Apartment&, const Apartment&) = default;
};

/// Layer sizes and apartment layout. Every input component feeds every
/// hidden neuron; hidden neurons of apartment k feed only the output
/// neurons of apartment k.
struct ApartmentTopology {
    std::size_t input_dim = 0;
    std::vector<Apartment> apartments;

    std::size_t total_hidden() const noexcept;
    std::size_t total_outputs() const noexcept;

    /// Index of the apartment owning `word`, or nullopt (word 0 never maps).
    std::optional<std::size_t> apartment_of(WordId word) const noexcept;

    friend bool operator==(const ApartmentTopology&, const ApartmentTopology&) = default;
};

/// Throws std::invalid_argument when input_dim is zero, an apartment has a
/// zero-valued word or empty hidden/output block, or two apartments share
/// a word.
void validate_topology(const ApartmentTopology& topology);

/// A single neuron. `weights` covers the incoming trainable dendrites
/// (inputs for hidden neurons, own-apartment hidden outputs for output
/// neurons). `word_weight` exists only on hidden neurons; it is the
/// constant word dendrite, equal to the owning apartment's word and never
/// touched by training.
struct Neuron {
    double threshold = 0.0;
    std::vector<double> weights;
    std::optional<std::uint32_t> word_weight;

    friend bool operator==(const Neuron&, const Neuron&) = default;
};

/// Three-layer perceptron with apartment structure. Neurons are stored in
/// apartment order: hidden_layer holds apartment 0's hidden block first,
/// then apartment 1's, and so on; output_layer likewise.
struct Network {
    ApartmentTopology topology;
    std::vector<Neuron> hidden_layer;
    std::vector<Neuron> output_layer;

    friend bool operator==(const Network&, const Network&) = default;
};

/// Throws std::invalid_argument when layer sizes or weight vector lengths
/// disagree with the topology, or a hidden neuron's word_weight does not
/// equal its apartment's word.
void validate_network(const Network& net);

/// Classical logistic function 1/(1+e^-x). Saturates to exactly 0/1 for
/// very large |x|; never NaN for finite input.
double sigmoid(double x);

/// Returns true when an apartment with word dendrite `apartment_word`
/// responds to input word `x_word`: either no word is present or the words
/// match. A positive non-matching word inhibits the apartment.
bool apartment_active(WordId x_word, std::uint32_t apartment_word) noexcept;

/// Activation of a first-hidden-layer neuron: 0 when the apartment is
/// inhibited by `x_word`, otherwise sigmoid(pre_activation).
/// Throws std::invalid_argument when w_word is zero.
double gated_sigmoid(double pre_activation, WordId x_word, std::uint32_t w_word);

/// Hidden and output activations of one forward evaluation.
struct ForwardTrace {
    std::vector<double> hidden;
    std::vector<double> outputs;
};

/// Evaluates the network on (x, word). Hidden neurons compute
/// gated_sigmoid(threshold + word_weight + w.x); output neurons compute
/// sigmoid(threshold + w.h) over their apartment's hidden block. The word
/// dendrite contributes its constant weight to the pre-activation whether
/// or not a word is present; only the gate depends on the input word.
/// Throws std::invalid_argument on input dimension mismatch.
ForwardTrace forward_trace(const Network& net, std::span<const double> x, WordId word);

/// Output vector of forward_trace, in apartment order.
std::vector<double> forward(const Network& net, std::span<const double> x, WordId word);

/// Returns a network with one more apartment appended for `word`. New
/// neurons are initialised like init_network does (uniform in [-2/nd, 2/nd]
/// with nd counting all dendrites of the neuron, threshold and word
/// dendrite included; hidden thresholds are shifted by -word so the
/// constant word dendrite starts cancelled); all pre-existing parameters
/// are preserved bit for bit. Throws std::invalid_argument when word is
/// zero or already mapped.
Network allocate_apartment(const Network& net, WordId word, std::size_t hidden_count,
                           std::size_t output_count, std::mt19937_64& rng);

}  // namespace langnet
