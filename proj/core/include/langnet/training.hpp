#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "langnet/network.hpp"

namespace langnet {

/// Whether the example asserts a correct (desired 1) or incorrect
/// (desired 0) word/input association. Metadata only; training reads the
/// desired vector, not this tag.
enum class Polarity { positive, negative };

/// One training element: an input vector, the word presented with it, and
/// a desired output vector in which unspecified (nullopt) slots produce no
/// error signal at all.
struct TrainingExample {
    std::vector<double> x;
    WordId word;
    std::vector<std::optional<double>> desired;
    Polarity polarity = Polarity::positive;

    friend bool operator==(const TrainingExample&, const TrainingExample&) = default;
};

struct TrainConfig {
    double c0 = 0.5;                   // initial learning rate
    std::uint32_t decay_period = 1000; // epochs between increments of n in the c0/n law
    double target_error = 0.001;       // per-example bound every element must satisfy
    std::uint32_t max_iterations = 100000;
    std::uint32_t shake_patience = 500; // stagnant epochs before shaking
    double shake_amplitude = 0.1;
    std::uint64_t seed = 1;

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Throws std::invalid_argument on non-positive c0/decay_period/
/// target_error/shake_patience or negative shake_amplitude.
void validate_train_config(const TrainConfig& config);

/// Sets one config field from its textual key/value form ("c0", "decay_period",
/// "target_error", "max_iterations", "shake_patience", "shake_amplitude",
/// "seed"). Throws std::runtime_error on unknown keys or unparsable values.
void set_config_field(TrainConfig& config, std::string_view key, std::string_view value);

/// Loads a plain-text key=value config file ('#' starts a comment). Fields
/// not present keep the values from `base`.
TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base = {});

struct TrainReport {
    bool success = false;
    std::uint32_t iterations_used = 0;  // completed epochs
    std::vector<double> final_errors;   // per-example error at termination
    std::uint32_t shake_count = 0;
};

/// Optional observation points inside train(). Any member may be empty.
struct TrainHooks {
    /// After the per-example evaluation that opens an epoch, before updates.
    std::function<void(std::uint32_t epoch, double max_error, double rate)> on_epoch;
    /// After each gradient step, with the index of the visited example.
    std::function<void(std::uint32_t epoch, std::size_t example_index)> on_example;
    std::function<void(std::uint32_t epoch)> on_shake;
};

/// Builds a network for `topology` with every trainable parameter of a
/// neuron with nd dendrites drawn uniformly from [-2/nd, 2/nd] (threshold
/// and, on hidden neurons, the word dendrite count toward nd). Word
/// dendrite weights are set to the apartment words, and each hidden
/// threshold is shifted by -word so the constant dendrite contribution
/// starts cancelled and every apartment begins in the responsive range of
/// its sigmoid.
Network init_network(const ApartmentTopology& topology, std::mt19937_64& rng);

/// Per-example classification error: 0.5 * sum of squared differences over
/// the specified desired slots; unspecified slots are ignored.
/// Throws std::invalid_argument on length mismatch.
double example_error(std::span<const double> outputs,
                     std::span<const std::optional<double>> desired);

/// c0/n schedule with n = 1 + iteration/decay_period (integer division).
double learning_rate(const TrainConfig& config, std::uint32_t iteration);

/// Adds independent uniform noise from [-amplitude, +amplitude] to every
/// trainable weight and threshold. Word dendrites are untouched. Amplitude
/// zero returns the network unchanged without consuming the generator.
Network shake(const Network& net, double amplitude, std::mt19937_64& rng);

/// One online gradient step on the example's error. Output deltas are
/// (o-d)*o*(1-o) on specified slots and exactly zero on unspecified ones;
/// inhibited hidden neurons propagate no gradient. Parameters with zero
/// gradient are left bit-for-bit unchanged.
Network backprop_step(const Network& net, const TrainingExample& example, double rate);

/// Runs epochs (a seeded uniform permutation of the set, one step per
/// example) until every per-example error is <= target_error or
/// max_iterations epochs have elapsed. The success condition is checked
/// before each epoch, so an already-satisfied set succeeds with zero work.
/// When the maximum per-example error has not improved for shake_patience
/// consecutive epochs the weights are shaken once and training continues.
/// Deterministic for a fixed (net, set, config).
/// Throws std::invalid_argument on an empty or inconsistent training set.
std::pair<Network, TrainReport> train(Network net, std::span<const TrainingExample> set,
                                      const TrainConfig& config,
                                      const TrainHooks* hooks = nullptr);

}  // namespace langnet
