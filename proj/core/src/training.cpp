#include "langnet/training.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace langnet {

void validate_train_config(const TrainConfig& config) {
    if (!(config.c0 > 0.0)) throw std::invalid_argument("config: c0 must be positive");
    if (config.decay_period == 0) throw std::invalid_argument("config: decay_period must be positive");
    if (!(config.target_error > 0.0)) throw std::invalid_argument("config: target_error must be positive");
    if (config.shake_patience == 0) throw std::invalid_argument("config: shake_patience must be positive");
    if (config.shake_amplitude < 0.0) throw std::invalid_argument("config: shake_amplitude must be >= 0");
}

namespace {

double parse_real(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(std::string(value), &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad value for " + std::string(key) + ": " + std::string(value));
    }
}

template <typename T>
T parse_integer(std::string_view key, std::string_view value) {
    T v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw std::runtime_error("config: bad value for " + std::string(key) + ": " + std::string(value));
    }
    return v;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

void set_config_field(TrainConfig& config, std::string_view key, std::string_view value) {
    if (key == "c0") config.c0 = parse_real(key, value);
    else if (key == "decay_period") config.decay_period = parse_integer<std::uint32_t>(key, value);
    else if (key == "target_error") config.target_error = parse_real(key, value);
    else if (key == "max_iterations") config.max_iterations = parse_integer<std::uint32_t>(key, value);
    else if (key == "shake_patience") config.shake_patience = parse_integer<std::uint32_t>(key, value);
    else if (key == "shake_amplitude") config.shake_amplitude = parse_real(key, value);
    else if (key == "seed") config.seed = parse_integer<std::uint64_t>(key, value);
    else throw std::runtime_error("config: unknown key: " + std::string(key));
}

TrainConfig load_train_config(const std::filesystem::path& path, TrainConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw std::runtime_error("config: missing '=' at " + path.string() + ":" +
                                     std::to_string(lineno));
        }
        set_config_field(base, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return base;
}

Network init_network(const ApartmentTopology& topology, std::mt19937_64& rng) {
    validate_topology(topology);
    Network net;
    net.topology.input_dim = topology.input_dim;
    for (const auto& ap : topology.apartments) {
        net = allocate_apartment(net, ap.word, ap.hidden_count, ap.output_count, rng);
    }
    return net;
}

double example_error(std::span<const double> outputs,
                     std::span<const std::optional<double>> desired) {
    if (outputs.size() != desired.size()) {
        throw std::invalid_argument("example_error: length mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        if (!desired[i]) continue;  // nulls are ignored
        const double diff = outputs[i] - *desired[i];
        sum += diff * diff;
    }
    return 0.5 * sum;
}

double learning_rate(const TrainConfig& config, std::uint32_t iteration) {
    const std::uint32_t n = 1 + iteration / config.decay_period;
    return config.c0 / static_cast<double>(n);
}

Network shake(const Network& net, double amplitude, std::mt19937_64& rng) {
    if (amplitude < 0.0) throw std::invalid_argument("shake: amplitude must be >= 0");
    if (amplitude == 0.0) return net;
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    Network out = net;
    for (auto* layer : {&out.hidden_layer, &out.output_layer}) {
        for (Neuron& n : *layer) {
            n.threshold += dist(rng);
            for (double& w : n.weights) w += dist(rng);
        }
    }
    return out;
}

namespace {

void check_example(const Network& net, const TrainingExample& example) {
    if (example.x.size() != net.topology.input_dim) {
        throw std::invalid_argument("example: input dimension mismatch");
    }
    if (example.desired.size() != net.topology.total_outputs()) {
        throw std::invalid_argument("example: desired length != output count");
    }
}

// One in-place gradient step. Deltas are computed from the pre-update
// weights for the whole apartment before anything is written back.
// Parameters with an exactly-zero delta are not written at all, so
// untouched apartments stay bit-for-bit identical.
void backprop_step_inplace(Network& net, const TrainingExample& example, double rate,
                           const ForwardTrace& trace, std::vector<double>& out_delta_buf,
                           std::vector<double>& hid_delta_buf) {
    std::size_t h0 = 0;
    std::size_t o0 = 0;
    for (const auto& ap : net.topology.apartments) {
        const bool active = apartment_active(example.word, ap.word.value);

        double* out_delta = out_delta_buf.data();
        bool any_out_delta = false;
        for (std::size_t j = 0; j < ap.output_count; ++j) {
            const auto& d = example.desired[o0 + j];
            if (d) {
                const double o = trace.outputs[o0 + j];
                out_delta[j] = (o - *d) * o * (1.0 - o);
                any_out_delta |= out_delta[j] != 0.0;
            } else {
                out_delta[j] = 0.0;  // unspecified desired: no error signal
            }
        }

        double* hid_delta = hid_delta_buf.data();
        bool any_hid_delta = false;
        if (active && any_out_delta) {
            for (std::size_t i = 0; i < ap.hidden_count; ++i) {
                double back = 0.0;
                for (std::size_t j = 0; j < ap.output_count; ++j) {
                    if (out_delta[j] != 0.0) back += out_delta[j] * net.output_layer[o0 + j].weights[i];
                }
                const double h = trace.hidden[h0 + i];
                hid_delta[i] = back * h * (1.0 - h);
                any_hid_delta |= hid_delta[i] != 0.0;
            }
        }

        if (any_out_delta) {
            for (std::size_t j = 0; j < ap.output_count; ++j) {
                if (out_delta[j] == 0.0) continue;
                Neuron& n = net.output_layer[o0 + j];
                const double step = rate * out_delta[j];
                n.threshold -= step;
                if (active) {
                    for (std::size_t i = 0; i < ap.hidden_count; ++i) {
                        n.weights[i] -= step * trace.hidden[h0 + i];
                    }
                }
                // inhibited apartment: hidden outputs are exactly 0, so the
                // incoming weights receive no gradient
            }
        }
        if (any_hid_delta) {
            for (std::size_t i = 0; i < ap.hidden_count; ++i) {
                if (hid_delta[i] == 0.0) continue;
                Neuron& n = net.hidden_layer[h0 + i];
                const double step = rate * hid_delta[i];
                n.threshold -= step;
                for (std::size_t k = 0; k < example.x.size(); ++k) {
                    n.weights[k] -= step * example.x[k];
                }
            }
        }

        h0 += ap.hidden_count;
        o0 += ap.output_count;
    }
}

std::size_t max_block(const ApartmentTopology& topology) {
    std::size_t m = 0;
    for (const auto& ap : topology.apartments) {
        m = std::max({m, ap.hidden_count, ap.output_count});
    }
    return m;
}

}  // namespace

Network backprop_step(const Network& net, const TrainingExample& example, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("backprop_step: rate must be positive");
    check_example(net, example);
    Network out = net;
    const ForwardTrace trace = forward_trace(out, example.x, example.word);
    std::vector<double> out_delta(max_block(net.topology));
    std::vector<double> hid_delta(max_block(net.topology));
    backprop_step_inplace(out, example, rate, trace, out_delta, hid_delta);
    return out;
}

std::pair<Network, TrainReport> train(Network net, std::span<const TrainingExample> set,
                                      const TrainConfig& config, const TrainHooks* hooks) {
    validate_train_config(config);
    validate_network(net);
    if (set.empty()) throw std::invalid_argument("train: empty training set");
    for (const auto& example : set) {
        check_example(net, example);
        if (std::none_of(example.desired.begin(), example.desired.end(),
                         [](const auto& d) { return d.has_value(); })) {
            throw std::invalid_argument("train: example with no specified desired value");
        }
    }

    std::mt19937_64 rng(config.seed);
    TrainReport report;
    std::vector<double> errors(set.size());
    std::vector<std::size_t> order(set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> out_delta(max_block(net.topology));
    std::vector<double> hid_delta(max_block(net.topology));

    double best_max_error = std::numeric_limits<double>::infinity();
    std::uint32_t stagnant = 0;
    std::uint32_t epoch = 0;

    for (;;) {
        double max_error = 0.0;
        for (std::size_t i = 0; i < set.size(); ++i) {
            errors[i] = example_error(forward(net, set[i].x, set[i].word), set[i].desired);
            max_error = std::max(max_error, errors[i]);
        }
        if (max_error <= config.target_error) {
            report.success = true;
            report.iterations_used = epoch;
            break;
        }
        if (epoch >= config.max_iterations) {
            report.success = false;
            report.iterations_used = epoch;
            break;
        }

        if (max_error < best_max_error) {
            best_max_error = max_error;
            stagnant = 0;
        } else if (++stagnant >= config.shake_patience) {
            net = shake(net, config.shake_amplitude, rng);
            ++report.shake_count;
            stagnant = 0;
            best_max_error = std::numeric_limits<double>::infinity();
            if (hooks && hooks->on_shake) hooks->on_shake(epoch);
        }

        const double rate = learning_rate(config, epoch);
        if (hooks && hooks->on_epoch) hooks->on_epoch(epoch, max_error, rate);

        std::shuffle(order.begin(), order.end(), rng);
        for (const std::size_t idx : order) {
            const ForwardTrace trace = forward_trace(net, set[idx].x, set[idx].word);
            backprop_step_inplace(net, set[idx], rate, trace, out_delta, hid_delta);
            if (hooks && hooks->on_example) hooks->on_example(epoch, idx);
        }
        ++epoch;
    }

    report.final_errors = std::move(errors);
    return {std::move(net), std::move(report)};
}

}  // namespace langnet
