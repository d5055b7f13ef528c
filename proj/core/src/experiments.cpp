#include "langnet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace langnet {

Verdict zero_output_verdict(std::span<const double> outputs,
                            std::span<const std::size_t> active_slots, double threshold) {
    if (active_slots.empty()) {
        throw std::invalid_argument("zero_output_verdict: empty active slot set");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (const std::size_t slot : active_slots) {
        if (slot >= outputs.size()) {
            throw std::invalid_argument("zero_output_verdict: slot index out of range");
        }
        best = std::max(best, outputs[slot]);
    }
    return best > threshold ? Verdict::affirmation : Verdict::negation;
}

std::vector<GeneralizationCase> xor_generalization_cases() {
    return {{{0, 0}, 0}, {{1, 1}, 0}, {{0, 1}, 1}, {{1, 0}, 1}};
}

std::vector<GeneralizationCase> rgb_generalization_cases() {
    std::vector<GeneralizationCase> cases;
    for (std::size_t k = 0; k < 8; ++k) {
        const auto& v = rgb_vertices()[k].rgb;
        cases.push_back({{v[0] / 255.0, v[1] / 255.0, v[2] / 255.0}, k});
    }
    return cases;
}

GeneralizationOutcome wordless_generalization(const Network& net,
                                              std::span<const GeneralizationCase> cases) {
    const std::size_t apartment_count = net.topology.apartments.size();
    GeneralizationOutcome outcome;
    outcome.pass = true;
    for (const auto& gc : cases) {
        if (gc.expected_apartment >= apartment_count) {
            throw std::invalid_argument("generalization: apartment index out of range");
        }
        std::vector<double> outputs = forward(net, gc.x, WordId{0});

        bool ok = true;
        std::size_t o0 = 0;
        for (std::size_t k = 0; k < apartment_count; ++k) {
            const std::size_t count = net.topology.apartments[k].output_count;
            double apartment_max = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < count; ++j) {
                apartment_max = std::max(apartment_max, outputs[o0 + j]);
            }
            if (k == gc.expected_apartment) {
                ok &= apartment_max > 0.5;
            } else {
                ok &= apartment_max < 0.5;
            }
            o0 += count;
        }
        outcome.case_pass.push_back(ok);
        outcome.case_outputs.push_back(std::move(outputs));
        outcome.pass &= ok;
    }
    return outcome;
}

NullOutputStats null_output_stats(const Network& net, const Dataset& dataset, std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("null_output_stats: bins must be positive");
    const std::size_t output_count = net.topology.total_outputs();

    NullOutputStats stats;
    std::vector<std::size_t> bin_counts(bins, 0);
    std::size_t below_half = 0;

    for (const auto& e : dataset.examples) {
        if (e.desired.size() != output_count) {
            throw std::invalid_argument("null_output_stats: desired length != output count");
        }
        const std::vector<double> outputs = forward(net, e.x, e.word);
        double example_max = -1.0;
        for (std::size_t i = 0; i < output_count; ++i) {
            if (e.desired[i]) continue;
            const double v = outputs[i];
            ++stats.null_output_count;
            if (v < 0.5) ++below_half;
            stats.max_value = std::max(stats.max_value, v);
            example_max = std::max(example_max, v);
        }
        if (example_max >= 0.0) {
            ++stats.examples_with_nulls;
            const auto bin = std::min(bins - 1, static_cast<std::size_t>(example_max *
                                                                          static_cast<double>(bins)));
            ++bin_counts[bin];
        }
    }
    if (stats.null_output_count == 0) {
        throw std::invalid_argument("null_output_stats: dataset has no unspecified desired slots");
    }

    stats.fraction_below_half =
        static_cast<double>(below_half) / static_cast<double>(stats.null_output_count);
    const double width = 1.0 / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        stats.histogram.push_back({static_cast<double>(b) * width,
                                   static_cast<double>(b + 1) * width,
                                   static_cast<double>(bin_counts[b]) /
                                       static_cast<double>(stats.examples_with_nulls)});
    }
    return stats;
}

ExperimentReport success_rate(const ApartmentTopology& topology, const Dataset& dataset,
                              const TrainConfig& config, std::uint32_t runs,
                              std::span<const GeneralizationCase> cases, unsigned jobs,
                              const std::function<void(const RunOutcome&)>& progress) {
    if (runs == 0) throw std::invalid_argument("success_rate: runs must be >= 1");
    validate_train_config(config);
    validate_topology(topology);
    if (dataset.input_dim != topology.input_dim) {
        throw std::invalid_argument("success_rate: dataset input_dim != topology input_dim");
    }

    ExperimentReport report;
    report.runs = runs;
    report.per_run.resize(runs);

    std::atomic<std::uint32_t> next{0};
    std::mutex progress_mutex;

    const auto worker = [&] {
        for (;;) {
            const std::uint32_t i = next.fetch_add(1);
            if (i >= runs) return;
            const std::uint64_t seed = config.seed + i;

            std::mt19937_64 rng(seed);
            Network net = init_network(topology, rng);
            TrainConfig run_config = config;
            run_config.seed = seed;
            auto [trained, train_report] = train(std::move(net), dataset.examples, run_config);

            RunOutcome outcome;
            outcome.seed = seed;
            outcome.success = train_report.success;
            outcome.iterations = train_report.iterations_used;
            if (outcome.success && !cases.empty()) {
                outcome.generalization_pass = wordless_generalization(trained, cases).pass;
            }
            report.per_run[i] = outcome;
            if (progress) {
                const std::lock_guard lock(progress_mutex);
                progress(outcome);
            }
        }
    };

    const unsigned thread_count = std::max(1u, std::min<unsigned>(jobs, runs));
    if (thread_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(thread_count);
        for (unsigned t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::uint32_t generalization_passes = 0;
    for (const auto& outcome : report.per_run) {
        if (outcome.success) ++report.successes;
        if (outcome.generalization_pass) ++generalization_passes;
    }
    report.success_rate = static_cast<double>(report.successes) / static_cast<double>(runs);
    report.generalization_pass_rate =
        report.successes == 0 ? 0.0
                              : static_cast<double>(generalization_passes) /
                                    static_cast<double>(report.successes);
    return report;
}

namespace {

nlohmann::json stats_to_json(const NullOutputStats& stats) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& bin : stats.histogram) {
        bins.push_back({{"bin_lower", bin.lower},
                        {"bin_upper", bin.upper},
                        {"probability", bin.probability}});
    }
    return {{"fraction_below_half", stats.fraction_below_half},
            {"max_value", stats.max_value},
            {"null_output_count", stats.null_output_count},
            {"examples_with_nulls", stats.examples_with_nulls},
            {"histogram", std::move(bins)}};
}

}  // namespace

std::string report_to_json(const ExperimentReport& report, std::string_view manifest_ref) {
    nlohmann::json j;
    j["runs"] = report.runs;
    j["successes"] = report.successes;
    j["success_rate"] = report.success_rate;
    j["generalization_pass_rate"] = report.generalization_pass_rate;
    j["per_run"] = nlohmann::json::array();
    for (const auto& outcome : report.per_run) {
        j["per_run"].push_back({{"seed", outcome.seed},
                                {"success", outcome.success},
                                {"iterations", outcome.iterations},
                                {"generalization_pass", outcome.generalization_pass}});
    }
    j["null_output_stats"] = report.null_stats ? stats_to_json(*report.null_stats)
                                               : nlohmann::json(nullptr);
    if (!manifest_ref.empty()) j["manifest"] = manifest_ref;
    return j.dump(2) + "\n";
}

void save_report(const ExperimentReport& report, const std::filesystem::path& path,
                 std::string_view manifest_ref) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("report: cannot open " + path.string() + " for writing");
    out << report_to_json(report, manifest_ref);
    if (!out) throw std::runtime_error("report: write failed for " + path.string());
}

void save_histogram_csv(const NullOutputStats& stats, const std::filesystem::path& path,
                        std::string_view manifest_ref) {
    const auto fmt = [](double v) {
        char buf[32];
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    };
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("histogram: cannot open " + path.string() + " for writing");
    out << "# langnet-histogram v1\n";
    if (!manifest_ref.empty()) out << "# manifest: " << manifest_ref << "\n";
    out << "bin_lower,bin_upper,probability\n";
    for (const auto& bin : stats.histogram) {
        out << fmt(bin.lower) << "," << fmt(bin.upper) << "," << fmt(bin.probability) << "\n";
    }
    if (!out) throw std::runtime_error("histogram: write failed for " + path.string());
}

}  // namespace langnet
