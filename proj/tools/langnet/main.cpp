// langnet command-line tool: dataset generation, training, evaluation and
// the repeated-run experiments, with reproducible artifacts.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "langnet/datasets.hpp"
#include "langnet/experiments.hpp"
#include "langnet/model_io.hpp"
#include "langnet/training.hpp"
#include "manifest.hpp"

namespace {

using namespace langnet;
using Clock = std::chrono::steady_clock;

constexpr int kExitSuccess = 0;
constexpr int kExitDomainFailure = 1;  // e.g. training did not converge
constexpr int kExitUsage = 2;          // bad arguments, bad files, I/O failure

std::vector<double> parse_components(const std::string& text) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + end, v);
        if (ec != std::errc{} || ptr != text.data() + end) {
            throw std::runtime_error("cannot parse input component '" +
                                     text.substr(start, end - start) + "'");
        }
        values.push_back(v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (values.empty()) throw std::runtime_error("empty input vector");
    return values;
}

std::vector<Apartment> parse_apartments(const std::string& text) {
    std::vector<Apartment> apartments;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        const std::string item = text.substr(start, end - start);
        unsigned word = 0;
        unsigned long hidden = 0;
        unsigned long outputs = 0;
        if (std::sscanf(item.c_str(), "%u:%lu:%lu", &word, &hidden, &outputs) != 3) {
            throw std::runtime_error("apartment spec '" + item + "' is not WORD:HIDDEN:OUTPUTS");
        }
        apartments.push_back({WordId{word}, hidden, outputs});
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return apartments;
}

Dataset dataset_for_kind(const std::string& kind) {
    if (kind == "xor") return xor_dataset();
    if (kind == "xor-complete") return xor_complete_dataset();
    if (kind == "rgb") return rgb_dataset();
    throw std::runtime_error("unknown dataset kind '" + kind + "'");
}

ApartmentTopology topology_for_preset(const std::string& preset) {
    if (preset == "xor" || preset == "xor-complete") return xor_topology();
    if (preset == "rgb") return rgb_topology();
    throw std::runtime_error("unknown preset '" + preset + "'");
}

std::vector<GeneralizationCase> cases_for_preset(const std::string& preset) {
    if (preset == "xor" || preset == "xor-complete") return xor_generalization_cases();
    if (preset == "rgb") return rgb_generalization_cases();
    throw std::runtime_error("unknown preset '" + preset + "'");
}

// Options shared by train and experiment: a config file plus per-field
// overrides, applied in that order.
struct ConfigOptions {
    std::string config_path;
    std::string c0, decay_period, target_error, max_iterations;
    std::string shake_patience, shake_amplitude, seed;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "key=value config file");
        cmd.add_option("--c0", c0, "initial learning rate (default 0.5)");
        cmd.add_option("--decay-period", decay_period,
                       "epochs between learning-rate decrements (default 1000)");
        cmd.add_option("--target-error", target_error,
                       "per-example error bound (default 0.001)");
        cmd.add_option("--max-iterations", max_iterations,
                       "epoch cap per run (default 100000)");
        cmd.add_option("--shake-patience", shake_patience,
                       "stagnant epochs before shaking (default 500)");
        cmd.add_option("--shake-amplitude", shake_amplitude,
                       "uniform shake noise bound (default 0.1)");
        cmd.add_option("--seed", seed, "random seed (default 1)");
    }

    TrainConfig resolve() const {
        TrainConfig cfg;
        if (!config_path.empty()) cfg = load_train_config(config_path);
        const std::pair<const char*, const std::string*> overrides[] = {
            {"c0", &c0},
            {"decay_period", &decay_period},
            {"target_error", &target_error},
            {"max_iterations", &max_iterations},
            {"shake_patience", &shake_patience},
            {"shake_amplitude", &shake_amplitude},
            {"seed", &seed},
        };
        for (const auto& [key, value] : overrides) {
            if (!value->empty()) set_config_field(cfg, key, *value);
        }
        validate_train_config(cfg);
        return cfg;
    }
};

// Dataset + topology selection shared by train and experiment.
struct ProblemOptions {
    std::string dataset_path;
    std::string preset;
    std::string apartments_spec;
    std::size_t input_dim = 0;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--dataset", dataset_path, "dataset file (see 'dataset' command)");
        cmd.add_option("--preset", preset, "canonical study: xor, xor-complete or rgb")
            ->check(CLI::IsMember({"xor", "xor-complete", "rgb"}));
        cmd.add_option("--input-dim", input_dim, "input dimension (with --apartments)");
        cmd.add_option("--apartments", apartments_spec,
                       "topology as WORD:HIDDEN:OUTPUTS[,...] (with --input-dim)");
    }

    Dataset resolve_dataset(std::string* fingerprint_out) const {
        if (!dataset_path.empty()) {
            Dataset ds = load_dataset(dataset_path);
            if (fingerprint_out) *fingerprint_out = cli::fingerprint_file(dataset_path);
            return ds;
        }
        if (preset.empty()) {
            throw std::runtime_error("either --dataset or --preset is required");
        }
        Dataset ds = dataset_for_kind(preset);
        if (fingerprint_out) *fingerprint_out = cli::fingerprint(dataset_to_csv(ds));
        return ds;
    }

    ApartmentTopology resolve_topology(const Dataset& ds) const {
        if (!apartments_spec.empty()) {
            ApartmentTopology topo;
            topo.input_dim = input_dim != 0 ? input_dim : ds.input_dim;
            topo.apartments = parse_apartments(apartments_spec);
            validate_topology(topo);
            return topo;
        }
        if (!preset.empty()) return topology_for_preset(preset);
        throw std::runtime_error("either --preset or --apartments is required");
    }
};

std::string manifest_path_for(const std::string& out) { return out + ".manifest.json"; }

int run_dataset(const std::string& kind, const std::string& out, const std::vector<std::string>& argv,
                bool quiet) {
    const auto t0 = Clock::now();
    const Dataset ds = dataset_for_kind(kind);
    const std::string manifest_ref = manifest_path_for(out);
    save_dataset(ds, out, manifest_ref);

    cli::RunManifest manifest;
    manifest.command_line = argv;
    manifest.dataset_fingerprint = cli::fingerprint_file(out);
    manifest.artifacts = {out};
    manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    cli::save_manifest(manifest, manifest_ref);

    if (!quiet) {
        std::cerr << "wrote " << ds.examples.size() << " examples to " << out << "\n";
    }
    std::cout << "{\"examples\": " << ds.examples.size() << ", \"path\": \"" << out << "\"}\n";
    return kExitSuccess;
}

nlohmann::json train_report_to_json(const TrainReport& report, double target_error,
                                    const std::string& manifest_ref) {
    nlohmann::json j;
    j["success"] = report.success;
    j["iterations_used"] = report.iterations_used;
    j["shake_count"] = report.shake_count;
    j["target_error"] = target_error;
    j["final_errors"] = report.final_errors;
    j["manifest"] = manifest_ref;
    return j;
}

int run_train(const ProblemOptions& problem, const ConfigOptions& config_options,
              const std::string& out, const std::vector<std::string>& argv, bool quiet) {
    const auto t0 = Clock::now();
    const TrainConfig cfg = config_options.resolve();

    std::string dataset_fingerprint;
    const Dataset ds = problem.resolve_dataset(&dataset_fingerprint);
    const ApartmentTopology topology = problem.resolve_topology(ds);

    std::mt19937_64 rng(cfg.seed);
    Network net = init_network(topology, rng);

    TrainHooks hooks;
    if (!quiet) {
        hooks.on_epoch = [](std::uint32_t epoch, double max_error, double rate) {
            if (epoch % 1000 == 0) {
                std::cerr << "epoch " << epoch << " max_error " << max_error << " rate " << rate
                          << "\n";
            }
        };
        hooks.on_shake = [](std::uint32_t epoch) {
            std::cerr << "shaking weights at epoch " << epoch << "\n";
        };
    }
    auto [trained, report] = train(std::move(net), ds.examples, cfg, &hooks);

    const std::string manifest_ref = manifest_path_for(out);
    const std::string report_path = out + ".report.json";
    save_network(trained, out, manifest_ref);
    {
        std::ofstream rep(report_path, std::ios::binary);
        if (!rep) throw std::runtime_error("cannot open " + report_path + " for writing");
        rep << train_report_to_json(report, cfg.target_error, manifest_ref).dump(2) << "\n";
    }

    cli::RunManifest manifest;
    manifest.command_line = argv;
    manifest.config = cfg;
    manifest.seed = cfg.seed;
    manifest.dataset_fingerprint = dataset_fingerprint;
    manifest.artifacts = {out, report_path};
    manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    cli::save_manifest(manifest, manifest_ref);

    double max_error = 0.0;
    for (const double e : report.final_errors) max_error = std::max(max_error, e);
    std::cout << "{\"success\": " << (report.success ? "true" : "false")
              << ", \"iterations_used\": " << report.iterations_used
              << ", \"max_final_error\": " << max_error << ", \"model\": \"" << out << "\"}\n";
    return report.success ? kExitSuccess : kExitDomainFailure;
}

int run_eval(const std::string& model_path, const std::string& input, std::uint32_t word,
             double threshold) {
    const Network net = load_network(model_path);
    const std::vector<double> x = parse_components(input);
    const std::vector<double> outputs = forward(net, x, WordId{word});

    std::cout << "outputs:";
    for (const double o : outputs) std::cout << " " << o;
    std::cout << "\n";

    std::vector<std::size_t> active_slots;
    if (word == 0) {
        for (std::size_t i = 0; i < outputs.size(); ++i) active_slots.push_back(i);
    } else {
        const auto apartment = net.topology.apartment_of(WordId{word});
        if (!apartment) {
            throw std::runtime_error("word " + std::to_string(word) +
                                     " has no apartment in this model");
        }
        std::size_t o0 = 0;
        for (std::size_t k = 0; k < *apartment; ++k) o0 += net.topology.apartments[k].output_count;
        for (std::size_t j = 0; j < net.topology.apartments[*apartment].output_count; ++j) {
            active_slots.push_back(o0 + j);
        }
    }
    const Verdict verdict = zero_output_verdict(outputs, active_slots, threshold);
    std::cout << "verdict: " << (verdict == Verdict::affirmation ? "affirmation" : "negation")
              << "\n";

    if (word == 0) {
        // report which apartment carries the strongest response
        std::size_t best_apartment = 0;
        double best = -1.0;
        std::size_t o0 = 0;
        for (std::size_t k = 0; k < net.topology.apartments.size(); ++k) {
            for (std::size_t j = 0; j < net.topology.apartments[k].output_count; ++j) {
                if (outputs[o0 + j] > best) {
                    best = outputs[o0 + j];
                    best_apartment = k;
                }
            }
            o0 += net.topology.apartments[k].output_count;
        }
        std::cout << "winner: apartment " << best_apartment << " (word "
                  << net.topology.apartments[best_apartment].word.value << ")\n";
    }
    return kExitSuccess;
}

int run_experiment_success_rate(const ProblemOptions& problem, const ConfigOptions& config_options,
                                std::uint32_t runs, unsigned jobs, const std::string& out,
                                const std::vector<std::string>& argv, bool quiet) {
    const auto t0 = Clock::now();
    const TrainConfig cfg = config_options.resolve();

    std::string dataset_fingerprint;
    const Dataset ds = problem.resolve_dataset(&dataset_fingerprint);
    const ApartmentTopology topology = problem.resolve_topology(ds);
    const std::vector<GeneralizationCase> cases =
        problem.preset.empty() ? std::vector<GeneralizationCase>{}
                               : cases_for_preset(problem.preset);

    std::uint32_t done = 0;
    const auto progress = [&](const RunOutcome& outcome) {
        ++done;
        if (!quiet) {
            std::cerr << "run " << done << "/" << runs << " seed=" << outcome.seed << " "
                      << (outcome.success ? "success" : "failure")
                      << " iterations=" << outcome.iterations << "\n";
        }
    };
    const ExperimentReport report =
        success_rate(topology, ds, cfg, runs, cases, jobs, progress);

    const std::string manifest_ref = manifest_path_for(out);
    save_report(report, out, manifest_ref);

    cli::RunManifest manifest;
    manifest.command_line = argv;
    manifest.config = cfg;
    manifest.seed = cfg.seed;
    manifest.dataset_fingerprint = dataset_fingerprint;
    manifest.artifacts = {out};
    manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    cli::save_manifest(manifest, manifest_ref);

    std::cout << "{\"runs\": " << report.runs << ", \"successes\": " << report.successes
              << ", \"success_rate\": " << report.success_rate
              << ", \"generalization_pass_rate\": " << report.generalization_pass_rate << "}\n";
    return kExitSuccess;
}

int run_experiment_generalization(const std::string& model_path, const std::string& preset,
                                  const std::string& out, const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    const Network net = load_network(model_path);
    const std::vector<GeneralizationCase> cases = cases_for_preset(preset);
    const GeneralizationOutcome outcome = wordless_generalization(net, cases);

    nlohmann::json j;
    j["pass"] = outcome.pass;
    j["cases"] = nlohmann::json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        j["cases"].push_back({{"x", cases[i].x},
                              {"expected_apartment", cases[i].expected_apartment},
                              {"outputs", outcome.case_outputs[i]},
                              {"pass", static_cast<bool>(outcome.case_pass[i])}});
    }
    const std::string manifest_ref = manifest_path_for(out);
    j["manifest"] = manifest_ref;
    {
        std::ofstream rep(out, std::ios::binary);
        if (!rep) throw std::runtime_error("cannot open " + out + " for writing");
        rep << j.dump(2) << "\n";
    }

    cli::RunManifest manifest;
    manifest.command_line = argv;
    manifest.artifacts = {out};
    manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    cli::save_manifest(manifest, manifest_ref);

    std::cout << "{\"pass\": " << (outcome.pass ? "true" : "false") << "}\n";
    return outcome.pass ? kExitSuccess : kExitDomainFailure;
}

int run_experiment_null_stats(const std::string& model_path, const ProblemOptions& problem,
                              std::size_t bins, const std::string& out,
                              const std::vector<std::string>& argv) {
    const auto t0 = Clock::now();
    const Network net = load_network(model_path);
    std::string dataset_fingerprint;
    const Dataset ds = problem.resolve_dataset(&dataset_fingerprint);
    const NullOutputStats stats = null_output_stats(net, ds, bins);

    const std::string manifest_ref = manifest_path_for(out);
    const std::string stats_path = out + ".stats.json";
    save_histogram_csv(stats, out, manifest_ref);
    {
        nlohmann::json j;
        j["fraction_below_half"] = stats.fraction_below_half;
        j["max_value"] = stats.max_value;
        j["null_output_count"] = stats.null_output_count;
        j["examples_with_nulls"] = stats.examples_with_nulls;
        j["manifest"] = manifest_ref;
        std::ofstream rep(stats_path, std::ios::binary);
        if (!rep) throw std::runtime_error("cannot open " + stats_path + " for writing");
        rep << j.dump(2) << "\n";
    }

    cli::RunManifest manifest;
    manifest.command_line = argv;
    manifest.dataset_fingerprint = dataset_fingerprint;
    manifest.artifacts = {out, stats_path};
    manifest.duration_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    cli::save_manifest(manifest, manifest_ref);

    std::cout << "{\"fraction_below_half\": " << stats.fraction_below_half
              << ", \"max_value\": " << stats.max_value << "}\n";
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"word-gated apartment MLP: datasets, training, evaluation, experiments"};
    app.require_subcommand(1);
    const std::vector<std::string> argv_copy(argv, argv + argc);

    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress progress output on stderr");

    // dataset
    auto* dataset_cmd = app.add_subcommand("dataset", "generate a training-set file");
    dataset_cmd->add_flag("--quiet", quiet, "suppress progress output on stderr");
    std::string dataset_kind;
    std::string dataset_out;
    dataset_cmd->add_option("--kind", dataset_kind, "xor, xor-complete or rgb")
        ->required()
        ->check(CLI::IsMember({"xor", "xor-complete", "rgb"}));
    dataset_cmd->add_option("--out", dataset_out, "output file")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "train a network and write the model");
    train_cmd->add_flag("--quiet", quiet, "suppress progress output on stderr");
    ProblemOptions train_problem;
    ConfigOptions train_config;
    std::string train_out;
    train_problem.add_to(*train_cmd);
    train_config.add_to(*train_cmd);
    train_cmd->add_option("--out", train_out, "model output file")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model on one input");
    std::string eval_model;
    std::string eval_input;
    std::uint32_t eval_word = 0;
    double eval_threshold = 0.5;
    eval_cmd->add_option("--model", eval_model, "model file")->required();
    eval_cmd->add_option("--input", eval_input, "comma-separated input components")->required();
    eval_cmd->add_option("--word", eval_word, "word identifier (0 = none)");
    eval_cmd->add_option("--threshold", eval_threshold, "zero-output verdict threshold");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "repeated-run studies and statistics");
    exp_cmd->add_flag("--quiet", quiet, "suppress progress output on stderr");
    std::string exp_kind;
    ProblemOptions exp_problem;
    ConfigOptions exp_config;
    std::string exp_model;
    std::string exp_out;
    std::uint32_t exp_runs = 0;
    unsigned exp_jobs = std::max(1u, std::thread::hardware_concurrency());
    std::size_t exp_bins = 20;
    exp_cmd->add_option("--kind", exp_kind, "success-rate, generalization or null-stats")
        ->required()
        ->check(CLI::IsMember({"success-rate", "generalization", "null-stats"}));
    exp_problem.add_to(*exp_cmd);
    exp_config.add_to(*exp_cmd);
    exp_cmd->add_option("--model", exp_model, "trained model (generalization/null-stats)");
    exp_cmd->add_option("--runs", exp_runs, "number of training runs (success-rate)");
    exp_cmd->add_option("--jobs", exp_jobs, "worker threads for independent runs");
    exp_cmd->add_option("--bins", exp_bins, "histogram bins (null-stats)");
    exp_cmd->add_option("--out", exp_out, "report output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitSuccess : kExitUsage;
    }

    try {
        if (*dataset_cmd) return run_dataset(dataset_kind, dataset_out, argv_copy, quiet);
        if (*train_cmd) return run_train(train_problem, train_config, train_out, argv_copy, quiet);
        if (*eval_cmd) return run_eval(eval_model, eval_input, eval_word, eval_threshold);
        if (*exp_cmd) {
            if (exp_kind == "success-rate") {
                if (exp_runs == 0) throw std::runtime_error("--runs must be >= 1");
                return run_experiment_success_rate(exp_problem, exp_config, exp_runs, exp_jobs,
                                                   exp_out, argv_copy, quiet);
            }
            if (exp_kind == "generalization") {
                if (exp_model.empty()) throw std::runtime_error("--model is required");
                if (exp_problem.preset.empty()) throw std::runtime_error("--preset is required");
                return run_experiment_generalization(exp_model, exp_problem.preset, exp_out,
                                                     argv_copy);
            }
            if (exp_model.empty()) throw std::runtime_error("--model is required");
            return run_experiment_null_stats(exp_model, exp_problem, exp_bins, exp_out, argv_copy);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
