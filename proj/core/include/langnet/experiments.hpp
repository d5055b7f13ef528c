#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "langnet/datasets.hpp"
#include "langnet/training.hpp"

namespace langnet {

/// Zero-output error recognition: a (word, input) association is affirmed
/// only when the addressed apartment produces a significant signal.
enum class Verdict { affirmation, negation };

/// Returns affirmation when the maximum output over `active_slots` (the
/// output indices of the apartment addressed by the presented word)
/// strictly exceeds `threshold`, negation otherwise. A value exactly at
/// the threshold is a negation. Throws std::invalid_argument on an empty
/// slot set or out-of-range index.
Verdict zero_output_verdict(std::span<const double> outputs,
                            std::span<const std::size_t> active_slots, double threshold = 0.5);

/// A word-less probe: input vector plus the apartment (by index) expected
/// to win when the network is evaluated with word 0.
struct GeneralizationCase {
    std::vector<double> x;
    std::size_t expected_apartment = 0;
};

/// The four XOR truth-table inputs with their expected apartments
/// (apartment 0 = "equal", apartment 1 = "different").
std::vector<GeneralizationCase> xor_generalization_cases();

/// The eight scaled cube vertices, each expecting its own apartment.
std::vector<GeneralizationCase> rgb_generalization_cases();

struct GeneralizationOutcome {
    bool pass = false;                             // all cases pass
    std::vector<bool> case_pass;
    std::vector<std::vector<double>> case_outputs; // forward() per case
};

/// Evaluates every case with word 0. A case passes when the expected
/// apartment's maximum output exceeds 0.5 and every output of every other
/// apartment stays below 0.5.
GeneralizationOutcome wordless_generalization(const Network& net,
                                              std::span<const GeneralizationCase> cases);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    double probability = 0.0;
};

struct NullOutputStats {
    double fraction_below_half = 0.0;   // over every null-slot output individually
    double max_value = 0.0;
    std::vector<HistogramBin> histogram;  // of per-example maxima, equal-width on [0,1]
    std::size_t null_output_count = 0;
    std::size_t examples_with_nulls = 0;
};

/// Evaluates the network on every example and gathers the outputs of
/// neurons whose desired value is unspecified. Throws
/// std::invalid_argument when the dataset contains no unspecified slot.
NullOutputStats null_output_stats(const Network& net, const Dataset& dataset,
                                  std::size_t bins = 20);

struct RunOutcome {
    std::uint64_t seed = 0;
    bool success = false;
    std::uint32_t iterations = 0;
    bool generalization_pass = false;
};

struct ExperimentReport {
    std::uint32_t runs = 0;
    std::uint32_t successes = 0;
    double success_rate = 0.0;
    std::vector<RunOutcome> per_run;           // seed order
    double generalization_pass_rate = 0.0;     // over successful runs
    std::optional<NullOutputStats> null_stats;
};

/// Trains `runs` independent networks with seeds config.seed+0 ..
/// config.seed+runs-1 and aggregates the outcomes. When `cases` is
/// non-empty every successful run is additionally probed word-less and
/// generalization_pass_rate reports the fraction of successful runs that
/// pass all cases. Runs execute on up to `jobs` threads; the report is
/// identical to sequential execution. `progress`, when set, is invoked
/// once per finished run (completion order, serialised).
ExperimentReport success_rate(const ApartmentTopology& topology, const Dataset& dataset,
                              const TrainConfig& config, std::uint32_t runs,
                              std::span<const GeneralizationCase> cases = {}, unsigned jobs = 1,
                              const std::function<void(const RunOutcome&)>& progress = {});

/// Report serialisation (JSON document, plus a plot-ready CSV for the
/// histogram: bin_lower,bin_upper,probability).
std::string report_to_json(const ExperimentReport& report, std::string_view manifest_ref = {});
void save_report(const ExperimentReport& report, const std::filesystem::path& path,
                 std::string_view manifest_ref = {});
void save_histogram_csv(const NullOutputStats& stats, const std::filesystem::path& path,
                        std::string_view manifest_ref = {});

}  // namespace langnet
