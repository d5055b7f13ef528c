// Acceptance suite: runs the full study battery and prints one PASS/FAIL
// line per criterion. Exits with the number of failed criteria.
//
//  1. XOR success rate over 1000 runs (c0=0.5, target 0.001)     >= 0.95
//  2. word-less generalization among successful XOR runs         >= 0.95
//  3. complete-set XOR success rate within 3pp of criterion 1
//  4. RGB success rate over 30 runs (8x12, c0=0.005, target 0.1) >= 0.90
//  5. a trained RGB net classifies all 8 vertices word-less
//  6. RGB null-output fraction below 0.5 within 0.71 +/- 0.15,
//     histogram probabilities sum to 1 +/- 1e-9
//  7. analytic gradients match central finite differences (step 1e-5,
//     relative error < 1e-5 wherever |gradient| > 1e-8)
//  8. per-row error values of the published XOR solution within 3e-4
//  9. structural properties: gating, null-target neutrality, word-weight
//     constancy, permutation multiset equality, learning-rate law,
//     full-run determinism

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "langnet/datasets.hpp"
#include "langnet/experiments.hpp"
#include "langnet/training.hpp"
#include "support/generators.hpp"
#include "support/reference_model.hpp"

using namespace langnet;

namespace {

int g_failures = 0;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

void print_result(int criterion, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", criterion, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

constexpr unsigned kJobs = 2;

TrainConfig xor_config() {
    TrainConfig cfg;  // c0=0.5 and target_error=0.001 are the defaults
    cfg.seed = 1;
    return cfg;
}

TrainConfig rgb_config() {
    TrainConfig cfg;
    cfg.c0 = 0.005;
    cfg.target_error = 0.1;
    cfg.max_iterations = 20000;
    cfg.seed = 1;
    return cfg;
}

// ---- criteria 1-3: the XOR studies --------------------------------------

ExperimentReport run_criteria_1_2(const Dataset& table_set) {
    std::fprintf(stderr, "acceptance: 1000 XOR trainings...\n");
    const auto cases = xor_generalization_cases();
    const ExperimentReport rep =
        success_rate(xor_topology(), table_set, xor_config(), 1000, cases, kJobs);

    print_result(1, "xor-success-rate", rep.success_rate >= 0.95,
                 fmt("rate=%.3f over 1000 runs (need >= 0.95; published rate 0.98)",
                     rep.success_rate));
    print_result(2, "xor-wordless-generalization", rep.generalization_pass_rate >= 0.95,
                 fmt("pass rate=%.3f among %u successful runs (need >= 0.95)",
                     rep.generalization_pass_rate, rep.successes));
    return rep;
}

void run_criterion_3(const ExperimentReport& table_report, const Dataset& complete_set) {
    std::fprintf(stderr, "acceptance: 1000 complete-set XOR trainings...\n");
    const ExperimentReport rep =
        success_rate(xor_topology(), complete_set, xor_config(), 1000, {}, kJobs);
    const double gap = std::abs(rep.success_rate - table_report.success_rate);
    print_result(3, "xor-complete-set-rate", gap <= 0.03,
                 fmt("rate=%.3f vs %.3f on the 8-row set (gap %.3f, need <= 0.03)",
                     rep.success_rate, table_report.success_rate, gap));
}

// ---- criteria 4-6: the RGB study ----------------------------------------

void run_criteria_4_5_6(const Dataset& rgb_set) {
    std::fprintf(stderr, "acceptance: 30 RGB trainings (8 apartments x 12 hidden)...\n");
    const auto cases = rgb_generalization_cases();
    const TrainConfig cfg = rgb_config();
    const ExperimentReport rep = success_rate(rgb_topology(), rgb_set, cfg, 30, cases, kJobs);

    print_result(4, "rgb-success-rate", rep.success_rate >= 0.90,
                 fmt("rate=%.3f over 30 runs (need >= 0.90; published rate 0.996)",
                     rep.success_rate));

    const auto first_success =
        std::find_if(rep.per_run.begin(), rep.per_run.end(),
                     [](const RunOutcome& r) { return r.success; });
    if (first_success == rep.per_run.end()) {
        print_result(5, "rgb-wordless-vertices", false, "no successfully trained net available");
        print_result(6, "rgb-null-output-stats", false, "no successfully trained net available");
        return;
    }

    // retrain the first successful seed to get the network itself
    std::mt19937_64 rng(first_success->seed);
    Network net = init_network(rgb_topology(), rng);
    TrainConfig run_cfg = cfg;
    run_cfg.seed = first_success->seed;
    auto [trained, train_rep] = train(std::move(net), rgb_set.examples, run_cfg);

    const GeneralizationOutcome outcome = wordless_generalization(trained, cases);
    std::size_t passed = 0;
    for (const bool ok : outcome.case_pass) passed += ok;
    print_result(5, "rgb-wordless-vertices", outcome.pass,
                 fmt("%zu/8 vertices classified with a unique winner > 0.5 (seed %llu)", passed,
                     static_cast<unsigned long long>(first_success->seed)));

    const NullOutputStats stats = null_output_stats(trained, rgb_set, 20);
    double prob_sum = 0.0;
    for (const auto& bin : stats.histogram) prob_sum += bin.probability;
    const bool fraction_ok =
        stats.fraction_below_half >= 0.56 - 1e-12 && stats.fraction_below_half <= 0.86 + 1e-12;
    const bool sum_ok = std::abs(prob_sum - 1.0) <= 1e-9;
    print_result(6, "rgb-null-output-stats", fraction_ok && sum_ok,
                 fmt("fraction_below_half=%.3f (need within [0.56, 0.86]; published 0.71), "
                     "histogram sum=%.12f (need 1 +/- 1e-9), max null output=%.3f",
                     stats.fraction_below_half, prob_sum, stats.max_value));
}

// ---- criterion 7: gradient oracle ---------------------------------------

void run_criterion_7() {
    std::mt19937_64 rng(424242);
    std::size_t pairs = 0;
    std::size_t pairs_with_nulls = 0;
    std::size_t pairs_with_inhibition = 0;
    std::size_t params_checked = 0;
    double worst_rel = 0.0;
    bool ok = true;

    while (pairs < 120) {
        const ApartmentTopology topo = testsupport::random_topology(rng);
        const Network net = init_network(topo, rng);
        const TrainingExample e = testsupport::random_example(topo, rng);
        ++pairs;

        const bool has_null = std::any_of(e.desired.begin(), e.desired.end(),
                                          [](const auto& d) { return !d.has_value(); });
        bool has_inhibition = false;
        for (const auto& ap : topo.apartments) {
            has_inhibition |= !apartment_active(e.word, ap.word.value);
        }
        pairs_with_nulls += has_null;
        pairs_with_inhibition += has_inhibition;

        const Network stepped = backprop_step(net, e, 1.0);
        for (const auto& ref : testsupport::trainable_params(net)) {
            Network before = net;
            Network after = stepped;
            const double analytic =
                testsupport::resolve(before, ref) - testsupport::resolve(after, ref);
            const long double numeric = testsupport::fd_gradient(net, e, ref, 1e-5);
            const double magnitude =
                std::max(std::abs(analytic), static_cast<double>(std::fabs(numeric)));
            if (magnitude <= 1e-8) continue;
            const double rel = std::abs(analytic - static_cast<double>(numeric)) / magnitude;
            worst_rel = std::max(worst_rel, rel);
            if (!(rel < 1e-5)) ok = false;
            ++params_checked;
        }
    }
    ok = ok && pairs >= 100 && pairs_with_nulls > 0 && pairs_with_inhibition > 0;
    print_result(7, "gradient-oracle", ok,
                 fmt("%zu pairs (%zu with nulls, %zu with inhibited apartments), %zu parameters, "
                     "worst relative error %.2e (need < 1e-5)",
                     pairs, pairs_with_nulls, pairs_with_inhibition, params_checked, worst_rel));
}

// ---- criterion 8: published error column ---------------------------------

void run_criterion_8() {
    struct Row {
        double o1, o2;
        std::optional<double> d1, d2;
        double de;
    };
    const std::optional<double> none = std::nullopt;
    const std::vector<Row> rows = {
        {0.96, 0.45, 1.0, none, 0.0009}, {0.97, 0.47, 1.0, none, 0.0004},
        {0.09, 0.96, none, 1.0, 0.0005}, {0.14, 0.96, none, 1.0, 0.0007},
        {0.13, 0.02, none, 0.0, 0.0002}, {0.11, 0.04, none, 0.0, 0.0010},
        {0.04, 0.49, 0.0, none, 0.0007}, {0.04, 0.39, 0.0, none, 0.0008},
    };
    bool ok = true;
    double worst = 0.0;
    for (const auto& row : rows) {
        const std::vector<double> outputs{row.o1, row.o2};
        const std::vector<std::optional<double>> desired{row.d1, row.d2};
        const double gap = std::abs(example_error(outputs, desired) - row.de);
        worst = std::max(worst, gap);
        if (gap > 0.0003 + 1e-12) ok = false;
    }
    print_result(8, "published-error-column", ok,
                 fmt("8 rows recomputed from printed outputs, worst gap %.5f (need <= 0.0003)",
                     worst));
}

// ---- criterion 9: structural property suite ------------------------------

bool property_gating(std::mt19937_64& rng) {
    for (int trial = 0; trial < 30; ++trial) {
        const ApartmentTopology topo = testsupport::random_topology(rng);
        const Network net = init_network(topo, rng);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> x(topo.input_dim);
        for (double& v : x) v = unit(rng);

        for (const auto& presented : topo.apartments) {
            const ForwardTrace trace = forward_trace(net, x, presented.word);

            // single specified slot on the presented word's own apartment
            TrainingExample e;
            e.x = x;
            e.word = presented.word;
            e.desired.assign(topo.total_outputs(), std::nullopt);
            std::size_t own_slot = 0;
            for (const auto& ap : topo.apartments) {
                if (ap.word == presented.word) break;
                own_slot += ap.output_count;
            }
            e.desired[own_slot] = 1.0;
            const Network stepped = backprop_step(net, e, 0.7);

            std::size_t h0 = 0;
            std::size_t o0 = 0;
            for (const auto& ap : topo.apartments) {
                if (ap.word != presented.word) {
                    for (std::size_t j = 0; j < ap.hidden_count; ++j) {
                        if (trace.hidden[h0 + j] != 0.0) return false;
                        if (!(stepped.hidden_layer[h0 + j] == net.hidden_layer[h0 + j])) {
                            return false;
                        }
                    }
                    for (std::size_t j = 0; j < ap.output_count; ++j) {
                        if (!(stepped.output_layer[o0 + j] == net.output_layer[o0 + j])) {
                            return false;
                        }
                    }
                }
                h0 += ap.hidden_count;
                o0 += ap.output_count;
            }
        }
    }
    return true;
}

bool property_null_neutrality(std::mt19937_64& rng) {
    for (int trial = 0; trial < 30; ++trial) {
        const ApartmentTopology topo = testsupport::random_topology(rng);
        const Network net = init_network(topo, rng);
        TrainingExample e = testsupport::random_example(topo, rng);
        const auto outputs = forward(net, e.x, e.word);
        for (std::size_t i = 0; i < e.desired.size(); ++i) {
            if (e.desired[i]) e.desired[i] = outputs[i];  // already answered perfectly
        }
        if (!(backprop_step(net, e, 0.9) == net)) return false;
    }
    return true;
}

bool property_word_weight_constancy() {
    TrainConfig cfg;
    cfg.max_iterations = 60;
    cfg.target_error = 1e-9;
    cfg.seed = 5;
    std::mt19937_64 rng(5);
    const Network net = init_network(xor_topology(), rng);
    const auto [trained, rep] = train(net, xor_dataset().examples, cfg);
    for (std::size_t j = 0; j < net.hidden_layer.size(); ++j) {
        if (trained.hidden_layer[j].word_weight != net.hidden_layer[j].word_weight) return false;
    }
    return true;
}

bool property_permutation() {
    TrainConfig cfg;
    cfg.max_iterations = 6;
    cfg.target_error = 1e-12;
    cfg.seed = 9;
    std::mt19937_64 rng(9);
    Network net = init_network(xor_topology(), rng);

    std::map<std::uint32_t, std::vector<std::size_t>> visits;
    TrainHooks hooks;
    hooks.on_example = [&](std::uint32_t epoch, std::size_t index) {
        visits[epoch].push_back(index);
    };
    train(std::move(net), xor_dataset().examples, cfg, &hooks);

    if (visits.size() != 6) return false;
    std::vector<std::size_t> expected(8);
    std::iota(expected.begin(), expected.end(), std::size_t{0});
    for (auto& [epoch, indices] : visits) {
        std::sort(indices.begin(), indices.end());
        if (indices != expected) return false;
    }
    return true;
}

bool property_learning_rate() {
    for (const double c0 : {0.5, 0.005}) {
        for (const std::uint32_t period : {1u, 100u, 1000u}) {
            TrainConfig cfg;
            cfg.c0 = c0;
            cfg.decay_period = period;
            double prev = learning_rate(cfg, 0);
            for (std::uint32_t it = 0; it < 5000; ++it) {
                const double rate = learning_rate(cfg, it);
                if (rate != c0 / static_cast<double>(1 + it / period)) return false;
                if (rate > prev) return false;
                prev = rate;
            }
        }
    }
    return true;
}

bool property_determinism() {
    TrainConfig cfg;
    cfg.max_iterations = 300;
    cfg.seed = 99;
    std::mt19937_64 a(7);
    std::mt19937_64 b(7);
    const auto ra = train(init_network(xor_topology(), a), xor_dataset().examples, cfg);
    const auto rb = train(init_network(xor_topology(), b), xor_dataset().examples, cfg);
    if (!(ra.first == rb.first)) return false;
    if (ra.second.success != rb.second.success ||
        ra.second.iterations_used != rb.second.iterations_used ||
        ra.second.final_errors != rb.second.final_errors ||
        ra.second.shake_count != rb.second.shake_count) {
        return false;
    }

    // repeated-run reports are invariant to the degree of parallelism
    TrainConfig cfg2;
    cfg2.seed = 21;
    cfg2.max_iterations = 2000;
    const ExperimentReport serial = success_rate(xor_topology(), xor_dataset(), cfg2, 4, {}, 1);
    const ExperimentReport parallel = success_rate(xor_topology(), xor_dataset(), cfg2, 4, {}, 4);
    if (serial.successes != parallel.successes) return false;
    for (std::size_t i = 0; i < serial.per_run.size(); ++i) {
        if (serial.per_run[i].seed != parallel.per_run[i].seed ||
            serial.per_run[i].success != parallel.per_run[i].success ||
            serial.per_run[i].iterations != parallel.per_run[i].iterations) {
            return false;
        }
    }
    return true;
}

void run_criterion_9() {
    std::mt19937_64 rng(777);
    const bool gating = property_gating(rng);
    const bool null_neutrality = property_null_neutrality(rng);
    const bool constancy = property_word_weight_constancy();
    const bool permutation = property_permutation();
    const bool lr_law = property_learning_rate();
    const bool determinism = property_determinism();
    const bool ok = gating && null_neutrality && constancy && permutation && lr_law && determinism;
    print_result(9, "property-suite", ok,
                 fmt("gating=%s null-neutrality=%s word-weight-constancy=%s permutation=%s "
                     "learning-rate-law=%s determinism=%s",
                     gating ? "ok" : "FAIL", null_neutrality ? "ok" : "FAIL",
                     constancy ? "ok" : "FAIL", permutation ? "ok" : "FAIL",
                     lr_law ? "ok" : "FAIL", determinism ? "ok" : "FAIL"));
}

}  // namespace

int main() {
    const Dataset xor_set = xor_dataset();
    const Dataset complete_set = xor_complete_dataset();
    const Dataset rgb_set = rgb_dataset();

    const ExperimentReport xor_report = run_criteria_1_2(xor_set);
    run_criterion_3(xor_report, complete_set);
    run_criteria_4_5_6(rgb_set);
    run_criterion_7();
    run_criterion_8();
    run_criterion_9();

    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}
