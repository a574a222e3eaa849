#pragma once
// Seeded Monte Carlo over the perturbation model. Trial t draws from
// substream(master, t) regardless of which worker runs it, and aggregates
// are integer sums reduced in trial order, so a report is byte-identical
// across runs and across thread counts. The empirical pass rule compares a
// frequency against its analytic bound plus three sigma of headroom; bounds
// above 1 are flagged vacuous and not tested.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumset/generators.hpp"

namespace sumset {

enum class StatKind { adjacency, close_pair, pattern_count, gap_profile };

struct ExperimentSpec {
    std::string ground = "primes";  // "primes", "two_squares", or "file:PATH"
    int64_t limit = 0;              // sieve bound / file cutoff
    double iota = 0.5;
    double scale = 1.0;
    EpsilonKind epsilon = EpsilonKind::uniform;

    StatKind stat = StatKind::adjacency;
    size_t index_k = 0;                   // adjacency, close_pair
    int64_t offset = 0;                   // h (adjacency) or H (close_pair)
    std::vector<int64_t> pattern;         // pattern_count
    std::vector<int64_t> x_checkpoints;   // pattern_count
    size_t profile_k = 0;                 // gap_profile

    uint64_t trials = 0;
    uint64_t master_seed = 0;
};

struct PatternCheckpointRow {
    int64_t x = 0;
    double mean_count = 0.0;
    int64_t max_count = 0;
    double dec3_reference = 0.0;  // x / (f(x) log f(x))
    double mean_to_reference = 0.0;
    int64_t hits_total = 0;        // summed over trials
    int64_t hits_consecutive = 0;  // hits realized at consecutive indices
};

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<int64_t> per_trial;  // primary statistic, one entry per trial
    double mean = 0.0;
    double variance = 0.0;
    int64_t max = 0;
    double bound = 0.0;            // analytic bound when the statistic has one
    bool bound_vacuous = false;    // bound > 1: reported, not tested
    double noise_allowance = 0.0;  // 3 * sqrt(bound / trials)
    bool pass = true;
    std::vector<PatternCheckpointRow> checkpoints;  // pattern_count only
};

// #{n in [0, x] : n + pattern ⊆ C} via intersecting the translates C - b
// over [0, x]. Pre: pattern nonempty and x + max(pattern) <= C.window_hi()
// (otherwise the count depends on integers outside the window). The scan
// variant is the independent second implementation.
int64_t pattern_translate_count(const FiniteIntegerSet& c,
                                const std::vector<int64_t>& pattern, int64_t x);
int64_t pattern_translate_count_scan(const FiniteIntegerSet& c,
                                     const std::vector<int64_t>& pattern, int64_t x);

// Focused estimators; run_experiment dispatches to these.
ExperimentReport estimate_adjacency_prob(const PerturbationModel& model, size_t k,
                                         int64_t h, uint64_t trials, SeedStream seeds);
ExperimentReport estimate_close_pair_prob(const PerturbationModel& model, size_t k,
                                          int64_t big_h, uint64_t trials,
                                          SeedStream seeds);

ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

std::string experiment_spec_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_spec_from_json(const std::string& text);
std::string experiment_report_to_json(const ExperimentReport& report);

}  // namespace sumset
