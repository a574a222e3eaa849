#pragma once
// Desk-scale evaluations of the quantities the growth/dispersion hypotheses
// talk about: the density ratio f(x) = x/S(x), near-triple and twin counts,
// dispersion diagnostics, and the first-moment decomposability bound chain
// evaluated in log space. Exact checks and heuristic trend checks are kept
// visibly distinct in the report verdicts.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sumset/generators.hpp"

namespace sumset {

struct Rational {
    int64_t num = 0;
    int64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// x / S(x) as an exact reduced fraction. Errors when S(x) == 0 or when the
// ground is not materialized through x (the count would silently lie).
Rational f_of_x(const GroundSequence& ground, int64_t x);

// #{k : s_k <= x and s_{k+2} - s_k <= h}. Needs two terms beyond the last
// s_k <= x; insufficient materialization is a domain error. h >= 0.
int64_t gap_triple_count(const GroundSequence& ground, int64_t x, int64_t h);

// #{s <= x : s in S and s + m in S}, m >= 1. Needs materialization through
// x + m. Two implementations, sequence scan and bitmask intersection; they
// must agree and tests sweep them against each other.
int64_t twin_count(const GroundSequence& ground, int64_t x, int64_t m);
int64_t twin_count_by_mask(const GroundSequence& ground, int64_t x, int64_t m);

struct DeltaDiagnostics {
    int64_t d1_defect = 0;  // #{n <= x : delta_n < 2}; x bounds the index here
    double d2_sum = 0.0;    // sum over s_k <= x of prod_{i<ell} 1/delta_{k+i}
    bool d3_ok = false;     // 1 <= delta_n <= (s_{n+1}-s_{n-1})/2 for all n >= 2
};
DeltaDiagnostics delta_diagnostics(const GroundSequence& ground,
                                   const DeltaSequence& delta, int64_t x, int ell);

// First-moment bound chain at checkpoint x, natural logs throughout:
//   threshold        r* = floor((log 2 / 2) * x / (f log f))
//   count_bound_log  log(r*) + r* * log(2e * x / r*)
//   pointwise_log    sum over {n : s_{n+1} < x} of log(1/delta_n)
//   dec1_log         count_bound_log + pointwise_log
// Requires f(x) > e and r* >= 1.
struct WirsingBounds {
    int64_t threshold = 0;
    double count_bound_log = 0.0;
    double pointwise_log = 0.0;
    double dec1_log = 0.0;
};
WirsingBounds wirsing_bounds(const GroundSequence& ground,
                             const DeltaSequence& delta, int64_t x);

// P(c_k + h = c_{k+1}) <= h^2 * eta_k * eta_{k+1}; h >= 1, k+1 materialized.
double adjacency_prob_bound(const DeltaSequence& delta, size_t k, int64_t h);
// P(c_{k+1} - c_k <= H) <= H^3 * eta_k * eta_{k+1}; H >= 1.
double close_pair_bound(const DeltaSequence& delta, size_t k, int64_t H);

struct CheckpointStats {
    int64_t x = 0;
    Rational f;
    int64_t s_count = 0;
    std::map<int64_t, int64_t> gap_triples;  // h -> count
    std::map<int64_t, int64_t> twins;        // m -> count
    DeltaDiagnostics delta;
    double d2_ratio = 0.0;  // d2_sum / (S(x) / log f(x))
    WirsingBounds wirsing;
};

// Verdict values: "pass"/"fail" for exact checks, "heuristic-pass"/
// "heuristic-fail" for finite trend checks that only gesture at asymptotics.
struct HypothesisReport {
    std::string ground;
    int ell = 2;
    std::vector<CheckpointStats> checkpoints;
    std::map<std::string, std::string> verdicts;
};

HypothesisReport hypothesis_report(const GroundSequence& ground,
                                   const DeltaSequence& delta,
                                   const std::vector<int64_t>& checkpoints,
                                   const std::vector<int64_t>& gap_hs,
                                   const std::vector<int64_t>& twin_ms, int ell);

std::string report_to_json(const HypothesisReport& report);

}  // namespace sumset
