#pragma once
// Exact additive decomposition: given a finite target T, decide whether
// T = A + B with |A|, |B| >= 2, and produce witnesses. Three entry points:
// an exhaustive oracle for narrow windows, a complete backtracking solver,
// and a windowed variant that only constrains sums up to a cut. UNSAT is a
// proof; BudgetExhausted means the search stopped early and is never
// conflated with UNSAT.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sumset/intset.hpp"

namespace sumset {

struct SearchConfig {
    uint64_t node_budget = UINT64_MAX;
    std::chrono::milliseconds time_budget{0};  // zero means unlimited
    bool enumerate_all = false;
};

enum class DecomposeStatus { sat, unsat, budget_exhausted };

struct DecompositionWitness {
    FiniteIntegerSet a;
    FiniteIntegerSet b;
    // Engaged for windowed witnesses: sums are only constrained on
    // [0, N - M] where N is the target's window_hi.
    std::optional<int64_t> windowed_m;
};

struct DecomposeResult {
    DecomposeStatus status = DecomposeStatus::unsat;
    std::optional<DecompositionWitness> witness;
    std::vector<DecompositionWitness> all;  // enumerate_all mode only
    uint64_t nodes = 0;
};

// Exhaustive oracle: iterates every candidate first summand (as a bitmask
// over the translated target) and pairs it with its maximal compatible
// second summand. Window width above 22 is refused; this exists to check the
// solver, not to replace it.
DecomposeResult brute_force_decompose(const FiniteIntegerSet& target);

// Complete backtracking search. Normalizes min T to 0 and anchors 0 in both
// summands, branches on membership of successive target elements in A while
// maintaining the maximal compatible B, prunes on the forced-element rule
// (the smallest uncovered element of T can only ever be covered by joining A)
// and on |B_max| < 2, and breaks the A/B mirror symmetry. With
// enumerate_all set, returns every valid first summand paired with its
// maximal second summand (exponential; meant for small targets).
DecomposeResult exact_decompose(const FiniteIntegerSet& target,
                                const SearchConfig& config = {});

// The unique maximal B with a_partial + B inside target; antitone in
// a_partial. Pre: a_partial nonempty and 0 in a_partial.
FiniteIntegerSet max_compatible(const FiniteIntegerSet& a_partial,
                                const FiniteIntegerSet& target);

// Windowed variant: c_window lives on [0, N]; decide existence of
// A in [0, N-M], B in [0, M], |A|, |B| >= 2 with
// (A + B) ∩ [0, N-M] = C ∩ [0, N-M]. Pre: window_lo == 0, 2 <= M <= N/4.
DecomposeResult window_decompose(const FiniteIntegerSet& c_window, int64_t m,
                                 const SearchConfig& config = {});

struct VerifyOutcome {
    bool ok = false;
    std::string reason;  // empty when ok
};

// Checks a witness against the target; never throws on a bad witness, the
// reason says what failed. Windowed witnesses are checked under the windowed
// contract with N = target.window_hi().
VerifyOutcome verify_witness(const FiniteIntegerSet& target,
                             const DecompositionWitness& witness);

// m_k = min(d_{k+1} - d_k, d_k - d_{k-1}) for k = 2..K+1 (1-based elements).
// Pre: |D| >= K + 2. For D = A + B with |B| >= 2 no entry exceeds the
// largest internal gap of B.
std::vector<int64_t> min_adjacent_gap_profile(const FiniteIntegerSet& d, size_t k);

}  // namespace sumset
