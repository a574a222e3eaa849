#pragma once
// Greedy constructions inside a fixed dense-looking set D: find translated
// copies of a pattern, and grow pairs (A, B) with A + B inside D, or with
// A - B inside a symmetric D while hitting prescribed differences. All
// choices follow the least-valid-candidate policy, so runs are deterministic
// and the step traces are reproducible.

#include <cstdint>
#include <optional>
#include <vector>

#include "sumset/intset.hpp"

namespace sumset {

// Least n >= from with n + H inside D, or nullopt once n + max(H) would
// leave D's window (a normal outcome, not an error). Pre: H nonempty.
std::optional<int64_t> find_translate(const FiniteIntegerSet& d,
                                      const FiniteIntegerSet& h, int64_t from);

// n_j = j * (diam H + 1) for j = 1..count: translates n_j + H are pairwise
// disjoint, so membership events over independent coordinates stay
// independent.
std::vector<int64_t> independent_translate_indices(const FiniteIntegerSet& h,
                                                   size_t count);

struct BuilderState {
    std::vector<int64_t> a;  // insertion order
    std::vector<int64_t> b;
    std::vector<int64_t> d;  // difference targets consumed (difference mode)
    size_t achieved = 0;     // completed (a_i, b_i) pairs
    bool exhausted = false;  // stopped early: the window ran out of candidates
    bool all_nonnegative = true;
};

// Alternately extend A then B, each time taking the least integer x >= 0
// outside the set being extended with x + other ⊆ D. The state returned
// always satisfies sumset(A, B) ⊆ D (checked internally after every step),
// wherever the run stopped.
BuilderState build_sumset_inside(const FiniteIntegerSet& d, size_t k_target);

// Difference representation inside a symmetric D: targets d_1, d_2, ... are
// D's elements in the order 0, 1, -1, 2, -2, ...; step k+1 takes the least
// positive x outside A_k ∪ (d_{k+1} + B_k) with x - B_k ⊆ D and
// x - d_{k+1} - A_k ⊆ D, then a_{k+1} = x, b_{k+1} = x - d_{k+1}. Invariants
// kept and checked at every step: A_k - B_k ⊆ D and a_i - b_i = d_i. b's may
// go negative; that is tracked in all_nonnegative, not forbidden.
BuilderState build_difference_representation(const SymmetricSet& d, size_t k_target);

}  // namespace sumset
