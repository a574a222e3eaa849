#pragma once
// Ground sequences (primes, sums of two squares, user files), dispersion
// floors, and the random perturbation model c_n = s_n + eps_n. All randomness
// flows through SeedStream, a counter-based splitmix64 scheme: the draw for
// (master, index) is a pure function of both, so results are identical no
// matter what order indices are evaluated in, serial or parallel.

#include <cstdint>
#include <string>
#include <vector>

#include "sumset/intset.hpp"

namespace sumset {

// splitmix64 finalizer (Steele, Lea, Flood; public domain reference constants).
uint64_t splitmix64(uint64_t z);

// Draw in [lo, hi] from one 64-bit word via 128-bit multiply-shift. Avoids
// std::uniform_int_distribution, whose mapping is implementation-defined and
// would break byte-identical runs across toolchains.
int64_t bounded_draw(uint64_t word, int64_t lo, int64_t hi);

struct SeedStream {
    uint64_t master = 0;

    // value_at(i) = splitmix64(splitmix64(master) + i * 0x9E3779B97F4A7C15),
    // i.e. the splitmix64 stream seeded with splitmix64(master), jumped to
    // position i. This is the published mixing function ("splitmix64-v1").
    uint64_t value_at(uint64_t index) const;
    SeedStream substream(uint64_t index) const { return SeedStream{value_at(index)}; }
};

// Strictly increasing positive terms s_1 < s_2 < ...; s_0 == 0 by convention.
// The terms are complete through materialized_through(): a sieve vouches for
// its whole limit, a bare term list only through its last entry.
class GroundSequence {
public:
    GroundSequence() = default;
    static GroundSequence from_terms(std::string name, std::vector<int64_t> terms);
    static GroundSequence from_terms(std::string name, std::vector<int64_t> terms,
                                     int64_t materialized_through);

    const std::string& name() const { return name_; }
    size_t count() const { return terms_.size(); }
    int64_t materialized_through() const { return materialized_; }
    // 1-based; term(0) == 0. n past the materialized range is a domain error.
    int64_t term(size_t n) const;
    // S(x) = #{n : s_n <= x}. x past materialized_through() would silently
    // undercount, so it is a domain error.
    int64_t count_leq(int64_t x) const;
    const std::vector<int64_t>& terms() const { return terms_; }

private:
    std::string name_;
    std::vector<int64_t> terms_;
    int64_t materialized_ = 0;
};

// Primes <= limit (Eratosthenes). limit < 2 is a domain error.
GroundSequence sieve_primes(int64_t limit);

// n in [1, limit] representable as a^2 + b^2 (a, b >= 0). Starts at 1; zero
// is never a term. Two independent algorithms with identical contracts:
// direct enumeration of a^2 + b^2, and the multiplicative criterion (every
// prime factor p = 3 mod 4 occurs to an even power). They must agree; tests
// hold them against each other.
GroundSequence sieve_two_squares(int64_t limit);
GroundSequence sieve_two_squares_by_valuation(int64_t limit);

// Resolves a ground spec string: "primes", "two_squares", or "file:PATH"
// (a set file of positive ascending terms; limit > 0 truncates, 0 keeps all).
GroundSequence load_ground(const std::string& name, int64_t limit);

// Each integer in [lo, hi] independently present with probability 1/2.
// Membership of v depends only on (master, v), so overlapping or disjoint
// windows drawn from the same master agree on shared integers.
FiniteIntegerSet bernoulli_set(int64_t lo, int64_t hi, SeedStream seeds);

// Bernoulli on [0, n], mirrored to [-n, 0].
SymmetricSet symmetric_bernoulli_set(int64_t n, SeedStream seeds);

// Dispersion floors delta_n >= 1, 1-based, materialized for every n whose
// neighbor s_{n+1} is available. eta_n = 1/delta_n caps the atom probability
// of the perturbation at index n.
class DeltaSequence {
public:
    DeltaSequence() = default;
    static DeltaSequence from_values(std::vector<double> values);  // values[i] is delta_{i+1}

    size_t count() const { return values_.size(); }
    double delta(size_t n) const;  // 1-based; out of range is a domain error
    double eta(size_t n) const { return 1.0 / delta(n); }

private:
    std::vector<double> values_;
};

// scale * max(1, log log max(n,3))^iota before clamping.
double unclamped_default_delta(size_t n, double iota, double scale);

// delta_n = clamp(unclamped, 1, min((s_{n+1}-s_{n-1})/2, m_n)) where m_n is
// the size of the support interval below. The first ceiling term keeps the
// floors inside the adjacent half-gap span; the second keeps 1/m_n <= 1/delta_n
// exact for the uniform perturbation (the half-gap span alone overshoots the
// support by 1/2 when s_n-s_{n-1} is even and s_{n+1}-s_n is odd).
DeltaSequence default_delta(const GroundSequence& ground, double iota, double scale);

DeltaSequence constant_delta(const GroundSequence& ground, double value);

enum class EpsilonKind { uniform, zero };

// Integer support of eps_n: -(s_n - s_{n-1})/2 < k <= (s_{n+1} - s_n)/2,
// endpoints taken with rational halves. Never empty; always contains 0.
struct EpsilonSupport {
    int64_t lo = 0;
    int64_t hi = 0;
    int64_t size() const { return hi - lo + 1; }
};
EpsilonSupport epsilon_support(const GroundSequence& ground, size_t n);

struct PerturbationModel {
    GroundSequence ground;
    DeltaSequence delta;
    EpsilonKind epsilon = EpsilonKind::uniform;
};

PerturbationModel make_model(GroundSequence ground, double iota, double scale,
                             EpsilonKind epsilon);

// One draw of eps_n. The uniform kind spends exactly one stream word at
// index n; the zero kind is the degenerate distribution at 0.
int64_t sample_epsilon(const PerturbationModel& model, size_t n, SeedStream seeds);

// {c_1, ..., c_count} with c_n = s_n + eps_n, windowed [c_1, c_count].
// Strict increase is guaranteed by the support bounds and asserted anyway.
FiniteIntegerSet perturbed_set(const PerturbationModel& model, size_t count,
                               SeedStream seeds);

}  // namespace sumset
