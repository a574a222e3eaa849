#include "sumset/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sumset {

namespace {
constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

uint64_t splitmix64(uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

int64_t bounded_draw(uint64_t word, int64_t lo, int64_t hi) {
    if (lo > hi) throw std::domain_error("bounded_draw needs lo <= hi");
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range == 0) {  // full 64-bit span
        return static_cast<int64_t>(word);
    }
    const uint64_t scaled = static_cast<uint64_t>(
        (static_cast<unsigned __int128>(word) * range) >> 64);
    return lo + static_cast<int64_t>(scaled);
}

uint64_t SeedStream::value_at(uint64_t index) const {
    return splitmix64(splitmix64(master) + index * kGolden);
}

GroundSequence GroundSequence::from_terms(std::string name,
                                          std::vector<int64_t> terms) {
    const int64_t through = terms.empty() ? 0 : terms.back();
    return from_terms(std::move(name), std::move(terms), through);
}

GroundSequence GroundSequence::from_terms(std::string name,
                                          std::vector<int64_t> terms,
                                          int64_t materialized_through) {
    if (terms.empty()) throw std::domain_error("ground sequence needs terms");
    if (terms.front() < 1) {
        throw std::domain_error("ground terms must be positive");
    }
    for (size_t i = 1; i < terms.size(); ++i) {
        if (terms[i] <= terms[i - 1]) {
            throw std::domain_error("ground terms must be strictly increasing");
        }
    }
    if (materialized_through < terms.back()) {
        throw std::domain_error("materialization bound falls before the last term");
    }
    GroundSequence g;
    g.name_ = std::move(name);
    g.terms_ = std::move(terms);
    g.materialized_ = materialized_through;
    return g;
}

int64_t GroundSequence::term(size_t n) const {
    if (n == 0) return 0;  // s_0 convention
    if (n > terms_.size()) {
        throw std::domain_error("ground term index " + std::to_string(n) +
                                " not materialized");
    }
    return terms_[n - 1];
}

int64_t GroundSequence::count_leq(int64_t x) const {
    if (x <= 0) return 0;
    if (x > materialized_) {
        throw std::domain_error("counting query at " + std::to_string(x) +
                                " exceeds the materialized bound " +
                                std::to_string(materialized_));
    }
    auto it = std::upper_bound(terms_.begin(), terms_.end(), x);
    return static_cast<int64_t>(it - terms_.begin());
}

GroundSequence sieve_primes(int64_t limit) {
    if (limit < 2) throw std::domain_error("prime sieve needs limit >= 2");
    std::vector<char> composite(static_cast<size_t>(limit) + 1, 0);
    for (int64_t i = 2; i * i <= limit; ++i) {
        if (composite[i]) continue;
        for (int64_t j = i * i; j <= limit; j += i) composite[j] = 1;
    }
    std::vector<int64_t> terms;
    for (int64_t n = 2; n <= limit; ++n) {
        if (!composite[n]) terms.push_back(n);
    }
    return GroundSequence::from_terms("primes", std::move(terms), limit);
}

GroundSequence sieve_two_squares(int64_t limit) {
    if (limit < 1) throw std::domain_error("two-squares sieve needs limit >= 1");
    std::vector<char> hit(static_cast<size_t>(limit) + 1, 0);
    for (int64_t a = 0; a * a <= limit; ++a) {
        const int64_t a2 = a * a;
        for (int64_t b = a; a2 + b * b <= limit; ++b) {
            hit[a2 + b * b] = 1;
        }
    }
    std::vector<int64_t> terms;
    for (int64_t n = 1; n <= limit; ++n) {
        if (hit[n]) terms.push_back(n);
    }
    return GroundSequence::from_terms("two_squares", std::move(terms), limit);
}

GroundSequence sieve_two_squares_by_valuation(int64_t limit) {
    if (limit < 1) throw std::domain_error("two-squares sieve needs limit >= 1");
    // Smallest prime factor table, then check that every prime = 3 mod 4
    // divides to an even power.
    std::vector<int32_t> spf(static_cast<size_t>(limit) + 1, 0);
    for (int64_t i = 2; i <= limit; ++i) {
        if (spf[i]) continue;
        for (int64_t j = i; j <= limit; j += i) {
            if (!spf[j]) spf[j] = static_cast<int32_t>(i);
        }
    }
    std::vector<int64_t> terms;
    for (int64_t n = 1; n <= limit; ++n) {
        int64_t v = n;
        bool ok = true;
        while (v > 1) {
            const int64_t p = spf[v];
            int e = 0;
            while (v % p == 0) {
                v /= p;
                ++e;
            }
            if (p % 4 == 3 && (e & 1)) {
                ok = false;
                break;
            }
        }
        if (ok) terms.push_back(n);
    }
    return GroundSequence::from_terms("two_squares", std::move(terms), limit);
}

GroundSequence load_ground(const std::string& name, int64_t limit) {
    if (name == "primes") return sieve_primes(limit);
    if (name == "two_squares") return sieve_two_squares(limit);
    if (name.rfind("file:", 0) == 0) {
        const FiniteIntegerSet s = read_set_file(name.substr(5));
        std::vector<int64_t> terms = s.elements();
        if (terms.empty()) throw std::domain_error("ground sequence needs terms");
        // The file vouches for completeness only through its last listed
        // term; a positive limit truncates and can only lower that bound.
        const int64_t through =
            limit > 0 ? std::min(limit, terms.back()) : terms.back();
        if (limit > 0) {
            terms.erase(std::upper_bound(terms.begin(), terms.end(), limit),
                        terms.end());
        }
        return GroundSequence::from_terms(name, std::move(terms), through);
    }
    throw std::domain_error("unknown ground '" + name +
                            "' (want primes, two_squares, or file:PATH)");
}

FiniteIntegerSet bernoulli_set(int64_t lo, int64_t hi, SeedStream seeds) {
    if (lo > hi) throw std::domain_error("bernoulli_set needs lo <= hi");
    std::vector<int64_t> elems;
    for (int64_t v = lo; v <= hi; ++v) {
        if (seeds.value_at(static_cast<uint64_t>(v)) & 1) elems.push_back(v);
    }
    return FiniteIntegerSet::from_elements(std::move(elems), lo, hi);
}

SymmetricSet symmetric_bernoulli_set(int64_t n, SeedStream seeds) {
    if (n < 0) throw std::domain_error("symmetric_bernoulli_set needs n >= 0");
    std::vector<int64_t> elems;
    for (int64_t v = 0; v <= n; ++v) {
        if (seeds.value_at(static_cast<uint64_t>(v)) & 1) {
            elems.push_back(v);
            if (v) elems.push_back(-v);
        }
    }
    return SymmetricSet::from_base(
        FiniteIntegerSet::from_elements(std::move(elems), -n, n));
}

DeltaSequence DeltaSequence::from_values(std::vector<double> values) {
    for (double v : values) {
        if (!(v >= 1.0)) {
            throw std::domain_error("dispersion floors must be >= 1");
        }
    }
    DeltaSequence d;
    d.values_ = std::move(values);
    return d;
}

double DeltaSequence::delta(size_t n) const {
    if (n < 1 || n > values_.size()) {
        throw std::domain_error("dispersion floor index " + std::to_string(n) +
                                " not materialized");
    }
    return values_[n - 1];
}

double unclamped_default_delta(size_t n, double iota, double scale) {
    const double nn = static_cast<double>(n < 3 ? 3 : n);
    const double ll = std::log(std::log(nn));
    return scale * std::pow(ll > 1.0 ? ll : 1.0, iota);
}

DeltaSequence default_delta(const GroundSequence& ground, double iota, double scale) {
    if (!(iota > 0.0)) throw std::domain_error("default_delta needs iota > 0");
    if (!(scale > 0.0)) throw std::domain_error("default_delta needs scale > 0");
    if (ground.count() < 2) {
        throw std::domain_error("default_delta needs at least two ground terms");
    }
    std::vector<double> values;
    values.reserve(ground.count() - 1);
    for (size_t n = 1; n + 1 <= ground.count(); ++n) {
        const double halfspan =
            static_cast<double>(ground.term(n + 1) - ground.term(n - 1)) / 2.0;
        const double m = static_cast<double>(epsilon_support(ground, n).size());
        const double ceiling = halfspan < m ? halfspan : m;
        double v = unclamped_default_delta(n, iota, scale);
        if (v < 1.0) v = 1.0;
        if (v > ceiling) v = ceiling;
        values.push_back(v);
    }
    return DeltaSequence::from_values(std::move(values));
}

DeltaSequence constant_delta(const GroundSequence& ground, double value) {
    if (!(value >= 1.0)) throw std::domain_error("constant_delta needs value >= 1");
    if (ground.count() < 2) {
        throw std::domain_error("constant_delta needs at least two ground terms");
    }
    return DeltaSequence::from_values(
        std::vector<double>(ground.count() - 1, value));
}

EpsilonSupport epsilon_support(const GroundSequence& ground, size_t n) {
    if (n < 1) throw std::domain_error("epsilon_support needs n >= 1");
    if (n + 1 > ground.count()) {
        throw std::domain_error("epsilon_support needs s_{n+1} materialized");
    }
    const int64_t g_minus = ground.term(n) - ground.term(n - 1);
    const int64_t g_plus = ground.term(n + 1) - ground.term(n);
    // Integers k with -g_minus/2 < k <= g_plus/2, halves taken exactly.
    EpsilonSupport s;
    s.lo = 1 - (g_minus + 1) / 2;
    s.hi = g_plus / 2;
    return s;
}

PerturbationModel make_model(GroundSequence ground, double iota, double scale,
                             EpsilonKind epsilon) {
    DeltaSequence delta = default_delta(ground, iota, scale);
    return PerturbationModel{std::move(ground), std::move(delta), epsilon};
}

int64_t sample_epsilon(const PerturbationModel& model, size_t n, SeedStream seeds) {
    const EpsilonSupport s = epsilon_support(model.ground, n);
    if (model.epsilon == EpsilonKind::zero) return 0;
    return bounded_draw(seeds.value_at(static_cast<uint64_t>(n)), s.lo, s.hi);
}

FiniteIntegerSet perturbed_set(const PerturbationModel& model, size_t count,
                               SeedStream seeds) {
    if (count < 1) throw std::domain_error("perturbed_set needs count >= 1");
    if (count + 1 > model.ground.count()) {
        throw std::domain_error("perturbed_set needs the ground materialized "
                                "through index count + 1");
    }
    std::vector<int64_t> c;
    c.reserve(count);
    int64_t prev = 0;
    for (size_t n = 1; n <= count; ++n) {
        const int64_t v = model.ground.term(n) + sample_epsilon(model, n, seeds);
        if (n > 1 && v <= prev) {
            // The support bounds make this impossible; a trip here is a bug.
            throw std::logic_error("perturbed sequence failed to increase");
        }
        prev = v;
        c.push_back(v);
    }
    const int64_t lo = c.front();
    const int64_t hi = c.back();
    return FiniteIntegerSet::from_elements(std::move(c), lo, hi);
}

}  // namespace sumset
