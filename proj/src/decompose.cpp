#include "sumset/decompose.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <stdexcept>
#include <utility>

namespace sumset {

namespace {

using detail::DenseBits;

// dst |= (src << shift); bits that would land at or past dst's size are
// dropped, which is exactly the windowed "sums past the cut are free" rule.
void or_shifted_trunc(DenseBits& dst, const DenseBits& src, int64_t shift) {
    auto& dw = dst.words();
    const auto& sw = src.words();
    const size_t q = static_cast<size_t>(shift >> 6);
    const int r = static_cast<int>(shift & 63);
    for (size_t w = 0; w < sw.size(); ++w) {
        const uint64_t v = sw[w];
        if (!v) continue;
        const size_t d = w + q;
        if (d < dw.size()) dw[d] |= v << r;
        if (r && d + 1 < dw.size()) dw[d + 1] |= v >> (64 - r);
    }
    const int tail = static_cast<int>(dst.size() & 63);
    if (tail && !dw.empty()) dw.back() &= (uint64_t(1) << tail) - 1;
}

// Bits b in [0, width) with target[a + b], where positions a + b past the
// target's size count as overflow_ok (true once sums past the cut are free).
DenseBits compat_mask(const DenseBits& target, int64_t a, int64_t width,
                      bool overflow_ok) {
    DenseBits out(width);
    auto& ow = out.words();
    const auto& tw = target.words();
    const size_t q = static_cast<size_t>(a >> 6);
    const int r = static_cast<int>(a & 63);
    for (size_t w = 0; w < ow.size(); ++w) {
        const size_t s = w + q;
        uint64_t v = 0;
        if (s < tw.size()) v = tw[s] >> r;
        if (r && s + 1 < tw.size()) v |= tw[s + 1] << (64 - r);
        ow[w] = v;
    }
    if (overflow_ok) {
        for (int64_t b = std::max<int64_t>(0, target.size() - a); b < width; ++b) {
            out.set(b);
        }
    }
    const int tail = static_cast<int>(width & 63);
    if (tail && !ow.empty()) ow.back() &= (uint64_t(1) << tail) - 1;
    return out;
}

void and_into(DenseBits& dst, const DenseBits& src) {
    auto& dw = dst.words();
    const auto& sw = src.words();
    for (size_t w = 0; w < dw.size(); ++w) dw[w] &= sw[w];
}

// Smallest position set in want but not in have, or -1.
int64_t first_missing(const DenseBits& want, const DenseBits& have) {
    const auto& ww = want.words();
    const auto& hw = have.words();
    for (size_t w = 0; w < ww.size(); ++w) {
        const uint64_t miss = ww[w] & ~(w < hw.size() ? hw[w] : 0);
        if (miss) return static_cast<int64_t>(w * 64) + std::countr_zero(miss);
    }
    return -1;
}

enum class Step { sat, none, budget };

// Shared cover search: grow A over the target's elements in increasing
// order, keep B as the maximal compatible set, and require A + B to cover
// the whole target mask. The exact and windowed entry points differ only in
// the parameters below.
struct Engine {
    const DenseBits& target;              // normalized target over [0, wu)
    const std::vector<int64_t>& elems;    // its elements; elems[0] == 0
    int64_t wu = 0;                       // sums below wu are constrained
    int64_t b_width = 0;                  // B candidates live in [0, b_width)
    bool overflow_ok = false;             // sums at or past wu are free
    int64_t a_pad = 0;  // count of free A slots past the cut (windowed)
    int64_t b_pad = 0;
    int64_t require_a = -1;  // candidate that must join A (no skip branch)
    int64_t require_b = -1;  // B slot that must stay available
    bool enumerate_all = false;

    const SearchConfig& cfg;
    std::chrono::steady_clock::time_point deadline_start;
    uint64_t& nodes;

    std::vector<int64_t> a{0};
    std::vector<DenseBits> bstack;
    std::vector<uint64_t> scratch;      // per-candidate B slots, reused
    std::vector<int64_t> sat_a, sat_b;  // engine coordinates
    std::vector<std::pair<std::vector<int64_t>, std::vector<int64_t>>> found;

    Engine(const DenseBits& t, const std::vector<int64_t>& e,
           const SearchConfig& c,
           std::chrono::steady_clock::time_point start, uint64_t& node_counter)
        : target(t), elems(e), cfg(c), deadline_start(start),
          nodes(node_counter) {}

    bool cards_ok(size_t a_size, int64_t b_size) const {
        return (a_size >= 2 || a_pad >= 1) && (b_size >= 2 || b_pad >= 1);
    }

    // Lookahead: every sum still missing has to be writable as u + b with u a
    // remaining candidate that could actually join A (joining must leave B
    // with two slots, or one when a pad slot fills in) and b a B slot that is
    // compatible with u. B only shrinks and A only gains elements past u, so
    // a miss here is final.
    bool future_coverable(size_t i, const DenseBits& covered) {
        DenseBits future(wu);
        auto& fw = future.words();
        const auto& bw = bstack.back().words();
        const auto& tw = target.words();
        const int64_t need = b_pad >= 1 ? 1 : 2;
        scratch.assign(bw.size(), 0);
        for (size_t j = i; j < elems.size(); ++j) {
            const int64_t u = elems[j];
            const size_t q = static_cast<size_t>(u >> 6);
            const int r = static_cast<int>(u & 63);
            const int64_t cutoff =
                overflow_ok ? std::max<int64_t>(0, target.size() - u) : b_width;
            int64_t cnt = 0;
            for (size_t w = 0; w < bw.size(); ++w) {
                const size_t s = w + q;
                uint64_t comp = 0;
                if (s < tw.size()) comp = tw[s] >> r;
                if (r && s + 1 < tw.size()) comp |= tw[s + 1] << (64 - r);
                const int64_t base = static_cast<int64_t>(w) * 64;
                if (base >= cutoff) {
                    comp = ~uint64_t(0);
                } else if (base + 64 > cutoff) {
                    comp |= ~uint64_t(0) << (cutoff - base);
                }
                scratch[w] = bw[w] & comp;
                cnt += std::popcount(scratch[w]);
            }
            if (cnt < need) continue;
            for (size_t w = 0; w < scratch.size(); ++w) {
                const uint64_t v = scratch[w];
                if (!v) continue;
                const size_t d = w + q;
                if (d < fw.size()) fw[d] |= v << r;
                if (r && d + 1 < fw.size()) fw[d + 1] |= v >> (64 - r);
            }
        }
        const auto& cw = covered.words();
        for (size_t w = 0; w < tw.size(); ++w) {
            if (tw[w] & ~cw[w] & ~fw[w]) return false;
        }
        return true;
    }

    Step run() {
        bstack.push_back(compat_mask(target, 0, b_width, overflow_ok));
        return step(1);
    }

    Step step(size_t i) {
        if (nodes >= cfg.node_budget) return Step::budget;
        ++nodes;
        if (cfg.time_budget.count() > 0 && (nodes & 1023) == 0 &&
            std::chrono::steady_clock::now() - deadline_start >= cfg.time_budget) {
            return Step::budget;
        }
        const DenseBits& bmax = bstack.back();
        if (require_b >= 0 && !bmax.test(require_b)) return Step::none;
        const int64_t b_count = bmax.count();

        DenseBits covered(wu);
        for (int64_t av : a) or_shifted_trunc(covered, bmax, av);
        const int64_t missing = first_missing(target, covered);

        if (missing < 0 && !enumerate_all && cards_ok(a.size(), b_count)) {
            sat_a = a;
            sat_b = bmax.collect(0);
            // The first free slot past the cut fills out a short summand.
            if (sat_a.size() < 2) sat_a.push_back(wu);
            if (sat_b.size() < 2) sat_b.push_back(wu);
            return Step::sat;
        }
        // A missing sum below every remaining candidate is unreachable: B
        // only shrinks from here and new a's exceed it.
        if (missing >= 0 && (i == elems.size() || missing < elems[i])) {
            return Step::none;
        }
        if (i == elems.size()) {
            if (enumerate_all && missing < 0 && a.size() >= 2 && b_count >= 2) {
                found.emplace_back(a, bmax.collect(0));
            }
            return Step::none;
        }
        if (missing >= 0 && !future_coverable(i, covered)) {
            return Step::none;
        }

        const int64_t u = elems[i];
        const bool forced = missing == u || u == require_a;

        DenseBits nb = bstack.back();
        and_into(nb, compat_mask(target, u, b_width, overflow_ok));
        const int64_t nb_count = nb.count();
        const bool can_include = nb_count >= 2 || b_pad >= 1;
        // When u keeps every B slot alive, taking it costs nothing and only
        // covers more, so anything reachable without u is reachable with it.
        const bool dominated =
            can_include && !enumerate_all && nb_count == b_count;
        if (can_include) {
            a.push_back(u);
            bstack.push_back(std::move(nb));
            const Step r = step(i + 1);
            bstack.pop_back();
            a.pop_back();
            if (r != Step::none) return r;
        }
        if (!forced && !dominated) {
            const Step r = step(i + 1);
            if (r != Step::none) return r;
        }
        return Step::none;
    }
};

FiniteIntegerSet offset_set(const std::vector<int64_t>& elems, int64_t offset,
                            std::optional<std::pair<int64_t, int64_t>> window) {
    std::vector<int64_t> out;
    out.reserve(elems.size());
    for (int64_t v : elems) out.push_back(v + offset);
    if (window) {
        return FiniteIntegerSet::from_elements(std::move(out), window->first,
                                               window->second);
    }
    return FiniteIntegerSet::from_elements(std::move(out));
}

void require_verified(const FiniteIntegerSet& target,
                      const DecompositionWitness& w) {
    const VerifyOutcome v = verify_witness(target, w);
    if (!v.ok) {
        throw std::logic_error("solver produced a bad witness: " + v.reason);
    }
}

}  // namespace

DecomposeResult brute_force_decompose(const FiniteIntegerSet& target) {
    DecomposeResult res;
    if (target.empty()) return res;
    const int64_t lo = target.min();
    const int64_t width = target.max() - lo + 1;
    if (width > 22) {
        throw std::domain_error("brute_force_decompose handles spans up to 22");
    }
    if (target.size() <= 2) return res;  // |A + B| >= |A| + |B| - 1 >= 3
    uint64_t u = 0;
    for (int64_t t : target.elements()) u |= uint64_t(1) << (t - lo);

    const uint64_t limit = uint64_t(1) << width;
    for (uint64_t amask = 1; amask < limit; amask += 2) {
        if (std::popcount(amask) < 2 || (amask & ~u)) continue;
        uint64_t bmax = ~uint64_t(0);
        uint64_t m = amask;
        while (m) {
            bmax &= u >> std::countr_zero(m);
            m &= m - 1;
        }
        if (std::popcount(bmax) < 2) continue;
        uint64_t cov = 0;
        m = amask;
        while (m) {
            cov |= bmax << std::countr_zero(m);
            m &= m - 1;
        }
        if (cov != u) continue;
        std::vector<int64_t> ae, be;
        for (int64_t i = 0; i < width; ++i) {
            if ((amask >> i) & 1) ae.push_back(lo + i);
            if ((bmax >> i) & 1) be.push_back(i);
        }
        res.status = DecomposeStatus::sat;
        res.witness = DecompositionWitness{
            FiniteIntegerSet::from_elements(std::move(ae)),
            FiniteIntegerSet::from_elements(std::move(be)), std::nullopt};
        require_verified(target, *res.witness);
        return res;
    }
    return res;
}

DecomposeResult exact_decompose(const FiniteIntegerSet& target,
                                const SearchConfig& config) {
    if (config.node_budget < 1) {
        throw std::domain_error("node budget must be positive");
    }
    DecomposeResult res;
    if (target.size() <= 2) return res;

    const int64_t lo = target.min();
    const int64_t width = target.max() - lo + 1;
    DenseBits bits(width);
    std::vector<int64_t> elems;
    elems.reserve(target.size());
    for (int64_t t : target.elements()) {
        bits.set(t - lo);
        elems.push_back(t - lo);
    }

    uint64_t nodes = 0;
    const auto start = std::chrono::steady_clock::now();

    if (config.enumerate_all) {
        Engine eng(bits, elems, config, start, nodes);
        eng.wu = width;
        eng.b_width = width;
        eng.enumerate_all = true;
        const Step r = eng.run();
        res.nodes = nodes;
        for (auto& [ae, be] : eng.found) {
            res.all.push_back(DecompositionWitness{
                offset_set(ae, lo, std::nullopt),
                offset_set(be, 0, std::nullopt), std::nullopt});
            require_verified(target, res.all.back());
        }
        if (r == Step::budget) {
            res.status = DecomposeStatus::budget_exhausted;
        } else {
            res.status = res.all.empty() ? DecomposeStatus::unsat
                                         : DecomposeStatus::sat;
        }
        if (!res.all.empty()) res.witness = res.all.front();
        return res;
    }

    // Split on the top element of A. The two window extremes pin each other:
    // max T = max A + max B, so a phase that fixes max A also knows max B and
    // can insist on both from the start. Witnesses whose first summand is the
    // wider one appear mirrored in an earlier phase, hence the early break.
    for (size_t pi = 1; pi < elems.size(); ++pi) {
        const int64_t amax = elems[pi];
        if (2 * amax > width - 1) break;
        const std::vector<int64_t> cand(elems.begin(), elems.begin() + pi + 1);
        Engine eng(bits, cand, config, start, nodes);
        eng.wu = width;
        eng.b_width = width - amax;
        eng.require_a = amax;
        eng.require_b = width - 1 - amax;
        const Step r = eng.run();
        if (r == Step::budget) {
            res.status = DecomposeStatus::budget_exhausted;
            res.nodes = nodes;
            return res;
        }
        if (r == Step::sat) {
            // Publish with the smaller second element on the left. The
            // search normalized min A to lo and min B to 0; on a swap the lo
            // offset moves to the other summand so A + B still equals the
            // target.
            const bool swap = eng.sat_a[1] + lo > eng.sat_b[1];
            res.status = DecomposeStatus::sat;
            res.witness =
                swap ? DecompositionWitness{
                           offset_set(eng.sat_b, 0, std::nullopt),
                           offset_set(eng.sat_a, lo, std::nullopt),
                           std::nullopt}
                     : DecompositionWitness{
                           offset_set(eng.sat_a, lo, std::nullopt),
                           offset_set(eng.sat_b, 0, std::nullopt),
                           std::nullopt};
            require_verified(target, *res.witness);
            res.nodes = nodes;
            return res;
        }
    }
    res.nodes = nodes;
    return res;
}

FiniteIntegerSet max_compatible(const FiniteIntegerSet& a_partial,
                                const FiniteIntegerSet& target) {
    if (a_partial.empty() || !a_partial.contains(0)) {
        throw std::domain_error("max_compatible needs 0 in the partial summand");
    }
    std::vector<int64_t> out;
    for (int64_t b : target.elements()) {
        bool ok = true;
        for (int64_t a : a_partial.elements()) {
            if (!target.contains(a + b)) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(b);
    }
    return FiniteIntegerSet::from_elements(std::move(out), target.window_lo(),
                                           target.window_hi());
}

DecomposeResult window_decompose(const FiniteIntegerSet& c_window, int64_t m,
                                 const SearchConfig& config) {
    if (config.node_budget < 1) {
        throw std::domain_error("node budget must be positive");
    }
    if (config.enumerate_all) {
        throw std::domain_error(
            "enumeration is supported for exact decomposition only");
    }
    if (c_window.window_lo() != 0) {
        throw std::domain_error("windowed target must start its window at 0");
    }
    const int64_t n = c_window.window_hi();
    if (m < 2 || m > n / 4) {
        throw std::domain_error("windowed summand bound must be in [2, N/4]");
    }

    const int64_t cut = n - m + 1;  // sums in [0, cut) are constrained
    std::vector<int64_t> kept;
    for (int64_t t : c_window.elements()) {
        if (t < cut) kept.push_back(t);
    }

    DecomposeResult res;
    if (kept.empty()) {
        // Every sum must land past the cut. The two smallest elements of
        // each summand already sum below N - M when M = 2, so only wider
        // bounds admit the corner witness pushed against both domain ends.
        if (m == 2) return res;
        res.status = DecomposeStatus::sat;
        res.witness = DecompositionWitness{
            FiniteIntegerSet::from_elements({n - m - 1, n - m}, 0, n - m),
            FiniteIntegerSet::from_elements({m - 1, m}, 0, m), m};
        require_verified(c_window, *res.witness);
        return res;
    }

    const int64_t t0 = kept.front();
    const int64_t wu = cut - t0;
    DenseBits bits(wu);
    std::vector<int64_t> elems;
    elems.reserve(kept.size());
    for (int64_t t : kept) {
        bits.set(t - t0);
        elems.push_back(t - t0);
    }

    uint64_t nodes = 0;
    const auto start = std::chrono::steady_clock::now();
    // minA + minB must equal the least constrained sum; try every split.
    for (int64_t b0 = 0; b0 <= std::min(m, t0); ++b0) {
        const int64_t a0 = t0 - b0;
        Engine eng(bits, elems, config, start, nodes);
        eng.wu = wu;
        eng.b_width = std::min(m - b0, wu - 1) + 1;
        eng.overflow_ok = true;
        eng.a_pad = b0;                                  // = (n-m-a0) - wu + 1
        eng.b_pad = std::max<int64_t>(0, (m - b0) - wu + 1);
        const Step r = eng.run();
        if (r == Step::budget) {
            res.status = DecomposeStatus::budget_exhausted;
            res.nodes = nodes;
            return res;
        }
        if (r == Step::sat) {
            res.status = DecomposeStatus::sat;
            res.witness = DecompositionWitness{
                offset_set(eng.sat_a, a0, std::pair<int64_t, int64_t>(0, n - m)),
                offset_set(eng.sat_b, b0, std::pair<int64_t, int64_t>(0, m)), m};
            res.nodes = nodes;
            require_verified(c_window, *res.witness);
            return res;
        }
    }
    res.nodes = nodes;
    return res;
}

VerifyOutcome verify_witness(const FiniteIntegerSet& target,
                             const DecompositionWitness& witness) {
    if (witness.a.size() < 2 || witness.b.size() < 2) {
        return {false, "summand cardinality below two"};
    }
    if (!witness.windowed_m) {
        if (sumset(witness.a, witness.b).elements() != target.elements()) {
            return {false, "sumset differs from the target"};
        }
        return {true, ""};
    }
    const int64_t m = *witness.windowed_m;
    const int64_t n = target.window_hi();
    if (target.window_lo() != 0) {
        return {false, "windowed target must start its window at 0"};
    }
    if (m < 2 || m > n / 4) {
        return {false, "window parameter out of range"};
    }
    if (witness.a.min() < 0 || witness.a.max() > n - m) {
        return {false, "first summand leaves [0, N-M]"};
    }
    if (witness.b.min() < 0 || witness.b.max() > m) {
        return {false, "second summand leaves [0, M]"};
    }
    const auto got = restrict_to(sumset(witness.a, witness.b), 0, n - m);
    const auto want = restrict_to(target, 0, n - m);
    if (got.elements() != want.elements()) {
        return {false, "sums below the cut differ from the target"};
    }
    return {true, ""};
}

std::vector<int64_t> min_adjacent_gap_profile(const FiniteIntegerSet& d,
                                              size_t k) {
    if (k < 1) throw std::domain_error("gap profile needs K >= 1");
    if (d.size() < k + 2) {
        throw std::domain_error("gap profile needs at least K + 2 elements");
    }
    const auto& e = d.elements();
    std::vector<int64_t> out;
    out.reserve(k);
    for (size_t i = 1; i + 1 < e.size() && out.size() < k; ++i) {
        out.push_back(std::min(e[i + 1] - e[i], e[i] - e[i - 1]));
    }
    return out;
}

}  // namespace sumset
