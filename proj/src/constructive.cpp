#include "sumset/constructive.hpp"

#include <algorithm>
#include <stdexcept>

namespace sumset {

namespace {

bool member(const std::vector<int64_t>& v, int64_t x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

// Least x >= 0 outside `taken` with x + other ⊆ D, under the builder policy.
// An empty `other` makes the containment vacuous; the window end still caps
// the scan so exhaustion stays detectable.
std::optional<int64_t> least_extension(const FiniteIntegerSet& d,
                                       const std::vector<int64_t>& taken,
                                       const std::vector<int64_t>& other) {
    const int64_t other_max =
        other.empty() ? 0 : *std::max_element(other.begin(), other.end());
    for (int64_t x = 0; x + other_max <= d.window_hi(); ++x) {
        if (member(taken, x)) continue;
        bool ok = true;
        for (int64_t o : other) {
            if (!d.contains(x + o)) {
                ok = false;
                break;
            }
        }
        if (ok) return x;
    }
    return std::nullopt;
}

void check_sumset_invariant(const FiniteIntegerSet& d,
                            const std::vector<int64_t>& a,
                            const std::vector<int64_t>& b) {
    for (int64_t av : a) {
        for (int64_t bv : b) {
            if (!d.contains(av + bv)) {
                throw std::logic_error("sumset builder left its container");
            }
        }
    }
}

void check_difference_invariant(const SymmetricSet& d,
                                const std::vector<int64_t>& a,
                                const std::vector<int64_t>& b,
                                const std::vector<int64_t>& targets) {
    for (int64_t av : a) {
        for (int64_t bv : b) {
            if (!d.contains(av - bv)) {
                throw std::logic_error("difference builder left its container");
            }
        }
    }
    for (size_t i = 0; i < targets.size(); ++i) {
        if (a[i] - b[i] != targets[i]) {
            throw std::logic_error("difference builder lost a prescribed gap");
        }
    }
}

}  // namespace

std::optional<int64_t> find_translate(const FiniteIntegerSet& d,
                                      const FiniteIntegerSet& h, int64_t from) {
    if (h.empty()) throw std::domain_error("find_translate needs a nonempty pattern");
    const int64_t h_max = h.max();
    for (int64_t n = from; n + h_max <= d.window_hi(); ++n) {
        bool ok = true;
        for (int64_t hv : h.elements()) {
            if (!d.contains(n + hv)) {
                ok = false;
                break;
            }
        }
        if (ok) return n;
    }
    return std::nullopt;
}

std::vector<int64_t> independent_translate_indices(const FiniteIntegerSet& h,
                                                   size_t count) {
    if (h.empty()) {
        throw std::domain_error("translate indices need a nonempty pattern");
    }
    const int64_t stride = h.max() - h.min() + 1;
    std::vector<int64_t> out;
    out.reserve(count);
    for (size_t j = 1; j <= count; ++j) {
        out.push_back(static_cast<int64_t>(j) * stride);
    }
    return out;
}

BuilderState build_sumset_inside(const FiniteIntegerSet& d, size_t k_target) {
    if (d.empty()) throw std::domain_error("sumset builder needs a nonempty set");
    BuilderState st;
    while (st.achieved < k_target) {
        const auto x = least_extension(d, st.a, st.b);
        if (!x) {
            st.exhausted = true;
            break;
        }
        st.a.push_back(*x);
        check_sumset_invariant(d, st.a, st.b);
        const auto y = least_extension(d, st.b, st.a);
        if (!y) {
            st.exhausted = true;
            break;
        }
        st.b.push_back(*y);
        check_sumset_invariant(d, st.a, st.b);
        st.achieved = std::min(st.a.size(), st.b.size());
    }
    for (int64_t v : st.a) st.all_nonnegative = st.all_nonnegative && v >= 0;
    for (int64_t v : st.b) st.all_nonnegative = st.all_nonnegative && v >= 0;
    return st;
}

BuilderState build_difference_representation(const SymmetricSet& d,
                                             size_t k_target) {
    if (d.base().empty()) {
        throw std::domain_error("difference builder needs a nonempty set");
    }
    const int64_t radius = d.radius();
    // Targets: D's elements in the order 0, 1, -1, 2, -2, ...
    std::vector<int64_t> order;
    if (d.contains(0)) order.push_back(0);
    for (int64_t v = 1; v <= radius; ++v) {
        if (d.contains(v)) {
            order.push_back(v);
            order.push_back(-v);
        }
    }

    BuilderState st;
    while (st.achieved < k_target) {
        if (st.achieved >= order.size()) {
            st.exhausted = true;  // every difference target already consumed
            break;
        }
        const int64_t dt = order[st.achieved];
        // Past the cap some x - b or x - dt - a must fall beyond the window.
        // With A and B still empty the constraints are vacuous and x = 1 works.
        int64_t cap = 1;
        if (!st.b.empty()) {
            cap = radius + *std::min_element(st.b.begin(), st.b.end());
            cap = std::min(cap, radius + dt +
                                    *std::min_element(st.a.begin(), st.a.end()));
        }
        std::optional<int64_t> chosen;
        for (int64_t x = 1; x <= cap; ++x) {
            if (member(st.a, x) || member(st.b, x - dt)) continue;
            bool ok = true;
            for (int64_t bv : st.b) {
                if (!d.contains(x - bv)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                for (int64_t av : st.a) {
                    if (!d.contains(x - dt - av)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                chosen = x;
                break;
            }
        }
        if (!chosen) {
            st.exhausted = true;
            break;
        }
        st.a.push_back(*chosen);
        st.b.push_back(*chosen - dt);
        st.d.push_back(dt);
        st.achieved += 1;
        check_difference_invariant(d, st.a, st.b, st.d);
        if (st.b.back() < 0) st.all_nonnegative = false;
    }
    return st;
}

}  // namespace sumset
