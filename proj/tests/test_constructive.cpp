#include <doctest.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sumset/constructive.hpp"
#include "sumset/generators.hpp"
#include "sumset/intset.hpp"

using namespace sumset;

namespace {

FiniteIntegerSet evens_up_to(int64_t n) {
    std::vector<int64_t> e;
    for (int64_t v = 0; v <= n; v += 2) e.push_back(v);
    return FiniteIntegerSet::from_elements(std::move(e), 0, n);
}

FiniteIntegerSet full_window(int64_t lo, int64_t hi) {
    std::vector<int64_t> e;
    for (int64_t v = lo; v <= hi; ++v) e.push_back(v);
    return FiniteIntegerSet::from_elements(std::move(e), lo, hi);
}

// Scan reference for find_translate.
std::optional<int64_t> find_translate_scan(const FiniteIntegerSet& d,
                                           const FiniteIntegerSet& h, int64_t from) {
    const int64_t top = h.max();
    for (int64_t n = from; n + top <= d.window_hi(); ++n) {
        bool all = true;
        for (int64_t v : h.elements()) {
            if (!d.contains(n + v)) {
                all = false;
                break;
            }
        }
        if (all) return n;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("find_translate walks to the least fitting shift") {
    const auto evens = evens_up_to(20);
    const auto h02 = FiniteIntegerSet::from_elements({0, 2});
    CHECK(find_translate(evens, h02, 0) == 0);
    CHECK(find_translate(evens, h02, 1) == 2);
    const auto h01 = FiniteIntegerSet::from_elements({0, 1});
    CHECK(!find_translate(evens, h01, 0).has_value());
    const auto full = full_window(0, 30);
    CHECK(find_translate(full, h01, 7) == 7);
    const auto point = FiniteIntegerSet::from_elements({0});
    CHECK(find_translate(evens, point, 3) == 4);
    CHECK(!find_translate(evens, h02, 19).has_value());
    CHECK_THROWS_AS(find_translate(evens, FiniteIntegerSet::empty_window(0, 1), 0),
                    std::domain_error);
}

TEST_CASE("find_translate agrees with a plain scan on random hosts") {
    const SeedStream master{8080};
    for (uint64_t i = 0; i < 30; ++i) {
        const auto d = bernoulli_set(0, 300, master.substream(i));
        const auto h = FiniteIntegerSet::from_elements(
            {0, 1 + static_cast<int64_t>(i % 5), 7 + static_cast<int64_t>(i % 3)});
        for (int64_t from : {0, 13, 250}) {
            REQUIRE(find_translate(d, h, from) == find_translate_scan(d, h, from));
        }
    }
}

TEST_CASE("independent translate indices step by diameter plus one") {
    const auto h = FiniteIntegerSet::from_elements({0, 2});
    CHECK(independent_translate_indices(h, 3) == std::vector<int64_t>{3, 6, 9});
    const auto wide = FiniteIntegerSet::from_elements({5, 11});
    CHECK(independent_translate_indices(wide, 2) == std::vector<int64_t>{7, 14});

    // Pairwise disjointness of the shifted copies.
    for (size_t count : {2u, 5u, 9u}) {
        const auto idx = independent_translate_indices(h, count);
        std::vector<int64_t> seen;
        for (int64_t n : idx) {
            for (int64_t v : h.elements()) seen.push_back(n + v);
        }
        std::sort(seen.begin(), seen.end());
        REQUIRE(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("sumset builder fills an unconstrained window with initial segments") {
    const auto st = build_sumset_inside(full_window(0, 1000), 5);
    CHECK(st.a == std::vector<int64_t>{0, 1, 2, 3, 4});
    CHECK(st.b == std::vector<int64_t>{0, 1, 2, 3, 4});
    CHECK(st.achieved == 5);
    CHECK(!st.exhausted);
    CHECK(st.all_nonnegative);
}

TEST_CASE("sumset builder respects structured hosts") {
    const auto st = build_sumset_inside(evens_up_to(100), 3);
    CHECK(st.a == std::vector<int64_t>{0, 2, 4});
    CHECK(st.b == std::vector<int64_t>{0, 2, 4});
    CHECK(st.achieved == 3);
    // Cramped host: the builder stops early and says so.
    const auto cramped = build_sumset_inside(full_window(0, 1), 5);
    CHECK(cramped.exhausted);
    CHECK(cramped.achieved < 5);
}

TEST_CASE("sumset builder keeps A + B inside random hosts at every stop") {
    const SeedStream master{11};
    for (uint64_t i = 0; i < 20; ++i) {
        const auto d = bernoulli_set(0, 4000, master.substream(i));
        const auto st = build_sumset_inside(d, 4);
        if (st.a.empty() || st.b.empty()) continue;
        const auto a = FiniteIntegerSet::from_elements(st.a);
        const auto b = FiniteIntegerSet::from_elements(st.b);
        const auto sum = sumset::sumset(a, b);
        for (int64_t v : sum.elements()) REQUIRE(d.contains(v));
        if (!st.exhausted) REQUIRE(st.achieved == 4);
    }
}

TEST_CASE("difference builder reproduces the unconstrained trace") {
    const auto sym = SymmetricSet::from_base(full_window(-30, 30));
    const auto st = build_difference_representation(sym, 4);
    CHECK(st.a == std::vector<int64_t>{1, 3, 2, 6});
    CHECK(st.b == std::vector<int64_t>{1, 2, 3, 4});
    CHECK(st.d == std::vector<int64_t>{0, 1, -1, 2});
    CHECK(st.achieved == 4);
    CHECK(st.all_nonnegative);
}

TEST_CASE("difference builder keeps its invariants on random symmetric hosts") {
    const SeedStream master{2222};
    int completed = 0;
    for (uint64_t i = 0; i < 20; ++i) {
        const auto sym = symmetric_bernoulli_set(2000, master.substream(i));
        const auto st = build_difference_representation(sym, 3);
        REQUIRE(st.a.size() == st.b.size());
        REQUIRE(st.a.size() == st.d.size());
        for (size_t j = 0; j < st.a.size(); ++j) {
            REQUIRE(st.a[j] - st.b[j] == st.d[j]);
            REQUIRE(sym.contains(st.d[j]));
        }
        // Full pairwise containment: A - B inside D.
        for (int64_t x : st.a) {
            for (int64_t y : st.b) REQUIRE(sym.contains(x - y));
        }
        if (!st.exhausted && st.achieved == 3) ++completed;
    }
    CHECK(completed > 10);  // density-1/2 hosts rarely exhaust this early
}

TEST_CASE("difference builder consumes targets in the alternating order") {
    const auto sym = SymmetricSet::from_base(
        FiniteIntegerSet::from_elements({-4, -2, 0, 2, 4}, -4, 4));
    const auto st = build_difference_representation(sym, 2);
    REQUIRE(st.d.size() >= 1);
    CHECK(st.d[0] == 0);
    if (st.d.size() >= 2) CHECK(st.d[1] == 2);  // 1 and -1 are not in D
}
