#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "sumset/hypothesis.hpp"

using namespace sumset;

TEST_CASE("f(x) is an exact reduced fraction") {
    const auto g = sieve_primes(200);
    const auto f100 = f_of_x(g, 100);
    CHECK(f100.num == 4);
    CHECK(f100.den == 1);
    CHECK(f100.value() == 4.0);
    const auto f30 = f_of_x(g, 30);  // 30 / 10 = 3
    CHECK(f30.num == 3);
    CHECK(f30.den == 1);
    const auto f20 = f_of_x(g, 20);  // 20 / 8 = 5/2
    CHECK(f20.num == 5);
    CHECK(f20.den == 2);
    CHECK_THROWS_AS(f_of_x(g, 1), std::domain_error);   // S(x) = 0
    CHECK_THROWS_AS(f_of_x(g, 300), std::domain_error); // not materialized
}

TEST_CASE("gap triple counts against hand-counted prime windows") {
    const auto g = sieve_primes(100);
    // k with s_k <= 20 and s_{k+2} - s_k <= 6: starts 2,3,5,7,11,13,17.
    CHECK(gap_triple_count(g, 20, 6) == 7);
    CHECK(gap_triple_count(g, 20, 4) == 2);  // (2,3,5), (3,5,7)
    CHECK(gap_triple_count(g, 20, 0) == 0);
    CHECK_THROWS_AS(gap_triple_count(g, 97, 6), std::domain_error);
    CHECK_THROWS_AS(gap_triple_count(g, 20, -1), std::domain_error);

    const auto ts = sieve_two_squares(60);
    CHECK(gap_triple_count(ts, 50, 2) == 2);  // (8,9,10), (16,17,18)
}

TEST_CASE("twin counts by scan and by mask agree and match hand counts") {
    const auto g = sieve_primes(110);
    CHECK(twin_count(g, 100, 2) == 8);
    CHECK(twin_count(g, 100, 1) == 1);  // only (2, 3)
    CHECK(twin_count_by_mask(g, 100, 2) == 8);
    for (int64_t m = 1; m <= 12; ++m) {
        for (int64_t x : {10, 25, 50, 97}) {
            REQUIRE(twin_count(g, x, m) == twin_count_by_mask(g, x, m));
        }
    }
    CHECK_THROWS_AS(twin_count(g, 100, 0), std::domain_error);
    CHECK_THROWS_AS(twin_count(g, 109, 2), std::domain_error);
}

TEST_CASE("delta diagnostics on constant floors have closed forms") {
    const auto g = sieve_primes(1000);
    // All-ones floors: every index is defective, products are all 1.
    const auto ones = constant_delta(g, 1.0);
    const auto d1 = delta_diagnostics(g, ones, 100, 2);
    CHECK(d1.d1_defect == 100);
    CHECK(d1.d2_sum == doctest::Approx(static_cast<double>(g.count_leq(100))));
    CHECK(d1.d3_ok);

    // Constant 2 with ell = 2: each s_k <= x contributes 1/4.
    const auto twos = constant_delta(g, 2.0);
    const auto d2 = delta_diagnostics(g, twos, 100, 2);
    CHECK(d2.d1_defect == 0);
    CHECK(d2.d2_sum == doctest::Approx(g.count_leq(100) / 4.0));
    // delta = 2 exceeds the halfspan at the bottom of the primes (n = 1, 2).
    CHECK(!d2.d3_ok);

    CHECK_THROWS_AS(delta_diagnostics(g, twos, 1000, 2), std::domain_error);
}

TEST_CASE("d1 counts indices, not values") {
    const auto g = GroundSequence::from_terms("demo", {10, 20, 30, 40, 50, 60});
    const auto d = DeltaSequence::from_values({1.5, 2.0, 1.0, 2.0, 3.0});
    const auto diag = delta_diagnostics(g, d, 4, 2);
    CHECK(diag.d1_defect == 2);  // indices 1 and 3 are below 2
}

TEST_CASE("wirsing threshold r* pins to frozen values for the primes") {
    const auto g = sieve_primes(1000100);
    const auto twos = constant_delta(g, 2.0);
    CHECK(wirsing_bounds(g, twos, 10000).threshold == 203);
    CHECK(wirsing_bounds(g, twos, 100000).threshold == 1418);
    CHECK(wirsing_bounds(g, twos, 1000000).threshold == 10691);
}

TEST_CASE("wirsing pointwise log is -count*log2 for constant floors of 2") {
    const auto g = sieve_primes(2000);
    const auto twos = constant_delta(g, 2.0);
    const auto w = wirsing_bounds(g, twos, 1000);
    const double expect = -(static_cast<double>(g.count_leq(999)) - 1.0) * std::log(2.0);
    CHECK(w.pointwise_log == doctest::Approx(expect));
    CHECK(w.dec1_log == doctest::Approx(w.count_bound_log + w.pointwise_log));
    CHECK(w.count_bound_log ==
          doctest::Approx(std::log(static_cast<double>(w.threshold)) +
                          w.threshold * (std::log(2000.0 / w.threshold) + 1.0)));
    // f must exceed e: at x = 10 the primes give f = 2.5.
    CHECK_THROWS_AS(wirsing_bounds(g, twos, 10), std::domain_error);
}

TEST_CASE("pair probability bounds follow their formulas") {
    const auto g = sieve_primes(200);
    const auto tens = constant_delta(g, 10.0);
    CHECK(adjacency_prob_bound(tens, 3, 1) == doctest::Approx(0.01));
    CHECK(adjacency_prob_bound(tens, 3, 2) == doctest::Approx(0.04));
    CHECK(close_pair_bound(tens, 3, 1) == doctest::Approx(0.01));
    CHECK(close_pair_bound(tens, 3, 3) == doctest::Approx(0.27));
    CHECK_THROWS_AS(adjacency_prob_bound(tens, 3, 0), std::domain_error);
    CHECK_THROWS_AS(close_pair_bound(tens, 3, 0), std::domain_error);
}

TEST_CASE("d2 ratios for the primes at iota 1/2 fall along frozen values") {
    const auto g = sieve_primes(1310000);
    const auto d = default_delta(g, 0.5, 1.0);
    const auto r1 = delta_diagnostics(g, d, 1000, 4);
    const auto r2 = delta_diagnostics(g, d, 10000, 4);
    const auto r3 = delta_diagnostics(g, d, 100000, 4);
    const auto ratio = [&](const DeltaDiagnostics& diag, int64_t x) {
        const double f = f_of_x(g, x).value();
        return diag.d2_sum / (static_cast<double>(g.count_leq(x)) / std::log(f));
    };
    CHECK(ratio(r1, 1000) == doctest::Approx(0.93628).epsilon(1e-4));
    CHECK(ratio(r2, 10000) == doctest::Approx(0.67806).epsilon(1e-4));
    CHECK(ratio(r3, 100000) == doctest::Approx(0.54701).epsilon(1e-4));
}

TEST_CASE("hypothesis report carries checkpoints and typed verdicts") {
    const auto g = sieve_primes(9000);
    const auto d = default_delta(g, 0.5, 1.0);
    const auto rep = hypothesis_report(g, d, {100, 1000}, {2, 6}, {2}, 2);
    REQUIRE(rep.checkpoints.size() == 2);
    CHECK(rep.ground == "primes");
    CHECK(rep.checkpoints[0].f.num == 4);
    CHECK(rep.checkpoints[0].twins.at(2) == 8);
    CHECK(rep.checkpoints[0].delta.d1_defect == 100);
    const double d2r = rep.checkpoints[0].d2_ratio;
    CHECK(d2r == doctest::Approx(rep.checkpoints[0].delta.d2_sum /
                                 (25.0 / std::log(4.0))));
    for (const auto* key :
         {"f_increasing", "gap_triple_trend", "d1_defect_trend",
          "d2_ratio_trend", "d3_window", "e2_atom_caps"}) {
        REQUIRE(rep.verdicts.count(key) == 1);
    }
    CHECK(rep.verdicts.at("f_increasing") == "heuristic-pass");
    CHECK(rep.verdicts.at("d3_window") == "pass");
    CHECK(rep.verdicts.at("e2_atom_caps") == "pass");
    // Scale-1 floors never reach 2 at desk scale, so the defect never shrinks.
    CHECK(rep.verdicts.at("d1_defect_trend") == "heuristic-fail");

    const auto parsed = nlohmann::json::parse(report_to_json(rep));
    CHECK(parsed["ground"] == "primes");
    CHECK(parsed["checkpoints"][0]["twin_counts"]["2"] == 8);
    CHECK(parsed["checkpoints"][1]["x"] == 1000);
    CHECK(parsed["verdicts"]["d3_window"] == "pass");
}
