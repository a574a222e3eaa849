#include "sumset/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace sumset {

namespace {

// The scan-based counters below binary-search the term list directly instead
// of going through GroundSequence::term to stay O(S(x) log) overall.

void require_materialized_through(const GroundSequence& ground, int64_t x,
                                  const char* who) {
    if (ground.count() == 0 || ground.terms().back() < x) {
        throw std::domain_error(std::string(who) +
                                " needs the ground materialized through " +
                                std::to_string(x));
    }
}

}  // namespace

Rational f_of_x(const GroundSequence& ground, int64_t x) {
    require_materialized_through(ground, x, "f_of_x");
    const int64_t s = ground.count_leq(x);
    if (s == 0) throw std::domain_error("f_of_x needs S(x) > 0, i.e. x >= s_1");
    const int64_t g = std::gcd(x, s);
    return Rational{x / g, s / g};
}

int64_t gap_triple_count(const GroundSequence& ground, int64_t x, int64_t h) {
    if (h < 0) throw std::domain_error("gap_triple_count needs h >= 0");
    const auto& t = ground.terms();
    const size_t K = static_cast<size_t>(ground.count_leq(x));
    if (ground.count() == 0 || t.back() < x || K + 2 > t.size()) {
        throw std::domain_error(
            "gap_triple_count needs two terms beyond the last s_k <= x");
    }
    int64_t count = 0;
    for (size_t k = 0; k < K; ++k) {
        if (t[k + 2] - t[k] <= h) ++count;
    }
    return count;
}

int64_t twin_count(const GroundSequence& ground, int64_t x, int64_t m) {
    if (m < 1) throw std::domain_error("twin_count needs m >= 1");
    require_materialized_through(ground, x + m, "twin_count");
    const auto& t = ground.terms();
    const auto end = std::upper_bound(t.begin(), t.end(), x);
    int64_t count = 0;
    for (auto it = t.begin(); it != end; ++it) {
        if (std::binary_search(it + 1, t.end(), *it + m)) ++count;
    }
    return count;
}

int64_t twin_count_by_mask(const GroundSequence& ground, int64_t x, int64_t m) {
    if (m < 1) throw std::domain_error("twin_count needs m >= 1");
    require_materialized_through(ground, x + m, "twin_count");
    detail::DenseBits bits(x + m + 1);
    for (int64_t s : ground.terms()) {
        if (s > x + m) break;
        bits.set(s);
    }
    int64_t count = 0;
    for (int64_t s = 1; s <= x; ++s) {
        if (bits.test(s) && bits.test(s + m)) ++count;
    }
    return count;
}

DeltaDiagnostics delta_diagnostics(const GroundSequence& ground,
                                   const DeltaSequence& delta, int64_t x,
                                   int ell) {
    if (ell < 1) throw std::domain_error("delta_diagnostics needs ell >= 1");
    if (x < 1) throw std::domain_error("delta_diagnostics needs x >= 1");
    require_materialized_through(ground, x, "delta_diagnostics");
    if (delta.count() < static_cast<size_t>(x)) {
        throw std::domain_error(
            "delta_diagnostics needs the floors materialized through index x");
    }
    DeltaDiagnostics d;
    for (int64_t n = 1; n <= x; ++n) {
        if (delta.delta(static_cast<size_t>(n)) < 2.0) ++d.d1_defect;
    }
    const size_t K = static_cast<size_t>(ground.count_leq(x));
    if (K + ell - 1 > delta.count()) {
        throw std::domain_error(
            "delta_diagnostics needs floors through index S(x) + ell - 1");
    }
    for (size_t k = 1; k <= K; ++k) {
        double term = 1.0;
        for (int i = 0; i < ell; ++i) term /= delta.delta(k + i);
        d.d2_sum += term;
    }
    d.d3_ok = true;
    const size_t n_hi = std::min(delta.count(), ground.count() - 1);
    for (size_t n = 2; n <= n_hi; ++n) {
        const double halfspan =
            static_cast<double>(ground.term(n + 1) - ground.term(n - 1)) / 2.0;
        const double v = delta.delta(n);
        if (!(v >= 1.0 && v <= halfspan)) {
            d.d3_ok = false;
            break;
        }
    }
    return d;
}

WirsingBounds wirsing_bounds(const GroundSequence& ground,
                             const DeltaSequence& delta, int64_t x) {
    require_materialized_through(ground, x, "wirsing_bounds");
    const double f = f_of_x(ground, x).value();
    const double lf = std::log(f);
    if (!(lf > 1.0)) {
        throw std::domain_error("wirsing_bounds needs f(x) > e");
    }
    WirsingBounds w;
    w.threshold = static_cast<int64_t>(
        std::floor(0.5 * std::log(2.0) * static_cast<double>(x) / (f * lf)));
    if (w.threshold < 1) {
        throw std::domain_error("wirsing_bounds needs threshold >= 1");
    }
    const double r = static_cast<double>(w.threshold);
    const double xd = static_cast<double>(x);
    w.count_bound_log = std::log(r) + r * (std::log(2.0 * xd / r) + 1.0);
    // Indices with s_{n+1} < x, i.e. n + 1 <= #{k : s_k <= x - 1}.
    const int64_t n_hi = ground.count_leq(x - 1) - 1;
    if (n_hi > 0 && delta.count() < static_cast<size_t>(n_hi)) {
        throw std::domain_error(
            "wirsing_bounds needs floors for every n with s_{n+1} < x");
    }
    for (int64_t n = 1; n <= n_hi; ++n) {
        w.pointwise_log -= std::log(delta.delta(static_cast<size_t>(n)));
    }
    w.dec1_log = w.count_bound_log + w.pointwise_log;
    return w;
}

double adjacency_prob_bound(const DeltaSequence& delta, size_t k, int64_t h) {
    if (h < 1) throw std::domain_error("adjacency_prob_bound needs h >= 1");
    const double hh = static_cast<double>(h);
    return hh * hh * delta.eta(k) * delta.eta(k + 1);
}

double close_pair_bound(const DeltaSequence& delta, size_t k, int64_t H) {
    if (H < 1) throw std::domain_error("close_pair_bound needs H >= 1");
    const double hh = static_cast<double>(H);
    return hh * hh * hh * delta.eta(k) * delta.eta(k + 1);
}

HypothesisReport hypothesis_report(const GroundSequence& ground,
                                   const DeltaSequence& delta,
                                   const std::vector<int64_t>& checkpoints,
                                   const std::vector<int64_t>& gap_hs,
                                   const std::vector<int64_t>& twin_ms, int ell) {
    if (checkpoints.empty()) {
        throw std::domain_error("hypothesis_report needs checkpoints");
    }
    for (size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) {
            throw std::domain_error("checkpoints must be strictly increasing");
        }
    }
    HypothesisReport rep;
    rep.ground = ground.name();
    rep.ell = ell;
    for (int64_t x : checkpoints) {
        CheckpointStats st;
        st.x = x;
        st.f = f_of_x(ground, x);
        st.s_count = ground.count_leq(x);
        for (int64_t h : gap_hs) st.gap_triples[h] = gap_triple_count(ground, x, h);
        for (int64_t m : twin_ms) st.twins[m] = twin_count(ground, x, m);
        st.delta = delta_diagnostics(ground, delta, x, ell);
        st.d2_ratio = st.delta.d2_sum /
                      (static_cast<double>(st.s_count) / std::log(st.f.value()));
        st.wirsing = wirsing_bounds(ground, delta, x);
        rep.checkpoints.push_back(std::move(st));
    }
    const auto& cps = rep.checkpoints;
    const auto heur = [](bool ok) { return ok ? "heuristic-pass" : "heuristic-fail"; };

    bool f_incr = true;
    for (size_t i = 1; i < cps.size(); ++i) {
        if (!(cps[i].f.value() > cps[i - 1].f.value())) f_incr = false;
    }
    rep.verdicts["f_increasing"] = heur(f_incr);

    bool gap_trend = true;
    for (int64_t h : gap_hs) {
        for (size_t i = 1; i < cps.size(); ++i) {
            const auto ratio = [&](const CheckpointStats& st) {
                return static_cast<double>(st.gap_triples.at(h)) *
                       std::log(st.f.value()) / static_cast<double>(st.s_count);
            };
            if (!(ratio(cps[i]) < ratio(cps[i - 1]))) gap_trend = false;
        }
    }
    rep.verdicts["gap_triple_trend"] = heur(gap_trend);

    // Defect density should shrink toward zero; an already-zero tail passes.
    bool d1_ok = true;
    const auto d1_ratio = [](const CheckpointStats& st) {
        return static_cast<double>(st.delta.d1_defect) / static_cast<double>(st.x);
    };
    for (size_t i = 1; i < cps.size(); ++i) {
        if (d1_ratio(cps[i]) > d1_ratio(cps[i - 1])) d1_ok = false;
    }
    if (cps.size() > 1 && d1_ratio(cps.back()) > 0.0 &&
        !(d1_ratio(cps.back()) < d1_ratio(cps.front()))) {
        d1_ok = false;
    }
    rep.verdicts["d1_defect_trend"] = heur(d1_ok);

    bool d2_trend = true;
    for (size_t i = 1; i < cps.size(); ++i) {
        if (!(cps[i].d2_ratio < cps[i - 1].d2_ratio)) d2_trend = false;
    }
    rep.verdicts["d2_ratio_trend"] = heur(d2_trend);

    bool d3_all = true;
    for (const auto& st : cps) d3_all = d3_all && st.delta.d3_ok;
    rep.verdicts["d3_window"] = d3_all ? "pass" : "fail";

    // Atom caps: the uniform perturbation has atom probability 1/m_n, so the
    // floors are honest exactly when m_n >= delta_n for every materialized n.
    bool e2_ok = true;
    const size_t n_hi = std::min(delta.count(), ground.count() - 1);
    for (size_t n = 1; n <= n_hi; ++n) {
        const double m = static_cast<double>(epsilon_support(ground, n).size());
        if (!(m >= delta.delta(n))) {
            e2_ok = false;
            break;
        }
    }
    rep.verdicts["e2_atom_caps"] = e2_ok ? "pass" : "fail";
    return rep;
}

std::string report_to_json(const HypothesisReport& report) {
    nlohmann::json j;
    j["format"] = "sumset-lab stats v1";
    j["ground"] = report.ground;
    j["ell"] = report.ell;
    j["checkpoints"] = nlohmann::json::array();
    for (const auto& st : report.checkpoints) {
        nlohmann::json c;
        c["x"] = st.x;
        c["f"] = {{"num", st.f.num}, {"den", st.f.den}, {"value", st.f.value()}};
        c["s_count"] = st.s_count;
        nlohmann::json gaps = nlohmann::json::object();
        for (const auto& [h, n] : st.gap_triples) gaps[std::to_string(h)] = n;
        c["gap_counts"] = std::move(gaps);
        nlohmann::json twins = nlohmann::json::object();
        for (const auto& [m, n] : st.twins) twins[std::to_string(m)] = n;
        c["twin_counts"] = std::move(twins);
        c["d1_defect"] = st.delta.d1_defect;
        c["d2_sum"] = st.delta.d2_sum;
        c["d2_ratio"] = st.d2_ratio;
        c["d3_ok"] = st.delta.d3_ok;
        c["wirsing"] = {{"threshold", st.wirsing.threshold},
                        {"count_bound_log", st.wirsing.count_bound_log},
                        {"pointwise_log", st.wirsing.pointwise_log},
                        {"dec1_log", st.wirsing.dec1_log}};
        j["checkpoints"].push_back(std::move(c));
    }
    j["verdicts"] = report.verdicts;
    return j.dump(2) + "\n";
}

}  // namespace sumset
