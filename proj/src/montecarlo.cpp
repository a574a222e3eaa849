#include "sumset/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sumset/decompose.hpp"
#include "sumset/hypothesis.hpp"

namespace sumset {

namespace {

using nlohmann::json;

// Runs fn(t) for t in [0, trials), on up to `threads` workers. Trials are
// handed out dynamically but all output is keyed by t, so schedules cannot
// leak into results.
void for_each_trial(uint64_t trials, unsigned threads,
                    const std::function<void(uint64_t)>& fn) {
    if (threads <= 1 || trials < 2) {
        for (uint64_t t = 0; t < trials; ++t) fn(t);
        return;
    }
    const unsigned workers =
        static_cast<unsigned>(std::min<uint64_t>(threads, trials));
    std::atomic<uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            try {
                for (uint64_t t; (t = next.fetch_add(1)) < trials;) fn(t);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

// Mean/variance/max plus the one-sided pass rule against an analytic bound.
void finish_indicator_report(ExperimentReport& rep, double bound) {
    const uint64_t trials = rep.per_trial.size();
    int64_t sum = 0;
    rep.max = 0;
    for (int64_t v : rep.per_trial) {
        sum += v;
        rep.max = std::max(rep.max, v);
    }
    rep.mean = static_cast<double>(sum) / static_cast<double>(trials);
    double acc = 0.0;
    for (int64_t v : rep.per_trial) {
        const double d = static_cast<double>(v) - rep.mean;
        acc += d * d;
    }
    rep.variance = acc / static_cast<double>(trials);
    rep.bound = bound;
    rep.bound_vacuous = bound > 1.0;
    rep.noise_allowance =
        3.0 * std::sqrt(bound / static_cast<double>(trials));
    rep.pass = rep.bound_vacuous || rep.mean <= bound + rep.noise_allowance;
}

ExperimentReport run_indicator(uint64_t trials, unsigned threads,
                               SeedStream seeds, double bound,
                               const std::function<bool(SeedStream)>& event) {
    if (trials < 1) throw std::domain_error("experiments need trials >= 1");
    ExperimentReport rep;
    rep.per_trial.assign(trials, 0);
    for_each_trial(trials, threads, [&](uint64_t t) {
        rep.per_trial[t] = event(seeds.substream(t)) ? 1 : 0;
    });
    finish_indicator_report(rep, bound);
    return rep;
}

// Ground terms needed so that the perturbed window reaches value x: the
// perturbed c_n always exceeds s_{n-1}, so one index past the first term
// at or above x suffices, plus one more for the perturbation's lookahead.
size_t count_for_value(const GroundSequence& ground, int64_t x) {
    return static_cast<size_t>(ground.count_leq(x - 1)) + 2;
}

struct PatternTrial {
    std::vector<int64_t> counts;       // per checkpoint
    std::vector<int64_t> consecutive;  // per checkpoint
};

}  // namespace

int64_t pattern_translate_count(const FiniteIntegerSet& c,
                                const std::vector<int64_t>& pattern, int64_t x) {
    if (pattern.empty()) {
        throw std::domain_error("pattern count needs a nonempty pattern");
    }
    if (x < 0) throw std::domain_error("pattern count needs x >= 0");
    const int64_t pat_max = *std::max_element(pattern.begin(), pattern.end());
    if (x + pat_max > c.window_hi()) {
        throw std::domain_error(
            "pattern count would look past the target's window");
    }
    detail::DenseBits acc(x + 1);
    for (auto& w : acc.words()) w = ~uint64_t(0);
    const auto& cw = c.mask().words();
    for (int64_t b : pattern) {
        // Positions n in [0, x] keep their bit iff n + b is in C.
        const int64_t shift = b - c.window_lo();
        auto& aw = acc.words();
        for (size_t w = 0; w < aw.size(); ++w) {
            uint64_t v = 0;
            const int64_t base = static_cast<int64_t>(w) * 64 + shift;
            // Gather the 64 source bits starting at `base`, 0 outside C.
            const int64_t q = base >> 6;
            const int r = static_cast<int>(base & 63);
            const auto word_at = [&](int64_t idx) -> uint64_t {
                return (idx >= 0 && idx < static_cast<int64_t>(cw.size()))
                           ? cw[idx]
                           : 0;
            };
            if (r == 0) {
                v = word_at(q);
            } else {
                v = (word_at(q) >> r) | (word_at(q + 1) << (64 - r));
            }
            aw[w] &= v;
        }
    }
    const int tail = static_cast<int>((x + 1) & 63);
    if (tail) acc.words().back() &= (uint64_t(1) << tail) - 1;
    return acc.count();
}

int64_t pattern_translate_count_scan(const FiniteIntegerSet& c,
                                     const std::vector<int64_t>& pattern,
                                     int64_t x) {
    if (pattern.empty()) {
        throw std::domain_error("pattern count needs a nonempty pattern");
    }
    if (x < 0) throw std::domain_error("pattern count needs x >= 0");
    const int64_t pat_max = *std::max_element(pattern.begin(), pattern.end());
    if (x + pat_max > c.window_hi()) {
        throw std::domain_error(
            "pattern count would look past the target's window");
    }
    int64_t count = 0;
    for (int64_t n = 0; n <= x; ++n) {
        bool hit = true;
        for (int64_t b : pattern) {
            if (!c.contains(n + b)) {
                hit = false;
                break;
            }
        }
        if (hit) ++count;
    }
    return count;
}

ExperimentReport estimate_adjacency_prob(const PerturbationModel& model,
                                         size_t k, int64_t h, uint64_t trials,
                                         SeedStream seeds) {
    if (k < 1) throw std::domain_error("adjacency estimate needs k >= 1");
    if (h < 0) throw std::domain_error("adjacency estimate needs h >= 0");
    const double bound =
        h == 0 ? 0.0 : adjacency_prob_bound(model.delta, k, h);
    const int64_t s_k = model.ground.term(k);
    const int64_t s_k1 = model.ground.term(k + 1);
    auto rep =
        run_indicator(trials, 1, seeds, bound, [&](SeedStream trial) {
            const int64_t ck = s_k + sample_epsilon(model, k, trial);
            const int64_t ck1 = s_k1 + sample_epsilon(model, k + 1, trial);
            return ck + h == ck1;
        });
    rep.spec.ground = model.ground.name();
    rep.spec.stat = StatKind::adjacency;
    rep.spec.index_k = k;
    rep.spec.offset = h;
    rep.spec.trials = trials;
    rep.spec.master_seed = seeds.master;
    return rep;
}

ExperimentReport estimate_close_pair_prob(const PerturbationModel& model,
                                          size_t k, int64_t big_h,
                                          uint64_t trials, SeedStream seeds) {
    if (k < 1) throw std::domain_error("close-pair estimate needs k >= 1");
    if (big_h < 1) throw std::domain_error("close-pair estimate needs H >= 1");
    const double bound = close_pair_bound(model.delta, k, big_h);
    const int64_t s_k = model.ground.term(k);
    const int64_t s_k1 = model.ground.term(k + 1);
    auto rep =
        run_indicator(trials, 1, seeds, bound, [&](SeedStream trial) {
            const int64_t ck = s_k + sample_epsilon(model, k, trial);
            const int64_t ck1 = s_k1 + sample_epsilon(model, k + 1, trial);
            return ck1 - ck <= big_h;
        });
    rep.spec.ground = model.ground.name();
    rep.spec.stat = StatKind::close_pair;
    rep.spec.index_k = k;
    rep.spec.offset = big_h;
    rep.spec.trials = trials;
    rep.spec.master_seed = seeds.master;
    return rep;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, unsigned threads) {
    if (spec.trials < 1) throw std::domain_error("experiments need trials >= 1");
    GroundSequence ground = load_ground(spec.ground, spec.limit);
    PerturbationModel model =
        make_model(std::move(ground), spec.iota, spec.scale, spec.epsilon);
    const SeedStream master{spec.master_seed};

    if (spec.stat == StatKind::adjacency || spec.stat == StatKind::close_pair) {
        if (spec.index_k < 1) {
            throw std::domain_error("pair statistics need index_k >= 1");
        }
        double bound = 0.0;
        if (spec.stat == StatKind::adjacency) {
            if (spec.offset < 0) {
                throw std::domain_error("adjacency offset must be >= 0");
            }
            bound = spec.offset == 0
                        ? 0.0
                        : adjacency_prob_bound(model.delta, spec.index_k,
                                               spec.offset);
        } else {
            if (spec.offset < 1) {
                throw std::domain_error("close-pair offset must be >= 1");
            }
            bound = close_pair_bound(model.delta, spec.index_k, spec.offset);
        }
        const int64_t s_k = model.ground.term(spec.index_k);
        const int64_t s_k1 = model.ground.term(spec.index_k + 1);
        const bool adjacency = spec.stat == StatKind::adjacency;
        ExperimentReport rep = run_indicator(
            spec.trials, threads, master, bound, [&](SeedStream trial) {
                const int64_t ck =
                    s_k + sample_epsilon(model, spec.index_k, trial);
                const int64_t ck1 =
                    s_k1 + sample_epsilon(model, spec.index_k + 1, trial);
                return adjacency ? ck + spec.offset == ck1
                                 : ck1 - ck <= spec.offset;
            });
        rep.spec = spec;
        return rep;
    }

    if (spec.stat == StatKind::pattern_count) {
        if (spec.pattern.empty()) {
            throw std::domain_error("pattern experiments need a pattern");
        }
        if (spec.x_checkpoints.empty()) {
            throw std::domain_error("pattern experiments need checkpoints");
        }
        std::vector<int64_t> pattern = spec.pattern;
        std::sort(pattern.begin(), pattern.end());
        pattern.erase(std::unique(pattern.begin(), pattern.end()),
                      pattern.end());
        if (pattern.front() < 0) {
            throw std::domain_error("pattern offsets must be >= 0");
        }
        const auto& cps = spec.x_checkpoints;
        for (size_t i = 0; i < cps.size(); ++i) {
            if (cps[i] < 1 || (i > 0 && cps[i] <= cps[i - 1])) {
                throw std::domain_error(
                    "checkpoints must be positive and strictly increasing");
            }
        }
        const size_t ell = pattern.size();
        const int64_t x_max = cps.back();
        const size_t count = count_for_value(model.ground, x_max + pattern.back());

        std::vector<PatternTrial> trials_out(spec.trials);
        ExperimentReport rep;
        rep.per_trial.assign(spec.trials, 0);
        for_each_trial(spec.trials, threads, [&](uint64_t t) {
            const FiniteIntegerSet c =
                perturbed_set(model, count, master.substream(t));
            // Every hit has n + pattern[0] in C, so walking the element list
            // enumerates all candidates in ascending order.
            std::vector<int64_t> hit_list;
            for (int64_t e : c.elements()) {
                const int64_t n = e - pattern.front();
                if (n < 0) continue;
                if (n > x_max) break;
                bool hit = true;
                for (size_t pi = 1; pi < pattern.size(); ++pi) {
                    if (!c.contains(n + pattern[pi])) {
                        hit = false;
                        break;
                    }
                }
                if (hit) hit_list.push_back(n);
            }
            if (pattern_translate_count(c, pattern, x_max) !=
                static_cast<int64_t>(hit_list.size())) {
                throw std::logic_error("pattern count implementations disagree");
            }
            const auto& elems = c.elements();
            std::vector<char> consec(hit_list.size(), 0);
            for (size_t i = 0; i < hit_list.size(); ++i) {
                const auto first = std::lower_bound(elems.begin(), elems.end(),
                                                    hit_list[i] + pattern.front());
                const auto last = std::lower_bound(elems.begin(), elems.end(),
                                                   hit_list[i] + pattern.back());
                consec[i] = static_cast<size_t>(last - first) == ell - 1;
            }
            PatternTrial& out = trials_out[t];
            out.counts.resize(cps.size());
            out.consecutive.resize(cps.size());
            for (size_t ci = 0; ci < cps.size(); ++ci) {
                int64_t n_hits = 0, n_consec = 0;
                for (size_t i = 0; i < hit_list.size(); ++i) {
                    if (hit_list[i] > cps[ci]) break;
                    ++n_hits;
                    n_consec += consec[i];
                }
                out.counts[ci] = n_hits;
                out.consecutive[ci] = n_consec;
            }
            rep.per_trial[t] = out.counts.back();
        });

        finish_indicator_report(rep, 0.0);
        rep.bound_vacuous = false;
        rep.noise_allowance = 0.0;
        rep.pass = true;  // no analytic bound for raw pattern counts
        for (size_t ci = 0; ci < cps.size(); ++ci) {
            PatternCheckpointRow row;
            row.x = cps[ci];
            int64_t total = 0, consec_total = 0;
            for (const auto& tr : trials_out) {
                total += tr.counts[ci];
                consec_total += tr.consecutive[ci];
                row.max_count = std::max(row.max_count, tr.counts[ci]);
            }
            row.hits_total = total;
            row.hits_consecutive = consec_total;
            row.mean_count =
                static_cast<double>(total) / static_cast<double>(spec.trials);
            const double f = f_of_x(model.ground, row.x).value();
            if (!(f > 1.0)) {
                throw std::domain_error(
                    "pattern checkpoints need f(x) > 1 for the reference");
            }
            row.dec3_reference =
                static_cast<double>(row.x) / (f * std::log(f));
            row.mean_to_reference = row.mean_count / row.dec3_reference;
            rep.checkpoints.push_back(row);
        }
        rep.spec = spec;
        return rep;
    }

    // gap_profile
    if (spec.profile_k < 1) {
        throw std::domain_error("gap profiles need profile_k >= 1");
    }
    const size_t count = spec.profile_k + 2;
    ExperimentReport rep;
    rep.per_trial.assign(spec.trials, 0);
    for_each_trial(spec.trials, threads, [&](uint64_t t) {
        const FiniteIntegerSet c = perturbed_set(model, count, master.substream(t));
        const auto profile = min_adjacent_gap_profile(c, spec.profile_k);
        rep.per_trial[t] = *std::max_element(profile.begin(), profile.end());
    });
    finish_indicator_report(rep, 0.0);
    rep.bound_vacuous = false;
    rep.noise_allowance = 0.0;
    rep.pass = true;  // reported statistic, no analytic bound
    rep.spec = spec;
    return rep;
}

namespace {

std::string stat_name(StatKind s) {
    switch (s) {
        case StatKind::adjacency: return "adjacency";
        case StatKind::close_pair: return "close_pair";
        case StatKind::pattern_count: return "pattern_count";
        case StatKind::gap_profile: return "gap_profile";
    }
    throw std::logic_error("unreachable statistic kind");
}

StatKind stat_from_name(const std::string& n) {
    if (n == "adjacency") return StatKind::adjacency;
    if (n == "close_pair") return StatKind::close_pair;
    if (n == "pattern_count") return StatKind::pattern_count;
    if (n == "gap_profile") return StatKind::gap_profile;
    throw std::domain_error("unknown statistic '" + n + "'");
}

json spec_to_json_value(const ExperimentSpec& spec) {
    json j;
    j["format"] = "sumset-lab mc-spec v1";
    j["ground"] = spec.ground;
    j["limit"] = spec.limit;
    j["iota"] = spec.iota;
    j["scale"] = spec.scale;
    j["epsilon"] = spec.epsilon == EpsilonKind::uniform ? "uniform" : "zero";
    j["stat"] = stat_name(spec.stat);
    j["index_k"] = spec.index_k;
    j["offset"] = spec.offset;
    j["pattern"] = spec.pattern;
    j["x_checkpoints"] = spec.x_checkpoints;
    j["profile_k"] = spec.profile_k;
    j["trials"] = spec.trials;
    j["master_seed"] = spec.master_seed;
    return j;
}

}  // namespace

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
    return spec_to_json_value(spec).dump(2) + "\n";
}

ExperimentSpec experiment_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("bad experiment spec: ") + e.what());
    }
    try {
        ExperimentSpec spec;
        spec.ground = j.at("ground").get<std::string>();
        spec.limit = j.value("limit", int64_t{0});
        spec.iota = j.value("iota", 0.5);
        spec.scale = j.value("scale", 1.0);
        const std::string eps = j.value("epsilon", std::string("uniform"));
        if (eps == "uniform") {
            spec.epsilon = EpsilonKind::uniform;
        } else if (eps == "zero") {
            spec.epsilon = EpsilonKind::zero;
        } else {
            throw std::domain_error("unknown epsilon kind '" + eps + "'");
        }
        spec.stat = stat_from_name(j.at("stat").get<std::string>());
        spec.index_k = j.value("index_k", uint64_t{0});
        spec.offset = j.value("offset", int64_t{0});
        spec.pattern = j.value("pattern", std::vector<int64_t>{});
        spec.x_checkpoints = j.value("x_checkpoints", std::vector<int64_t>{});
        spec.profile_k = j.value("profile_k", uint64_t{0});
        spec.trials = j.at("trials").get<uint64_t>();
        spec.master_seed = j.at("master_seed").get<uint64_t>();
        return spec;
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("bad experiment spec: ") + e.what());
    }
}

std::string experiment_report_to_json(const ExperimentReport& report) {
    json j;
    j["format"] = "sumset-lab mc-report v1";
    j["spec"] = spec_to_json_value(report.spec);
    j["mean"] = report.mean;
    j["variance"] = report.variance;
    j["max"] = report.max;
    j["bound"] = report.bound;
    j["bound_vacuous"] = report.bound_vacuous;
    j["noise_allowance"] = report.noise_allowance;
    j["pass"] = report.pass;
    j["per_trial"] = report.per_trial;
    j["checkpoints"] = json::array();
    for (const auto& row : report.checkpoints) {
        j["checkpoints"].push_back({{"x", row.x},
                                    {"mean_count", row.mean_count},
                                    {"max_count", row.max_count},
                                    {"dec3_reference", row.dec3_reference},
                                    {"mean_to_reference", row.mean_to_reference},
                                    {"hits_total", row.hits_total},
                                    {"hits_consecutive", row.hits_consecutive}});
    }
    return j.dump(2) + "\n";
}

}  // namespace sumset
