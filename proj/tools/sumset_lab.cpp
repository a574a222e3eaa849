// sumset-lab: batch front end for the sumset library. Subcommands mirror the
// library modules; every randomized run is a pure function of its flags and
// the master seed. Data goes to stdout or --out files, diagnostics to stderr.
// Exit codes: 0 success/SAT, 1 UNSAT, 2 budget exhausted, 3 invalid input,
// 4 internal error.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumset/constructive.hpp"
#include "sumset/decompose.hpp"
#include "sumset/generators.hpp"
#include "sumset/hypothesis.hpp"
#include "sumset/intset.hpp"
#include "sumset/montecarlo.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "sumset-lab 1.0.0 (seed scheme splitmix64-v1)";

// Data lands on stdout unless an output path was given.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::domain_error("cannot open output file '" + out_path + "'");
    f << text;
    if (!f) throw std::domain_error("cannot write output file '" + out_path + "'");
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::domain_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

sumset::EpsilonKind parse_epsilon(const std::string& name) {
    if (name == "uniform") return sumset::EpsilonKind::uniform;
    if (name == "zero") return sumset::EpsilonKind::zero;
    throw std::domain_error("unknown epsilon kind '" + name +
                            "' (want uniform or zero)");
}

struct SieveOpts {
    std::string ground;
    int64_t limit = 0;
    std::string out;
};

int run_sieve(const SieveOpts& o) {
    if (o.ground != "primes" && o.ground != "two_squares") {
        throw std::domain_error("sieve ground must be primes or two_squares");
    }
    const sumset::GroundSequence g = sumset::load_ground(o.ground, o.limit);
    std::ostringstream ss;
    for (int64_t t : g.terms()) ss << t << "\n";
    emit(ss.str(), o.out);
    return 0;
}

struct GenOpts {
    std::string kind;
    int64_t lo = 0;
    int64_t hi = 0;
    int64_t radius = 0;
    uint64_t seed = 0;
    std::string out;
};

int run_gen(const GenOpts& o) {
    const sumset::SeedStream seeds{o.seed};
    sumset::FiniteIntegerSet s;
    if (o.kind == "bernoulli") {
        s = sumset::bernoulli_set(o.lo, o.hi, seeds);
    } else if (o.kind == "symmetric") {
        s = sumset::symmetric_bernoulli_set(o.radius, seeds).base();
    } else {
        throw std::domain_error("gen kind must be bernoulli or symmetric");
    }
    std::ostringstream ss;
    sumset::write_set(ss, s);
    emit(ss.str(), o.out);
    return 0;
}

struct PerturbOpts {
    std::string ground;
    int64_t limit = 0;
    uint64_t count = 0;
    double iota = 0.5;
    double scale = 1.0;
    std::string epsilon = "uniform";
    uint64_t seed = 0;
    std::string out;
};

int run_perturb(const PerturbOpts& o) {
    sumset::GroundSequence g = sumset::load_ground(o.ground, o.limit);
    const sumset::PerturbationModel model = sumset::make_model(
        std::move(g), o.iota, o.scale, parse_epsilon(o.epsilon));
    const sumset::FiniteIntegerSet c = sumset::perturbed_set(
        model, static_cast<size_t>(o.count), sumset::SeedStream{o.seed});
    std::ostringstream ss;
    sumset::write_set(ss, c);
    emit(ss.str(), o.out);
    return 0;
}

struct StatsOpts {
    std::string ground;
    int64_t limit = 0;
    double iota = 0.5;
    double scale = 1.0;
    int ell = 2;
    std::vector<int64_t> checkpoints;
    std::vector<int64_t> gap_hs{2, 4, 6};
    std::vector<int64_t> twin_ms{2};
    std::string out;
};

int run_stats(const StatsOpts& o) {
    const sumset::GroundSequence g = sumset::load_ground(o.ground, o.limit);
    const sumset::DeltaSequence delta = sumset::default_delta(g, o.iota, o.scale);
    const sumset::HypothesisReport rep = sumset::hypothesis_report(
        g, delta, o.checkpoints, o.gap_hs, o.twin_ms, o.ell);
    emit(sumset::report_to_json(rep), o.out);
    return 0;
}

struct DecomposeOpts {
    std::string input;
    int64_t window_m = 0;
    bool windowed = false;
    bool all = false;
    uint64_t node_budget = UINT64_MAX;
    double time_budget_s = 0.0;
    std::string out;
    std::string out_a;
    std::string out_b;
};

json witness_json(const sumset::DecompositionWitness& w) {
    json jw;
    jw["a"] = w.a.elements();
    jw["b"] = w.b.elements();
    if (w.windowed_m) {
        jw["windowed_m"] = *w.windowed_m;
    } else {
        jw["windowed_m"] = nullptr;
    }
    return jw;
}

int run_decompose(const DecomposeOpts& o) {
    const sumset::FiniteIntegerSet target = sumset::read_set_file(o.input);
    sumset::SearchConfig cfg;
    cfg.node_budget = o.node_budget;
    cfg.time_budget = std::chrono::milliseconds(
        static_cast<int64_t>(std::llround(o.time_budget_s * 1000.0)));
    cfg.enumerate_all = o.all;
    const sumset::DecomposeResult res =
        o.windowed ? sumset::window_decompose(target, o.window_m, cfg)
                   : sumset::exact_decompose(target, cfg);

    json j;
    j["format"] = "sumset-lab decompose v1";
    j["nodes"] = res.nodes;
    switch (res.status) {
        case sumset::DecomposeStatus::sat: j["status"] = "sat"; break;
        case sumset::DecomposeStatus::unsat: j["status"] = "unsat"; break;
        case sumset::DecomposeStatus::budget_exhausted:
            j["status"] = "budget_exhausted";
            break;
    }
    if (res.witness) {
        j["witness"] = witness_json(*res.witness);
    } else {
        j["witness"] = nullptr;
    }
    if (o.all) {
        j["witnesses"] = json::array();
        for (const auto& w : res.all) j["witnesses"].push_back(witness_json(w));
        j["witness_count"] = res.all.size();
    }
    emit(j.dump(2) + "\n", o.out);

    if (res.witness) {
        if (!o.out_a.empty()) sumset::write_set_file(o.out_a, res.witness->a);
        if (!o.out_b.empty()) sumset::write_set_file(o.out_b, res.witness->b);
    }
    switch (res.status) {
        case sumset::DecomposeStatus::sat: return 0;
        case sumset::DecomposeStatus::unsat: return 1;
        case sumset::DecomposeStatus::budget_exhausted: return 2;
    }
    return 4;
}

struct ConstructOpts {
    std::string mode;
    std::string input;
    uint64_t k = 0;
    std::string out;
    std::string out_a;
    std::string out_b;
};

int run_construct(const ConstructOpts& o) {
    const sumset::FiniteIntegerSet d = sumset::read_set_file(o.input);
    sumset::BuilderState st;
    if (o.mode == "sumset") {
        st = sumset::build_sumset_inside(d, static_cast<size_t>(o.k));
    } else if (o.mode == "difference") {
        st = sumset::build_difference_representation(
            sumset::SymmetricSet::from_base(d), static_cast<size_t>(o.k));
    } else {
        throw std::domain_error("construct mode must be sumset or difference");
    }

    json j;
    j["format"] = "sumset-lab construct v1";
    j["mode"] = o.mode;
    j["k"] = o.k;
    j["achieved"] = st.achieved;
    j["exhausted"] = st.exhausted;
    j["all_nonnegative"] = st.all_nonnegative;
    j["a"] = st.a;
    j["b"] = st.b;
    j["d"] = st.d;
    emit(j.dump(2) + "\n", o.out);

    if (!o.out_a.empty() && !st.a.empty()) {
        sumset::write_set_file(o.out_a, sumset::FiniteIntegerSet::from_elements(st.a));
    }
    if (!o.out_b.empty() && !st.b.empty()) {
        sumset::write_set_file(o.out_b, sumset::FiniteIntegerSet::from_elements(st.b));
    }
    return 0;
}

struct McOpts {
    std::string spec_path;
    unsigned threads = 1;
    std::string out;
};

int run_mc(const McOpts& o) {
    const sumset::ExperimentSpec spec =
        sumset::experiment_spec_from_json(slurp(o.spec_path));
    const sumset::ExperimentReport rep = sumset::run_experiment(spec, o.threads);
    emit(sumset::experiment_report_to_json(rep), o.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experimental additive number theory workbench"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    SieveOpts sieve;
    auto* cmd_sieve = app.add_subcommand("sieve", "Emit a ground sequence, one term per line");
    cmd_sieve->add_option("--ground", sieve.ground, "primes or two_squares")->required();
    cmd_sieve->add_option("--limit", sieve.limit, "sieve bound")->required();
    cmd_sieve->add_option("--out", sieve.out, "output file (default: stdout)");

    GenOpts gen;
    auto* cmd_gen = app.add_subcommand("gen", "Draw a Bernoulli(1/2) random set");
    cmd_gen->add_option("--kind", gen.kind, "bernoulli or symmetric")->required();
    cmd_gen->add_option("--lo", gen.lo, "window low end (bernoulli)");
    cmd_gen->add_option("--hi", gen.hi, "window high end (bernoulli)");
    cmd_gen->add_option("--radius", gen.radius, "window radius (symmetric)");
    cmd_gen->add_option("--seed", gen.seed, "master seed")->required();
    cmd_gen->add_option("--out", gen.out, "output file (default: stdout)");

    PerturbOpts perturb;
    auto* cmd_perturb = app.add_subcommand(
        "perturb", "Randomly perturb a ground sequence into a set C");
    cmd_perturb->add_option("--ground", perturb.ground,
                            "primes, two_squares, or file:PATH")->required();
    cmd_perturb->add_option("--limit", perturb.limit, "ground materialization bound")
        ->required();
    cmd_perturb->add_option("--count", perturb.count, "number of terms to perturb")
        ->required();
    cmd_perturb->add_option("--iota", perturb.iota, "dispersion exponent");
    cmd_perturb->add_option("--scale", perturb.scale, "dispersion scale");
    cmd_perturb->add_option("--epsilon", perturb.epsilon, "uniform or zero");
    cmd_perturb->add_option("--seed", perturb.seed, "master seed")->required();
    cmd_perturb->add_option("--out", perturb.out, "output file (default: stdout)");

    StatsOpts stats;
    auto* cmd_stats = app.add_subcommand(
        "stats", "Evaluate growth and dispersion statistics at checkpoints");
    cmd_stats->add_option("--ground", stats.ground,
                          "primes, two_squares, or file:PATH")->required();
    cmd_stats->add_option("--limit", stats.limit, "ground materialization bound")
        ->required();
    cmd_stats->add_option("--iota", stats.iota, "dispersion exponent");
    cmd_stats->add_option("--scale", stats.scale, "dispersion scale");
    cmd_stats->add_option("--ell", stats.ell, "pattern length for the sum diagnostic");
    cmd_stats->add_option("--checkpoints", stats.checkpoints, "x values (comma separated)")
        ->required()
        ->delimiter(',');
    cmd_stats->add_option("--gap-h", stats.gap_hs, "near-triple gap bounds")
        ->delimiter(',');
    cmd_stats->add_option("--twin-m", stats.twin_ms, "twin offsets")->delimiter(',');
    cmd_stats->add_option("--out", stats.out, "output file (default: stdout)");

    DecomposeOpts dec;
    auto* cmd_dec = app.add_subcommand(
        "decompose", "Decide target = A + B with |A|, |B| >= 2");
    cmd_dec->add_option("--input", dec.input, "target set file")->required();
    auto* win_opt =
        cmd_dec->add_option("--window", dec.window_m, "windowed mode bound M");
    cmd_dec->add_flag("--all", dec.all, "enumerate all witnesses (exact mode)");
    cmd_dec->add_option("--node-budget", dec.node_budget, "search node budget");
    cmd_dec->add_option("--time-budget", dec.time_budget_s, "search time budget, seconds");
    cmd_dec->add_option("--out", dec.out, "result JSON file (default: stdout)");
    cmd_dec->add_option("--out-a", dec.out_a, "witness A set file");
    cmd_dec->add_option("--out-b", dec.out_b, "witness B set file");

    ConstructOpts con;
    auto* cmd_con = app.add_subcommand(
        "construct", "Greedily grow A, B with A + B (or A - B) inside D");
    cmd_con->add_option("--mode", con.mode, "sumset or difference")->required();
    cmd_con->add_option("--input", con.input, "host set file D")->required();
    cmd_con->add_option("--k", con.k, "target number of pairs")->required();
    cmd_con->add_option("--out", con.out, "trace JSON file (default: stdout)");
    cmd_con->add_option("--out-a", con.out_a, "built A set file");
    cmd_con->add_option("--out-b", con.out_b, "built B set file");

    McOpts mc;
    auto* cmd_mc = app.add_subcommand("mc", "Run a Monte Carlo experiment spec");
    cmd_mc->add_option("--spec", mc.spec_path, "experiment spec JSON file")->required();
    cmd_mc->add_option("--threads", mc.threads, "worker cap (never changes results)");
    cmd_mc->add_option("--out", mc.out, "report JSON file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (cmd_sieve->parsed()) return run_sieve(sieve);
        if (cmd_gen->parsed()) return run_gen(gen);
        if (cmd_perturb->parsed()) return run_perturb(perturb);
        if (cmd_stats->parsed()) return run_stats(stats);
        if (cmd_dec->parsed()) {
            dec.windowed = win_opt->count() > 0;
            return run_decompose(dec);
        }
        if (cmd_con->parsed()) return run_construct(con);
        if (cmd_mc->parsed()) return run_mc(mc);
        std::cerr << "error: no subcommand selected\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 4;
    }
}
