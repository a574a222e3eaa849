#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

#include "sumset/decompose.hpp"
#include "sumset/generators.hpp"
#include "sumset/intset.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("sumset-lab-cli-" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::filesystem::path scratch_file(const std::string& hint) {
    static int counter = 0;
    return scratch_dir() / (std::to_string(counter++) + "-" + hint);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

const std::string& binary() {
    static const std::string bin = [] {
        const char* env = std::getenv("SUMSET_LAB_BIN");
        REQUIRE_MESSAGE(env != nullptr, "SUMSET_LAB_BIN must point at the CLI");
        return std::string(env);
    }();
    return bin;
}

RunResult run_cli(const std::string& args) {
    const auto out = scratch_file("stdout.txt");
    const auto err = scratch_file("stderr.txt");
    const std::string cmd = "'" + binary() + "' " + args + " > '" + out.string() +
                            "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

int line_count(const std::string& text) {
    int n = 0;
    for (char ch : text) {
        if (ch == '\n') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("version string names the seed scheme") {
    const auto r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("splitmix64-v1") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("help exits cleanly, missing input does not") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("sieve --help").exit_code == 0);
    CHECK(run_cli("").exit_code == 3);
    CHECK(run_cli("sieve").exit_code == 3);
    CHECK(run_cli("frobnicate --limit 5").exit_code == 3);
    CHECK(run_cli("sieve --ground primes --limit 100 --bogus").exit_code == 3);
}

TEST_CASE("sieve emits one term per line") {
    const auto r = run_cli("sieve --ground primes --limit 100");
    CHECK(r.exit_code == 0);
    CHECK(line_count(r.out) == 25);
    CHECK(r.out.rfind("2\n3\n5\n", 0) == 0);
    CHECK(r.out.find("\n97\n") != std::string::npos);
    CHECK(r.err.empty());

    const auto file = scratch_file("primes.txt");
    const auto r2 = run_cli("sieve --ground primes --limit 100 --out '" + file.string() + "'");
    CHECK(r2.exit_code == 0);
    CHECK(r2.out.empty());
    CHECK(slurp(file) == r.out);
}

TEST_CASE("sieve rejects bad grounds and limits with empty stdout") {
    const auto r = run_cli("sieve --ground gaussians --limit 100");
    CHECK(r.exit_code == 3);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
    CHECK(run_cli("sieve --ground primes --limit 1").exit_code == 3);
}

TEST_CASE("gen is a pure function of its flags") {
    const std::string flags = "gen --kind bernoulli --lo -5 --hi 40 --seed 99";
    const auto r1 = run_cli(flags);
    const auto r2 = run_cli(flags);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    const auto other = run_cli("gen --kind bernoulli --lo -5 --hi 40 --seed 100");
    CHECK(other.out != r1.out);

    std::istringstream in(r1.out);
    const auto s = sumset::read_set(in);
    CHECK(s.window_lo() == -5);
    CHECK(s.window_hi() == 40);

    const auto sym = run_cli("gen --kind symmetric --radius 30 --seed 4");
    std::istringstream sin(sym.out);
    const auto base = sumset::read_set(sin);
    for (int64_t v = 0; v <= 30; ++v) REQUIRE(base.contains(v) == base.contains(-v));

    CHECK(run_cli("gen --kind triangular --seed 1").exit_code == 3);
}

TEST_CASE("perturb produces a valid set and honors the frozen kind") {
    const auto r = run_cli("perturb --ground primes --limit 500 --count 30 --seed 11");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    const auto c = sumset::read_set(in);
    REQUIRE(c.size() == 30);

    const auto frozen =
        run_cli("perturb --ground primes --limit 500 --count 30 --seed 11 --epsilon zero");
    std::istringstream fin(frozen.out);
    const auto ground_prefix = sumset::read_set(fin);
    const auto primes = sumset::sieve_primes(500);
    CHECK(ground_prefix.elements() ==
          std::vector<int64_t>(primes.terms().begin(), primes.terms().begin() + 30));

    CHECK(run_cli("perturb --ground primes --limit 500 --count 500 --seed 1").exit_code == 3);
}

TEST_CASE("perturb accepts file grounds") {
    const auto file = scratch_file("ground.txt");
    const auto sieve = run_cli("sieve --ground two_squares --limit 300 --out '" +
                               file.string() + "'");
    REQUIRE(sieve.exit_code == 0);
    const auto r = run_cli("perturb --ground file:" + file.string() +
                           " --limit 0 --count 20 --seed 6");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    CHECK(sumset::read_set(in).size() == 20);
}

TEST_CASE("stats reports exact fractions at its checkpoints") {
    const auto r = run_cli("stats --ground primes --limit 9000 --checkpoints 100,1000");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["ground"] == "primes");
    CHECK(j["checkpoints"][0]["f"]["num"] == 4);
    CHECK(j["checkpoints"][0]["f"]["den"] == 1);
    CHECK(j["checkpoints"][0]["twin_counts"]["2"] == 8);
    CHECK(j["verdicts"].contains("d3_window"));
    CHECK(run_cli("stats --ground primes --limit 9000 --checkpoints 10,9000").exit_code == 3);
}

TEST_CASE("decompose separates SAT, UNSAT, and budget exhaustion") {
    const auto unsat_file = scratch_file("t013.txt");
    spit(unsat_file, "0\n1\n3\n");
    const auto r1 = run_cli("decompose --input '" + unsat_file.string() + "'");
    CHECK(r1.exit_code == 1);
    CHECK(json::parse(r1.out)["status"] == "unsat");

    const auto sat_file = scratch_file("t0123.txt");
    spit(sat_file, "0\n1\n2\n3\n");
    const auto r2 = run_cli("decompose --input '" + sat_file.string() + "'");
    CHECK(r2.exit_code == 0);
    const json j2 = json::parse(r2.out);
    CHECK(j2["status"] == "sat");
    REQUIRE(j2["witness"].is_object());
    CHECK(j2["witness"]["a"].size() >= 2);
    CHECK(j2["witness"]["b"].size() >= 2);

    const auto r3 = run_cli("decompose --input '" + sat_file.string() + "' --all");
    CHECK(r3.exit_code == 0);
    CHECK(json::parse(r3.out)["witness_count"] == 3);

    const auto r4 =
        run_cli("decompose --input '" + sat_file.string() + "' --node-budget 1");
    CHECK(r4.exit_code == 2);
    CHECK(json::parse(r4.out)["status"] == "budget_exhausted");

    CHECK(run_cli("decompose --input /nonexistent/t.txt").exit_code == 3);
    const auto garbled = scratch_file("garbled.txt");
    spit(garbled, "5\n3\n");
    CHECK(run_cli("decompose --input '" + garbled.string() + "'").exit_code == 3);
}

TEST_CASE("decompose writes witness files that verify") {
    const auto sat_file = scratch_file("planted.txt");
    spit(sat_file, "0\n1\n2\n3\n4\n5\n6\n");
    const auto out_a = scratch_file("a.txt");
    const auto out_b = scratch_file("b.txt");
    const auto r = run_cli("decompose --input '" + sat_file.string() + "' --out-a '" +
                           out_a.string() + "' --out-b '" + out_b.string() + "'");
    REQUIRE(r.exit_code == 0);
    sumset::DecompositionWitness w;
    w.a = sumset::read_set_file(out_a.string());
    w.b = sumset::read_set_file(out_b.string());
    const auto target = sumset::read_set_file(sat_file.string());
    CHECK(sumset::verify_witness(target, w).ok);
}

TEST_CASE("construct traces the greedy runs") {
    const auto host = scratch_file("host.txt");
    std::ostringstream hs;
    for (int v = 0; v <= 200; ++v) hs << v << "\n";
    spit(host, hs.str());
    const auto r = run_cli("construct --mode sumset --input '" + host.string() + "' --k 3");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["a"] == json::array({0, 1, 2}));
    CHECK(j["b"] == json::array({0, 1, 2}));
    CHECK(j["achieved"] == 3);

    const auto sym = scratch_file("sym.txt");
    std::ostringstream ss;
    ss << "# window -30 30\n";
    for (int v = -30; v <= 30; ++v) ss << v << "\n";
    spit(sym, ss.str());
    const auto r2 =
        run_cli("construct --mode difference --input '" + sym.string() + "' --k 4");
    CHECK(r2.exit_code == 0);
    const json j2 = json::parse(r2.out);
    CHECK(j2["a"] == json::array({1, 3, 2, 6}));
    CHECK(j2["b"] == json::array({1, 2, 3, 4}));
    CHECK(j2["d"] == json::array({0, 1, -1, 2}));
    CHECK(j2["all_nonnegative"] == true);

    // Difference mode insists on a symmetric host.
    const auto r3 =
        run_cli("construct --mode difference --input '" + host.string() + "' --k 2");
    CHECK(r3.exit_code == 3);
    CHECK(r3.out.empty());
}

TEST_CASE("mc runs are byte-identical across reruns and thread counts") {
    const auto spec = scratch_file("spec.json");
    spit(spec, R"({
      "ground": "primes",
      "limit": 2000,
      "stat": "adjacency",
      "index_k": 25,
      "offset": 2,
      "trials": 4000,
      "master_seed": 2026
    })");
    const auto r1 = run_cli("mc --spec '" + spec.string() + "'");
    REQUIRE(r1.exit_code == 0);
    const auto r2 = run_cli("mc --spec '" + spec.string() + "'");
    const auto r7 = run_cli("mc --spec '" + spec.string() + "' --threads 7");
    CHECK(r1.out == r2.out);
    CHECK(r1.out == r7.out);
    const json j = json::parse(r1.out);
    CHECK(j["spec"]["master_seed"] == 2026);
    CHECK(j["per_trial"].size() == 4000);

    const auto bad = scratch_file("bad.json");
    spit(bad, "{ not json");
    CHECK(run_cli("mc --spec '" + bad.string() + "'").exit_code == 3);
    CHECK(run_cli("mc --spec /nonexistent/spec.json").exit_code == 3);
}
