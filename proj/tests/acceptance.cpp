// Acceptance runner: one PASS/FAIL line per criterion. argv[1] is the CLI
// binary used by the determinism check.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "posdeg/posdeg.hpp"

using namespace posdeg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

KGraph graph_from_mask(Vertex n, std::uint64_t mask) {
    KGraph g(3, n);
    std::vector<Vertex> e{0, 1, 2};
    std::uint64_t bit = 0;
    do {
        if (mask >> bit & 1u) g = g.with_edge(e);
        ++bit;
    } while (next_colex(e, n));
    return g;
}

KGraph random_graph(Vertex n, double p, std::mt19937_64& rng) {
    std::bernoulli_distribution coin(p);
    KGraphBuilder b(3, n);
    std::vector<Vertex> e{0, 1, 2};
    do {
        if (coin(rng)) b.add_edge(e);
    } while (next_colex(e, n));
    return std::move(b).build();
}

Rational scale(Vertex n, int l) {
    BigInt den = 1;
    for (int i = 0; i < 3 - l; ++i) den *= n;
    Rational r(BigInt(static_cast<unsigned long>(factorial(3 - l))), den);
    r.canonicalize();
    return r;
}

Rational count(std::uint64_t c) { return Rational(BigInt(static_cast<unsigned long>(c))); }

StepHypergraphon pair_coordinate_w() {
    const std::vector<Rational> lengths{make_rational(1, 2), make_rational(1, 2)};
    const StepHypergraphon shape(3, lengths, std::vector<Rational>(64, Rational(0)));
    std::vector<Rational> table(64);
    for (std::size_t idx = 0; idx < 64; ++idx) {
        const auto a = shape.assignment_of(idx);
        table[idx] = (a[2] == 0 && a[4] == 0 && a[5] == 0) ? 1 : 0;
    }
    return StepHypergraphon(3, lengths, std::move(table));
}

Outcome oracle_equivalence() {
    const std::vector<std::vector<KGraph>> families{
        {KGraph::complete(3, 4)}, {KGraph::complete(3, 3)}, {KGraph(3, 6, {{0, 1, 2}, {3, 4, 5}})}};
    int checked = 0, bad = 0;
    for (const auto& family : families)
        for (int l = 0; l < 3; ++l)
            for (Vertex n = 4; n <= 6; ++n)
                for (auto mode : {Objective::positive_degree, Objective::min_degree}) {
                    SearchProblem p;
                    p.n = n;
                    p.k = 3;
                    p.l = l;
                    p.family = family;
                    p.mode = mode;
                    const auto a = search(p);
                    const auto b = brute_force(p);
                    checked += mode == Objective::positive_degree;
                    if (!a.exact || a.value != b.value) ++bad;
                }
    return {bad == 0, std::to_string(checked) + " instances in both modes, " + std::to_string(bad) + " mismatches"};
}

Outcome k4_worked_value() {
    SearchProblem p;
    p.n = 4;
    p.k = 3;
    p.l = 2;
    p.family = {KGraph::complete(3, 4)};
    const auto r = search(p);
    const std::string target = canonical_form(KGraph(3, 4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}}));
    bool witness = false;
    for (const auto& w : r.witnesses) witness |= canonical_form(w) == target;
    return {r.exact && r.value == 1 && witness,
            "value " + std::to_string(r.value) + (witness ? ", K4 minus an edge among witnesses" : ", witness missing")};
}

Outcome kk_bound() {
    std::uint64_t checked = 0, violations = 0;
    for (Vertex n = 3; n <= 5; ++n) {
        const std::uint64_t m = binom(n, 3);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            const KGraph g = graph_from_mask(n, mask);
            if (g.empty()) continue;
            for (int l = 0; l < 3; ++l, ++checked) violations += !check_kk(g, l).holds;
        }
    }
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<Vertex> size(3, 12);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    for (int t = 0; t < 100000; ++t) {
        const KGraph g = random_graph(size(rng), density(rng), rng);
        if (g.empty()) continue;
        for (int l = 0; l < 3; ++l, ++checked) violations += !check_kk(g, l).holds;
    }
    return {violations == 0, std::to_string(checked) + " checks, " + std::to_string(violations) + " violations"};
}

Outcome graph_densities() {
    std::mt19937_64 rng(77);
    int bad = 0;
    for (int t = 0; t < 100; ++t) {
        std::uniform_int_distribution<Vertex> fn(3, 4), gn(3, 6);
        const KGraph f = random_graph(fn(rng), 0.6, rng);
        const KGraph g = random_graph(gn(rng), 0.5, rng);
        if (density(f, from_graph(g)) != hom_density(f, g)) ++bad;
    }
    return {bad == 0, "100 pairs, " + std::to_string(bad) + " mismatches"};
}

Outcome degree_scaling() {
    std::uint64_t cells = 0, bad = 0;
    for (Vertex n = 3; n <= 5; ++n) {
        const std::uint64_t m = binom(n, 3);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            const KGraph g = graph_from_mask(n, mask);
            const auto w = from_graph(g);
            for (int l = 0; l < 3; ++l) {
                for (const auto& cell : all_cells(w.parts(), l)) {
                    std::vector<Vertex> roots;
                    for (int i = 0; i < l; ++i) roots.push_back(static_cast<Vertex>(cell.parts[(1u << i) - 1]));
                    std::sort(roots.begin(), roots.end());
                    const bool distinct = std::adjacent_find(roots.begin(), roots.end()) == roots.end();
                    const Rational expected = distinct ? count(degree(g, VertexSubset(roots))) * scale(n, l) : Rational(0);
                    ++cells;
                    bad += degree(w, cell) != expected;
                }
                bad += min_positive_degree(w, l) != count(min_positive_degree(g, l)) * scale(n, l);
            }
        }
    }
    return {bad == 0, std::to_string(cells) + " cells, " + std::to_string(bad) + " mismatches"};
}

Outcome degree_concentration() {
    const Vertex n = 200;
    const int trials = 50;
    const auto half = StepHypergraphon::constant(3, make_rational(1, 2));
    const auto zero = StepHypergraphon::constant(3, Rational(0));
    int inside = 0, nonempty_zero = 0;
    double lo = 1.0, hi = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = derive_seed(6, {static_cast<std::uint64_t>(t)});
        const double ratio = static_cast<double>(min_positive_degree(sample(n, half, seed), 2)) / (n - 2);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        inside += ratio >= 0.45 && ratio <= 0.55;
        const KGraph empty = sample(n, zero, seed);
        nonempty_zero += !empty.empty() || min_positive_degree(empty, 2) != 0;
    }
    std::ostringstream d;
    d << inside << "/" << trials << " trials in [0.45, 0.55] (observed range " << format_decimal(lo) << " .. "
      << format_decimal(hi) << "); zero hypergraphon: " << trials - nonempty_zero << "/" << trials << " empty";
    return {inside >= 45 && nonempty_zero == 0, d.str()};
}

Outcome density_convergence() {
    const auto est = estimate_containment(KGraph::complete(3, 3), pair_coordinate_w(), 100000, 7);
    const auto mc = mc_density(KGraph::complete(3, 3), directed_cycle_hypergraphon(), 100000, 7);
    const bool a = std::abs(est.mean - 0.125) <= 3 * est.std_error;
    const bool b = std::abs(mc.mean - 0.125) <= 3 * mc.std_error;
    std::ostringstream d;
    d << "pair W " << format_decimal(est.mean) << " +- " << format_decimal(est.std_error) << ", directed cycle "
      << format_decimal(mc.mean) << " +- " << format_decimal(mc.std_error);
    return {a && b, d.str()};
}

Outcome q_two_paths() {
    std::mt19937_64 rng(88);
    int checked = 0;
    bool ok = true;
    try {
        for (int rep = 0; rep < 8; ++rep) {
            const std::vector<Rational> lengths{make_rational(1, 3), make_rational(2, 3)};
            std::vector<Rational> table(64);
            for (auto& v : table) v = make_rational(static_cast<std::int64_t>(rng() % 5), 4);
            const auto w = symmetrize(StepHypergraphon(3, lengths, table));
            for (int l : {1, 2})
                for (int d = 1; d <= 4; ++d) {
                    std::vector<Rational> a;
                    for (int i = 0; i <= d; ++i) a.push_back(make_rational(static_cast<std::int64_t>(rng() % 9) - 4, 3));
                    const auto q = q_functional(w, Polynomial(a), l);
                    ok &= q.path_a == q.path_b;
                    ++checked;
                }
        }
    } catch (const std::logic_error&) {
        ok = false;
    }
    const auto q = q_functional(pair_coordinate_w(), Polynomial({Rational(0), Rational(0), Rational(1)}), 2);
    ok &= q.path_a == make_rational(1, 32) && q.path_b == make_rational(1, 32);
    return {ok, std::to_string(checked) + " random instances agree; pair W with x^2 gives " + to_string(q.path_a)};
}

Outcome penalty_pipeline() {
    const PenaltyParams params{make_rational(1, 5), make_rational(1, 2), make_rational(1, 10)};
    const auto fit = fit_penalty(PenaltyFunction(params));
    const auto report = check_penalty_properties(fit.polynomial, params);
    std::ostringstream d;
    d << "D = " << fit.degree << ", grid error " << format_decimal(fit.grid_error) << ", margins "
      << format_decimal(report.non_negative.margin) << " " << format_decimal(report.small.margin) << " "
      << format_decimal(report.large.margin);
    return {fit.grid_error <= 0.1 && report.all(), d.str()};
}

std::string run(const std::string& cmd) {
    std::string out;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return "<popen failed>";
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    out += "\n<exit " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + ">";
    return out;
}

Outcome determinism(const std::string& cli) {
    const fs::path dir = fs::temp_directory_path() / ("posdeg_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const auto k4 = (dir / "k4.txt").string();
    const auto edge = (dir / "edge.txt").string();
    const auto w = (dir / "pair.json").string();
    std::ofstream(k4) << "3 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n";
    std::ofstream(edge) << "3 3\n0 1 2\n";
    std::ofstream(w) << serialize_hypergraphon(pair_coordinate_w());
    const std::vector<std::string> runs{
        "solve --n 6 --k 3 --l 2 --mode positive --family " + k4,
        "solve --n 5 --k 3 --l 1 --mode min --family " + k4,
        "ratios --n-from 4 --n-to 6 --k 3 --l 2 --mode positive --family " + k4,
        "sample --n 40 --seed 11 --trials 20 --hypergraphon " + w + " --l 2",
        "sample --n 30 --seed 11 --hypergraphon builtin:directed-cycle",
        "converge --hypergraphon " + w + " --l 1 --n-list 20,40 --trials 6 --seed 3 --f " + edge,
        "penalty --eps 0.2 --delta 0.5 --beta 0.1",
        "kk-check --graph " + k4 + " --graph " + edge + " --l 1",
        "density --f " + edge + " --hypergraphon " + w,
    };
    int differing = 0;
    for (const auto& args : runs) {
        const std::string base = run(cli + " --jobs 1 " + args);
        if (run(cli + " --jobs 1 " + args) != base || run(cli + " --jobs 8 " + args) != base) {
            ++differing;
            std::cerr << "differs: " << args << "\n";
        }
    }
    fs::remove_all(dir);
    return {differing == 0, std::to_string(runs.size()) + " runs repeated at --jobs 1 and 8, " +
                                std::to_string(differing) + " differ"};
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path to posdeg>\n";
        return 1;
    }
    const std::string cli = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"search equals brute force on the small grid", oracle_equivalence},
        {"positive 2-degree extremal value for K4 on 4 vertices", k4_worked_value},
        {"edge lower bound from the maximum positive degree", kk_bound},
        {"step hypergraphon of G reproduces hom densities", graph_densities},
        {"degree scaling for step hypergraphons of graphs", degree_scaling},
        {"minimum positive 2-degree concentrates for W = 1/2 at n = 200", degree_concentration},
        {"edge density estimates for pair-coordinate and directed-cycle W", density_convergence},
        {"Q functional agrees along both exact paths", q_two_paths},
        {"penalty polynomial fit and properties", penalty_pipeline},
        {"CLI output independent of repetition and --jobs", [&] { return determinism(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("AC%zu %s  %s: %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
