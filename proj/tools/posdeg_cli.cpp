#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "posdeg/posdeg.hpp"

namespace {

using namespace posdeg;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitBudget = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Subcommand, parameters in declaration order, and input digests. Printed at
// the head of every output.
class Manifest {
public:
    explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    void param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }
    void param(const std::string& key, std::int64_t value) { param(key, std::to_string(value)); }

    std::string input(const std::string& key, const std::string& path) {
        std::string bytes = read_file(path);
        inputs_.emplace_back(key, fnv1a(bytes));
        return bytes;
    }

    std::string comment_block() const {
        std::string out = "# posdeg " + std::string(kVersion) + " " + subcommand_ + "\n";
        for (const auto& [k, v] : params_) out += "# " + k + " = " + v + "\n";
        for (const auto& [k, v] : inputs_) out += "# digest " + k + " = fnv1a:" + v + "\n";
        return out;
    }

    ordered_json json() const {
        ordered_json m;
        m["tool"] = "posdeg";
        m["version"] = kVersion;
        m["subcommand"] = subcommand_;
        ordered_json params = ordered_json::object();
        for (const auto& [k, v] : params_) params[k] = v;
        m["parameters"] = params;
        ordered_json digests = ordered_json::object();
        for (const auto& [k, v] : inputs_) digests[k] = "fnv1a:" + v;
        m["digests"] = digests;
        return m;
    }

private:
    std::string subcommand_;
    std::vector<std::pair<std::string, std::string>> params_;
    std::vector<std::pair<std::string, std::string>> inputs_;
};

ordered_json decimal(double x) { return ordered_json::parse(format_decimal(x)); }

void emit_json(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

Objective parse_mode(const std::string& mode) {
    if (mode == "positive") return Objective::positive_degree;
    if (mode == "min") return Objective::min_degree;
    throw InputError("mode must be 'positive' or 'min'");
}

// --hypergraphon values: a JSON file, builtin:directed-cycle, or const:p.
Hypergraphon load_hypergraphon(Manifest& manifest, const std::string& spec, std::optional<int> k) {
    manifest.param("hypergraphon", spec);
    if (spec == "builtin:directed-cycle") return directed_cycle_hypergraphon();
    if (spec.rfind("const:", 0) == 0) {
        if (!k) throw InputError("const:p needs --k");
        manifest.param("k", *k);
        const Rational p = parse_rational(spec.substr(6));
        return StepHypergraphon::constant(*k, p);
    }
    return parse_hypergraphon(manifest.input("hypergraphon", spec));
}

StepHypergraphon load_step(Manifest& manifest, const std::string& spec, std::optional<int> k) {
    auto w = load_hypergraphon(manifest, spec, k);
    if (auto* step = std::get_if<StepHypergraphon>(&w)) return std::move(*step);
    throw InputError("this subcommand needs a step hypergraphon");
}

struct Options {
    unsigned jobs = 1;

    std::string graph, f_path, g_path, family_path, hypergraphon, witnesses_dir, mode;
    std::vector<std::string> graphs, f_list;
    std::optional<int> k;
    int l = -1;
    Vertex n = 0, n_from = 0, n_to = 0;
    std::vector<Vertex> n_list;
    std::uint64_t seed = 0, trials = 1, budget_nodes = 0;
    double budget_seconds = 0.0;
    bool timing = false;
    std::string eps, delta, beta;
    int degree = 0;
    bool coefficients = false;
    std::optional<bool> strict;
    std::string file;
};

int cmd_delta(const Options& o) {
    Manifest m("delta");
    const KGraph g = parse_graph(m.input("graph", o.graph));
    m.param("l", o.l);
    m.param("mode", o.mode);
    const auto mode = parse_mode(o.mode);
    std::cout << m.comment_block() << objective_value(g, o.l, mode) << "\n";
    return kExitOk;
}

int cmd_density(const Options& o) {
    Manifest m("density");
    const KGraph f = parse_graph(m.input("f", o.f_path));
    Rational t;
    if (!o.g_path.empty()) {
        t = hom_density(f, parse_graph(m.input("g", o.g_path)));
    } else if (!o.hypergraphon.empty()) {
        t = density(f, load_step(m, o.hypergraphon, o.k));
    } else {
        throw InputError("density needs --g or --hypergraphon");
    }
    std::cout << m.comment_block() << to_string(t) << "\n" << format_decimal(to_double(t)) << "\n";
    return kExitOk;
}

SearchProblem make_problem(Manifest& m, const Options& o) {
    SearchProblem p;
    p.k = *o.k;
    p.l = o.l;
    p.mode = parse_mode(o.mode);
    m.param("k", p.k);
    m.param("l", p.l);
    m.param("mode", o.mode);
    if (!o.family_path.empty()) p.family = parse_family(m.input("family", o.family_path));
    p.budget.max_nodes = o.budget_nodes;
    p.budget.max_seconds = o.budget_seconds;
    m.param("budget_nodes", std::to_string(o.budget_nodes));
    m.param("budget_seconds", format_decimal(o.budget_seconds));
    return p;
}

int cmd_solve(const Options& o) {
    Manifest m("solve");
    m.param("n", o.n);
    SearchProblem p = make_problem(m, o);
    p.n = o.n;
    const SearchResult r = search(p);
    ordered_json out;
    out["manifest"] = m.json();
    out["value"] = r.value;
    out["exact"] = r.exact;
    out["stats"] = {{"nodes", r.stats.nodes}, {"prunes", r.stats.prunes}};
    if (o.timing) out["stats"]["seconds"] = decimal(r.stats.seconds);
    out["witness_count"] = r.witnesses.size();
    if (!o.witnesses_dir.empty()) {
        std::filesystem::create_directories(o.witnesses_dir);
        for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
            std::ofstream file(std::filesystem::path(o.witnesses_dir) / ("witness_" + std::to_string(i) + ".txt"));
            file << serialize_graph(r.witnesses[i]);
            if (!file) throw InputError("cannot write witness files to " + o.witnesses_dir);
        }
    }
    emit_json(out);
    return r.exact ? kExitOk : kExitBudget;
}

int cmd_ratios(const Options& o) {
    Manifest m("ratios");
    m.param("n_from", o.n_from);
    m.param("n_to", o.n_to);
    SearchProblem p = make_problem(m, o);
    if (o.n_from > o.n_to) throw InputError("--n-from exceeds --n-to");
    std::vector<RatioRow> rows(o.n_to - o.n_from + 1);
    parallel_for(rows.size(), o.jobs, [&](std::size_t i) {
        const Vertex n = o.n_from + static_cast<Vertex>(i);
        rows[i] = ratio_table(p, n, n).front();
    });
    std::string out = m.comment_block() + "n,value,ratio,ratio_dec,exact\n";
    bool exact = true;
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.value) + "," + to_string(r.ratio) + "," +
               format_decimal(to_double(r.ratio)) + "," + (r.exact ? "true" : "false") + "\n";
        exact &= r.exact;
    }
    std::cout << out;
    return exact ? kExitOk : kExitBudget;
}

int cmd_sample(const Options& o) {
    Manifest m("sample");
    m.param("n", o.n);
    m.param("seed", std::to_string(o.seed));
    m.param("trials", std::to_string(o.trials));
    const Hypergraphon w = load_hypergraphon(m, o.hypergraphon, o.k);
    if (o.trials < 1) throw InputError("--trials must be at least 1");
    if (o.trials == 1) {
        std::cout << m.comment_block() << serialize_graph(sample(o.n, w, o.seed));
        return kExitOk;
    }
    if (o.l >= 0) m.param("l", o.l);
    // Trial t uses seed derive_seed(seed, {t}).
    std::vector<std::string> lines(o.trials);
    parallel_for(lines.size(), o.jobs, [&](std::size_t t) {
        const std::uint64_t s = derive_seed(o.seed, {t});
        const KGraph g = sample(o.n, w, s);
        std::string line = std::to_string(t) + "," + std::to_string(s) + "," + std::to_string(g.edge_count());
        if (o.l >= 0)
            line += "," + std::to_string(min_positive_degree(g, o.l)) + "," + std::to_string(min_degree(g, o.l));
        lines[t] = line + "\n";
    });
    std::cout << m.comment_block() << "trial,seed,edges" << (o.l >= 0 ? ",delta_plus,delta" : "") << "\n";
    for (const auto& line : lines) std::cout << line;
    return kExitOk;
}

int cmd_converge(const Options& o) {
    Manifest m("converge");
    const StepHypergraphon w = load_step(m, o.hypergraphon, o.k);
    ConvergenceConfig c;
    c.l = o.l;
    c.n_list = o.n_list;
    c.trials = o.trials;
    c.seed = o.seed;
    c.jobs = o.jobs;
    m.param("l", o.l);
    std::string ns;
    for (auto n : o.n_list) ns += (ns.empty() ? "" : ",") + std::to_string(n);
    m.param("n_list", ns);
    m.param("trials", std::to_string(o.trials));
    m.param("seed", std::to_string(o.seed));
    for (std::size_t i = 0; i < o.f_list.size(); ++i)
        c.f_list.push_back(parse_graph(m.input("F" + std::to_string(i), o.f_list[i])));
    const auto report = convergence_experiment(w, c);
    std::cout << m.comment_block() << convergence_csv(report, c.f_list.size());
    return kExitOk;
}

int cmd_kk_check(const Options& o) {
    Manifest m("kk-check");
    m.param("l", o.l);
    std::vector<KGraph> graphs;
    for (std::size_t i = 0; i < o.graphs.size(); ++i)
        graphs.push_back(parse_graph(m.input("graph" + std::to_string(i), o.graphs[i])));
    std::cout << ordered_json{{"manifest", m.json()}}.dump() << "\n";
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const KKReport r = check_kk(graphs[i], o.l);
        ordered_json line;
        line["graph"] = o.graphs[i];
        line["gamma_max"] = decimal(r.gamma_max);
        line["bound"] = decimal(r.bound);
        line["edges"] = r.edges;
        line["holds"] = r.holds;
        std::cout << line.dump() << "\n";
    }
    return kExitOk;
}

int cmd_penalty(const Options& o) {
    Manifest m("penalty");
    PenaltyParams params{parse_rational(o.eps), parse_rational(o.delta), parse_rational(o.beta)};
    m.param("eps", to_string(params.eps));
    m.param("delta", to_string(params.delta));
    m.param("beta", to_string(params.beta));
    const PenaltyFunction f(params);
    std::optional<Polynomial> poly;
    int degree;
    double grid_error, interval_error;
    if (o.degree > 0) {
        m.param("degree", o.degree);
        poly = bernstein_approx(f, o.degree);
        degree = o.degree;
        grid_error = grid_sup_error(*poly, f);
        interval_error = grid_error + f.lipschitz() / kDefaultGridPoints;
    } else {
        auto fit = fit_penalty(f);
        degree = fit.degree;
        grid_error = fit.grid_error;
        interval_error = fit.interval_error;
        poly = std::move(fit.polynomial);
    }
    const auto report = check_penalty_properties(*poly, params);
    ordered_json out;
    out["manifest"] = m.json();
    out["degree"] = degree;
    out["grid_points"] = kDefaultGridPoints + 1;
    out["grid_error"] = decimal(grid_error);
    out["interval_error"] = decimal(interval_error);
    out["within_beta"] = grid_error <= to_double(params.beta);
    auto prop = [](const PropertyCheck& c) { return ordered_json{{"passed", c.passed}, {"margin", decimal(c.margin)}}; };
    out["properties"] = {{"non_negative", prop(report.non_negative)},
                         {"small", prop(report.small)},
                         {"large", prop(report.large)}};
    if (o.coefficients) {
        auto& a = out["coefficients"] = ordered_json::array();
        for (const auto& c : poly->coefficients()) a.push_back(to_string(c));
    }
    emit_json(out);
    return kExitOk;
}

int cmd_validate(const Options& o) {
    Manifest m("hypergraphon-validate");
    const std::string text = m.input("file", o.file);
    ordered_json out;
    out["manifest"] = m.json();
    try {
        const auto w = parse_hypergraphon(text, o.strict);
        out["valid"] = true;
        out["k"] = w.k();
        out["parts"] = w.parts();
        out["edge_density"] = to_string(density(KGraph::complete(w.k(), static_cast<Vertex>(w.k())), w));
    } catch (const InputError& e) {
        out["valid"] = false;
        out["error"] = e.what();
        emit_json(out);
        return kExitInput;
    }
    emit_json(out);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Positive l-degree Turan toolkit for k-uniform hypergraphs"};
    app.set_version_flag("--version", std::string(posdeg::kVersion));
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--jobs", o.jobs, "Worker threads (output does not depend on it)")->check(CLI::Range(1u, 1024u));

    auto* delta = app.add_subcommand("delta", "Minimum positive or plain l-degree of a graph");
    delta->add_option("--graph", o.graph, "Graph file")->required();
    delta->add_option("--l", o.l, "Degree level l")->required();
    delta->add_option("--mode", o.mode, "positive | min")->required();

    auto* dens = app.add_subcommand("density", "Homomorphism density t(F,G) or t(F,W)");
    dens->add_option("--f", o.f_path, "Graph F")->required();
    dens->add_option("--g", o.g_path, "Graph G");
    dens->add_option("--hypergraphon", o.hypergraphon, "Step hypergraphon: file or const:p");
    dens->add_option("--k", o.k, "Uniformity for const:p");

    auto add_search_flags = [&](CLI::App* sub) {
        sub->add_option("--k", o.k, "Uniformity")->required();
        sub->add_option("--l", o.l, "Degree level l")->required();
        sub->add_option("--mode", o.mode, "positive | min")->required();
        sub->add_option("--family", o.family_path, "Forbidden family file (graphs separated by ---)");
        sub->add_option("--budget-nodes", o.budget_nodes, "Node budget, 0 = unlimited");
        sub->add_option("--budget-seconds", o.budget_seconds, "Wall-clock budget, 0 = unlimited");
    };
    auto* solve = app.add_subcommand("solve", "Exact co+ex_l(n,F) or co-ex_l(n,F) with witnesses (JSON)");
    solve->add_option("--n", o.n, "Vertex count")->required();
    add_search_flags(solve);
    solve->add_option("--witnesses", o.witnesses_dir, "Directory for witness graph files");
    solve->add_flag("--timing", o.timing, "Include wall-clock seconds in stats");

    auto* ratios = app.add_subcommand("ratios", "Normalised extremal values over a range of n (CSV: n,value,ratio,ratio_dec,exact)");
    ratios->add_option("--n-from", o.n_from, "First n")->required();
    ratios->add_option("--n-to", o.n_to, "Last n")->required();
    add_search_flags(ratios);

    auto* samp = app.add_subcommand("sample", "Draw G(n,W): one graph as text, or a CSV of trial,seed,edges[,delta_plus,delta]");
    samp->add_option("--n", o.n, "Vertex count")->required();
    samp->add_option("--seed", o.seed, "Seed")->required();
    samp->add_option("--trials", o.trials, "Number of samples");
    samp->add_option("--hypergraphon", o.hypergraphon, "File, builtin:directed-cycle or const:p")->required();
    samp->add_option("--k", o.k, "Uniformity for const:p");
    samp->add_option("--l", o.l, "Report l-degrees in multi-trial CSV");

    auto* conv = app.add_subcommand(
        "converge",
        "Sampled minimum degrees against hypergraphon values. CSV columns: kind,n,trial,seed,delta_plus,delta,"
        "pos_ratio,pos_ratio_dec,min_ratio,min_ratio_dec,t_F<i>,t_F<i>_dec. kind is trial, mean, min, max or "
        "reference; ratios divide by C(n-l,k-l); the reference row holds the hypergraphon's minimum positive "
        "degree, minimum degree and densities");
    conv->add_option("--hypergraphon", o.hypergraphon, "Step hypergraphon: file or const:p")->required();
    conv->add_option("--k", o.k, "Uniformity for const:p");
    conv->add_option("--l", o.l, "Degree level l")->required();
    conv->add_option("--n-list", o.n_list, "Ascending sample sizes")->required()->delimiter(',');
    conv->add_option("--trials", o.trials, "Trials per n")->required();
    conv->add_option("--seed", o.seed, "Seed")->required();
    conv->add_option("--f", o.f_list, "Graphs F whose densities are tracked");

    auto* kk = app.add_subcommand("kk-check", "Edge-count lower bound check, one JSON object per graph");
    kk->add_option("--graph", o.graphs, "Graph files")->required();
    kk->add_option("--l", o.l, "Degree level l")->required();

    auto* pen = app.add_subcommand("penalty", "Bernstein approximation of the penalty function and its properties (JSON)");
    pen->add_option("--eps", o.eps, "eps")->required();
    pen->add_option("--delta", o.delta, "delta")->required();
    pen->add_option("--beta", o.beta, "beta")->required();
    pen->add_option("--degree", o.degree, "Fixed degree D instead of the doubling search");
    pen->add_flag("--coefficients", o.coefficients, "Include exact monomial coefficients");

    auto* val = app.add_subcommand("hypergraphon-validate", "Load and check a step hypergraphon file (JSON)");
    val->add_option("--file", o.file, "Hypergraphon file")->required();
    val->add_flag("--strict,!--no-strict", o.strict, "Override the file's strict flag");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*delta) return cmd_delta(o);
        if (*dens) return cmd_density(o);
        if (*solve) return cmd_solve(o);
        if (*ratios) return cmd_ratios(o);
        if (*samp) return cmd_sample(o);
        if (*conv) return cmd_converge(o);
        if (*kk) return cmd_kk_check(o);
        if (*pen) return cmd_penalty(o);
        if (*val) return cmd_validate(o);
    } catch (const posdeg::BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const posdeg::DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
