#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "posdeg/combinatorics.hpp"
#include "posdeg/kgraph.hpp"
#include "posdeg/labelled.hpp"
#include "posdeg/parallel.hpp"
#include "posdeg/rational.hpp"
#include "posdeg/rng.hpp"
#include "posdeg/sampler.hpp"
#include "posdeg/step_hypergraphon.hpp"

namespace posdeg {

// ---------------------------------------------------------------------------
// Penalty function

struct PenaltyParams {
    Rational eps;
    Rational delta;
    Rational beta;

    /// Requires 0 < beta <= eps/2, eps < delta/2 and delta <= 1.
    void validate() const {
        if (!(beta > 0)) throw InputError("beta must be positive");
        if (beta > eps / 2) throw InputError("beta must not exceed eps/2");
        if (!(eps < delta / 2)) throw InputError("eps must be below delta/2");
        if (delta > 1) throw InputError("delta must be at most 1");
    }
};

/// The piecewise linear L through (0,b), (e,1+b), (d-e,1+b), (d-e/2,b), (1,b).
class PenaltyFunction {
public:
    explicit PenaltyFunction(const PenaltyParams& params) : params_(params) {
        params.validate();
        const Rational& e = params.eps;
        const Rational& d = params.delta;
        const Rational& b = params.beta;
        xs_ = {Rational(0), e, d - e, d - e / 2, Rational(1)};
        ys_ = {b, 1 + b, 1 + b, b, b};
        for (auto& x : xs_) xd_.push_back(to_double(x));
        for (auto& y : ys_) yd_.push_back(to_double(y));
    }

    const PenaltyParams& params() const noexcept { return params_; }
    const std::vector<Rational>& breakpoints_x() const noexcept { return xs_; }
    const std::vector<Rational>& breakpoints_y() const noexcept { return ys_; }

    Rational operator()(const Rational& x) const {
        if (x < 0 || x > 1) throw InputError("penalty function is defined on [0,1]");
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
            if (x <= xs_[i + 1]) {
                if (xs_[i + 1] == xs_[i]) return ys_[i + 1];
                return ys_[i] + (ys_[i + 1] - ys_[i]) * (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
            }
        }
        return ys_.back();
    }

    double operator()(double x) const {
        for (std::size_t i = 0; i + 1 < xd_.size(); ++i)
            if (x <= xd_[i + 1]) {
                if (xd_[i + 1] == xd_[i]) return yd_[i + 1];
                return yd_[i] + (yd_[i + 1] - yd_[i]) * (x - xd_[i]) / (xd_[i + 1] - xd_[i]);
            }
        return yd_.back();
    }

    /// Largest slope magnitude, 2/eps (the falling segment of width eps/2).
    double lipschitz() const { return 2.0 / to_double(params_.eps); }

private:
    PenaltyParams params_;
    std::vector<Rational> xs_, ys_;
    std::vector<double> xd_, yd_;
};

// ---------------------------------------------------------------------------
// Polynomials

/// A real polynomial with exact rational coefficients, kept in the
/// Bernstein basis of its degree for numerically stable evaluation.
class Polynomial {
public:
    /// From monomial coefficients a_0..a_D.
    explicit Polynomial(std::vector<Rational> monomial) {
        if (monomial.empty()) monomial.push_back(0);
        const std::size_t d = monomial.size() - 1;
        // b_i = sum_{j<=i} C(i,j)/C(D,j) a_j
        control_.assign(d + 1, Rational(0));
        for (std::size_t i = 0; i <= d; ++i)
            for (std::size_t j = 0; j <= i; ++j) control_[i] += big_binom(i, j) * monomial[j] / big_binom(d, j);
        init_logs();
    }

    /// From Bernstein control values c_0..c_D.
    static Polynomial from_bernstein(std::vector<Rational> control) {
        Polynomial p;
        p.control_ = std::move(control);
        if (p.control_.empty()) p.control_.push_back(0);
        p.init_logs();
        return p;
    }

    int degree() const { return static_cast<int>(control_.size()) - 1; }
    const std::vector<Rational>& bernstein() const noexcept { return control_; }

    /// Monomial coefficients a_0..a_D:
    /// a_j = C(D,j) sum_{i<=j} (-1)^(j-i) C(j,i) c_i.
    std::vector<Rational> coefficients() const {
        const std::size_t d = control_.size() - 1;
        std::vector<Rational> a(d + 1);
        for (std::size_t j = 0; j <= d; ++j) {
            Rational s = 0;
            for (std::size_t i = 0; i <= j; ++i) {
                Rational term = big_binom(j, i) * control_[i];
                if ((j - i) % 2) s -= term;
                else s += term;
            }
            a[j] = big_binom(d, j) * s;
        }
        return a;
    }

    /// Exact value at a rational point (Horner on the monomial form).
    Rational operator()(const Rational& x) const {
        auto a = coefficients();
        Rational v = 0;
        for (auto it = a.rbegin(); it != a.rend(); ++it) v = v * x + *it;
        return v;
    }

    /// Value at x in [0,1], summing control values against Bernstein basis
    /// weights computed in log space.
    double operator()(double x) const {
        const std::size_t d = control_.size() - 1;
        if (x <= 0.0) return cd_.front();
        if (x >= 1.0) return cd_.back();
        const double lx = std::log(x), l1x = std::log1p(-x);
        double sum = 0.0;
        for (std::size_t i = 0; i <= d; ++i)
            sum += cd_[i] * std::exp(log_binom_[i] + static_cast<double>(i) * lx + static_cast<double>(d - i) * l1x);
        return sum;
    }

private:
    Polynomial() = default;

    static BigInt big_binom(std::size_t n, std::size_t r) {
        BigInt out;
        mpz_bin_uiui(out.get_mpz_t(), n, r);
        return out;
    }

    void init_logs() {
        const std::size_t d = control_.size() - 1;
        cd_.clear();
        log_binom_.clear();
        for (const auto& c : control_) cd_.push_back(to_double(c));
        for (std::size_t i = 0; i <= d; ++i)
            log_binom_.push_back(std::lgamma(d + 1.0) - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(d - i) + 1.0));
    }

    std::vector<Rational> control_;
    std::vector<double> cd_, log_binom_;
};

/// Bernstein polynomial of L of degree D: sum_i L(i/D) C(D,i) x^i (1-x)^(D-i),
/// with exact rational control values L(i/D).
inline Polynomial bernstein_approx(const PenaltyFunction& f, int degree) {
    if (degree < 1) throw InputError("Bernstein degree must be at least 1");
    std::vector<Rational> control;
    for (int i = 0; i <= degree; ++i) control.push_back(f(make_rational(i, degree)));
    return Polynomial::from_bernstein(std::move(control));
}

/// Generic variant for any exact function on [0,1].
template <class Fn>
Polynomial bernstein_approx_of(Fn&& f, int degree) {
    if (degree < 1) throw InputError("Bernstein degree must be at least 1");
    std::vector<Rational> control;
    for (int i = 0; i <= degree; ++i) control.push_back(f(make_rational(i, degree)));
    return Polynomial::from_bernstein(std::move(control));
}

inline constexpr int kDefaultGridPoints = 10'000;

/// max_j |p(x_j) - L(x_j)| on x_j = j/grid, j = 0..grid.
inline double grid_sup_error(const Polynomial& p, const PenaltyFunction& f, int grid = kDefaultGridPoints) {
    double worst = 0.0;
    for (int j = 0; j <= grid; ++j) {
        const double x = static_cast<double>(j) / grid;
        worst = std::max(worst, std::abs(p(x) - f(x)));
    }
    return worst;
}

struct BernsteinFit {
    Polynomial polynomial;
    int degree;
    double grid_error;
    /// grid_error + lipschitz * spacing: a bound on sup |p-L| over [0,1],
    /// since both p and L are lipschitz()-Lipschitz.
    double interval_error;
};

/// Doubles D from 1 until the grid sup-error is at most beta.
inline BernsteinFit fit_penalty(const PenaltyFunction& f, int max_degree = 1 << 14, int grid = kDefaultGridPoints) {
    const double target = to_double(f.params().beta);
    for (int d = 1; d <= max_degree; d *= 2) {
        Polynomial p = bernstein_approx(f, d);
        const double err = grid_sup_error(p, f, grid);
        if (err <= target) return {std::move(p), d, err, err + f.lipschitz() / grid};
    }
    throw BudgetError("no Bernstein degree up to " + std::to_string(max_degree) + " reaches error beta");
}

struct PropertyCheck {
    bool passed = false;
    double margin = 0.0;  ///< >= 0 when the property holds on the grid
};

struct PenaltyReport {
    PropertyCheck non_negative;  ///< p >= 0 on [0,1]
    PropertyCheck small;         ///< p <= 2 beta on {0} and [delta - eps/2, 1]
    PropertyCheck large;         ///< p >= 1 on [eps, delta - eps]
    bool all() const { return non_negative.passed && small.passed && large.passed; }
};

/// Checks the three penalty-polynomial properties on grids of the ranges.
inline PenaltyReport check_penalty_properties(const Polynomial& p, const PenaltyParams& params,
                                              int grid = kDefaultGridPoints, double slack = 1e-12) {
    params.validate();
    const double e = to_double(params.eps), d = to_double(params.delta), b = to_double(params.beta);
    auto over = [&](double lo, double hi, auto&& fold, double init) {
        double acc = init;
        for (int j = 0; j <= grid; ++j) acc = fold(acc, p(lo + (hi - lo) * j / grid));
        return acc;
    };
    auto mn = [](double a, double v) { return std::min(a, v); };
    auto mx = [](double a, double v) { return std::max(a, v); };
    PenaltyReport r;
    r.non_negative.margin = over(0.0, 1.0, mn, std::numeric_limits<double>::infinity());
    r.non_negative.passed = r.non_negative.margin >= -slack;
    const double small_max = std::max(p(0.0), over(d - e / 2, 1.0, mx, -std::numeric_limits<double>::infinity()));
    r.small.margin = 2 * b - small_max;
    r.small.passed = r.small.margin >= -slack;
    r.large.margin = over(e, d - e, mn, std::numeric_limits<double>::infinity()) - 1.0;
    r.large.passed = r.large.margin >= -slack;
    return r;
}

// ---------------------------------------------------------------------------
// Q functional

struct QValue {
    Rational path_a;  ///< sum over cells of measure * p(deg_W(cell))
    Rational path_b;  ///< a_0 + sum_i a_i t(unlabelled i-th edge power, W)
};

/// Q_W = integral of p(deg_W(x)) over x, computed along two independent
/// exact routes. A disagreement is a bug, reported as std::logic_error.
inline QValue q_functional(const StepHypergraphon& w, const Polynomial& p, int l,
                           const IntegrationOptions& options = {}) {
    if (l < 0 || l >= w.k()) throw InputError("l must satisfy 0 <= l <= k-1");
    QValue q;
    for (const auto& cell : all_cells(w.parts(), l)) q.path_a += cell_measure(w, cell) * p(degree(w, cell));
    const auto a = p.coefficients();
    q.path_b = a[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        q.path_b += a[i] * density(unlabel(edge_power(w.k(), l, static_cast<int>(i))), w, options);
    }
    if (q.path_a != q.path_b)
        throw std::logic_error("Q functional paths disagree: " + to_string(q.path_a) + " vs " + to_string(q.path_b));
    return q;
}

// ---------------------------------------------------------------------------
// Convergence experiments

struct ConvergenceConfig {
    int l = 0;
    std::vector<Vertex> n_list;
    std::uint64_t trials = 1;
    std::uint64_t seed = 0;
    std::vector<KGraph> f_list;
    unsigned jobs = 1;
};

struct TrialRow {
    Vertex n = 0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t delta_plus = 0;
    std::uint64_t delta = 0;
    Rational pos_ratio;  ///< delta_plus / C(n-l, k-l)
    Rational min_ratio;  ///< delta / C(n-l, k-l)
    std::vector<Rational> densities;
};

struct SummaryRow {
    Vertex n = 0;
    Rational pos_mean, pos_min, pos_max;
    Rational min_mean, min_min, min_max;
};

struct ConvergenceReport {
    std::vector<TrialRow> trials;
    std::vector<SummaryRow> summaries;
    Rational reference_pos;   ///< min_positive_degree(W, l)
    Rational reference_min;   ///< min_degree(W, l)
    std::vector<Rational> reference_densities;
};

/// Samples G(n,W) for each n and trial (seed derived from (seed, n, trial))
/// and records normalised minimum degrees and densities.
inline ConvergenceReport convergence_experiment(const StepHypergraphon& w, const ConvergenceConfig& config) {
    const int k = w.k(), l = config.l;
    if (l < 0 || l >= k) throw InputError("l must satisfy 0 <= l <= k-1");
    if (config.trials < 1) throw InputError("need at least one trial");
    if (!std::is_sorted(config.n_list.begin(), config.n_list.end())) throw InputError("n_list must be ascending");
    for (auto n : config.n_list)
        if (n < static_cast<Vertex>(k)) throw InputError("every n must be at least k");
    for (const auto& f : config.f_list)
        if (f.k() != k) throw InputError("F list uniformity mismatch");

    ConvergenceReport report;
    const std::size_t per_n = static_cast<std::size_t>(config.trials);
    report.trials.resize(config.n_list.size() * per_n);
    parallel_for(report.trials.size(), config.jobs, [&](std::size_t idx) {
        const Vertex n = config.n_list[idx / per_n];
        const std::uint64_t t = idx % per_n;
        TrialRow row;
        row.n = n;
        row.trial = t;
        row.seed = derive_seed(config.seed, {n, t});
        const KGraph g = sample(n, w, row.seed);
        row.delta_plus = min_positive_degree(g, l);
        row.delta = min_degree(g, l);
        const BigInt norm = static_cast<unsigned long>(binom(n - l, k - l));
        row.pos_ratio = Rational(BigInt(static_cast<unsigned long>(row.delta_plus)), norm);
        row.pos_ratio.canonicalize();
        row.min_ratio = Rational(BigInt(static_cast<unsigned long>(row.delta)), norm);
        row.min_ratio.canonicalize();
        for (const auto& f : config.f_list) row.densities.push_back(hom_density(f, g));
        report.trials[idx] = std::move(row);
    });

    for (std::size_t i = 0; i < config.n_list.size(); ++i) {
        SummaryRow s;
        s.n = config.n_list[i];
        for (std::size_t t = 0; t < per_n; ++t) {
            const auto& r = report.trials[i * per_n + t];
            s.pos_mean += r.pos_ratio;
            s.min_mean += r.min_ratio;
            if (t == 0 || r.pos_ratio < s.pos_min) s.pos_min = r.pos_ratio;
            if (t == 0 || r.pos_ratio > s.pos_max) s.pos_max = r.pos_ratio;
            if (t == 0 || r.min_ratio < s.min_min) s.min_min = r.min_ratio;
            if (t == 0 || r.min_ratio > s.min_max) s.min_max = r.min_ratio;
        }
        s.pos_mean /= Rational(static_cast<unsigned long>(per_n));
        s.min_mean /= Rational(static_cast<unsigned long>(per_n));
        report.summaries.push_back(std::move(s));
    }
    report.reference_pos = min_positive_degree(w, l);
    report.reference_min = min_degree(w, l);
    for (const auto& f : config.f_list) report.reference_densities.push_back(density(f, w));
    return report;
}

/// CSV with columns
///   kind,n,trial,seed,delta_plus,delta,pos_ratio,pos_ratio_dec,min_ratio,min_ratio_dec,t_F0,t_F0_dec,...
/// kind is one of trial, mean, min, max (per-n summaries) or reference
/// (hypergraphon values: min positive degree, min degree, densities).
inline std::string convergence_csv(const ConvergenceReport& report, std::size_t f_count) {
    std::string out = "kind,n,trial,seed,delta_plus,delta,pos_ratio,pos_ratio_dec,min_ratio,min_ratio_dec";
    for (std::size_t i = 0; i < f_count; ++i)
        out += ",t_F" + std::to_string(i) + ",t_F" + std::to_string(i) + "_dec";
    out += '\n';
    auto rat = [](const Rational& r) { return to_string(r) + "," + format_decimal(to_double(r)); };
    for (const auto& r : report.trials) {
        out += "trial," + std::to_string(r.n) + "," + std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
               std::to_string(r.delta_plus) + "," + std::to_string(r.delta) + "," + rat(r.pos_ratio) + "," + rat(r.min_ratio);
        for (const auto& d : r.densities) out += "," + rat(d);
        out += '\n';
    }
    const std::string blanks_f = [&] {
        std::string s;
        for (std::size_t i = 0; i < f_count; ++i) s += ",,";
        return s;
    }();
    for (const auto& s : report.summaries) {
        const std::string n = std::to_string(s.n);
        out += "mean," + n + ",,,,," + rat(s.pos_mean) + "," + rat(s.min_mean) + blanks_f + "\n";
        out += "min," + n + ",,,,," + rat(s.pos_min) + "," + rat(s.min_min) + blanks_f + "\n";
        out += "max," + n + ",,,,," + rat(s.pos_max) + "," + rat(s.min_max) + blanks_f + "\n";
    }
    out += "reference,,,,,," + rat(report.reference_pos) + "," + rat(report.reference_min);
    for (const auto& d : report.reference_densities) out += "," + rat(d);
    out += '\n';
    return out;
}

} // namespace posdeg
