#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "posdeg/kgraph.hpp"
#include "posdeg/rng.hpp"
#include "posdeg/step_hypergraphon.hpp"

namespace posdeg {

/// A k-hypergraphon given by an evaluation callback on [0,1]^{r<[k]}
/// (coordinate of mask A at position A-1). The callback must be symmetric.
struct AnalyticHypergraphon {
    int k = 3;
    std::function<double(std::span<const double>)> eval;
    std::string name;
};

/// The directed-cycle 3-hypergraphon: 1 when, with the vertices ordered by
/// their singleton coordinates a < b < c, the pair coordinates satisfy
/// x_ab, x_bc in [0,1/2] and x_ac in (1/2,1]; 0 otherwise (ties included).
inline AnalyticHypergraphon directed_cycle_hypergraphon() {
    AnalyticHypergraphon h;
    h.k = 3;
    h.name = "directed-cycle";
    h.eval = [](std::span<const double> x) -> double {
        const double s[3] = {x[0], x[1], x[3]};  // masks 1, 2, 4
        int order[3] = {0, 1, 2};
        std::sort(order, order + 3, [&](int a, int b) { return s[a] < s[b]; });
        if (!(s[order[0]] < s[order[1]] && s[order[1]] < s[order[2]])) return 0.0;
        auto pair = [&](int a, int b) { return x[((1u << a) | (1u << b)) - 1]; };
        const double ab = pair(order[0], order[1]);
        const double bc = pair(order[1], order[2]);
        const double ac = pair(order[0], order[2]);
        return (ab >= 0.0 && ab <= 0.5 && bc >= 0.0 && bc <= 0.5 && ac > 0.5 && ac <= 1.0) ? 1.0 : 0.0;
    };
    return h;
}

inline AnalyticHypergraphon constant_hypergraphon(int k, double p) {
    return {k, [p](std::span<const double>) { return p; }, "const"};
}

/// Part index of u in a partition with half-open parts [a,b).
inline int part_of(double u, std::span<const double> cumulative) {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto idx = static_cast<int>(it - cumulative.begin());
    return std::min(idx, static_cast<int>(cumulative.size()) - 1);
}

/// Views a step hypergraphon as a point-evaluable function.
inline AnalyticHypergraphon as_analytic(const StepHypergraphon& w) {
    std::vector<double> cumulative;
    Rational acc = 0;
    for (const auto& len : w.lengths()) {
        acc += len;
        cumulative.push_back(to_double(acc));
    }
    cumulative.back() = 1.0;
    std::vector<double> values;
    for (const auto& v : w.table()) values.push_back(to_double(v));
    AnalyticHypergraphon h;
    h.k = w.k();
    h.name = "step";
    h.eval = [w, cumulative, values](std::span<const double> x) {
        std::vector<int> a(x.size(), 0);
        for (std::size_t i = 0; i < x.size(); ++i) a[i] = part_of(x[i], cumulative);
        return values[w.index_of(a)];
    };
    return h;
}

/// Monte Carlo estimate with its sample standard error.
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

namespace detail {

/// Accumulates a stream of observations (Welford).
class RunningMoments {
public:
    void push(double x) {
        ++n_;
        const double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    Estimate estimate() const {
        Estimate e;
        e.trials = n_;
        e.mean = mean_;
        e.std_error = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
        return e;
    }

private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0, m2_ = 0.0;
};

} // namespace detail

/// Unbiased estimate of t(F,H): average over trials of the product of H over
/// F's edges at fresh uniform coordinates.
inline Estimate mc_density(const KGraph& f, const AnalyticHypergraphon& h, std::uint64_t trials, std::uint64_t seed) {
    if (f.k() != h.k) throw InputError("uniformity mismatch between F and H");
    if (trials < 1) throw InputError("mc_density needs at least one trial");
    const int k = h.k;
    const int coords = coordinate_count(k);
    // Vertex subsets of F used as coordinates, per edge and mask.
    std::vector<std::uint64_t> subsets;
    std::vector<std::vector<std::size_t>> edge_slot(f.edge_count(), std::vector<std::size_t>(static_cast<std::size_t>(coords)));
    for (std::size_t ei = 0; ei < f.edge_count(); ++ei) {
        auto e = f.edge(ei);
        for (int mask = 1; mask <= coords; ++mask) {
            std::uint64_t s = 0;
            for (int j = 0; j < k; ++j)
                if (mask >> j & 1) s |= std::uint64_t{1} << e[j];
            auto it = std::find(subsets.begin(), subsets.end(), s);
            if (it == subsets.end()) {
                subsets.push_back(s);
                it = subsets.end() - 1;
            }
            edge_slot[ei][static_cast<std::size_t>(mask - 1)] = static_cast<std::size_t>(it - subsets.begin());
        }
    }
    detail::RunningMoments moments;
    std::vector<double> u(subsets.size()), x(static_cast<std::size_t>(coords));
    for (std::uint64_t t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < subsets.size(); ++i) u[i] = unit_double(derive_seed(seed, {t, subsets[i]}));
        double product = 1.0;
        for (std::size_t ei = 0; ei < f.edge_count() && product != 0.0; ++ei) {
            for (int c = 0; c < coords; ++c) x[c] = u[edge_slot[ei][c]];
            product *= h.eval(x);
        }
        moments.push(product);
    }
    return moments.estimate();
}

/// Statistical symmetry check: H(x^sigma) == H(x) at random points for
/// random permutations.
inline bool check_analytic_symmetry(const AnalyticHypergraphon& h, std::uint64_t samples, std::uint64_t seed) {
    const int coords = coordinate_count(h.k);
    SplitMix64 rng(seed);
    std::vector<double> x(static_cast<std::size_t>(coords)), y(x.size());
    std::vector<int> sigma(static_cast<std::size_t>(h.k));
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (auto& xi : x) xi = unit_double(rng());
        std::iota(sigma.begin(), sigma.end(), 0);
        for (int i = h.k - 1; i > 0; --i) std::swap(sigma[i], sigma[scale_to(rng(), static_cast<std::uint64_t>(i + 1))]);
        for (int a = 1; a <= coords; ++a) y[a - 1] = x[permute_mask(static_cast<std::uint32_t>(a), sigma) - 1];
        if (h.eval(x) != h.eval(y)) return false;
    }
    return true;
}

} // namespace posdeg
