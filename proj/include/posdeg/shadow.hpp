#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "posdeg/combinatorics.hpp"
#include "posdeg/errors.hpp"
#include "posdeg/kgraph.hpp"

namespace posdeg {

/// y(y-1)...(y-k+1)/k! for real y >= k.
inline double real_binomial(double y, int k) {
    if (k < 1) throw InputError("real_binomial needs k >= 1");
    if (!(y >= k)) throw DomainError("real_binomial needs y >= k");
    double value = 1.0;
    for (int i = 0; i < k; ++i) value *= (y - i) / static_cast<double>(i + 1);
    return value;
}

/// The unique x >= k with real_binomial(x, k) = e, by bisection.
inline double invert_real_binomial(double e, int k, double tolerance = 1e-12) {
    if (k < 1) throw InputError("invert_real_binomial needs k >= 1");
    if (!(e >= 1.0)) throw DomainError("invert_real_binomial needs e >= 1");
    double lo = k, hi = k + 1.0;
    while (real_binomial(hi, k) < e) hi = k + 2.0 * (hi - k);
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (real_binomial(mid, k) < e)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Lovasz form of Kruskal-Katona: e = C(x,k) k-sets cover at least C(x,l) l-sets.
inline double shadow_lower_bound(std::uint64_t e, int k, int l) {
    if (k < 1 || l < 0 || l >= k) throw InputError("shadow_lower_bound needs 0 <= l <= k-1");
    if (e < 1) throw InputError("shadow_lower_bound needs e >= 1");
    if (l == 0) return 1.0;
    return real_binomial(invert_real_binomial(static_cast<double>(e), k), l);
}

/// gamma^(k/(k-l)) m^k / k!
inline double kk_edge_lower_bound(double gamma, std::uint64_t m, int k, int l) {
    if (k < 1 || l < 0 || l >= k) throw InputError("kk_edge_lower_bound needs 0 <= l <= k-1");
    if (m < static_cast<std::uint64_t>(k)) throw InputError("kk_edge_lower_bound needs m >= k");
    if (gamma < 0.0 || gamma > 1.0) throw InputError("gamma must lie in [0,1]");
    const double exponent = static_cast<double>(k) / static_cast<double>(k - l);
    return std::pow(gamma, exponent) * std::pow(static_cast<double>(m), k) / static_cast<double>(factorial(k));
}

struct KKReport {
    double gamma_max = 0.0;
    double bound = 0.0;
    std::uint64_t edges = 0;
    bool holds = false;
};

/// Instantiates the edge-count lemma with the largest admissible gamma,
/// gamma_max = delta+_l(G) (k-l)! / m^(k-l), and compares e against the bound.
inline KKReport check_kk(const KGraph& g, int l, double slack = 1e-9) {
    if (g.empty()) throw InputError("check_kk needs a graph with at least one edge");
    const int k = g.k();
    const std::uint64_t dplus = min_positive_degree(g, l);
    const double m = g.n();
    KKReport r;
    r.edges = g.edge_count();
    r.gamma_max = static_cast<double>(dplus) * static_cast<double>(factorial(k - l)) / std::pow(m, k - l);
    r.bound = kk_edge_lower_bound(std::min(r.gamma_max, 1.0), g.n(), k, l);
    r.holds = static_cast<double>(r.edges) >= r.bound - slack;
    return r;
}

} // namespace posdeg
