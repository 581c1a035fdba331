#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "posdeg/analytic.hpp"
#include "posdeg/kgraph.hpp"
#include "posdeg/rng.hpp"
#include "posdeg/step_hypergraphon.hpp"

// W-random hypergraphs G(n,W). Every random choice is a pure function of
// (seed, stream tag, object id):
//   tag 1: coordinate x_S of a vertex set S, id = (|S|, colex rank of S)
//   tag 2: inclusion coin of the k-set T, id = colex rank of T
// so a sample does not depend on visiting order or thread count.

namespace posdeg {

using Hypergraphon = std::variant<StepHypergraphon, AnalyticHypergraphon>;

inline int uniformity(const Hypergraphon& w) {
    return std::visit([](const auto& h) {
        if constexpr (std::is_same_v<std::decay_t<decltype(h)>, StepHypergraphon>)
            return h.k();
        else
            return h.k;
    }, w);
}

namespace detail {

inline std::uint64_t fit_u64(const BigInt& z, const char* what) {
    if (z < 0 || mpz_sizeinbase(z.get_mpz_t(), 2) > 63)
        throw InputError(std::string(what) + " does not fit in 63 bits");
    return static_cast<std::uint64_t>(z.get_ui());
}

/// Exact sampling tables for a step hypergraphon: parts are drawn as
/// integers below the common denominator of the lengths, and each value
/// p = a/b includes an edge when a uniform integer below b is < a.
struct StepSampler {
    std::uint64_t denominator = 1;
    std::vector<std::uint64_t> cumulative;  // numerators over `denominator`
    std::vector<std::uint64_t> num, den;

    explicit StepSampler(const StepHypergraphon& w) {
        BigInt lcm = 1;
        for (const auto& len : w.lengths()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), len.get_den_mpz_t());
        denominator = fit_u64(lcm, "common denominator of part lengths");
        Rational acc = 0;
        for (const auto& len : w.lengths()) {
            acc += len;
            Rational scaled = acc * Rational(lcm);
            cumulative.push_back(fit_u64(scaled.get_num(), "part boundary"));
        }
        for (const auto& v : w.table()) {
            num.push_back(fit_u64(v.get_num(), "table value numerator"));
            den.push_back(fit_u64(v.get_den(), "table value denominator"));
        }
    }

    int part(std::uint64_t bits) const {
        const std::uint64_t r = scale_to(bits, denominator);
        return static_cast<int>(std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
    }
};

/// Visits every k-subset T of [n] with the full coordinate vector x_{r<(T)}
/// given as a callback-filled array, calling include(T, rank, coords).
template <class CoordOf, class Visit>
void for_each_kset_with_coordinates(Vertex n, int k, const std::vector<std::uint32_t>& masks, CoordOf&& coord_of,
                                    Visit&& visit) {
    std::vector<Vertex> sub;
    for_each_subset(n, k, [&](std::span<const Vertex> t) {
        for (auto mask : masks) {
            sub.clear();
            for (int j = 0; j < k; ++j)
                if (mask >> j & 1u) sub.push_back(t[j]);
            coord_of(mask, sub);
        }
        visit(t);
    });
}

} // namespace detail

/// One draw of G(n,W) for a step hypergraphon.
inline KGraph sample(Vertex n, const StepHypergraphon& w, std::uint64_t seed) {
    const int k = w.k();
    if (n < static_cast<Vertex>(k)) throw InputError("sample needs n >= k");
    const detail::StepSampler sampler(w);
    // Parts of every vertex subset of each size that W depends on.
    std::vector<std::vector<int>> parts(static_cast<std::size_t>(k));
    for (auto mask : w.support_masks()) {
        const int s = std::popcount(mask);
        if (!parts[s].empty()) continue;
        const std::uint64_t count = binom(n, s);
        parts[s].resize(count);
        for (std::uint64_t r = 0; r < count; ++r) parts[s][r] = sampler.part(derive_seed(seed, {1, std::uint64_t(s), r}));
    }
    KGraphBuilder builder(k, n);
    std::vector<int> assignment(static_cast<std::size_t>(coordinate_count(k)), 0);
    detail::for_each_kset_with_coordinates(
        n, k, w.support_masks(),
        [&](std::uint32_t mask, const std::vector<Vertex>& sub) {
            assignment[mask - 1] = parts[sub.size()][colex_rank(sub)];
        },
        [&](std::span<const Vertex> t) {
            const std::size_t idx = w.index_of(assignment);
            if (sampler.num[idx] == 0) return;
            const std::uint64_t rank = colex_rank(t);
            if (scale_to(derive_seed(seed, {2, rank}), sampler.den[idx]) < sampler.num[idx]) builder.add_edge(t);
        });
    return std::move(builder).build();
}

/// One draw of G(n,H) for an analytic hypergraphon (53-bit uniforms).
inline KGraph sample(Vertex n, const AnalyticHypergraphon& h, std::uint64_t seed) {
    const int k = h.k;
    if (n < static_cast<Vertex>(k)) throw InputError("sample needs n >= k");
    std::vector<std::vector<double>> coords(static_cast<std::size_t>(k));
    for (int s = 1; s < k; ++s) {
        const std::uint64_t count = binom(n, s);
        coords[s].resize(count);
        for (std::uint64_t r = 0; r < count; ++r) coords[s][r] = unit_double(derive_seed(seed, {1, std::uint64_t(s), r}));
    }
    std::vector<std::uint32_t> masks;
    for (int mask = 1; mask <= coordinate_count(k); ++mask) masks.push_back(static_cast<std::uint32_t>(mask));
    KGraphBuilder builder(k, n);
    std::vector<double> x(masks.size());
    detail::for_each_kset_with_coordinates(
        n, k, masks,
        [&](std::uint32_t mask, const std::vector<Vertex>& sub) { x[mask - 1] = coords[sub.size()][colex_rank(sub)]; },
        [&](std::span<const Vertex> t) {
            const double p = h.eval(x);
            if (p <= 0.0) return;
            if (unit_double(derive_seed(seed, {2, colex_rank(t)})) < p) builder.add_edge(t);
        });
    return std::move(builder).build();
}

inline KGraph sample(Vertex n, const Hypergraphon& w, std::uint64_t seed) {
    return std::visit([&](const auto& h) { return sample(n, h, seed); }, w);
}

/// The subgraph induced by a uniformly random n-subset of V(G).
inline KGraph sample_induced(const KGraph& g, Vertex n, std::uint64_t seed) {
    if (n > g.n()) throw InputError("sample_induced needs n <= |V(G)|");
    SplitMix64 rng(derive_seed(seed, {3}));
    std::vector<Vertex> pool(g.n());
    std::iota(pool.begin(), pool.end(), Vertex{0});
    for (Vertex i = 0; i < n; ++i) {
        const auto j = i + static_cast<Vertex>(scale_to(rng(), g.n() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return induced(g, VertexSubset(std::move(pool)));
}

/// Fraction of trials with E(F) contained in E(G(|V(F)|, W)); an unbiased
/// estimate of t(F,W).
inline Estimate estimate_containment(const KGraph& f, const Hypergraphon& w, std::uint64_t trials, std::uint64_t seed) {
    if (f.k() != uniformity(w)) throw InputError("uniformity mismatch between F and W");
    if (trials < 1) throw InputError("estimate_containment needs at least one trial");
    detail::RunningMoments moments;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool contained = true;
        if (!f.empty()) {
            const KGraph g = sample(f.n(), w, derive_seed(seed, {4, t}));
            for (std::size_t i = 0; i < f.edge_count() && contained; ++i) contained = g.has_edge(f.edge(i));
        }
        moments.push(contained ? 1.0 : 0.0);
    }
    return moments.estimate();
}

/// exp(-eps^2 n / (9 k^2)): tail bound for one l-set's degree deviating.
inline double azuma_bound_degree(double eps, double n, int k, int /*l*/) {
    if (!(eps > 0.0 && eps <= 1.0)) throw InputError("eps must lie in (0,1]");
    if (n < 0) throw InputError("n must be nonnegative");
    return std::exp(-eps * eps * n / (9.0 * k * k));
}

/// exp(-beta^2 n / (3 k^2)): tail bound for the edge count of a sample.
inline double azuma_bound_empty(double beta, double n, int k) {
    if (!(beta > 0.0 && beta <= 1.0)) throw InputError("beta must lie in (0,1]");
    if (n < 0) throw InputError("n must be nonnegative");
    return std::exp(-beta * beta * n / (3.0 * k * k));
}

} // namespace posdeg
