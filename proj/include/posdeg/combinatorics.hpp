#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace posdeg {

using Vertex = std::uint32_t;

namespace detail {

inline constexpr int kBinomRows = 4096;
inline constexpr int kBinomCols = 17;

struct BinomialTable {
    std::vector<std::uint64_t> cells;

    BinomialTable() : cells(static_cast<std::size_t>(kBinomRows) * kBinomCols, 0) {
        constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
        for (int n = 0; n < kBinomRows; ++n) {
            at(n, 0) = 1;
            for (int r = 1; r < kBinomCols && r <= n; ++r) {
                std::uint64_t a = at(n - 1, r - 1), b = r <= n - 1 ? at(n - 1, r) : 0;
                at(n, r) = (a > kMax - b) ? kMax : a + b;
            }
        }
    }
    std::uint64_t& at(int n, int r) { return cells[static_cast<std::size_t>(n) * kBinomCols + r]; }
    std::uint64_t at(int n, int r) const { return cells[static_cast<std::size_t>(n) * kBinomCols + r]; }
};

inline const BinomialTable& binomial_table() {
    static const BinomialTable table;
    return table;
}

} // namespace detail

/// C(n, r) saturating at UINT64_MAX; zero when r < 0 or r > n.
inline std::uint64_t binom(std::int64_t n, std::int64_t r) {
    if (r < 0 || n < 0 || r > n) return 0;
    if (r > n - r) r = n - r;
    if (n < detail::kBinomRows && r < detail::kBinomCols)
        return detail::binomial_table().at(static_cast<int>(n), static_cast<int>(r));
    unsigned __int128 acc = 1;
    for (std::int64_t i = 1; i <= r; ++i) {
        acc = acc * static_cast<unsigned __int128>(n - r + i) / static_cast<unsigned __int128>(i);
        if (acc > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(acc);
}

inline std::uint64_t factorial(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

/// Colex rank of a strictly increasing vertex list: sum of C(v_i, i+1).
inline std::uint64_t colex_rank(std::span<const Vertex> sorted) {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) rank += binom(sorted[i], static_cast<std::int64_t>(i) + 1);
    return rank;
}

/// Inverse of colex_rank for sets of size r.
inline std::vector<Vertex> colex_unrank(std::uint64_t rank, int r) {
    std::vector<Vertex> out(static_cast<std::size_t>(r));
    for (int i = r; i >= 1; --i) {
        Vertex v = static_cast<Vertex>(i - 1);
        while (binom(v + 1, i) <= rank) ++v;
        out[static_cast<std::size_t>(i - 1)] = v;
        rank -= binom(v, i);
    }
    return out;
}

/// Steps `subset` (strictly increasing, values < n) to its colex successor.
/// Returns false after the last subset.
inline bool next_colex(std::span<Vertex> subset, Vertex n) {
    const std::size_t r = subset.size();
    for (std::size_t i = 0; i < r; ++i) {
        Vertex limit = (i + 1 < r) ? subset[i + 1] : n;
        if (subset[i] + 1 < limit) {
            ++subset[i];
            for (std::size_t j = 0; j < i; ++j) subset[j] = static_cast<Vertex>(j);
            return true;
        }
    }
    return false;
}

/// Calls f(span) for every r-subset of {0..n-1} in colex order.
template <class F>
void for_each_subset(Vertex n, int r, F&& f) {
    if (r < 0 || static_cast<Vertex>(r) > n) return;
    std::vector<Vertex> subset(static_cast<std::size_t>(r));
    std::iota(subset.begin(), subset.end(), Vertex{0});
    do {
        f(std::span<const Vertex>(subset));
    } while (next_colex(subset, n));
}

/// Calls f(mask) for every r-element sub-mask of a k-bit universe.
template <class F>
void for_each_submask(int universe_bits, int r, F&& f) {
    for (std::uint32_t mask = 0; mask < (1u << universe_bits); ++mask)
        if (std::popcount(mask) == r) f(mask);
}

} // namespace posdeg
