#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posdeg/combinatorics.hpp"
#include "posdeg/errors.hpp"
#include "posdeg/kgraph.hpp"
#include "posdeg/labelled.hpp"
#include "posdeg/rational.hpp"

// Coordinates of [0,1]^{r<[k]} are indexed by the nonempty proper subsets
// of {0..k-1}, encoded as bitmasks 1..2^k-2; a full assignment is a vector
// of 2^k-2 part indices with the coordinate of mask A at position A-1.

namespace posdeg {

inline int coordinate_count(int k) { return (1 << k) - 2; }

/// Which coordinates a step hypergraphon's table depends on.
enum class Support {
    all,        ///< every nonempty proper subset of [k]
    singletons  ///< only x_1..x_k (e.g. the hypergraphon of a finite graph)
};

/// A symmetric step function on [0,1]^{r<[k]}: one partition of [0,1] into
/// parts of rational length, shared by every coordinate, and a rational
/// value per cell.
///
/// The table is stored in mixed radix over the support coordinates in
/// increasing mask order (first coordinate least significant). Construction
/// checks lengths and value range; symmetry is checked by validate().
class StepHypergraphon {
public:
    static constexpr std::uint64_t kMaxTableSize = 50'000'000;

    StepHypergraphon(int k, std::vector<Rational> lengths, std::vector<Rational> table,
                     Support support = Support::all)
        : k_(k), lengths_(std::move(lengths)), table_(std::move(table)), support_(support) {
        if (k < 2 || k > 8) throw InputError("step hypergraphons need 2 <= k <= 8");
        if (lengths_.empty()) throw InputError("partition needs at least one part");
        Rational total = 0;
        for (const auto& len : lengths_) {
            if (len <= 0) throw InputError("part lengths must be positive");
            total += len;
        }
        if (total != 1) throw InputError("part lengths must sum to 1, got " + to_string(total));
        for (int mask = 1; mask < (1 << k) - 1; ++mask)
            if (support == Support::all || std::popcount(static_cast<unsigned>(mask)) == 1)
                support_masks_.push_back(static_cast<std::uint32_t>(mask));
        std::uint64_t size = 1;
        for (std::size_t i = 0; i < support_masks_.size(); ++i) {
            size *= lengths_.size();
            if (size > kMaxTableSize) throw InputError("step table too large");
        }
        if (table_.size() != size)
            throw InputError("table has " + std::to_string(table_.size()) + " entries, expected " + std::to_string(size));
        for (const auto& v : table_)
            if (v < 0 || v > 1) throw InputError("table values must lie in [0,1]");
    }

    static StepHypergraphon constant(int k, const Rational& p) {
        return StepHypergraphon(k, {Rational(1)}, std::vector<Rational>(static_cast<std::size_t>(1), p));
    }

    int k() const noexcept { return k_; }
    int parts() const noexcept { return static_cast<int>(lengths_.size()); }
    const std::vector<Rational>& lengths() const noexcept { return lengths_; }
    const std::vector<Rational>& table() const noexcept { return table_; }
    Support support() const noexcept { return support_; }
    const std::vector<std::uint32_t>& support_masks() const noexcept { return support_masks_; }

    bool is_zero() const {
        return std::all_of(table_.begin(), table_.end(), [](const Rational& v) { return v == 0; });
    }

    /// Table index of a full assignment (2^k-2 part indices).
    std::size_t index_of(std::span<const int> assignment) const {
        std::size_t index = 0, stride = 1;
        for (auto mask : support_masks_) {
            index += static_cast<std::size_t>(assignment[mask - 1]) * stride;
            stride *= lengths_.size();
        }
        return index;
    }

    const Rational& value(std::span<const int> assignment) const { return table_[index_of(assignment)]; }

    /// Full assignment (non-support coordinates set to part 0) of a table index.
    std::vector<int> assignment_of(std::size_t index) const {
        std::vector<int> a(static_cast<std::size_t>(coordinate_count(k_)), 0);
        for (auto mask : support_masks_) {
            a[mask - 1] = static_cast<int>(index % lengths_.size());
            index /= lengths_.size();
        }
        return a;
    }

    friend bool operator==(const StepHypergraphon& a, const StepHypergraphon& b) {
        return a.k_ == b.k_ && a.support_ == b.support_ && a.lengths_ == b.lengths_ && a.table_ == b.table_;
    }

private:
    int k_;
    std::vector<Rational> lengths_;
    std::vector<Rational> table_;
    Support support_;
    std::vector<std::uint32_t> support_masks_;
};

/// Image of a coordinate mask under a permutation of [k].
inline std::uint32_t permute_mask(std::uint32_t mask, std::span<const int> sigma) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (mask >> i & 1u) out |= 1u << sigma[i];
    return out;
}

/// The assignment x^sigma, whose A-coordinate is x_{sigma(A)}.
inline std::vector<int> permute_assignment(std::span<const int> assignment, std::span<const int> sigma) {
    std::vector<int> out(assignment.size());
    for (std::size_t a = 1; a <= assignment.size(); ++a)
        out[a - 1] = assignment[permute_mask(static_cast<std::uint32_t>(a), sigma) - 1];
    return out;
}

struct SymmetryViolation {
    std::vector<int> assignment;
    std::vector<int> sigma;
    Rational value;
    Rational permuted_value;
};

/// First (assignment, transposition) pair breaking symmetry, if any. Adjacent
/// transpositions generate S_k, so invariance under them is invariance
/// under the whole group.
inline std::optional<SymmetryViolation> validate(const StepHypergraphon& w) {
    const int k = w.k();
    for (std::size_t idx = 0; idx < w.table().size(); ++idx) {
        auto a = w.assignment_of(idx);
        for (int t = 0; t + 1 < k; ++t) {
            std::vector<int> sigma(static_cast<std::size_t>(k));
            std::iota(sigma.begin(), sigma.end(), 0);
            std::swap(sigma[t], sigma[t + 1]);
            auto b = permute_assignment(a, sigma);
            const Rational& pv = w.value(b);
            if (pv != w.table()[idx]) return SymmetryViolation{a, sigma, w.table()[idx], pv};
        }
    }
    return std::nullopt;
}

/// Averages every table value over its S_k orbit.
inline StepHypergraphon symmetrize(const StepHypergraphon& w) {
    const int k = w.k();
    std::vector<int> sigma(static_cast<std::size_t>(k));
    std::vector<Rational> table(w.table().size());
    const Rational group_order(static_cast<unsigned long>(factorial(k)));
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
        auto a = w.assignment_of(idx);
        std::iota(sigma.begin(), sigma.end(), 0);
        Rational sum = 0;
        do {
            sum += w.value(permute_assignment(a, sigma));
        } while (std::next_permutation(sigma.begin(), sigma.end()));
        table[idx] = sum / group_order;
    }
    return StepHypergraphon(k, w.lengths(), std::move(table), w.support());
}

/// W^G: n equal parts; 1 where the singleton coordinates name k distinct
/// vertices spanning an edge of G, 0 elsewhere.
inline StepHypergraphon from_graph(const KGraph& g) {
    const int k = g.k();
    const Vertex n = g.n();
    if (n < static_cast<Vertex>(k)) throw InputError("from_graph needs n >= k");
    std::vector<Rational> lengths(n, make_rational(1, n));
    std::size_t size = 1;
    for (int i = 0; i < k; ++i) {
        size *= n;
        if (size > StepHypergraphon::kMaxTableSize) throw InputError("graph too large for a step table");
    }
    std::vector<Rational> table(size, Rational(0));
    std::vector<Vertex> tuple(static_cast<std::size_t>(k));
    for (std::size_t idx = 0; idx < size; ++idx) {
        std::size_t rest = idx;
        for (int j = 0; j < k; ++j) {
            tuple[j] = static_cast<Vertex>(rest % n);
            rest /= n;
        }
        if (g.has_edge(tuple)) table[idx] = 1;
    }
    return StepHypergraphon(k, std::move(lengths), std::move(table), Support::singletons);
}

/// A cell of [0,1]^{r[l]}: a part index for every nonempty subset of the
/// first l coordinates (position = mask - 1).
struct CellPoint {
    int l = 0;
    std::vector<int> parts;

    friend bool operator==(const CellPoint&, const CellPoint&) = default;
};

/// Every cell for l roots over m parts, in mixed-radix order.
inline std::vector<CellPoint> all_cells(int parts, int l) {
    const std::size_t dims = (std::size_t{1} << l) - 1;
    std::vector<CellPoint> cells;
    CellPoint c{l, std::vector<int>(dims, 0)};
    while (true) {
        cells.push_back(c);
        std::size_t i = 0;
        while (i < dims && ++c.parts[i] == parts) c.parts[i++] = 0;
        if (i == dims) break;
    }
    return cells;
}

inline Rational cell_measure(const StepHypergraphon& w, const CellPoint& cell) {
    Rational m = 1;
    for (int p : cell.parts) m *= w.lengths()[static_cast<std::size_t>(p)];
    return m;
}

namespace detail {
inline void check_cell(const StepHypergraphon& w, const CellPoint& cell) {
    if (cell.l < 0 || cell.l >= w.k()) throw InputError("cell root count must satisfy 0 <= l <= k-1");
    if (cell.parts.size() != (std::size_t{1} << cell.l) - 1) throw InputError("cell has wrong dimension");
    for (int p : cell.parts)
        if (p < 0 || p >= w.parts()) throw InputError("cell part index out of range");
}
} // namespace detail

/// deg_W on a cell: the length-weighted average of W over all extensions of
/// the cell's coordinates to r<[k]. Computed by direct summation.
inline Rational degree(const StepHypergraphon& w, const CellPoint& cell) {
    detail::check_cell(w, cell);
    const std::uint32_t root_bits = (1u << cell.l) - 1u;
    std::vector<int> assignment(static_cast<std::size_t>(coordinate_count(w.k())), 0);
    std::vector<std::uint32_t> free;
    for (auto mask : w.support_masks()) {
        if ((mask & ~root_bits) == 0)
            assignment[mask - 1] = cell.parts[mask - 1];
        else
            free.push_back(mask);
    }
    const auto m = static_cast<int>(w.parts());
    Rational total = 0;
    while (true) {
        const Rational& v = w.value(assignment);
        if (v != 0) {
            Rational term = v;
            for (auto mask : free) term *= w.lengths()[static_cast<std::size_t>(assignment[mask - 1])];
            total += term;
        }
        std::size_t i = 0;
        while (i < free.size() && ++assignment[free[i] - 1] == m) assignment[free[i++] - 1] = 0;
        if (i == free.size()) break;
    }
    return total;
}

/// Minimum of deg_W over all cells, i.e. the essential infimum.
inline Rational min_degree(const StepHypergraphon& w, int l) {
    if (l < 0 || l >= w.k()) throw InputError("l must satisfy 0 <= l <= k-1");
    std::optional<Rational> best;
    for (const auto& cell : all_cells(w.parts(), l)) {
        Rational d = degree(w, cell);
        if (!best || d < *best) best = d;
    }
    return *best;
}

/// Essential infimum of the positive values of deg_W; 0 if W is zero.
inline Rational min_positive_degree(const StepHypergraphon& w, int l) {
    if (l < 0 || l >= w.k()) throw InputError("l must satisfy 0 <= l <= k-1");
    if (w.is_zero()) return 0;
    std::optional<Rational> best;
    for (const auto& cell : all_cells(w.parts(), l)) {
        Rational d = degree(w, cell);
        if (d > 0 && (!best || d < *best)) best = d;
    }
    return best ? *best : Rational(0);
}

struct IntegrationOptions {
    /// Cap on multiply-accumulate steps of one exact integral.
    std::uint64_t term_budget = 100'000'000;
};

namespace detail {

struct Factor {
    std::vector<int> scope;  // sorted variable ids; first is least significant
    std::vector<Rational> table;
};

inline std::uint64_t checked_power(std::uint64_t base, std::size_t exp, std::uint64_t cap) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        r *= base;
    }
    return r;
}

/// Exact integral of prod_{A in E(F)} W(x_{r<(A)}) over the coordinates of
/// F not fixed by `cell` (those indexed by subsets of the first cell->l
/// vertices are fixed). Sums out one coordinate at a time (variable
/// elimination), so the cost is governed by the largest intermediate
/// factor rather than by m^(#coordinates).
inline Rational integrate(const KGraph& f, const StepHypergraphon& w, const CellPoint* cell,
                          const IntegrationOptions& options) {
    if (f.k() != w.k()) throw InputError("uniformity mismatch between F and W");
    if (f.n() > 63) throw InputError("F has too many vertices");
    const int k = w.k();
    const std::uint64_t m = static_cast<std::uint64_t>(w.parts());
    const std::uint64_t root_bits = cell ? (std::uint64_t{1} << cell->l) - 1 : 0;
    if (cell && static_cast<Vertex>(cell->l) > f.n()) throw InputError("more roots than vertices");

    std::vector<std::uint64_t> var_subset;
    auto var_id = [&](std::uint64_t subset) {
        auto it = std::find(var_subset.begin(), var_subset.end(), subset);
        if (it != var_subset.end()) return static_cast<int>(it - var_subset.begin());
        var_subset.push_back(subset);
        return static_cast<int>(var_subset.size() - 1);
    };

    // Each edge factor: for every support mask, either a fixed part (root
    // coordinate) or a free variable.
    struct EdgeSlots {
        std::vector<std::pair<std::uint32_t, int>> fixed;  // mask, part
        std::vector<std::pair<std::uint32_t, int>> free;   // mask, variable id
    };
    std::vector<EdgeSlots> slots(f.edge_count());
    for (std::size_t ei = 0; ei < f.edge_count(); ++ei) {
        auto e = f.edge(ei);
        for (auto mask : w.support_masks()) {
            std::uint64_t subset = 0;
            for (int j = 0; j < k; ++j)
                if (mask >> j & 1u) subset |= std::uint64_t{1} << e[j];
            if ((subset & ~root_bits) == 0)
                slots[ei].fixed.emplace_back(mask, cell->parts[subset - 1]);
            else
                slots[ei].free.emplace_back(mask, var_id(subset));
        }
    }
    const int nvars = static_cast<int>(var_subset.size());

    // Plan the elimination on scopes alone and enforce the budget up front.
    std::vector<std::vector<int>> scopes;
    std::uint64_t work = 0;
    const std::uint64_t budget = options.term_budget;
    for (auto& s : slots) {
        std::vector<int> scope;
        for (auto& [mask, id] : s.free) scope.push_back(id);
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        work += checked_power(m, scope.size(), budget);
        scopes.push_back(std::move(scope));
    }
    std::vector<int> order;
    {
        auto live = scopes;
        std::vector<char> done(static_cast<std::size_t>(nvars), 0);
        for (int step = 0; step < nvars; ++step) {
            int best = -1;
            std::size_t best_size = 0, best_count = 0;
            for (int v = 0; v < nvars; ++v) {
                if (done[v]) continue;
                std::vector<int> u;
                std::size_t count = 0;
                for (auto& sc : live)
                    if (std::binary_search(sc.begin(), sc.end(), v)) {
                        u.insert(u.end(), sc.begin(), sc.end());
                        ++count;
                    }
                std::sort(u.begin(), u.end());
                u.erase(std::unique(u.begin(), u.end()), u.end());
                if (best < 0 || u.size() < best_size) best = v, best_size = u.size(), best_count = count;
            }
            done[best] = 1;
            order.push_back(best);
            work += checked_power(m, best_size, budget) * std::max<std::size_t>(best_count, 1);
            if (work > budget)
                throw BudgetError("exact integral needs more than " + std::to_string(budget) + " terms");
            std::vector<std::vector<int>> next;
            std::vector<int> merged;
            for (auto& sc : live) {
                if (std::binary_search(sc.begin(), sc.end(), best))
                    merged.insert(merged.end(), sc.begin(), sc.end());
                else
                    next.push_back(sc);
            }
            std::sort(merged.begin(), merged.end());
            merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
            merged.erase(std::remove(merged.begin(), merged.end(), best), merged.end());
            next.push_back(std::move(merged));
            live = std::move(next);
        }
    }
    if (work > budget) throw BudgetError("exact integral needs more than " + std::to_string(budget) + " terms");

    // Materialise edge factors.
    std::vector<Factor> factors;
    std::vector<int> assignment(static_cast<std::size_t>(coordinate_count(k)), 0);
    for (std::size_t ei = 0; ei < slots.size(); ++ei) {
        Factor fac;
        fac.scope = scopes[ei];
        const std::size_t size = static_cast<std::size_t>(checked_power(m, fac.scope.size(), budget));
        fac.table.resize(size);
        for (auto& [mask, part] : slots[ei].fixed) assignment[mask - 1] = part;
        std::vector<int> local(fac.scope.size(), 0);
        for (std::size_t idx = 0; idx < size; ++idx) {
            std::size_t rest = idx;
            for (std::size_t j = 0; j < local.size(); ++j) {
                local[j] = static_cast<int>(rest % m);
                rest /= m;
            }
            for (auto& [mask, id] : slots[ei].free) {
                auto pos = std::lower_bound(fac.scope.begin(), fac.scope.end(), id) - fac.scope.begin();
                assignment[mask - 1] = local[static_cast<std::size_t>(pos)];
            }
            fac.table[idx] = w.value(assignment);
        }
        factors.push_back(std::move(fac));
    }

    for (int v : order) {
        std::vector<Factor> touching, rest;
        for (auto& fac : factors) {
            if (std::binary_search(fac.scope.begin(), fac.scope.end(), v))
                touching.push_back(std::move(fac));
            else
                rest.push_back(std::move(fac));
        }
        std::vector<int> u;
        for (auto& fac : touching) u.insert(u.end(), fac.scope.begin(), fac.scope.end());
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
        const std::size_t vpos = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), v) - u.begin());

        // strides[f][j]: contribution of U-position j to factor f's index.
        std::vector<std::vector<std::size_t>> strides(touching.size(), std::vector<std::size_t>(u.size(), 0));
        for (std::size_t fi = 0; fi < touching.size(); ++fi) {
            std::size_t s = 1;
            for (int var : touching[fi].scope) {
                auto j = static_cast<std::size_t>(std::lower_bound(u.begin(), u.end(), var) - u.begin());
                strides[fi][j] = s;
                s *= m;
            }
        }
        Factor out;
        for (int var : u)
            if (var != v) out.scope.push_back(var);
        out.table.assign(static_cast<std::size_t>(checked_power(m, out.scope.size(), ~std::uint64_t{0} >> 1)), Rational(0));

        std::vector<std::size_t> a(u.size(), 0);
        Rational term;
        while (true) {
            std::size_t out_index = 0, s = 1;
            for (std::size_t j = 0; j < u.size(); ++j) {
                if (j == vpos) continue;
                out_index += a[j] * s;
                s *= m;
            }
            term = w.lengths()[a[vpos]];
            for (std::size_t fi = 0; fi < touching.size() && term != 0; ++fi) {
                std::size_t idx = 0;
                for (std::size_t j = 0; j < u.size(); ++j) idx += a[j] * strides[fi][j];
                term *= touching[fi].table[idx];
            }
            if (term != 0) out.table[out_index] += term;
            std::size_t j = 0;
            while (j < a.size() && ++a[j] == m) a[j++] = 0;
            if (j == a.size()) break;
        }
        rest.push_back(std::move(out));
        factors = std::move(rest);
    }

    Rational result = 1;
    for (auto& fac : factors) result *= fac.table.at(0);
    return result;
}

} // namespace detail

/// t(F,W): exact integral of the product of W over the edges of F.
inline Rational density(const KGraph& f, const StepHypergraphon& w, const IntegrationOptions& options = {}) {
    return detail::integrate(f, w, nullptr, options);
}

/// t_x(F,W) for x in `cell`: root coordinates fixed, the rest integrated.
inline Rational rooted_density(const LabelledKGraph& f, const StepHypergraphon& w, const CellPoint& cell,
                               const IntegrationOptions& options = {}) {
    detail::check_cell(w, cell);
    if (cell.l != f.roots()) throw InputError("cell root count differs from F's root count");
    return detail::integrate(f.graph(), w, &cell, options);
}

} // namespace posdeg
