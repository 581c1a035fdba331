#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "posdeg/canonical.hpp"
#include "posdeg/combinatorics.hpp"
#include "posdeg/kgraph.hpp"
#include "posdeg/rational.hpp"

namespace posdeg {

/// Which l-degree is maximised over F-free graphs.
enum class Objective {
    positive_degree,  ///< delta+_l, giving co+ex_l(n, F)
    min_degree        ///< delta_l, giving co-ex_l(n, F)
};

struct SearchBudget {
    std::uint64_t max_nodes = 0;  ///< 0 = unlimited
    double max_seconds = 0.0;     ///< 0 = unlimited
};

struct SearchProblem {
    Vertex n = 0;
    int k = 3;
    int l = 0;
    std::vector<KGraph> family;
    Objective mode = Objective::positive_degree;
    SearchBudget budget;
    std::size_t max_witnesses = 100;
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t prunes = 0;
    double seconds = 0.0;
};

/// `witnesses` are pairwise non-isomorphic F-free graphs attaining `value`,
/// ordered by canonical form. When `exact` is false the budget ran out and
/// `value` is only a lower bound.
struct SearchResult {
    std::uint64_t value = 0;
    std::vector<KGraph> witnesses;
    SearchStats stats;
    bool exact = true;
};

inline std::uint64_t objective_value(const KGraph& g, int l, Objective mode) {
    return mode == Objective::positive_degree ? min_positive_degree(g, l) : min_degree(g, l);
}

namespace detail {

inline void check_problem(const SearchProblem& p) {
    if (p.k < 1) throw InputError("k must be positive");
    if (p.l < 0 || p.l >= p.k) throw InputError("l must satisfy 0 <= l <= k-1");
    if (p.n < static_cast<Vertex>(p.k)) throw InputError("n must be at least k");
    for (const auto& f : p.family)
        if (f.k() != p.k) throw InputError("family member has uniformity " + std::to_string(f.k()) + ", expected " + std::to_string(p.k));
}

class WitnessSet {
public:
    explicit WitnessSet(std::size_t cap) : cap_(cap) {}

    void offer(std::uint64_t value, const KGraph& g, const std::string* form = nullptr) {
        if (any_ && value < best_) return;
        if (!any_ || value > best_) {
            any_ = true;
            best_ = value;
            items_.clear();
        }
        if (items_.size() >= cap_) return;
        std::string key = form ? *form : canonical_form(g);
        if (std::none_of(items_.begin(), items_.end(), [&](const auto& it) { return it.first == key; }))
            items_.emplace_back(std::move(key), g);
    }

    bool any() const { return any_; }
    std::uint64_t best() const { return best_; }
    bool full() const { return items_.size() >= cap_; }

    std::vector<KGraph> sorted() const {
        auto items = items_;
        std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<KGraph> out;
        for (auto& [key, g] : items) out.push_back(g);
        return out;
    }

private:
    std::size_t cap_;
    bool any_ = false;
    std::uint64_t best_ = 0;
    std::vector<std::pair<std::string, KGraph>> items_;
};

/// Every copy of a family member inside K_n^(k), as a bitset over colex
/// ranks, indexed by the k-sets it uses. Lets the search decide whether
/// G+T stays F-free with word operations only.
class CopyIndex {
public:
    static constexpr std::uint64_t kMaxMaps = 2'000'000;

    /// Empty when enumerating the copies would exceed kMaxMaps injections.
    static std::optional<CopyIndex> build(const std::vector<KGraph>& family, Vertex n, int k) {
        std::uint64_t maps = 0;
        for (const auto& f : family) {
            if (f.n() > n || f.empty()) continue;
            std::uint64_t falling = 1;
            for (Vertex i = 0; i < f.n(); ++i) {
                falling *= n - i;
                if (falling > kMaxMaps) return std::nullopt;
            }
            maps += falling;
            if (maps > kMaxMaps) return std::nullopt;
        }
        CopyIndex index;
        index.words_ = static_cast<std::size_t>((binom(n, k) + 63) / 64);
        index.by_rank_.resize(static_cast<std::size_t>(binom(n, k)));
        std::vector<std::vector<std::uint64_t>> masks;
        for (const auto& f : family) {
            if (f.n() > n || f.empty()) continue;
            std::vector<Vertex> image(f.n());
            std::vector<char> used(n, 0);
            std::vector<Vertex> e(static_cast<std::size_t>(k));
            auto rec = [&](auto&& self, Vertex v) -> void {
                if (v == f.n()) {
                    std::vector<std::uint64_t> mask(index.words_, 0);
                    for (std::size_t i = 0; i < f.edge_count(); ++i) {
                        auto fe = f.edge(i);
                        for (int j = 0; j < k; ++j) e[j] = image[fe[j]];
                        std::sort(e.begin(), e.end());
                        const auto r = colex_rank(e);
                        mask[r >> 6] |= std::uint64_t{1} << (r & 63);
                    }
                    masks.push_back(std::move(mask));
                    return;
                }
                for (Vertex x = 0; x < n; ++x) {
                    if (used[x]) continue;
                    used[x] = 1;
                    image[v] = x;
                    self(self, v + 1);
                    used[x] = 0;
                }
            };
            rec(rec, 0);
        }
        std::sort(masks.begin(), masks.end());
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        for (std::size_t c = 0; c < masks.size(); ++c) {
            for (std::size_t w = 0; w < index.words_; ++w)
                for (std::uint64_t word = masks[c][w]; word; word &= word - 1)
                    index.by_rank_[w * 64 + static_cast<std::size_t>(std::countr_zero(word))].push_back(c);
            index.flat_.insert(index.flat_.end(), masks[c].begin(), masks[c].end());
        }
        return index;
    }

    /// Whether some copy lies inside E(G) + {rank}, given rank is not an edge.
    bool completes_copy(const std::vector<std::uint64_t>& edges, std::size_t rank) const {
        const std::size_t rw = rank >> 6;
        const std::uint64_t rbit = std::uint64_t{1} << (rank & 63);
        for (auto c : by_rank_[rank]) {
            const std::uint64_t* mask = flat_.data() + c * words_;
            bool inside = true;
            for (std::size_t w = 0; w < words_ && inside; ++w) {
                std::uint64_t missing = mask[w] & ~edges[w];
                if (w == rw) missing &= ~rbit;
                inside = missing == 0;
            }
            if (inside) return true;
        }
        return false;
    }

private:
    std::size_t words_ = 0;
    std::vector<std::uint64_t> flat_;
    std::vector<std::vector<std::size_t>> by_rank_;
};

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// Exhaustive oracle: every edge subset of K_n^(k), feasible for C(n,k) <= 25.
/// F-freeness is tested against the precomputed edge masks of all copies of
/// each family member in K_n^(k).
inline SearchResult brute_force(const SearchProblem& problem) {
    detail::check_problem(problem);
    const Vertex n = problem.n;
    const int k = problem.k, l = problem.l;
    const std::uint64_t slots = binom(n, k);
    if (slots > 25) throw InputError("brute_force refuses C(n,k) = " + std::to_string(slots) + " > 25");
    detail::Stopwatch clock;

    std::vector<std::vector<Vertex>> ksets;
    for_each_subset(n, k, [&](std::span<const Vertex> s) { ksets.emplace_back(s.begin(), s.end()); });

    // Edge masks of every labelled copy of every family member.
    std::vector<std::uint32_t> copies;
    for (const auto& f : problem.family) {
        if (f.n() > n) continue;
        std::vector<Vertex> image(f.n());
        std::vector<char> used(n, 0);
        auto rec = [&](auto&& self, Vertex v) -> void {
            if (v == f.n()) {
                std::uint32_t mask = 0;
                std::vector<Vertex> e(static_cast<std::size_t>(k));
                for (std::size_t i = 0; i < f.edge_count(); ++i) {
                    auto fe = f.edge(i);
                    for (int j = 0; j < k; ++j) e[j] = image[fe[j]];
                    std::sort(e.begin(), e.end());
                    mask |= 1u << colex_rank(e);
                }
                copies.push_back(mask);
                return;
            }
            for (Vertex x = 0; x < n; ++x) {
                if (used[x]) continue;
                used[x] = 1;
                image[v] = x;
                self(self, v + 1);
                used[x] = 0;
            }
        };
        rec(rec, 0);
    }
    std::sort(copies.begin(), copies.end());
    copies.erase(std::unique(copies.begin(), copies.end()), copies.end());

    std::vector<std::uint32_t> stars;
    for_each_subset(n, l, [&](std::span<const Vertex> ls) {
        std::uint32_t star = 0;
        for (std::size_t r = 0; r < ksets.size(); ++r)
            if (std::includes(ksets[r].begin(), ksets[r].end(), ls.begin(), ls.end())) star |= 1u << r;
        stars.push_back(star);
    });

    SearchResult result;
    detail::WitnessSet witnesses(problem.max_witnesses);
    const std::uint64_t total = std::uint64_t{1} << slots;
    for (std::uint64_t m = 0; m < total; ++m) {
        const auto mask = static_cast<std::uint32_t>(m);
        ++result.stats.nodes;
        bool free = true;
        for (auto c : copies)
            if ((c & mask) == c) {
                free = false;
                break;
            }
        if (!free) continue;
        std::uint64_t value;
        if (problem.mode == Objective::positive_degree) {
            std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
            for (auto s : stars) {
                const auto d = static_cast<std::uint64_t>(std::popcount(mask & s));
                if (d > 0) best = std::min(best, d);
            }
            value = mask == 0 ? 0 : best;
        } else {
            std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
            for (auto s : stars) best = std::min(best, static_cast<std::uint64_t>(std::popcount(mask & s)));
            value = best;
        }
        if (witnesses.any() && (value < witnesses.best() || (value == witnesses.best() && witnesses.full()))) continue;
        std::vector<std::vector<Vertex>> edges;
        for (std::size_t r = 0; r < ksets.size(); ++r)
            if (mask >> r & 1u) edges.push_back(ksets[r]);
        witnesses.offer(value, KGraph(k, n, edges));
    }
    result.value = witnesses.any() ? witnesses.best() : 0;
    result.witnesses = witnesses.sorted();
    result.stats.seconds = clock.seconds();
    return result;
}

/// Isomorph-free exhaustive search over F-free graphs.
///
/// Graphs grow one edge at a time. A child is kept only if its canonical
/// form is new, and only one non-edge per orbit of the automorphisms found
/// while labelling the parent is tried. The objective is evaluated at every
/// class, since delta+_l is not monotone under adding edges.
///
/// Pruning: a k-set T is addable to G if G+T is F-free. Every F-free
/// supergraph of G has deg(L) <= deg_G(L) + #{addable T containing L}, and
/// this bound only shrinks along supergraphs, so a class whose bound is
/// below the incumbent (or equal with a full witness list) is not expanded.
inline SearchResult search(const SearchProblem& problem) {
    detail::check_problem(problem);
    const Vertex n = problem.n;
    const int k = problem.k, l = problem.l;
    detail::Stopwatch clock;
    SearchResult result;
    detail::WitnessSet witnesses(problem.max_witnesses);

    const KGraph root(k, n);
    if (!is_family_free(problem.family, root)) {
        result.stats.seconds = clock.seconds();
        return result;
    }

    std::vector<std::vector<Vertex>> ksets;
    for_each_subset(n, k, [&](std::span<const Vertex> s) { ksets.emplace_back(s.begin(), s.end()); });
    std::vector<std::vector<std::size_t>> lsets_of;  // ranks of the l-subsets of each k-set
    for (const auto& t : ksets) {
        std::vector<std::size_t> ranks;
        std::vector<Vertex> sub(static_cast<std::size_t>(l));
        for_each_subset(static_cast<Vertex>(k), l, [&](std::span<const Vertex> pos) {
            for (int j = 0; j < l; ++j) sub[j] = t[pos[j]];
            ranks.push_back(static_cast<std::size_t>(colex_rank(sub)));
        });
        lsets_of.push_back(std::move(ranks));
    }
    const std::size_t lset_count = static_cast<std::size_t>(binom(n, l));
    const std::uint64_t full_degree = binom(n - l, k - l);

    const auto copies = detail::CopyIndex::build(problem.family, n, k);
    std::unordered_set<std::string> seen;
    // Each stacked graph carries its canonical labelling, whose
    // automorphisms drive the orbit pruning when it is expanded.
    std::vector<std::pair<KGraph, CanonicalLabeling>> stack;
    stack.emplace_back(root, canonical_labeling(root));
    seen.insert(stack.back().second.form);

    while (!stack.empty()) {
        if ((problem.budget.max_nodes && result.stats.nodes >= problem.budget.max_nodes) ||
            (problem.budget.max_seconds > 0 && clock.seconds() > problem.budget.max_seconds)) {
            result.exact = false;
            break;
        }
        auto [g, labeling] = std::move(stack.back());
        stack.pop_back();
        ++result.stats.nodes;

        const std::uint64_t value = objective_value(g, l, problem.mode);
        witnesses.offer(value, g, &labeling.form);

        std::vector<std::size_t> addable;
        std::vector<std::uint64_t> deg(lset_count, 0), extra(lset_count, 0);
        for (std::size_t r = 0; r < ksets.size(); ++r) {
            if (g.has_edge_rank(r)) {
                for (auto lr : lsets_of[r]) ++deg[lr];
                continue;
            }
            bool ok;
            if (copies) {
                ok = !copies->completes_copy(g.edge_words(), r);
            } else {
                const KGraph child = g.with_edge(ksets[r]);
                ok = std::none_of(problem.family.begin(), problem.family.end(), [&](const KGraph& f) {
                    return contains_subgraph_using(f, child, ksets[r]);
                });
            }
            if (!ok) continue;
            addable.push_back(r);
            for (auto lr : lsets_of[r]) ++extra[lr];
        }
        std::uint64_t bound = full_degree;
        bool constrained = false;
        for (std::size_t lr = 0; lr < lset_count; ++lr) {
            if (problem.mode == Objective::positive_degree && deg[lr] == 0) continue;
            bound = constrained ? std::min(bound, deg[lr] + extra[lr]) : deg[lr] + extra[lr];
            constrained = true;
        }
        if (witnesses.any() && (bound < witnesses.best() || (bound == witnesses.best() && witnesses.full()))) {
            ++result.stats.prunes;
            continue;
        }
        if (addable.empty()) continue;

        // One representative per orbit of addable k-sets under known automorphisms.
        std::vector<std::size_t> rep(ksets.size());
        std::iota(rep.begin(), rep.end(), std::size_t{0});
        auto find = [&](std::size_t x) {
            while (rep[x] != x) x = rep[x] = rep[rep[x]];
            return x;
        };
        std::vector<Vertex> image(static_cast<std::size_t>(k));
        for (const auto& gamma : labeling.automorphisms) {
            for (std::size_t r = 0; r < ksets.size(); ++r) {
                for (int j = 0; j < k; ++j) image[j] = gamma[ksets[r][j]];
                std::sort(image.begin(), image.end());
                std::size_t a = find(r), b = find(static_cast<std::size_t>(colex_rank(image)));
                if (a != b) rep[std::max(a, b)] = std::min(a, b);
            }
        }
        std::vector<std::pair<KGraph, CanonicalLabeling>> children;
        std::vector<char> orbit_done(ksets.size(), 0);
        for (auto r : addable) {
            const auto o = find(r);
            if (orbit_done[o]) continue;
            orbit_done[o] = 1;
            KGraph child = g.with_edge(ksets[r]);
            auto child_labeling = canonical_labeling(child);
            if (seen.insert(child_labeling.form).second) children.emplace_back(std::move(child), std::move(child_labeling));
        }
        for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
    }

    result.value = witnesses.any() ? witnesses.best() : 0;
    result.witnesses = witnesses.sorted();
    result.stats.seconds = clock.seconds();
    return result;
}

struct RatioRow {
    Vertex n = 0;
    std::uint64_t value = 0;
    Rational ratio;  ///< value / C(n-l, k-l)
    bool exact = true;
};

/// co+ex_l(n,F) / C(n-l,k-l) (or the min-degree analogue) for each n.
inline std::vector<RatioRow> ratio_table(const SearchProblem& base, Vertex n_from, Vertex n_to) {
    std::vector<RatioRow> rows;
    for (Vertex n = n_from; n <= n_to; ++n) {
        SearchProblem p = base;
        p.n = n;
        auto r = search(p);
        RatioRow row;
        row.n = n;
        row.value = r.value;
        row.ratio = Rational(BigInt(static_cast<unsigned long>(r.value)),
                             BigInt(static_cast<unsigned long>(binom(n - base.l, base.k - base.l))));
        row.ratio.canonicalize();
        row.exact = r.exact;
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace posdeg
