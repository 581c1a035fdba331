#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "posdeg/combinatorics.hpp"
#include "posdeg/errors.hpp"
#include "posdeg/rational.hpp"

namespace posdeg {

/// A sorted list of distinct vertices (an l-set L or a vertex set A).
class VertexSubset {
public:
    VertexSubset() = default;
    explicit VertexSubset(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
        std::sort(vertices_.begin(), vertices_.end());
        if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
            throw InputError("vertex subset has repeated vertices");
    }
    VertexSubset(std::initializer_list<Vertex> vertices) : VertexSubset(std::vector<Vertex>(vertices)) {}

    std::size_t size() const noexcept { return vertices_.size(); }
    std::span<const Vertex> vertices() const noexcept { return vertices_; }
    auto begin() const noexcept { return vertices_.begin(); }
    auto end() const noexcept { return vertices_.end(); }

    void check_within(Vertex n) const {
        if (!vertices_.empty() && vertices_.back() >= n)
            throw InputError("vertex " + std::to_string(vertices_.back()) + " out of range (n = " +
                             std::to_string(n) + ")");
    }

private:
    std::vector<Vertex> vertices_;
};

/// A k-uniform hypergraph on vertices 0..n-1.
///
/// Edges are kept twice: as sorted vertex tuples in insertion order (for
/// serialization) and as a bitset over colex ranks of k-subsets (for O(1)
/// membership). Immutable once built.
class KGraph {
public:
    static constexpr std::uint64_t kMaxRankSpace = std::uint64_t{1} << 36;

    KGraph() : KGraph(1, 0) {}

    KGraph(int k, Vertex n) : k_(k), n_(n) {
        if (k < 1 || k >= detail::kBinomCols) throw InputError("uniformity k must be in 1..16");
        const std::uint64_t space = binom(n, k);
        if (space > kMaxRankSpace) throw InputError("too many potential edges for C(n,k) bitset");
        bits_.assign(static_cast<std::size_t>((space + 63) / 64), 0);
    }

    KGraph(int k, Vertex n, const std::vector<std::vector<Vertex>>& edges) : KGraph(k, n) {
        for (const auto& e : edges) add_edge(e);
    }

    static KGraph complete(int k, Vertex n) {
        KGraph g(k, n);
        for_each_subset(n, k, [&](std::span<const Vertex> s) { g.add_edge(s); });
        return g;
    }

    int k() const noexcept { return k_; }
    Vertex n() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return k_ == 0 ? 0 : flat_.size() / static_cast<std::size_t>(k_); }
    bool empty() const noexcept { return flat_.empty(); }

    std::span<const Vertex> edge(std::size_t i) const {
        return std::span<const Vertex>(flat_).subspan(i * static_cast<std::size_t>(k_), static_cast<std::size_t>(k_));
    }

    /// Membership test for a vertex tuple in any order; tuples with repeated
    /// or out-of-range vertices are never edges.
    bool has_edge(std::span<const Vertex> tuple) const {
        if (tuple.size() != static_cast<std::size_t>(k_)) return false;
        Vertex buf[detail::kBinomCols];
        std::copy(tuple.begin(), tuple.end(), buf);
        std::sort(buf, buf + k_);
        for (int i = 0; i < k_; ++i)
            if (buf[i] >= n_ || (i > 0 && buf[i] == buf[i - 1])) return false;
        return has_edge_rank(colex_rank(std::span<const Vertex>(buf, static_cast<std::size_t>(k_))));
    }

    bool has_edge_rank(std::uint64_t rank) const noexcept { return (bits_[rank >> 6] >> (rank & 63)) & 1u; }

    /// Edge indicator over colex ranks, 64 ranks per word.
    const std::vector<std::uint64_t>& edge_words() const noexcept { return bits_; }

    /// Colex ranks of all edges, ascending.
    std::vector<std::uint64_t> edge_ranks() const {
        std::vector<std::uint64_t> ranks;
        ranks.reserve(edge_count());
        for (std::size_t w = 0; w < bits_.size(); ++w)
            for (std::uint64_t word = bits_[w]; word; word &= word - 1)
                ranks.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
        return ranks;
    }

    /// Copy with one more edge appended; throws if invalid or already present.
    KGraph with_edge(std::span<const Vertex> e) const {
        KGraph g = *this;
        g.add_edge(e);
        return g;
    }

    friend bool operator==(const KGraph& a, const KGraph& b) {
        return a.k_ == b.k_ && a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    friend class KGraphBuilder;

    void add_edge(std::span<const Vertex> e) {
        if (e.size() != static_cast<std::size_t>(k_))
            throw InputError("edge has " + std::to_string(e.size()) + " vertices, expected " + std::to_string(k_));
        std::vector<Vertex> sorted(e.begin(), e.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (sorted[i] >= n_)
                throw InputError("vertex " + std::to_string(sorted[i]) + " out of range (n = " + std::to_string(n_) + ")");
            if (i > 0 && sorted[i] == sorted[i - 1])
                throw InputError("edge repeats vertex " + std::to_string(sorted[i]));
        }
        const std::uint64_t rank = colex_rank(sorted);
        if (has_edge_rank(rank)) throw InputError("duplicate edge");
        bits_[rank >> 6] |= std::uint64_t{1} << (rank & 63);
        flat_.insert(flat_.end(), sorted.begin(), sorted.end());
    }

    int k_;
    Vertex n_;
    std::vector<Vertex> flat_;
    std::vector<std::uint64_t> bits_;
};

/// Accumulates edges one at a time, then hands over an immutable KGraph.
class KGraphBuilder {
public:
    KGraphBuilder(int k, Vertex n) : graph_(k, n) {}

    void add_edge(std::span<const Vertex> e) { graph_.add_edge(e); }
    KGraph build() && { return std::move(graph_); }

private:
    KGraph graph_;
};

/// Number of edges of g containing every vertex of l.
inline std::uint64_t degree(const KGraph& g, const VertexSubset& l) {
    l.check_within(g.n());
    if (l.size() > static_cast<std::size_t>(g.k())) return 0;
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto e = g.edge(i);
        if (std::includes(e.begin(), e.end(), l.begin(), l.end())) ++count;
    }
    return count;
}

/// Degrees of all l-subsets, indexed by colex rank.
inline std::vector<std::uint64_t> degree_table(const KGraph& g, int l) {
    if (l < 0 || l > g.k()) throw InputError("l out of range");
    std::vector<std::uint64_t> table(static_cast<std::size_t>(binom(g.n(), l)), 0);
    std::vector<Vertex> sub(static_cast<std::size_t>(l));
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        auto e = g.edge(i);
        for_each_subset(static_cast<Vertex>(g.k()), l, [&](std::span<const Vertex> pos) {
            for (std::size_t j = 0; j < pos.size(); ++j) sub[j] = e[pos[j]];
            ++table[colex_rank(sub)];
        });
    }
    return table;
}

namespace detail {
inline void check_level(const KGraph& g, int l) {
    if (l < 0 || l >= g.k())
        throw InputError("l = " + std::to_string(l) + " must satisfy 0 <= l <= k-1 = " + std::to_string(g.k() - 1));
}
} // namespace detail

/// Minimum positive l-degree: the least nonzero l-set degree, 0 for an edgeless graph.
inline std::uint64_t min_positive_degree(const KGraph& g, int l) {
    detail::check_level(g, l);
    if (g.empty()) return 0;
    std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
    for (auto d : degree_table(g, l))
        if (d > 0) best = std::min(best, d);
    return best;
}

/// Minimum l-degree over all l-sets, uncovered ones included.
inline std::uint64_t min_degree(const KGraph& g, int l) {
    detail::check_level(g, l);
    auto table = degree_table(g, l);
    if (table.empty()) return 0;
    return *std::min_element(table.begin(), table.end());
}

/// Vertices of g restricted to s and relabelled 0..|s|-1 in increasing order.
inline KGraph induced(const KGraph& g, const VertexSubset& s) {
    s.check_within(g.n());
    const Vertex m = static_cast<Vertex>(s.size());
    const int k = g.k();
    std::vector<std::vector<Vertex>> edges;
    std::vector<Vertex> image(static_cast<std::size_t>(k));
    if (binom(m, k) <= g.edge_count()) {
        auto vs = s.vertices();
        for_each_subset(m, k, [&](std::span<const Vertex> local) {
            for (int j = 0; j < k; ++j) image[j] = vs[local[j]];
            if (g.has_edge(image)) edges.emplace_back(local.begin(), local.end());
        });
    } else {
        std::vector<Vertex> position(g.n(), std::numeric_limits<Vertex>::max());
        for (std::size_t i = 0; i < s.size(); ++i) position[s.vertices()[i]] = static_cast<Vertex>(i);
        std::vector<std::pair<std::uint64_t, std::vector<Vertex>>> keyed;
        for (std::size_t i = 0; i < g.edge_count(); ++i) {
            auto e = g.edge(i);
            bool inside = true;
            for (int j = 0; j < k && inside; ++j) {
                image[j] = position[e[j]];
                inside = image[j] != std::numeric_limits<Vertex>::max();
            }
            if (inside) keyed.emplace_back(colex_rank(image), image);
        }
        std::sort(keyed.begin(), keyed.end());
        for (auto& [rank, e] : keyed) edges.push_back(std::move(e));
    }
    return KGraph(k, m, edges);
}

namespace detail {

/// Backtracking over maps V(F) -> V(G) that send F's edges to G's edges.
/// Vertices of F are visited in an order that closes edges early; each edge
/// is checked at the position of its last-visited vertex.
class MapSearch {
public:
    MapSearch(const KGraph& f, const KGraph& g, bool injective) : f_(f), g_(g), injective_(injective) {
        if (f.k() != g.k()) throw InputError("uniformity mismatch between F and G");
    }

    /// Orders the vertices of F that lie on edges, preassigned vertices first.
    void plan(const std::vector<Vertex>& first) {
        const Vertex fn = f_.n();
        std::vector<char> on_edge(fn, 0), placed(fn, 0);
        for (std::size_t i = 0; i < f_.edge_count(); ++i)
            for (Vertex v : f_.edge(i)) on_edge[v] = 1;
        order_.clear();
        for (Vertex v : first) {
            order_.push_back(v);
            placed[v] = 1;
        }
        while (true) {
            // Prefer the vertex sharing most edges with already placed vertices.
            int best_score = -1;
            Vertex best = fn;
            for (Vertex v = 0; v < fn; ++v) {
                if (!on_edge[v] || placed[v]) continue;
                int score = 0;
                for (std::size_t i = 0; i < f_.edge_count(); ++i) {
                    auto e = f_.edge(i);
                    if (std::find(e.begin(), e.end(), v) == e.end()) continue;
                    for (Vertex u : e) score += placed[u];
                }
                if (score > best_score) best_score = score, best = v;
            }
            if (best == fn) break;
            order_.push_back(best);
            placed[best] = 1;
        }
        std::vector<std::size_t> pos(fn, 0);
        for (std::size_t i = 0; i < order_.size(); ++i) pos[order_[i]] = i;
        closing_.assign(order_.size(), {});
        for (std::size_t i = 0; i < f_.edge_count(); ++i) {
            std::size_t last = 0;
            for (Vertex v : f_.edge(i)) last = std::max(last, pos[v]);
            closing_[last].push_back(i);
        }
        image_.assign(fn, 0);
        used_.assign(g_.n(), 0);
    }

    std::size_t mapped_vertex_count() const { return order_.size(); }

    /// Number of completions from position `depth` onward.
    unsigned __int128 count(std::size_t depth) {
        if (depth == order_.size()) return 1;
        unsigned __int128 total = 0;
        const Vertex v = order_[depth];
        for (Vertex x = 0; x < g_.n(); ++x) {
            if (!try_assign(depth, v, x)) continue;
            total += count(depth + 1);
            release(v);
        }
        return total;
    }

    bool exists(std::size_t depth) {
        if (depth == order_.size()) return true;
        const Vertex v = order_[depth];
        for (Vertex x = 0; x < g_.n(); ++x) {
            if (!try_assign(depth, v, x)) continue;
            bool found = exists(depth + 1);
            release(v);
            if (found) return true;
        }
        return false;
    }

    /// Fixes the first `fixed` positions of the order to the given images.
    bool preassign(const std::vector<Vertex>& images) {
        for (std::size_t d = 0; d < images.size(); ++d)
            if (!try_assign(d, order_[d], images[d])) {
                for (std::size_t u = 0; u < d; ++u) release(order_[u]);
                return false;
            }
        return true;
    }

    void release_prefix(std::size_t len) {
        for (std::size_t d = 0; d < len; ++d) release(order_[d]);
    }

private:
    bool try_assign(std::size_t depth, Vertex v, Vertex x) {
        if (injective_ && used_[x]) return false;
        image_[v] = x;
        Vertex tuple[kBinomCols];
        for (std::size_t ei : closing_[depth]) {
            auto e = f_.edge(ei);
            for (std::size_t j = 0; j < e.size(); ++j) tuple[j] = image_[e[j]];
            if (!g_.has_edge(std::span<const Vertex>(tuple, e.size()))) return false;
        }
        if (injective_) used_[x] = 1;
        return true;
    }

    void release(Vertex v) {
        if (injective_) used_[image_[v]] = 0;
    }

    const KGraph& f_;
    const KGraph& g_;
    bool injective_;
    std::vector<Vertex> order_;
    std::vector<std::vector<std::size_t>> closing_;
    std::vector<Vertex> image_;
    std::vector<char> used_;
};

} // namespace detail

/// Number of (not necessarily injective) maps V(F) -> V(G) sending every
/// edge of F onto an edge of G.
inline BigInt hom_count(const KGraph& f, const KGraph& g) {
    detail::MapSearch search(f, g, false);
    search.plan({});
    const auto mapped = search.mapped_vertex_count();
    if (g.n() > 1 && static_cast<double>(mapped) * std::log2(static_cast<double>(g.n())) >= 127.0)
        throw BudgetError("homomorphism count exceeds 128-bit range");
    const unsigned __int128 inner = search.count(0);
    BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(inner >> 64));
    BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(inner));
    BigInt free_factor;
    mpz_ui_pow_ui(free_factor.get_mpz_t(), g.n(), f.n() - static_cast<Vertex>(mapped));
    return ((hi << 64) + lo) * free_factor;
}

/// Homomorphism density t(F,G) = hom_count / |V(G)|^|V(F)|, exact.
inline Rational hom_density(const KGraph& f, const KGraph& g) {
    if (f.k() != g.k()) throw InputError("uniformity mismatch between F and G");
    if (g.n() == 0) throw InputError("hom_density needs a nonempty host graph");
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), g.n(), f.n());
    Rational r(hom_count(f, g), den);
    r.canonicalize();
    return r;
}

/// True iff some injective map V(F) -> V(G) sends edges of F to edges of G.
inline bool contains_subgraph(const KGraph& f, const KGraph& g) {
    if (f.k() != g.k()) throw InputError("uniformity mismatch between F and G");
    if (f.n() > g.n()) return false;
    detail::MapSearch search(f, g, true);
    search.plan({});
    return search.exists(0);
}

/// True iff G contains a copy of F that uses the edge `anchor` of G.
/// This is the incremental check after adding `anchor` to an F-free graph.
inline bool contains_subgraph_using(const KGraph& f, const KGraph& g, std::span<const Vertex> anchor) {
    if (f.k() != g.k()) throw InputError("uniformity mismatch between F and G");
    if (f.n() > g.n() || f.empty()) return false;
    const int k = f.k();
    std::vector<Vertex> perm(anchor.begin(), anchor.end());
    std::sort(perm.begin(), perm.end());
    detail::MapSearch search(f, g, true);
    for (std::size_t i = 0; i < f.edge_count(); ++i) {
        auto fe = f.edge(i);
        search.plan(std::vector<Vertex>(fe.begin(), fe.end()));
        std::vector<Vertex> images(perm);
        do {
            if (!search.preassign(images)) continue;
            bool found = search.exists(static_cast<std::size_t>(k));
            search.release_prefix(static_cast<std::size_t>(k));
            if (found) return true;
        } while (std::next_permutation(images.begin(), images.end()));
    }
    return false;
}

inline bool is_family_free(const std::vector<KGraph>& family, const KGraph& g) {
    return std::none_of(family.begin(), family.end(), [&](const KGraph& f) { return contains_subgraph(f, g); });
}

} // namespace posdeg
