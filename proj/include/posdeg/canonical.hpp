#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "posdeg/kgraph.hpp"
#include "posdeg/rng.hpp"

namespace posdeg {

/// Result of canonical labelling.
///
/// `label[v]` is the canonical position of vertex v. `automorphisms` holds
/// automorphisms discovered during the search (as vertex maps); they are
/// genuine automorphisms but need not generate the whole group.
struct CanonicalLabeling {
    std::string form;
    std::vector<Vertex> label;
    std::vector<std::vector<Vertex>> automorphisms;
};

namespace detail {

class Canonicalizer {
public:
    explicit Canonicalizer(const KGraph& g)
        : g_(g), n_(g.n()), incident_start_(g.n() + 1, 0), keyed_(g.n()), order_(g.n()) {
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            for (Vertex v : g.edge(i)) ++incident_start_[v + 1];
        for (Vertex v = 0; v < n_; ++v) incident_start_[v + 1] += incident_start_[v];
        incident_.resize(incident_start_[n_]);
        std::vector<std::size_t> fill(incident_start_.begin(), incident_start_.end() - 1);
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            for (Vertex v : g.edge(i)) incident_[fill[v]++] = i;
    }

    CanonicalLabeling run() {
        std::vector<int> colors(n_, 0);
        std::vector<Vertex> prefix;
        search(colors, prefix);

        CanonicalLabeling out;
        out.label = best_label_;
        out.automorphisms = automorphisms_;
        out.form = std::to_string(g_.k()) + "," + std::to_string(n_) + ":";
        for (std::size_t i = 0; i < best_code_.size(); ++i) {
            if (i) out.form += ',';
            out.form += std::to_string(best_code_[i]);
        }
        return out;
    }

private:
    // Splits color classes by the multiset of neighbour-color tuples over
    // incident edges until the partition is stable. Colors stay ordered so
    // that an earlier cell never moves behind a later one. Tuples and their
    // multisets are hashed; a collision can only merge cells, which keeps the
    // partition label-independent.
    void refine(std::vector<int>& colors) {
        std::size_t cells = count_cells(colors);
        while (true) {
            for (Vertex v = 0; v < n_; ++v) {
                codes_.clear();
                for (std::size_t p = incident_start_[v]; p < incident_start_[v + 1]; ++p) {
                    const std::size_t ei = incident_[p];
                    tuple_.clear();
                    for (Vertex u : g_.edge(ei))
                        if (u != v) tuple_.push_back(colors[u]);
                    std::sort(tuple_.begin(), tuple_.end());
                    std::uint64_t code = 0;
                    for (int c : tuple_) code = splitmix64_mix(code ^ (static_cast<std::uint64_t>(c) + 1));
                    codes_.push_back(code);
                }
                std::sort(codes_.begin(), codes_.end());
                std::uint64_t h = codes_.size();
                for (auto c : codes_) h = splitmix64_mix(h ^ c);
                keyed_[v] = {colors[v], h};
            }
            std::iota(order_.begin(), order_.end(), Vertex{0});
            std::sort(order_.begin(), order_.end(), [&](Vertex a, Vertex b) { return keyed_[a] < keyed_[b]; });
            int next = -1;
            for (std::size_t i = 0; i < order_.size(); ++i) {
                if (i == 0 || keyed_[order_[i]] != keyed_[order_[i - 1]]) ++next;
                colors[order_[i]] = next;
            }
            const std::size_t refined = static_cast<std::size_t>(next + 1);
            if (refined == cells) return;
            cells = refined;
        }
    }

    std::size_t count_cells(const std::vector<int>& colors) const {
        std::vector<int> sorted(colors);
        std::sort(sorted.begin(), sorted.end());
        return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }

    std::vector<std::uint64_t> encode(const std::vector<Vertex>& label) const {
        std::vector<std::uint64_t> code;
        code.reserve(g_.edge_count());
        std::vector<Vertex> image(static_cast<std::size_t>(g_.k()));
        for (std::size_t i = 0; i < g_.edge_count(); ++i) {
            auto e = g_.edge(i);
            for (std::size_t j = 0; j < e.size(); ++j) image[j] = label[e[j]];
            std::sort(image.begin(), image.end());
            code.push_back(colex_rank(image));
        }
        std::sort(code.begin(), code.end());
        return code;
    }

    void record_automorphism(const std::vector<Vertex>& from, const std::vector<Vertex>& to) {
        // from[v] and to[u] agree as labels: map v to the u carrying the same label.
        std::vector<Vertex> inverse(n_);
        for (Vertex u = 0; u < n_; ++u) inverse[to[u]] = u;
        std::vector<Vertex> gamma(n_);
        bool identity = true;
        for (Vertex v = 0; v < n_; ++v) {
            gamma[v] = inverse[from[v]];
            identity &= gamma[v] == v;
        }
        if (!identity) automorphisms_.push_back(std::move(gamma));
    }

    void leaf(const std::vector<int>& colors) {
        std::vector<Vertex> label(n_);
        for (Vertex v = 0; v < n_; ++v) label[v] = static_cast<Vertex>(colors[v]);
        auto code = encode(label);
        if (first_label_.empty()) {
            first_label_ = label;
            first_code_ = code;
            best_label_ = label;
            best_code_ = std::move(code);
            return;
        }
        if (code == first_code_) {
            record_automorphism(first_label_, label);
        } else if (code == best_code_) {
            record_automorphism(best_label_, label);
        } else if (code < best_code_) {
            best_label_ = label;
            best_code_ = std::move(code);
        }
    }

    Vertex find(std::vector<Vertex>& parent, Vertex v) const {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }

    // Orbit representative of every vertex under the discovered automorphisms
    // that fix `prefix` pointwise.
    std::vector<Vertex> orbits_fixing(const std::vector<Vertex>& prefix) const {
        std::vector<Vertex> parent(n_);
        std::iota(parent.begin(), parent.end(), Vertex{0});
        for (const auto& gamma : automorphisms_) {
            bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](Vertex p) { return gamma[p] == p; });
            if (!fixes) continue;
            for (Vertex v = 0; v < n_; ++v) {
                Vertex a = find(parent, v), b = find(parent, gamma[v]);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
        }
        for (Vertex v = 0; v < n_; ++v) parent[v] = find(parent, v);
        return parent;
    }

    void search(std::vector<int> colors, std::vector<Vertex>& prefix) {
        refine(colors);
        std::vector<int> cell_size(n_, 0);
        for (int c : colors) ++cell_size[static_cast<std::size_t>(c)];
        int target = -1;
        for (Vertex c = 0; c < n_; ++c)
            if (cell_size[c] > 1) {
                target = static_cast<int>(c);
                break;
            }
        if (target < 0) {
            leaf(colors);
            return;
        }
        std::vector<Vertex> explored;
        for (Vertex v = 0; v < n_; ++v) {
            if (colors[v] != target) continue;
            if (!explored.empty()) {
                auto orbit = orbits_fixing(prefix);
                bool equivalent = std::any_of(explored.begin(), explored.end(),
                                              [&](Vertex u) { return orbit[u] == orbit[v]; });
                if (equivalent) continue;
            }
            explored.push_back(v);
            std::vector<int> child(n_);
            for (Vertex u = 0; u < n_; ++u)
                child[u] = 2 * colors[u] + ((colors[u] == target && u != v) ? 1 : 0);
            prefix.push_back(v);
            search(std::move(child), prefix);
            prefix.pop_back();
        }
    }

    const KGraph& g_;
    Vertex n_;
    std::vector<std::size_t> incident_start_, incident_;
    std::vector<std::uint64_t> codes_;
    std::vector<int> tuple_;
    std::vector<std::pair<int, std::uint64_t>> keyed_;
    std::vector<Vertex> order_;
    std::vector<Vertex> first_label_, best_label_;
    std::vector<std::uint64_t> first_code_, best_code_;
    std::vector<std::vector<Vertex>> automorphisms_;
};

} // namespace detail

/// Canonical labelling by colour refinement plus individualisation search
/// with automorphism pruning; the form is the lexicographically least sorted
/// list of relabelled edge ranks.
inline CanonicalLabeling canonical_labeling(const KGraph& g) {
    if (g.n() == 0) return {std::to_string(g.k()) + ",0:", {}, {}};
    return detail::Canonicalizer(g).run();
}

/// Equal for two graphs iff they are isomorphic.
inline std::string canonical_form(const KGraph& g) { return canonical_labeling(g).form; }

/// Applies a vertex relabelling v -> perm[v].
inline KGraph relabel(const KGraph& g, const std::vector<Vertex>& perm) {
    if (perm.size() != g.n()) throw InputError("permutation size mismatch");
    std::vector<std::pair<std::uint64_t, std::vector<Vertex>>> keyed;
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        std::vector<Vertex> e;
        for (Vertex v : g.edge(i)) e.push_back(perm[v]);
        std::sort(e.begin(), e.end());
        keyed.emplace_back(colex_rank(e), std::move(e));
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<Vertex>> edges;
    for (auto& [r, e] : keyed) edges.push_back(std::move(e));
    return KGraph(g.k(), g.n(), edges);
}

/// The canonical representative: g relabelled by its canonical labelling.
inline KGraph canonical_graph(const KGraph& g) { return relabel(g, canonical_labeling(g).label); }

} // namespace posdeg
