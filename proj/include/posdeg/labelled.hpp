#pragma once

#include <string>
#include <vector>

#include "posdeg/kgraph.hpp"

namespace posdeg {

/// A k-graph whose vertices 0..roots-1 are distinguished roots, 0 <= roots < k.
class LabelledKGraph {
public:
    LabelledKGraph(KGraph graph, int roots) : graph_(std::move(graph)), roots_(roots) {
        if (roots < 0 || roots >= graph_.k())
            throw InputError("root count must satisfy 0 <= l <= k-1");
        if (static_cast<Vertex>(roots) > graph_.n()) throw InputError("more roots than vertices");
    }

    const KGraph& graph() const noexcept { return graph_; }
    int roots() const noexcept { return roots_; }

    friend bool operator==(const LabelledKGraph& a, const LabelledKGraph& b) {
        return a.roots_ == b.roots_ && a.graph_ == b.graph_;
    }

private:
    KGraph graph_;
    int roots_;
};

/// Glues F and G along their roots, keeping the non-root vertices disjoint.
/// G's non-root vertex v becomes |V(F)| + (v - l).
inline LabelledKGraph rooted_product(const LabelledKGraph& f, const LabelledKGraph& g) {
    if (f.roots() != g.roots()) throw InputError("rooted_product needs equal root counts");
    if (f.graph().k() != g.graph().k()) throw InputError("rooted_product needs equal uniformity");
    const int l = f.roots();
    const Vertex fn = f.graph().n();
    const Vertex total = fn + g.graph().n() - static_cast<Vertex>(l);
    KGraphBuilder builder(f.graph().k(), total);
    for (std::size_t i = 0; i < f.graph().edge_count(); ++i) builder.add_edge(f.graph().edge(i));
    std::vector<Vertex> mapped;
    for (std::size_t i = 0; i < g.graph().edge_count(); ++i) {
        mapped.clear();
        for (Vertex v : g.graph().edge(i))
            mapped.push_back(v < static_cast<Vertex>(l) ? v : fn + (v - static_cast<Vertex>(l)));
        builder.add_edge(mapped);
    }
    return LabelledKGraph(std::move(builder).build(), l);
}

/// The l-labelled single k-edge ([k], {[k]}, l).
inline LabelledKGraph labelled_edge(int k, int l) {
    std::vector<Vertex> e(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) e[i] = static_cast<Vertex>(i);
    return LabelledKGraph(KGraph(k, static_cast<Vertex>(k), {e}), l);
}

/// i-fold rooted product of the l-labelled single k-edge; i = 0 gives the
/// bare roots.
inline LabelledKGraph edge_power(int k, int l, int i) {
    if (i < 0) throw InputError("edge_power needs i >= 0");
    if (l < 0 || l >= k) throw InputError("edge_power needs 0 <= l <= k-1");
    LabelledKGraph result(KGraph(k, static_cast<Vertex>(l)), l);
    const LabelledKGraph edge = labelled_edge(k, l);
    for (int j = 0; j < i; ++j) result = rooted_product(result, edge);
    return result;
}

inline KGraph unlabel(const LabelledKGraph& f) { return f.graph(); }

} // namespace posdeg
