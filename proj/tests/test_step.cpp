#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "test_util.hpp"

using namespace posdeg;
using testutil::make_step;
using testutil::pair_coordinate_w;

namespace {

StepHypergraphon random_symmetric_w(int parts, std::mt19937_64& rng) {
    std::vector<Rational> lengths;
    if (parts == 2) lengths = {make_rational(1, 3), make_rational(2, 3)};
    else lengths = {make_rational(1, 2), make_rational(1, 4), make_rational(1, 4)};
    lengths.resize(static_cast<std::size_t>(parts));
    return symmetrize(make_step(3, lengths, [&](const std::vector<int>&) {
        return make_rational(static_cast<std::int64_t>(rng() % 5), 4);
    }));
}

// Naive integral: enumerate part indices for every vertex subset of F whose
// size occurs among W's support coordinates; root subsets are pinned to the
// cell when given.
Rational naive_integral(const KGraph& f, const StepHypergraphon& w, const CellPoint* cell) {
    const int k = w.k();
    std::vector<int> sizes;
    for (auto mask : w.support_masks()) sizes.push_back(std::popcount(mask));
    std::vector<std::uint64_t> subsets;
    for (std::uint64_t s = 1; s < (std::uint64_t{1} << f.n()); ++s)
        if (std::find(sizes.begin(), sizes.end(), std::popcount(s)) != sizes.end()) subsets.push_back(s);
    std::vector<int> parts(subsets.size(), 0);
    std::vector<char> pinned(subsets.size(), 0);
    if (cell) {
        const std::uint64_t roots = (std::uint64_t{1} << cell->l) - 1;
        for (std::size_t i = 0; i < subsets.size(); ++i)
            if ((subsets[i] & ~roots) == 0) {
                pinned[i] = 1;
                parts[i] = cell->parts[subsets[i] - 1];
            }
    }
    auto slot = [&](std::uint64_t s) {
        return static_cast<std::size_t>(std::find(subsets.begin(), subsets.end(), s) - subsets.begin());
    };
    Rational total = 0;
    std::vector<int> a(static_cast<std::size_t>(coordinate_count(k)), 0);
    while (true) {
        Rational term = 1;
        for (std::size_t i = 0; i < subsets.size(); ++i)
            if (!pinned[i]) term *= w.lengths()[static_cast<std::size_t>(parts[i])];
        for (std::size_t ei = 0; ei < f.edge_count() && term != 0; ++ei) {
            auto e = f.edge(ei);
            for (auto mask : w.support_masks()) {
                std::uint64_t s = 0;
                for (int j = 0; j < k; ++j)
                    if (mask >> j & 1u) s |= std::uint64_t{1} << e[j];
                a[mask - 1] = parts[slot(s)];
            }
            term *= w.value(a);
        }
        total += term;
        std::size_t i = 0;
        while (i < parts.size()) {
            if (pinned[i]) {
                ++i;
                continue;
            }
            if (++parts[i] < w.parts()) break;
            parts[i++] = 0;
        }
        if (i == parts.size()) break;
    }
    return total;
}

LabelledKGraph random_labelled(int l, int extra, std::mt19937_64& rng) {
    const Vertex n = static_cast<Vertex>(l + extra);
    std::vector<std::vector<Vertex>> edges;
    for (auto& e : testutil::all_ksets(n, 3)) {
        if (e[2] < static_cast<Vertex>(l)) continue;
        if (rng() % 2) edges.push_back(e);
    }
    return LabelledKGraph(KGraph(3, n, edges), l);
}

KGraph book() { return KGraph(3, 4, {{0, 1, 2}, {0, 1, 3}}); }

std::vector<double> from_lexicographic_order(const std::vector<double>& p) {
    // (x1, x2, x3, x12, x13, x23) -> positions of masks 1,2,4,3,5,6.
    std::vector<double> x(6);
    x[0] = p[0];
    x[1] = p[1];
    x[3] = p[2];
    x[2] = p[3];
    x[4] = p[4];
    x[5] = p[5];
    return x;
}

} // namespace

TEST(Validate, ConstantIsSymmetric) { EXPECT_FALSE(validate(StepHypergraphon::constant(3, make_rational(1, 3)))); }

TEST(Validate, AsymmetricTableReported) {
    const auto w = make_step(3, {make_rational(1, 2), make_rational(1, 2)},
                             [](const std::vector<int>& a) { return Rational(a[0] == 0 ? 1 : 0); });
    const auto v = validate(w);
    ASSERT_TRUE(v);
    EXPECT_NE(v->value, v->permuted_value);
    EXPECT_EQ(w.value(permute_assignment(v->assignment, v->sigma)), v->permuted_value);
}

TEST(Symmetrize, OrbitAverageAndIdempotence) {
    const auto raw = make_step(2, {make_rational(1, 2), make_rational(1, 2)}, [](const std::vector<int>& a) {
        return Rational(a[0] == 0 && a[1] == 1 ? 1 : 0);
    });
    const auto w = symmetrize(raw);
    EXPECT_FALSE(validate(w));
    EXPECT_EQ(w.value(std::vector<int>{0, 1}), make_rational(1, 2));
    EXPECT_EQ(w.value(std::vector<int>{1, 0}), make_rational(1, 2));
    EXPECT_EQ(w.value(std::vector<int>{0, 0}), 0);
    EXPECT_EQ(symmetrize(w), w);
    EXPECT_EQ(symmetrize(pair_coordinate_w()), pair_coordinate_w());
}

TEST(Symmetrize, RandomTablesValidate) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) EXPECT_FALSE(validate(random_symmetric_w(2, rng)));
}

TEST(StepHypergraphon, RejectsBadInput) {
    EXPECT_THROW(StepHypergraphon(3, {make_rational(1, 2)}, {Rational(1)}), InputError);
    EXPECT_THROW(StepHypergraphon(3, {Rational(1)}, {make_rational(3, 2)}), InputError);
    EXPECT_THROW(StepHypergraphon(3, {Rational(1)}, {Rational(1), Rational(0)}), InputError);
    EXPECT_THROW(StepHypergraphon(3, {Rational(0), Rational(1)}, std::vector<Rational>(64, Rational(0))), InputError);
}

TEST(FromGraph, CompleteAndEmpty) {
    const auto w = from_graph(KGraph::complete(3, 4));
    for (std::size_t idx = 0; idx < w.table().size(); ++idx) {
        auto a = w.assignment_of(idx);
        const bool distinct = a[0] != a[1] && a[0] != a[3] && a[1] != a[3];
        EXPECT_EQ(w.table()[idx], distinct ? 1 : 0);
    }
    EXPECT_TRUE(from_graph(KGraph(3, 5)).is_zero());
    EXPECT_FALSE(validate(from_graph(KGraph(3, 5, {{0, 1, 2}, {1, 3, 4}}))));
}

TEST(FromGraph, EdgeDensity) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 20; ++t) {
        const Vertex n = 3 + static_cast<Vertex>(rng() % 4);
        const KGraph g = testutil::random_graph(n, 3, 0.5, rng);
        Rational expected(BigInt(static_cast<unsigned long>(6 * g.edge_count())),
                          BigInt(static_cast<unsigned long>(n * n * n)));
        expected.canonicalize();
        EXPECT_EQ(density(KGraph::complete(3, 3), from_graph(g)), expected);
        EXPECT_EQ(density(KGraph::complete(3, 3), from_graph(g)), hom_density(KGraph::complete(3, 3), g));
    }
}

TEST(Density, ConstantHypergraphon) {
    const auto w = StepHypergraphon::constant(3, make_rational(2, 3));
    EXPECT_EQ(density(KGraph(3, 4), w), 1);
    EXPECT_EQ(density(KGraph::complete(3, 3), w), make_rational(2, 3));
    EXPECT_EQ(density(book(), w), make_rational(4, 9));
    EXPECT_EQ(density(KGraph::complete(3, 5), w), rational_pow(make_rational(2, 3), 10));
}

TEST(Density, PairCoordinateHypergraphon) {
    const auto w = pair_coordinate_w();
    EXPECT_EQ(density(KGraph::complete(3, 3), w), make_rational(1, 8));
    EXPECT_EQ(density(book(), w), make_rational(1, 32));
    EXPECT_EQ(density(unlabel(edge_power(3, 2, 2)), w), make_rational(1, 32));
    EXPECT_EQ(naive_integral(book(), w, nullptr), make_rational(1, 32));
}

TEST(Density, MatchesNaiveIntegration) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        const auto w = random_symmetric_w(2, rng);
        const KGraph f = testutil::random_graph(3 + static_cast<Vertex>(rng() % 2), 3, 0.6, rng);
        const Rational d = density(f, w);
        EXPECT_EQ(d, naive_integral(f, w, nullptr)) << serialize_graph(f);
        EXPECT_GE(d, 0);
        EXPECT_LE(d, 1);
    }
}

TEST(Density, EqualsHomDensityOfGraph) {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 40; ++t) {
        const KGraph f = testutil::random_graph(3 + static_cast<Vertex>(rng() % 2), 3, 0.6, rng);
        const KGraph g = testutil::random_graph(3 + static_cast<Vertex>(rng() % 4), 3, 0.5, rng);
        EXPECT_EQ(density(f, from_graph(g)), hom_density(f, g));
    }
}

TEST(Density, BudgetAndMismatch) {
    IntegrationOptions tiny;
    tiny.term_budget = 10;
    EXPECT_THROW(density(KGraph::complete(3, 5), pair_coordinate_w(), tiny), BudgetError);
    EXPECT_THROW(density(KGraph::complete(2, 2), pair_coordinate_w()), InputError);
}

TEST(Degree, Examples) {
    const auto c = StepHypergraphon::constant(3, make_rational(3, 7));
    for (int l = 0; l < 3; ++l)
        for (const auto& cell : all_cells(1, l)) EXPECT_EQ(degree(c, cell), make_rational(3, 7));
    const auto w = pair_coordinate_w();
    EXPECT_EQ(degree(w, CellPoint{2, {0, 1, 0}}), make_rational(1, 4));
    EXPECT_EQ(degree(w, CellPoint{2, {1, 0, 1}}), 0);
    const auto wk4 = from_graph(KGraph::complete(3, 4));
    EXPECT_EQ(degree(wk4, CellPoint{2, {0, 2, 0}}), make_rational(1, 2));
    EXPECT_EQ(degree(wk4, CellPoint{2, {1, 1, 3}}), 0);
}

TEST(Degree, ScalingLawOnGraphs) {
    std::mt19937_64 rng(53);
    for (int t = 0; t < 25; ++t) {
        const Vertex n = 3 + static_cast<Vertex>(rng() % 3);
        const KGraph g = testutil::random_graph(n, 3, 0.5, rng);
        const auto w = from_graph(g);
        for (int l = 0; l < 3; ++l) {
            BigInt den = 1;
            for (int i = 0; i < 3 - l; ++i) den *= n;
            Rational scale(BigInt(static_cast<unsigned long>(factorial(3 - l))), den);
            scale.canonicalize();
            EXPECT_EQ(min_positive_degree(w, l), Rational(BigInt(static_cast<unsigned long>(min_positive_degree(g, l)))) * scale);
            // For l >= 2 the cells repeating a singleton part have degree 0.
            if (l <= 1)
                EXPECT_EQ(min_degree(w, l), Rational(BigInt(static_cast<unsigned long>(min_degree(g, l)))) * scale);
            else
                EXPECT_EQ(min_degree(w, l), 0);
        }
    }
}

TEST(MinDegrees, Examples) {
    EXPECT_EQ(min_positive_degree(StepHypergraphon::constant(3, 0), 2), 0);
    EXPECT_EQ(min_positive_degree(pair_coordinate_w(), 2), make_rational(1, 4));
    EXPECT_EQ(min_degree(pair_coordinate_w(), 2), 0);
    EXPECT_EQ(min_positive_degree(StepHypergraphon::constant(3, make_rational(1, 5)), 1), make_rational(1, 5));
    EXPECT_EQ(min_degree(StepHypergraphon::constant(3, make_rational(1, 5)), 2), make_rational(1, 5));
    std::mt19937_64 rng(61);
    for (int t = 0; t < 10; ++t) {
        const auto w = random_symmetric_w(3, rng);
        for (int l = 0; l < 3; ++l)
            if (min_positive_degree(w, l) > 0) {
                EXPECT_LE(min_degree(w, l), min_positive_degree(w, l));
            }
    }
}

TEST(RootedProduct, Examples) {
    const auto e = labelled_edge(3, 2);
    EXPECT_EQ(rooted_product(e, e).graph(), book());
    const LabelledKGraph bare(KGraph(3, 2), 2);
    const auto f = rooted_product(e, bare);
    EXPECT_EQ(f.graph(), e.graph());
    const auto g = rooted_product(bare, LabelledKGraph(KGraph(3, 4, {{0, 1, 3}}), 2));
    EXPECT_EQ(g.graph(), KGraph(3, 4, {{0, 1, 3}}));
    EXPECT_THROW(rooted_product(e, labelled_edge(3, 1)), InputError);
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i <= 4; ++i) {
            const auto p = edge_power(3, l, i);
            EXPECT_EQ(p.graph().n(), static_cast<Vertex>(l + i * (3 - l)));
            EXPECT_EQ(p.graph().edge_count(), static_cast<std::size_t>(i));
        }
    EXPECT_EQ(edge_power(3, 2, 1), labelled_edge(3, 2));
    EXPECT_EQ(unlabel(edge_power(3, 2, 2)), book());
}

TEST(RootedDensity, EdgeGivesDegree) {
    std::mt19937_64 rng(71);
    for (int t = 0; t < 5; ++t) {
        const auto w = random_symmetric_w(2, rng);
        for (int l = 0; l < 3; ++l)
            for (const auto& cell : all_cells(w.parts(), l))
                EXPECT_EQ(rooted_density(labelled_edge(3, l), w, cell), degree(w, cell));
    }
}

TEST(RootedDensity, ConstantHypergraphon) {
    const auto w = StepHypergraphon::constant(3, make_rational(1, 3));
    std::mt19937_64 rng(72);
    for (int t = 0; t < 10; ++t) {
        const auto f = random_labelled(2, 2, rng);
        EXPECT_EQ(rooted_density(f, w, CellPoint{2, {0, 0, 0}}), rational_pow(make_rational(1, 3), f.graph().edge_count()));
    }
}

TEST(RootedDensity, MatchesNaiveIntegration) {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 12; ++t) {
        const auto w = random_symmetric_w(2, rng);
        const int l = 1 + static_cast<int>(rng() % 2);
        const auto f = random_labelled(l, 2, rng);
        for (const auto& cell : all_cells(w.parts(), l))
            EXPECT_EQ(rooted_density(f, w, cell), naive_integral(f.graph(), w, &cell));
    }
}

TEST(RootedDensity, ProductPowerAndAveragingLaws) {
    std::mt19937_64 rng(79);
    for (int t = 0; t < 8; ++t) {
        const auto w = random_symmetric_w(2, rng);
        for (int l = 1; l <= 2; ++l) {
            const auto f = random_labelled(l, 1 + static_cast<int>(rng() % 2), rng);
            const auto g = random_labelled(l, 1 + static_cast<int>(rng() % 2), rng);
            const auto fg = rooted_product(f, g);
            Rational average = 0;
            for (const auto& cell : all_cells(w.parts(), l)) {
                const Rational tf = rooted_density(f, w, cell);
                EXPECT_EQ(rooted_density(fg, w, cell), tf * rooted_density(g, w, cell));
                for (int i = 0; i <= 3; ++i)
                    EXPECT_EQ(rooted_density(edge_power(3, l, i), w, cell), rational_pow(degree(w, cell), i));
                average += cell_measure(w, cell) * tf;
            }
            EXPECT_EQ(density(unlabel(f), w), average);
        }
    }
}

TEST(DirectedCycle, PointEvaluations) {
    const auto h = directed_cycle_hypergraphon();
    EXPECT_EQ(h.eval(from_lexicographic_order({0.1, 0.5, 0.9, 0.2, 0.8, 0.3})), 1.0);
    EXPECT_EQ(h.eval(from_lexicographic_order({0.1, 0.5, 0.9, 0.2, 0.2, 0.3})), 0.0);
    EXPECT_EQ(h.eval(from_lexicographic_order({0.5, 0.5, 0.9, 0.2, 0.8, 0.3})), 0.0);
    // Rotating the vertices keeps the point in the orbit.
    EXPECT_EQ(h.eval(from_lexicographic_order({0.9, 0.1, 0.5, 0.8, 0.3, 0.2})), 1.0);
    EXPECT_TRUE(check_analytic_symmetry(h, 20000, 5));
}

TEST(DirectedCycle, EdgeDensityByMonteCarlo) {
    const auto e = mc_density(KGraph::complete(3, 3), directed_cycle_hypergraphon(), 1'000'000, 2024);
    EXPECT_LE(std::abs(e.mean - 0.125), 3 * e.std_error);
}

TEST(MonteCarlo, ConstantOneIsExact) {
    const auto e = mc_density(book(), constant_hypergraphon(3, 1.0), 1000, 1);
    EXPECT_EQ(e.mean, 1.0);
    EXPECT_EQ(e.std_error, 0.0);
}

TEST(MonteCarlo, StepAsAnalyticMatchesExact) {
    const auto w = pair_coordinate_w();
    for (const auto& f : {KGraph::complete(3, 3), book()}) {
        const auto e = mc_density(f, as_analytic(w), 200'000, 77);
        EXPECT_LE(std::abs(e.mean - to_double(density(f, w))), 3 * e.std_error);
    }
}

TEST(Degree, CellsOfGraphHypergraphon) {
    std::mt19937_64 rng(83);
    for (int t = 0; t < 15; ++t) {
        const Vertex n = 3 + static_cast<Vertex>(rng() % 3);
        const KGraph g = testutil::random_graph(n, 3, 0.5, rng);
        const auto w = from_graph(g);
        for (int l = 0; l < 3; ++l)
            for (const auto& cell : all_cells(w.parts(), l)) {
                // Singleton coordinates sit at positions 2^j - 1.
                std::vector<Vertex> roots;
                for (int j = 0; j < l; ++j) roots.push_back(static_cast<Vertex>(cell.parts[(1u << j) - 1]));
                std::vector<Vertex> sorted = roots;
                std::sort(sorted.begin(), sorted.end());
                Rational expected = 0;
                if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) {
                    BigInt den = 1;
                    for (int i = 0; i < 3 - l; ++i) den *= n;
                    expected = Rational(BigInt(static_cast<unsigned long>(degree(g, VertexSubset(sorted)) * factorial(3 - l))), den);
                    expected.canonicalize();
                }
                EXPECT_EQ(degree(w, cell), expected);
            }
    }
}
