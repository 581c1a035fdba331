#include <gtest/gtest.h>
#include <set>

#include "test_util.hpp"

using namespace posdeg;

namespace {

const KGraph kEdge = KGraph::complete(3, 3);
const KGraph kK4 = KGraph::complete(3, 4);
const KGraph kTwoDisjoint(3, 6, {{0, 1, 2}, {3, 4, 5}});

SearchProblem problem(Vertex n, int l, std::vector<KGraph> family, Objective mode = Objective::positive_degree) {
    SearchProblem p;
    p.n = n;
    p.k = 3;
    p.l = l;
    p.family = std::move(family);
    p.mode = mode;
    return p;
}

void expect_valid_witnesses(const SearchProblem& p, const SearchResult& r) {
    std::set<std::string> forms;
    for (const auto& w : r.witnesses) {
        EXPECT_EQ(w.n(), p.n);
        EXPECT_TRUE(is_family_free(p.family, w));
        EXPECT_EQ(objective_value(w, p.l, p.mode), r.value);
        EXPECT_TRUE(forms.insert(canonical_form(w)).second);
    }
}

} // namespace

TEST(BruteForce, SingleEdgeForbidden) {
    for (int l = 0; l < 3; ++l) {
        const auto p = problem(5, l, {kEdge});
        const auto r = brute_force(p);
        EXPECT_EQ(r.value, 0u);
        ASSERT_EQ(r.witnesses.size(), 1u);
        EXPECT_TRUE(r.witnesses[0].empty());
    }
}

TEST(BruteForce, EmptyFamily) {
    for (Vertex n = 4; n <= 6; ++n)
        for (int l = 0; l < 3; ++l) {
            const auto p = problem(n, l, {});
            const auto r = brute_force(p);
            EXPECT_EQ(r.value, binom(n - l, 3 - l));
            bool has_complete = false;
            for (const auto& w : r.witnesses) has_complete |= w == KGraph::complete(3, n);
            EXPECT_TRUE(has_complete);
            expect_valid_witnesses(p, r);
        }
}

TEST(BruteForce, K4OnFourVertices) {
    const auto p = problem(4, 2, {kK4});
    const auto r = brute_force(p);
    EXPECT_EQ(r.value, 1u);
    const KGraph k4_minus(3, 4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
    bool found = false;
    for (const auto& w : r.witnesses) found |= canonical_form(w) == canonical_form(k4_minus);
    EXPECT_TRUE(found);
    expect_valid_witnesses(p, r);
}

TEST(BruteForce, RefusesLargeInstances) { EXPECT_THROW(brute_force(problem(7, 2, {kK4})), InputError); }

TEST(Search, K4OnFourVertices) {
    const auto p = problem(4, 2, {kK4});
    const auto r = search(p);
    EXPECT_EQ(r.value, 1u);
    EXPECT_TRUE(r.exact);
    const KGraph k4_minus(3, 4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
    bool found = false;
    for (const auto& w : r.witnesses) found |= canonical_form(w) == canonical_form(k4_minus);
    EXPECT_TRUE(found);
    expect_valid_witnesses(p, r);
}

TEST(Search, MinDegreeK4OnFourVertices) {
    // Three triples of K4 already cover all six pairs.
    const KGraph k4_minus(3, 4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}});
    ASSERT_EQ(min_degree(k4_minus, 2), 1u);
    EXPECT_EQ(search(problem(4, 2, {kK4}, Objective::min_degree)).value, 1u);
    EXPECT_EQ(brute_force(problem(4, 2, {kK4}, Objective::min_degree)).value, 1u);
}

TEST(Search, EmptyFamilyFindsCompleteGraph) {
    const auto r = search(problem(6, 1, {}));
    EXPECT_EQ(r.value, binom(5, 2));
    bool has_complete = false;
    for (const auto& w : r.witnesses) has_complete |= w == KGraph::complete(3, 6);
    EXPECT_TRUE(has_complete);
}

TEST(Search, AgreesWithBruteForceOnSmallGrid) {
    const std::vector<std::vector<KGraph>> families{{kK4}, {kEdge}, {kTwoDisjoint}};
    for (const auto& family : families)
        for (int l = 0; l < 3; ++l)
            for (Vertex n = 4; n <= 6; ++n)
                for (auto mode : {Objective::positive_degree, Objective::min_degree}) {
                    const auto p = problem(n, l, family, mode);
                    const auto a = brute_force(p);
                    const auto b = search(p);
                    EXPECT_EQ(a.value, b.value) << "n=" << n << " l=" << l;
                    EXPECT_TRUE(b.exact);
                    expect_valid_witnesses(p, b);
                }
}

TEST(Search, PositiveDominatesMinDegree) {
    for (int l = 0; l < 3; ++l)
        for (Vertex n = 4; n <= 6; ++n)
            EXPECT_GE(search(problem(n, l, {kK4})).value, search(problem(n, l, {kK4}, Objective::min_degree)).value);
}

TEST(Search, BudgetExhaustionIsReported) {
    auto p = problem(6, 2, {kK4});
    p.budget.max_nodes = 3;
    const auto r = search(p);
    EXPECT_FALSE(r.exact);
    EXPECT_LE(r.value, search(problem(6, 2, {kK4})).value);
}

TEST(Search, WitnessCap) {
    auto p = problem(6, 0, {kK4});
    p.max_witnesses = 2;
    EXPECT_LE(search(p).witnesses.size(), 2u);
    EXPECT_LE(brute_force(p).witnesses.size(), 2u);
}

TEST(Search, RejectsBadProblems) {
    EXPECT_THROW(search(problem(6, 3, {kK4})), InputError);
    EXPECT_THROW(search(problem(2, 1, {kK4})), InputError);
    EXPECT_THROW(search(problem(5, 1, {KGraph::complete(2, 3)})), InputError);
}

TEST(Search, SampledFreeGraphsNeverBeatOptimum) {
    // W^G of a K4-free G has t(K4, W) = 0, so its samples are K4-free.
    const KGraph g(3, 5, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 4}, {0, 3, 4}});
    ASSERT_FALSE(contains_subgraph(kK4, g));
    const auto w = from_graph(g);
    ASSERT_EQ(density(kK4, w), 0);
    for (int l = 0; l < 3; ++l) {
        const auto optimum = search(problem(6, l, {kK4})).value;
        for (std::uint64_t s = 0; s < 30; ++s) {
            const KGraph sampled = sample(6, w, s);
            ASSERT_FALSE(contains_subgraph(kK4, sampled));
            EXPECT_LE(min_positive_degree(sampled, l), optimum);
        }
    }
}

TEST(RatioTable, TrivialFamilies) {
    for (const auto& row : ratio_table(problem(0, 2, {}), 4, 6)) EXPECT_EQ(row.ratio, 1);
    for (const auto& row : ratio_table(problem(0, 2, {kEdge}), 4, 6)) EXPECT_EQ(row.ratio, 0);
}

TEST(RatioTable, K4Fixture) {
    const auto rows = ratio_table(problem(0, 2, {kK4}), 4, 7);
    ASSERT_EQ(rows.size(), 4u);
    const std::uint64_t values[] = {1, 2, 2, 3};
    const Rational ratios[] = {make_rational(1, 2), make_rational(2, 3), make_rational(1, 2), make_rational(3, 5)};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].n, 4 + i);
        EXPECT_EQ(rows[i].value, values[i]);
        EXPECT_EQ(rows[i].ratio, ratios[i]);
        EXPECT_TRUE(rows[i].exact);
        if (i > 0) {
            EXPECT_GE(rows[i].value, rows[i - 1].value);
        }
    }
}
