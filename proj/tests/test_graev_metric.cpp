#include "fixtures.hpp"
#include "oracles.hpp"

#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"
#include "graev/matching.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace graev;
using fixture::el;

TEST(Matching, PicksCheapestAndLexSmallestOnTies) {
    // Square with unit sides and sqrt(2) diagonals: two optimal matchings.
    const double d = std::sqrt(2.0);
    const std::vector<double> w{0, 1, d, 1, 1, 0, 1, d, d, 1, 0, 1, 1, d, 1, 0};
    const auto m = min_weight_perfect_matching(w, 4);
    EXPECT_EQ(m.weight, 2.0);
    ASSERT_EQ(m.pairs.size(), 2u);
    EXPECT_EQ(m.pairs[0], (std::pair<std::size_t, std::size_t>{0, 1}));
    EXPECT_EQ(m.pairs[1], (std::pair<std::size_t, std::size_t>{2, 3}));
}

TEST(Matching, RejectsOddAndOversized) {
    const std::vector<double> w(9, 1.0);
    EXPECT_THROW(min_weight_perfect_matching(w, 3), PreconditionError);
    const std::vector<double> big(28 * 28, 1.0);
    EXPECT_THROW(min_weight_perfect_matching(big, 28), CapacityError);
    EXPECT_EQ(min_weight_perfect_matching({}, 0).weight, 0.0);
}

TEST(GraevNorm, LineSpaceExamples) {
    const auto s = fixture::line();
    EXPECT_EQ(graev_norm(el({1}), s).value, 1.0);
    const auto abc = graev_norm(el({1, 2, 3}), s);
    EXPECT_EQ(abc.value, 3.0);
    ASSERT_EQ(abc.witness.pairs.size(), 2u);
    EXPECT_EQ(abc.witness.pairs[0], (PointPair{0, 1}));
    EXPECT_EQ(abc.witness.pairs[1], (PointPair{2, 3}));
    EXPECT_EQ(graev_norm(GroupElement{}, s).value, 0.0);
    EXPECT_TRUE(graev_norm(GroupElement{}, s).witness.pairs.empty());
}

TEST(GraevNorm, ZeroDistanceAliases) {
    const auto s = GroundSpace::from_matrix({{0, 5, 5}, {5, 0, 0}, {5, 0, 0}});
    EXPECT_EQ(graev_norm(el({1, 2}), s).value, 0.0);
    EXPECT_EQ(oracle::representation_min(el({1, 2}), s, 2), 0.0);
}

TEST(GraevNorm, RequiresPseudometricAndCapacity) {
    const auto bad = GroundSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    EXPECT_THROW(graev_norm(el({1}), bad), AxiomError);
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 24; ++i) coords.push_back({static_cast<double>(i)});
    const auto s = GroundSpace::from_coords(coords);
    std::vector<PointIndex> pts;
    for (PointIndex i = 1; i < 24; ++i) pts.push_back(i);
    EXPECT_THROW(graev_norm(GroupElement::from_points(pts), s), CapacityError);
    EXPECT_NO_THROW(graev_norm(GroupElement::from_points(pts), s, 23));
}

TEST(GraevNorm, EnvironmentOverridesLimit) {
    ::setenv("GRAEV_MATCH_LIMIT", "4", 1);
    EXPECT_EQ(matching_limit(), 4u);
    EXPECT_THROW(graev_norm(el({1, 2, 3, 4, 5}), GroundSpace::from_coords({{0}, {1}, {2}, {3}, {4}, {5}})),
                 CapacityError);
    ::setenv("GRAEV_MATCH_LIMIT", "junk", 1);
    EXPECT_EQ(matching_limit(), kDefaultMatchingLimit);
    ::unsetenv("GRAEV_MATCH_LIMIT");
    EXPECT_EQ(matching_limit(), kDefaultMatchingLimit);
}

TEST(GraevDist, Examples) {
    const auto s = fixture::line();
    EXPECT_EQ(graev_dist(el({1}), el({2}), s), 1.0);
    EXPECT_EQ(graev_dist(el({1, 3}), el({1, 3}), s), 0.0);
    EXPECT_EQ(graev_dist(el({1, 2}), el({3}), s), 3.0);
}

TEST(ReduceRepresentation, Examples) {
    const auto s = fixture::line();
    const auto merged = reduce_representation({{{1, 2}, {1, 3}}}, s);
    ASSERT_EQ(merged.pairs.size(), 1u);
    EXPECT_EQ(merged.pairs[0].sorted(), (PointPair{2, 3}));
    EXPECT_EQ(evaluate_representation(merged, s).weight, 2.0);
    EXPECT_TRUE(reduce_representation({{{1, 1}}}, s).pairs.empty());
    const auto fixed = reduce_representation({{{1, 2}}}, s);
    ASSERT_EQ(fixed.pairs.size(), 1u);
    EXPECT_EQ(fixed.pairs[0].sorted(), (PointPair{1, 2}));
}

TEST(Oracle, LineSpaceAndZero) {
    const auto s = fixture::line();
    EXPECT_EQ(oracle_norm(el({1, 2, 3}), s, 2), 3.0);
    EXPECT_EQ(oracle_norm(GroupElement{}, s, 1), 0.0);
    EXPECT_TRUE(std::isinf(oracle_norm(el({1, 2, 3}), s, 1)));
}

TEST(Oracle, AgreesWithBruteForceEnumeration) {
    CounterRng rng(21, 0);
    for (int t = 0; t < 30; ++t) {
        const auto s = oracle::random_space(rng, 2 + rng.below(4));
        for (std::size_t budget = 1; budget <= 3; ++budget) {
            const auto table = oracle_table(s, budget);
            for (const auto& g : all_elements(s.size())) {
                const double brute = oracle::representation_min(g, s, budget);
                if (std::isinf(brute)) {
                    EXPECT_TRUE(std::isinf(table[g.to_mask()]));
                } else {
                    EXPECT_NEAR(table[g.to_mask()], brute, 1e-12);
                }
            }
        }
    }
}

TEST(GraevNorm, AgreesWithMatchingEnumerationAndOracle) {
    CounterRng rng(23, 0);
    for (int t = 0; t < 60; ++t) {
        const auto s = oracle::random_space(rng, 2 + rng.below(6));
        for (const auto& g : all_elements(s.size())) {
            const auto r = graev_norm(g, s);
            EXPECT_NEAR(r.value, oracle::matching_min(g, s), 1e-12);
            EXPECT_NEAR(r.value, oracle_norm(g, s, reduced_pair_count(g.size()) + 2), 1e-9);
        }
    }
}

TEST(Oracle, CapacityGuard) {
    std::vector<std::vector<double>> coords;
    for (int i = 0; i < 30; ++i) coords.push_back({static_cast<double>(i)});
    EXPECT_THROW(oracle_norm(el({1}), GroundSpace::from_coords(coords), 2), CapacityError);
}
