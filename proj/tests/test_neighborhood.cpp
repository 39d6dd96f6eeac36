#include "fixtures.hpp"
#include "oracles.hpp"

#include "graev/errors.hpp"
#include "graev/graev_metric.hpp"
#include "graev/neighborhood.hpp"

#include <gtest/gtest.h>

using namespace graev;
using fixture::el;

namespace {

GroundSpace line_matrix() { return GroundSpace::from_matrix(fixture::line().to_matrix()); }

// d_n = scales[n-1] * |x - y| on the line space.
PseudometricSequence line_sequence(std::vector<double> scales, TailRule tail) {
    return PseudometricSequence::scaled(line_matrix(), scales, tail);
}

PseudometricSequence random_sequence(CounterRng& rng, std::size_t n, std::size_t len, TailRule tail) {
    std::vector<GroundSpace> metrics;
    for (std::size_t k = 0; k < len; ++k) {
        const auto base = oracle::random_space(rng, n);
        const double scale[] = {rng.uniform(0.15, 1.5)};
        metrics.push_back(PseudometricSequence::scaled(base, scale, TailRule::repeat_last()).metric(1));
    }
    return PseudometricSequence(metrics, tail);
}

} // namespace

TEST(WdMembership, ZeroIsCertifiedWithEmptyWitness) {
    const WdSystem sys(line_sequence({1.0}, TailRule::repeat_last()));
    const auto r = wd_membership(GroupElement{}, sys, line_matrix(), 3);
    EXPECT_EQ(r.verdict, WdVerdict::certified);
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(r.witness->entries.empty());
}

TEST(WdMembership, ShrinkingSequenceCertifiesAtIndexThree) {
    std::vector<double> scales;
    for (int n = 1; n <= 8; ++n) scales.push_back(1.0 / n);
    const auto seq = line_sequence(scales, TailRule::repeat_last());
    const WdSystem sys(seq);
    // The single pair (b, c) has gap 2, admissible from d_3 on.
    const WdWitness w{{{{fixture::b, fixture::c}, 3}}};
    EXPECT_TRUE(check_witness(w, el({2, 3}), sys).ok);
    EXPECT_TRUE(oracle::witness_valid(w, el({2, 3}), seq));
    const auto r = wd_membership(el({2, 3}), sys, line_matrix(), 8);
    ASSERT_EQ(r.verdict, WdVerdict::certified);
    EXPECT_TRUE(oracle::witness_valid(*r.witness, el({2, 3}), seq));
    EXPECT_TRUE(check_witness(*r.witness, el({2, 3}), sys).ok);
}

TEST(WdMembership, ConstantDistanceRefutes) {
    const auto seq = line_sequence({1.0}, TailRule::repeat_last());
    const WdSystem sys(seq);
    const auto r = wd_membership(el({1, 3}), sys, line_matrix(), 6);
    EXPECT_EQ(r.verdict, WdVerdict::refuted);
    EXPECT_EQ(r.n_max, 6u);
    EXPECT_FALSE(r.witness);
    EXPECT_FALSE(oracle::wd_reachable(el({1, 3}), seq, 6));
}

TEST(WdMembership, ExactAgainstBruteForce) {
    CounterRng rng(31, 0);
    const TailRule tails[] = {TailRule::repeat_last(), TailRule::zero(), TailRule::scale(0.5)};
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 2 + rng.below(4);
        const auto seq = random_sequence(rng, n, 1 + rng.below(3), tails[rng.below(3)]);
        const WdSystem sys(seq);
        const std::size_t n_max = 1 + rng.below(4);
        for (const auto& g : all_elements(n)) {
            const bool expected = oracle::wd_reachable(g, seq, n_max);
            const auto r = wd_membership(g, sys, seq.metric(1), n_max);
            ASSERT_NE(r.verdict, WdVerdict::unknown);
            EXPECT_EQ(r.verdict == WdVerdict::certified, expected);
            if (r.witness) {
                EXPECT_TRUE(oracle::witness_valid(*r.witness, g, seq));
                EXPECT_LE(r.witness->max_index(), n_max);
            }
            if (auto sound = certify_by_assignment(g, sys, n_max)) {
                EXPECT_TRUE(expected);
                EXPECT_TRUE(oracle::witness_valid(*sound, g, seq));
            }
        }
    }
}

TEST(WdMembership, GuardFallsBackToCertifierOrUnknown) {
    const auto seq = line_sequence({1.0}, TailRule::repeat_last());
    const WdSystem sys(seq);
    WdSearchLimits tight;
    tight.max_points = 2;
    EXPECT_EQ(wd_membership(el({1, 3}), sys, line_matrix(), 6, tight).verdict, WdVerdict::unknown);
    const auto small = line_sequence({0.1}, TailRule::repeat_last());
    const auto r = wd_membership(el({1, 3}), WdSystem(small), line_matrix(), 6, tight);
    ASSERT_EQ(r.verdict, WdVerdict::certified);
    EXPECT_TRUE(oracle::witness_valid(*r.witness, el({1, 3}), small));
}

TEST(WdMembership, MonotoneAbsorption) {
    CounterRng rng(37, 0);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 2 + rng.below(4);
        const auto seq = random_sequence(rng, n, 1 + rng.below(3), TailRule::repeat_last());
        const WdSystem sys(seq);
        for (const auto& g : all_elements(n)) {
            if (wd_membership(g, sys, seq.metric(1), 3).verdict != WdVerdict::certified) continue;
            EXPECT_EQ(wd_membership(g, sys, seq.metric(1), 7).verdict, WdVerdict::certified);
        }
    }
}

TEST(WdWitness, CheckerCatchesBadWitnesses) {
    const auto seq = line_sequence({0.1}, TailRule::repeat_last());
    const WdSystem sys(seq);
    EXPECT_FALSE(check_witness({{{{1, 2}, 1}, {{2, 3}, 1}}}, el({1, 3}), sys).ok);
    EXPECT_FALSE(check_witness({{{{1, 2}, 1}}}, el({1, 3}), sys).ok);
    EXPECT_FALSE(check_witness({{{{1, 2}, 0}}}, el({1, 2}), sys).ok);
    const WdSystem wide(line_sequence({1.0}, TailRule::repeat_last()));
    EXPECT_FALSE(check_witness({{{{1, 3}, 1}}}, el({1, 3}), wide).ok);
    EXPECT_FALSE(check_bucket_capacity({{{{1, 2}, 2}, {{2, 3}, 3}}}).ok);
    EXPECT_TRUE(check_bucket_capacity({{{{1, 2}, 4}, {{2, 3}, 5}, {{1, 3}, 6}}}).ok);
}

TEST(WdWitnessFromBall, SinglePairInBucketTwo) {
    // Scale the line so that rho(a, b) = 0.2: p_1 = 4s and 2^-1 * 4s dominates.
    const auto seq = line_sequence({0.1}, TailRule::repeat_last());
    const WdSystem sys(seq);
    const auto rho = combine_sup(seq);
    ASSERT_DOUBLE_EQ(rho.distance(1, 2), 0.2);
    const auto ball = wd_witness_from_ball(el({1, 2}), sys, rho);
    ASSERT_EQ(ball.pairs.size(), 1u);
    EXPECT_EQ(ball.pairs[0].k, 2);
    EXPECT_GE(ball.pairs[0].index, 4u);
    EXPECT_LT(ball.pairs[0].index, 8u);
    EXPECT_TRUE(oracle::witness_valid(ball.witness, el({1, 2}), seq));
    EXPECT_TRUE(check_bucket_capacity(ball.witness).ok);
}

TEST(WdWitnessFromBall, TwoBucketsGetDisjointRanges) {
    // Five points on a line; d_n = 0.1 |x - y| gives rho = 0.2 * gap for small gaps.
    const auto base = GroundSpace::from_coords({{0.0}, {10.0}, {11.0}, {20.0}, {20.25}});
    const double scales[] = {0.1};
    const auto seq = PseudometricSequence::scaled(GroundSpace::from_matrix(base.to_matrix()), scales,
                                                  TailRule::repeat_last());
    const auto rho = combine_sup(seq);
    ASSERT_DOUBLE_EQ(rho.distance(1, 2), 0.2);
    ASSERT_DOUBLE_EQ(rho.distance(3, 4), 0.05);
    const auto ball = wd_witness_from_ball(el({1, 2, 3, 4}), WdSystem(seq), rho);
    ASSERT_EQ(ball.pairs.size(), 2u);
    for (const auto& bp : ball.pairs) {
        if (bp.pair == PointPair{1, 2}) {
            EXPECT_EQ(bp.k, 2);
            EXPECT_GE(bp.index, 4u);
            EXPECT_LT(bp.index, 8u);
        } else {
            EXPECT_EQ(bp.pair, (PointPair{3, 4}));
            EXPECT_EQ(bp.k, 4);
            EXPECT_GE(bp.index, 16u);
            EXPECT_LT(bp.index, 32u);
        }
    }
    EXPECT_TRUE(oracle::witness_valid(ball.witness, el({1, 2, 3, 4}), seq));
}

TEST(WdWitnessFromBall, ZeroElementAndPrecondition) {
    const auto seq = line_sequence({1.0}, TailRule::repeat_last());
    const auto rho = combine_sup(seq);
    EXPECT_TRUE(wd_witness_from_ball(GroupElement{}, WdSystem(seq), rho).witness.entries.empty());
    EXPECT_THROW(wd_witness_from_ball(el({1, 3}), WdSystem(seq), rho), PreconditionError);
}

TEST(WdWitnessFromBall, ZeroWeightPairsGetSmallestValidK) {
    const auto m = GroundSpace::from_matrix({{0, 4, 4, 4, 4}, {4, 0, 0, 4, 4}, {4, 0, 0, 4, 4},
                                             {4, 4, 4, 0, 0}, {4, 4, 4, 0, 0}});
    const PseudometricSequence seq({m}, TailRule::repeat_last());
    const auto ball = wd_witness_from_ball(el({1, 2, 3, 4}), WdSystem(seq), combine_sup(seq));
    ASSERT_EQ(ball.pairs.size(), 2u);
    EXPECT_EQ(ball.pairs[0].k, 1);
    EXPECT_EQ(ball.pairs[1].k, 2);
    EXPECT_LT(ball.dyadic_sum, 1.0);
    EXPECT_TRUE(oracle::witness_valid(ball.witness, el({1, 2, 3, 4}), seq));
}

TEST(WdWitnessFromBall, RandomBallElementsAlwaysYieldValidWitnesses) {
    CounterRng rng(41, 0);
    std::size_t tested = 0;
    for (int t = 0; t < 80; ++t) {
        const std::size_t n = 2 + rng.below(5);
        std::vector<GroundSpace> metrics;
        const std::size_t len = 1 + rng.below(4);
        for (std::size_t k = 0; k < len; ++k) {
            const double scale[] = {std::ldexp(1.0, -static_cast<int>(rng.below(9)))};
            metrics.push_back(
                PseudometricSequence::scaled(oracle::random_space(rng, n), scale, TailRule::repeat_last()).metric(1));
        }
        const PseudometricSequence seq(metrics, TailRule::repeat_last());
        const auto rho = combine_sup(seq);
        for (const auto& g : all_elements(n)) {
            if (!(graev_norm(g, rho).value < 0.5)) continue;
            ++tested;
            const auto ball = wd_witness_from_ball(g, WdSystem(seq), rho);
            EXPECT_TRUE(oracle::witness_valid(ball.witness, g, seq));
            EXPECT_TRUE(check_bucket_capacity(ball.witness).ok);
        }
    }
    EXPECT_GT(tested, 100u);
}

TEST(Ball, StrictRadius) {
    const auto s = fixture::line();
    EXPECT_TRUE(ball_membership(GroupElement{}, s, 0.1));
    EXPECT_FALSE(ball_membership(el({1, 2, 3}), s, 3.0));
    EXPECT_TRUE(ball_membership(el({1, 2, 3}), s, 3.0001));
    EXPECT_THROW(ball_membership(el({1}), s, 0.0), PreconditionError);
}
