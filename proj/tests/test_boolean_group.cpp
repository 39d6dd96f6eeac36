#include "fixtures.hpp"

#include "graev/boolean_group.hpp"
#include "graev/errors.hpp"
#include "graev/rng.hpp"

#include <gtest/gtest.h>

using namespace graev;
using fixture::el;

TEST(BooleanGroup, SymmetricDifference) {
    EXPECT_EQ(el({1, 2}) + el({2, 3}), el({1, 3}));
    const auto g = el({1, 4, 7});
    EXPECT_TRUE((g + g).is_zero());
    EXPECT_TRUE((GroupElement{} + GroupElement{}).is_zero());
}

TEST(BooleanGroup, WordLengthAndFiltration) {
    EXPECT_EQ(word_length(GroupElement{}), 0u);
    EXPECT_TRUE(in_Bn(GroupElement{}, 0));
    const auto abc = el({1, 2, 3});
    EXPECT_EQ(word_length(abc), 3u);
    EXPECT_TRUE(in_Bn(abc, 3));
    EXPECT_TRUE(in_Bn(abc, 5));
    EXPECT_FALSE(in_Bn(abc, 2));
    EXPECT_EQ(word_length(add(el({1, 2}), el({2}))), 1u);
}

TEST(BooleanGroup, SumPointsCancels) {
    const PointIndex aba[] = {1, 2, 1};
    EXPECT_EQ(sum_points(aba), el({2}));
    const PointIndex ee[] = {0, 0};
    EXPECT_TRUE(sum_points(ee).is_zero());
    const PointIndex abc[] = {1, 2, 3};
    EXPECT_EQ(sum_points(abc).size(), 3u);
    const PointIndex out_of_range[] = {1, 9};
    EXPECT_THROW(sum_points(out_of_range, fixture::line()), IndexError);
}

TEST(BooleanGroup, SupportValidation) {
    EXPECT_THROW(GroupElement::from_support({0, 1}), StructuralError);
    EXPECT_THROW(GroupElement::from_support({2, 1}), StructuralError);
    EXPECT_THROW(GroupElement::from_support({2, 2}), StructuralError);
    EXPECT_NO_THROW(GroupElement::from_support({1, 5}));
}

TEST(BooleanGroup, MaskRoundTrip) {
    for (std::uint64_t m = 0; m < 256; ++m) EXPECT_EQ(GroupElement::from_mask(m).to_mask(), m);
    EXPECT_THROW(GroupElement::from_support({65}).to_mask(), CapacityError);
    EXPECT_EQ(all_elements(4).size(), 8u);
    EXPECT_TRUE(all_elements(1).front().is_zero());
}

TEST(BooleanGroup, AbelianExponentTwo) {
    CounterRng rng(5, 0);
    for (int t = 0; t < 500; ++t) {
        const auto g = GroupElement::from_mask(rng.below(1 << 10));
        const auto h = GroupElement::from_mask(rng.below(1 << 10));
        const auto k = GroupElement::from_mask(rng.below(1 << 10));
        EXPECT_EQ((g + h) + k, g + (h + k));
        EXPECT_EQ(g + h, h + g);
        EXPECT_TRUE((g + g).is_zero());
        EXPECT_EQ((g + h).to_mask(), g.to_mask() ^ h.to_mask());
    }
}

TEST(BooleanGroup, EvaluateRepresentation) {
    const auto s = fixture::line();
    const auto r = evaluate_representation({{{fixture::a, fixture::b}, {fixture::a, fixture::c}}}, s);
    EXPECT_EQ(r.element, el({2, 3}));
    EXPECT_EQ(r.weight, 4.0);
    const auto aa = evaluate_representation({{{fixture::a, fixture::a}}}, s);
    EXPECT_TRUE(aa.element.is_zero());
    EXPECT_EQ(aa.weight, 0.0);
    const auto ae = evaluate_representation({{{fixture::a, fixture::e}}}, s);
    EXPECT_EQ(ae.element, el({1}));
    EXPECT_EQ(ae.weight, 1.0);
}
