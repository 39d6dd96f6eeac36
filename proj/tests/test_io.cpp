#include "fixtures.hpp"

#include "graev/errors.hpp"
#include "graev/io.hpp"

#include <gtest/gtest.h>

using namespace graev;
using io::Json;

TEST(Io, SpaceRoundTrip) {
    const auto line = fixture::line();
    const auto j = io::space_to_json(line);
    EXPECT_EQ(j["kind"], "euclidean");
    const auto back = io::space_from_json(j);
    EXPECT_EQ(back.to_matrix(), line.to_matrix());
    EXPECT_EQ(back.labels(), line.labels());

    const auto m = GroundSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    EXPECT_EQ(io::space_from_json(io::space_to_json(m)).to_matrix(), m.to_matrix());
}

TEST(Io, LoaderRejectsMalformedSpaces) {
    EXPECT_THROW(io::space_from_json(Json::parse(R"({"kind":"matrix"})")), StructuralError);
    EXPECT_THROW(io::space_from_json(Json::parse(R"({"kind":"graph","dist":[[0]]})")), StructuralError);
    EXPECT_THROW(io::space_from_json(Json::parse(R"({"kind":"matrix","labels":["a","e"],"dist":[[0,1],[1,0]]})")),
                 StructuralError);
    EXPECT_THROW(io::space_from_json(Json::parse(R"({"kind":"matrix","dist":[[0,"x"],[1,0]]})")), StructuralError);
    EXPECT_THROW(io::space_from_json(Json::parse(R"({"kind":"matrix","dist":[[0,1],[1]]})")), StructuralError);
    EXPECT_NO_THROW(io::space_from_json(Json::parse(R"({"kind":"matrix","labels":["e","a"],"dist":[[0,1],[1,0]]})")));
}

TEST(Io, SequenceFormats) {
    const auto ground = GroundSpace::from_matrix(fixture::line().to_matrix());
    const auto seq = io::sequence_from_json(
        Json::parse(R"({"metrics":[{"ground_scale":0.5},{"dist":[[0,1,1,1],[1,0,1,1],[1,1,0,1],[1,1,1,0]]}],
                        "tail":{"rule":"scale","ratio":0.5}})"),
        ground);
    EXPECT_EQ(seq.explicit_length(), 2u);
    EXPECT_EQ(seq(1, 1, 3), 1.5);
    EXPECT_EQ(seq(2, 1, 3), 1.0);
    EXPECT_EQ(seq(3, 1, 3), 0.5);
    const auto again = io::sequence_from_json(io::sequence_to_json(seq), ground);
    EXPECT_EQ(again(3, 1, 3), 0.5);
    EXPECT_EQ(io::sequence_from_json(Json::parse(R"({"metrics":[{"ground_scale":1}]})"), ground).tail().kind,
              TailRule::Kind::repeat_last);
    EXPECT_THROW(io::sequence_from_json(Json::parse(R"({"metrics":[]})"), ground), StructuralError);
    EXPECT_THROW(io::sequence_from_json(Json::parse(R"({"metrics":[{"ground_scale":1}],"tail":"wobble"})"), ground),
                 StructuralError);
}

TEST(Io, ElementParsing) {
    const auto s = fixture::line();
    EXPECT_EQ(io::parse_element("1,2,3", s), fixture::el({1, 2, 3}));
    EXPECT_EQ(io::parse_element("3, 1", s), fixture::el({1, 3}));
    EXPECT_EQ(io::parse_element("1,1,0", s), GroupElement{});
    EXPECT_EQ(io::parse_element("", s), GroupElement{});
    EXPECT_THROW(io::parse_element("1,x", s), StructuralError);
    EXPECT_THROW(io::parse_element("1,,2", s), StructuralError);
    EXPECT_THROW(io::parse_element("7", s), IndexError);
    EXPECT_EQ(io::element_to_json(fixture::el({3, 1})).dump(), "[1,3]");
    EXPECT_EQ(io::element_from_json(Json::parse("[1,3]")), fixture::el({1, 3}));
    EXPECT_THROW(io::element_from_json(Json::parse("[3,1]")), StructuralError);
    EXPECT_THROW(io::element_from_json(Json::parse("[-1]")), StructuralError);
}
