#include "testing.hpp"

#include <gtest/gtest.h>

using namespace nullcount;
namespace nt = nullcount::testing;

TEST(DatabaseFormat, ParsesBothModes)
{
    auto u = parse_database("# comment\n@domain uniform 0 1\nR(_a, 1)  # trailing\n\nS(_a)\n");
    EXPECT_TRUE(u.is_uniform());
    EXPECT_EQ(u.nulls(), (std::vector<std::string>{"_a"}));
    auto p = parse_database("@null _a x y\nR(_a)\n");
    EXPECT_FALSE(p.is_uniform());
    EXPECT_EQ(p.domain_of("_a"), (Domain{"x", "y"}));
}

TEST(DatabaseFormat, Errors)
{
    EXPECT_THROW(parse_database("@domain uniform a\n@null _x a\nR(_x)\n"), ParseError);
    EXPECT_THROW(parse_database("@null _x a\n@domain uniform a\nR(_x)\n"), ParseError);
    EXPECT_THROW(parse_database("@domain uniform a\n@domain uniform b\n"), ParseError);
    EXPECT_THROW(parse_database("@null _x a\n@null _x b\nR(_x)\n"), ParseError);
    EXPECT_THROW(parse_database("@domain uniform\n"), ParseError);
    EXPECT_THROW(parse_database("@domain uniform _a\n"), ParseError);
    EXPECT_THROW(parse_database("@frob\n"), ParseError);
    EXPECT_THROW(parse_database("R(a\n"), ParseError);
    EXPECT_THROW(parse_database("R()\n"), ParseError);
    EXPECT_THROW(parse_database("R(a) b\n"), ParseError);
    EXPECT_THROW(parse_database("r a\n"), ParseError);
    EXPECT_THROW(parse_database("R(_)\n"), ParseError);
    try {
        parse_database("R(a)\n\nR(b\n");
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.position(), 3U);
    }
}

TEST(DatabaseFormat, RoundTrip)
{
    nt::Rng64 rng(3);
    for (int i = 0; i < 200; ++i) {
        auto q = nt::random_query(rng);
        nt::DbShape shape;
        shape.uniform = nt::coin(rng);
        auto db = nt::random_database(rng, q, shape);
        auto again = parse_database(format_database(db));
        EXPECT_EQ(again.facts(), db.facts());
        EXPECT_EQ(again.nulls(), db.nulls());
        if (db.nulls().empty())
            continue;
        EXPECT_EQ(again.is_uniform(), db.is_uniform());
        for (const auto &n : db.nulls())
            EXPECT_EQ(again.domain_of(n), db.domain_of(n));
    }
}

TEST(CompletionFormat, RejectsNullsAndDirectives)
{
    EXPECT_EQ(parse_completion("R(b)\nR(a)\nR(a)\n").size(), 2U);
    EXPECT_THROW(parse_completion("R(_x)\n"), ParseError);
    EXPECT_THROW(parse_completion("@domain uniform a\n"), ParseError);
    auto c = parse_completion("S(a,b)\nR(c)\n");
    EXPECT_EQ(parse_completion(format_completion(c)), c);
}

TEST(GraphFormat, EdgesAndIsolatedNodes)
{
    Graph g = parse_graph("# triangle plus a loner\na b\nb c\nc a\nd\nb a\n");
    EXPECT_EQ(g.node_count(), 4U);
    EXPECT_EQ(g.edge_count(), 3U);
    EXPECT_EQ(g.isolated_count(), 1U);
    Graph again = parse_graph(format_graph(g));
    EXPECT_EQ(again.node_count(), 4U);
    EXPECT_EQ(again.edge_count(), 3U);
    EXPECT_THROW(parse_graph("a a\n"), ParseError);
    EXPECT_THROW(parse_graph("a b c\n"), ParseError);
    EXPECT_THROW(parse_graph("_a b\n"), ParseError);
    EXPECT_THROW(parse_graph("@a b\n"), ParseError);
}

TEST(Graph, TwoColoring)
{
    Graph path = parse_graph("a b\nb c\n");
    auto sides = path.two_coloring();
    ASSERT_TRUE(sides.has_value());
    EXPECT_EQ(*sides, (std::vector<int>{0, 1, 0}));
    EXPECT_FALSE(parse_graph("a b\nb c\nc a\n").two_coloring().has_value());
}

TEST(DataFiles, ExampleInstanceLoads)
{
    auto db = parse_database(read_file(std::string(NULLCOUNT_DATA_DIR) + "/sample.idb"));
    EXPECT_EQ(db.facts().size(), 3U);
    EXPECT_EQ(total_valuations(db), 6);
    EXPECT_THROW(read_file(std::string(NULLCOUNT_DATA_DIR) + "/missing.idb"), Error);
}
