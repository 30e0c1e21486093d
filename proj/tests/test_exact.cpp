#include "testing.hpp"

#include <gtest/gtest.h>

using namespace nullcount;
namespace nt = nullcount::testing;

namespace {

SjfBCQ cq(const char *text) { return parse_conjunctive_query(text); }
IncompleteDatabase db(const char *text) { return parse_database(text); }

} // namespace

TEST(AllDistinct, Examples)
{
    EXPECT_EQ(count_val_all_distinct(cq("R(x)&S(y)"), db("@null _a 1 2\nR(_a)\nS(3)\n")), 2);
    EXPECT_EQ(count_val_all_distinct(cq("R(x)"), db("@null _a 1 2\nS(_a)\n")), 0);
    EXPECT_EQ(count_val_all_distinct(cq("R(x,y)"), db("@null _a 1\n@null _b 1 2 3\nR(_a,_b)\n")), 3);
    EXPECT_THROW(count_val_all_distinct(cq("R(x,x)"), db("R(a,a)\n")), PatternMismatch);
}

TEST(Codd, Examples)
{
    EXPECT_EQ(count_val_codd(cq("R(x,x)"), db("@null _a 1 2\n@null _b 2 3\nR(_a,_b)\n")), 1);
    EXPECT_EQ(count_val_codd(cq("R(x,x)"), db("@null _a 1 2\n@null _b 1 2\nR(5,5)\nR(_a,_b)\n")), 4);
    EXPECT_EQ(count_val_codd(cq("R(x,x)"), db("@null _a 1 2\nR(1,_a)\n")), 1);
    EXPECT_THROW(count_val_codd(cq("R(x,x)"), db("@null _a 1 2\nR(_a,_a)\n")), NotCodd);
    EXPECT_THROW(count_val_codd(cq("R(x)&S(x)"), db("R(a)\n")), PatternMismatch);
}

TEST(EarRemoval, Examples)
{
    auto r = remove_ear_variables(cq("R(x,t)&S(x)"), db("@domain uniform 1 2\nR(_a,_b)\nS(_c)\n"));
    ASSERT_TRUE(r.reduced_query().has_value());
    EXPECT_EQ(to_string(*r.reduced_query()), "R(x) & S(x)");
    EXPECT_EQ(r.multiplier, 2);
    EXPECT_FALSE(r.unsatisfiable);
    // Reduced count times multiplier recovers the original.
    EXPECT_EQ(r.multiplier * brute_count_val(*r.reduced_query(), r.db),
              brute_count_val(cq("R(x,t)&S(x)"), db("@domain uniform 1 2\nR(_a,_b)\nS(_c)\n")));

    auto same = remove_ear_variables(cq("R(x)&S(x)"), db("@domain uniform 1 2\nR(_a)\nS(_b)\n"));
    EXPECT_EQ(same.multiplier, 1);
    EXPECT_EQ(same.atoms.size(), 2U);
    EXPECT_EQ(remove_ear_variables(cq("R(x,t)&S(x)"), db("@domain uniform 1 2\nR(_a,1)\nS(_c)\n")).multiplier, 1);
    EXPECT_TRUE(remove_ear_variables(cq("R(x)&S(y)"), db("@domain uniform 1\nR(1)\n")).unsatisfiable);
}

TEST(BasicSingleton, Groups)
{
    auto b = basic_singleton_query(cq("R(x)&S(x)&T(y)"));
    ASSERT_EQ(b.groups.size(), 2U);
    EXPECT_EQ(b.groups[0].relations, (std::vector<std::string>{"R", "S"}));
    EXPECT_EQ(b.groups[1].variable, "y");
    EXPECT_THROW(basic_singleton_query(cq("R(x,y)")), PatternMismatch);
}

TEST(CountNS, Examples)
{
    auto b = basic_singleton_query(cq("R(x)&S(x)"));
    EXPECT_EQ(count_NS(b, {0}, db("@domain uniform 1 2\nR(_a)\nS(_b)\n")), 2);
    EXPECT_EQ(count_NS(b, {0}, db("@domain uniform 1 2\nR(1)\nS(1)\nR(_a)\n")), 0);
    auto d = db("@domain uniform 1 2 3\nR(_a)\nS(_b)\nS(_c)\n");
    EXPECT_EQ(count_NS(b, {}, d), total_valuations(d));
}

TEST(Uniform, Examples)
{
    auto q = cq("R(x)&S(x)");
    EXPECT_EQ(count_val_uniform(q, db("@domain uniform 1 2\nR(_a)\nS(_b)\n")), 2);
    EXPECT_EQ(count_val_uniform(q, db("@domain uniform 1 2\nR(1)\nR(_a)\nS(_b)\n")), 3);
    EXPECT_EQ(count_val_uniform(q, db("@domain uniform 1 2\nR(1)\nS(1)\nR(_a)\n")), 2);
    EXPECT_THROW(count_val_uniform(q, db("@null _a 1\nR(_a)\n")), NonUniform);
    EXPECT_THROW(count_val_uniform(cq("R(x,x)"), db("@domain uniform 1\nR(_a,_a)\n")), PatternMismatch);
}

TEST(CompUniformUnary, Examples)
{
    EXPECT_EQ(count_comp_uniform_unary(cq("R(x)"), db("@domain uniform x y\nR(_a)\nR(_b)\n")), 3);
    EXPECT_EQ(count_comp_uniform_unary(cq("R(x)"), db("@domain uniform 1 2\nR(1)\n")), 1);
    EXPECT_EQ(count_comp_uniform_unary(cq("R(x)"), db("@domain uniform 1 2 3\nR(_a)\nR(_b)\n")), 6);
    EXPECT_EQ(count_comp_uniform_unary(cq("R(x)&S(x)"), db("@domain uniform 1 2 3\nR(_a)\nR(1)\nS(_a)\nS(_b)\n")),
              brute_count_comp(parse_query("R(x)&S(x)"), db("@domain uniform 1 2 3\nR(_a)\nR(1)\nS(_a)\nS(_b)\n")));
    EXPECT_THROW(count_comp_uniform_unary(cq("R(x,y)"), db("@domain uniform 1\nR(_a,_b)\n")), PatternMismatch);
}

TEST(Dispatcher, Routes)
{
    auto sample_db = parse_database(read_file(std::string(NULLCOUNT_DATA_DIR) + "/sample.idb"));
    EXPECT_EQ(count_exact(cq("S(x,x)"), sample_db, Problem::valuations), 4);
    EXPECT_EQ(count_exact(cq("R(x)&S(y)"), db("@null _a 1 2\nR(_a)\nS(3)\n"), Problem::valuations), 2);
    EXPECT_EQ(count_exact(cq("R(x)&S(x)"), db("@domain uniform 1 2\nR(_a)\nS(_b)\n"), Problem::valuations), 2);
    // Identical per-null domains count as uniform.
    EXPECT_EQ(count_exact(cq("R(x)&S(x)"), db("@null _a 1 2\n@null _b 1 2\nR(_a)\nS(_b)\n"), Problem::valuations), 2);
    EXPECT_EQ(count_exact(cq("R(x)"), db("@domain uniform 1 2 3\nR(_a)\nR(_b)\n"), Problem::completions), 6);
}

TEST(Dispatcher, Refusals)
{
    try {
        count_exact(cq("R(x)"), db("@null _a 1 2\n@null _b 1\nR(_a)\nR(_b)\n"), Problem::completions);
        FAIL();
    } catch (const NotTractable &e) {
        EXPECT_EQ(e.witnesses(), (std::vector<std::string>{"R(x)"}));
    }
    EXPECT_THROW(count_exact(cq("R(x,x)"), db("@domain uniform 1 2\nR(_a,_b)\nR(_b,_a)\n"), Problem::valuations),
                 NotTractable);
    EXPECT_THROW(count_exact(cq("R(x)"), db("@domain uniform 1 2\nR(_a)\nT(_a,_b)\n"), Problem::completions),
                 NotTractable);
    EXPECT_THROW(count_exact(cq("R(x,y)"), db("R(a)\n"), Problem::valuations), SchemaMismatch);
}

class RouteEquivalence : public ::testing::TestWithParam<nt::ExactRoute> {};

TEST_P(RouteEquivalence, MatchesReferenceCounts)
{
    const auto route = GetParam();
    nt::Rng64 rng(1000 + static_cast<unsigned>(route));
    for (int i = 0; i < 300; ++i) {
        auto in = nt::random_instance(rng, route);
        const Count expected = nt::reference_count(route, in);
        EXPECT_EQ(nt::run_route(route, in), expected) << to_string(in.query) << "\n" << format_database(in.db);
        const Problem problem = route == nt::ExactRoute::comp_unary ? Problem::completions : Problem::valuations;
        const Count brute = problem == Problem::valuations ? brute_count_val(in.query, in.db)
                                                           : brute_count_comp(in.query, in.db);
        EXPECT_EQ(brute, expected);
    }
}

INSTANTIATE_TEST_SUITE_P(AllRoutes, RouteEquivalence,
                         ::testing::Values(nt::ExactRoute::all_distinct, nt::ExactRoute::codd,
                                           nt::ExactRoute::uniform, nt::ExactRoute::comp_unary),
                         [](const auto &info) { return nt::to_string(info.param); });

TEST(CompUniformUnary, LargerDomains)
{
    // Beyond the reference's reach: compare against the grouped oracle.
    nt::Rng64 rng(77);
    OracleOptions big;
    big.cap = 5'000'000;
    for (int i = 0; i < 40; ++i) {
        std::string text = "@domain uniform";
        const std::size_t d = 2 + nt::pick(rng, 5);
        for (std::size_t v = 0; v < d; ++v)
            text += " " + std::to_string(v);
        text += "\n";
        for (int f = 0; f < 6; ++f) {
            const char *rel = nt::coin(rng) ? "R" : (nt::coin(rng) ? "S" : "T");
            if (nt::coin(rng, 0.7))
                text += std::string(rel) + "(_n" + std::to_string(nt::pick(rng, 5)) + ")\n";
            else
                text += std::string(rel) + "(" + std::to_string(nt::pick(rng, d + 1)) + ")\n";
        }
        text += "R(0)\nS(_n0)\nT(_n1)\n";
        auto database = db(text.c_str());
        for (const char *q : {"R(x)&S(x)", "R(x)&S(y)", "R(x)&S(x)&T(x)", "S(x)&T(y)"})
            EXPECT_EQ(count_comp_uniform_unary(cq(q), database), brute_count_comp(parse_query(q), database, big))
                << q << "\n" << text;
    }
}
