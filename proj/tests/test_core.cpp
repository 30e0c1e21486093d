#include "testing.hpp"

#include <gtest/gtest.h>

using namespace nullcount;
namespace nt = nullcount::testing;

namespace {

IncompleteDatabase sample()
{
    return parse_database("@null _1 a b c\n@null _2 a b\nS(a,b)\nS(_1,a)\nS(a,_2)\n");
}

Completion ground(const std::string &text) { return parse_completion(text); }

} // namespace

TEST(Term, NamespacesAreDisjoint)
{
    EXPECT_TRUE(Term::parse("_x").is_null());
    EXPECT_FALSE(Term::parse("x").is_null());
    EXPECT_THROW(Term::constant("_x"), Error);
    EXPECT_THROW(Term::null("x"), Error);
    EXPECT_THROW(Term::null("_"), Error);
}

TEST(ApplyValuation, DuplicateFactsCollapse)
{
    auto db = sample();
    Completion c = apply_valuation(db, Valuation({{"_1", "b"}, {"_2", "b"}}));
    EXPECT_EQ(c, ground("S(a,b)\nS(b,a)\n"));
    EXPECT_EQ(c.size(), 2U);
}

TEST(ApplyValuation, GroundDatabaseIsItself)
{
    auto db = parse_database("R(a,b)\nR(b,c)\n");
    EXPECT_EQ(apply_valuation(db, Valuation()), ground("R(b,c)\nR(a,b)\n"));
}

TEST(ApplyValuation, SingleSubstitution)
{
    auto db = parse_database("@domain uniform 1 2\nR(_x,_x)\n");
    EXPECT_EQ(apply_valuation(db, Valuation(std::map<std::string, std::string>{{"_x", "1"}})), ground("R(1,1)\n"));
}

TEST(ApplyValuation, Errors)
{
    auto db = sample();
    EXPECT_THROW(apply_valuation(db, Valuation(std::map<std::string, std::string>{{"_1", "a"}})), MissingAssignment);
    EXPECT_THROW(apply_valuation(db, Valuation(std::map<std::string, std::string>{{"_1", "a"}, {"_2", "c"}})), DomainViolation);
}

TEST(TotalValuations, Examples)
{
    EXPECT_EQ(total_valuations(sample()), 6);
    EXPECT_EQ(total_valuations(parse_database("R(a)\n")), 1);
    EXPECT_EQ(total_valuations(parse_database("@domain uniform 0 1\nR(_a,_b)\nS(_c)\n")), 8);
}

TEST(IsCodd, Examples)
{
    EXPECT_FALSE(parse_database("@domain uniform a b\nS(_1,_1)\nS(a,_2)\n").is_codd());
    EXPECT_TRUE(parse_database("R(a,b)\n").is_codd());
    EXPECT_FALSE(parse_database("@domain uniform a\nR(_1)\nS(_1)\n").is_codd());
    EXPECT_TRUE(sample().is_codd());
}

TEST(IncompleteDatabase, Invariants)
{
    EXPECT_THROW(IncompleteDatabase::uniform({}, {}), DomainViolation);
    EXPECT_THROW(IncompleteDatabase::per_null({{"R", {Term::null("_x")}}}, {}), MissingAssignment);
    EXPECT_THROW(IncompleteDatabase::per_null({{"R", {Term::constant("a")}}}, {{"_y", {"a"}}}), SchemaMismatch);
    EXPECT_THROW(parse_database("R(a)\nR(a,b)\n"), SchemaMismatch);
    auto db = parse_database("@domain uniform b a b\nR(a)\nR(a)\n");
    EXPECT_EQ(db.facts().size(), 1U);
    EXPECT_EQ(db.uniform_domain(), (Domain{"a", "b"}));
}

TEST(IncompleteDatabase, UniformConversions)
{
    auto db = parse_database("@null _x a b\n@null _y b a\nR(_x,_y)\n");
    ASSERT_TRUE(db.to_uniform().has_value());
    EXPECT_TRUE(db.to_uniform()->is_uniform());
    EXPECT_FALSE(sample().to_uniform().has_value());
    auto per = parse_database("@domain uniform 1 2\nR(_x)\n").to_per_null();
    EXPECT_FALSE(per.is_uniform());
    EXPECT_EQ(per.domain_of("_x"), (Domain{"1", "2"}));
}

// Exhaustive checks on small random databases against the reference enumerator.
TEST(IncompleteDatabase, EnumerationProperties)
{
    nt::Rng64 rng(17);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        auto q = nt::random_query(rng);
        auto db = nt::random_database(rng, q);
        if (total_valuations(db) > 12)
            continue;
        ++checked;
        Count n = 0;
        std::set<Completion> distinct;
        for_each_valuation(db, [&](const Valuation &v) {
            ++n;
            Completion c = apply_valuation(db, v);
            for (const Fact &f : c.facts())
                EXPECT_TRUE(f.is_ground());
            distinct.insert(c);
        });
        EXPECT_EQ(n, total_valuations(db));
        EXPECT_LE(distinct.size(), n);
        EXPECT_EQ(distinct.size(), nt::naive_completions(db).size());
    }
    EXPECT_GT(checked, 100);
}
