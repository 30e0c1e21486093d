#include "testing.hpp"

#include <gtest/gtest.h>

using namespace nullcount;
namespace nt = nullcount::testing;

namespace {

IncompleteDatabase db(const char *text) { return parse_database(text); }

// |estimate - truth| <= epsilon * truth, in exact arithmetic.
bool within(const Count &estimate, const Count &truth, double epsilon)
{
    const Count diff = estimate > truth ? Count(estimate - truth) : Count(truth - estimate);
    const auto scale = static_cast<long long>(epsilon * 1000);
    return diff * 1000 <= truth * scale;
}

} // namespace

TEST(Events, Examples)
{
    auto always = enumerate_events(parse_query("R(x,x)"), db("@domain uniform 1 2\nR(_a,_a)\n"));
    ASSERT_EQ(always.size(), 1U);
    EXPECT_TRUE(always[0].classes.empty());
    EXPECT_TRUE(enumerate_events(parse_query("R(x,x)"), db("R(1,2)\n")).empty());

    auto d = db("@domain uniform 1 2\nR(_a)\nS(_b)\n");
    auto shared = enumerate_events(parse_query("R(x)&S(x)"), d);
    ASSERT_EQ(shared.size(), 1U);
    ASSERT_EQ(shared[0].classes.size(), 1U);
    EXPECT_EQ(shared[0].classes[0].nulls, (std::vector<std::string>{"_a", "_b"}));
    EXPECT_EQ(event_size(shared[0], d), 2);
    EXPECT_EQ(event_size(shared[0], d), brute_count_val(parse_query("R(x)&S(x)"), d));
}

TEST(Events, Sizes)
{
    auto forced = db("@domain uniform 1 2 3 4\nR(_a,_b)\n");
    auto e = enumerate_events(parse_query("R(x,y)&T(y)"), db("@domain uniform 1 2 3 4\nR(_a,_b)\nT(2)\n"));
    ASSERT_EQ(e.size(), 1U);
    EXPECT_EQ(event_size(e[0], db("@domain uniform 1 2 3 4\nR(_a,_b)\nT(2)\n")), 4);
    auto free = enumerate_events(parse_query("R(x,y)"), forced);
    ASSERT_EQ(free.size(), 1U);
    EXPECT_EQ(event_size(free[0], forced), total_valuations(forced));
    auto split = db("@null _a 1 2\n@null _b 2 3\nR(_a)\nS(_b)\n");
    auto inter = enumerate_events(parse_query("R(x)&S(x)"), split);
    ASSERT_EQ(inter.size(), 1U);
    EXPECT_EQ(event_size(inter[0], split), 1);
}

TEST(Events, UnionAndSandwich)
{
    // Every satisfying valuation lies in some event, so the event sizes sum
    // to at least the count and the largest is at most the count.
    nt::Rng64 rng(9);
    for (int i = 0; i < 300; ++i) {
        auto in = nt::random_positive_instance(rng);
        const Count truth = nt::naive_count_val(in.query, in.db);
        auto events = enumerate_events(in.query, in.db);
        Count sum = 0;
        Count largest = 0;
        for (const auto &e : events) {
            const Count s = event_size(e, in.db);
            sum += s;
            largest = std::max(largest, s);
        }
        EXPECT_LE(largest, truth);
        EXPECT_GE(sum, truth);
    }
}

TEST(Estimate, SingleEventIsExact)
{
    auto d = db("@domain uniform 1 2 3\nR(_a,_a)\n");
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        EXPECT_EQ(karp_luby_estimate(parse_query("R(x,x)"), d, 0.2, 0.25, seed).estimate, 3);
}

TEST(Estimate, NoEvents)
{
    auto r = karp_luby_estimate(parse_query("R(x,x)"), db("R(1,2)\n"), 0.1, 0.1, 4);
    EXPECT_EQ(r.estimate, 0);
    EXPECT_EQ(r.samples, 0U);
    EXPECT_EQ(r.events, 0U);
}

TEST(Estimate, ReportFields)
{
    auto d = db("@domain uniform 1 2\nR(_a)\nS(_b)\n");
    auto r = karp_luby_estimate(parse_query("R(x)&S(x)"), d, 0.5, 0.1, 42);
    EXPECT_EQ(r.events, 1U);
    EXPECT_EQ(r.samples, karp_luby_samples(1, 0.5, 0.1));
    EXPECT_EQ(r.seed, 42U);
    EXPECT_EQ(r.threads, 1U);
}

TEST(Estimate, Reproducible)
{
    nt::Rng64 rng(3);
    for (int i = 0; i < 10; ++i) {
        auto in = nt::random_positive_instance(rng);
        auto a = karp_luby_estimate(in.query, in.db, 0.3, 0.2, 1234);
        auto b = karp_luby_estimate(in.query, in.db, 0.3, 0.2, 1234);
        EXPECT_EQ(a.estimate, b.estimate);
        auto c = karp_luby_estimate(in.query, in.db, 0.3, 0.2, 1234, 3);
        auto e = karp_luby_estimate(in.query, in.db, 0.3, 0.2, 1234, 3);
        EXPECT_EQ(c.estimate, e.estimate);
        EXPECT_EQ(c.threads, 3U);
    }
}

TEST(Estimate, Tolerances)
{
    auto d = db("@domain uniform 1 2\nR(_a)\n");
    auto q = parse_query("R(x)");
    EXPECT_THROW(karp_luby_estimate(q, d, 0, 0.1, 1), InvalidTolerance);
    EXPECT_THROW(karp_luby_estimate(q, d, 1, 0.1, 1), InvalidTolerance);
    EXPECT_THROW(karp_luby_estimate(q, d, 0.1, 0, 1), InvalidTolerance);
    EXPECT_THROW(karp_luby_estimate(q, d, 0.1, 1.5, 1), InvalidTolerance);
    EXPECT_THROW(karp_luby_samples(1'000'000, 1e-4, 0.1), ResourceLimit);
}

TEST(Estimate, Calibration)
{
    nt::Rng64 rng(2024);
    for (int i = 0; i < 10; ++i) {
        auto in = nt::random_positive_instance(rng);
        const Count truth = nt::naive_count_val(in.query, in.db);
        int good = 0;
        for (std::uint64_t seed = 0; seed < 40; ++seed)
            good += within(karp_luby_estimate(in.query, in.db, 0.2, 0.25, seed).estimate, truth, 0.2);
        EXPECT_GE(good, 30) << to_string(in.query) << "\n" << format_database(in.db);
    }
}

TEST(Rng, BelowIsInRange)
{
    Rng rng(5);
    std::vector<int> hist(7, 0);
    for (int i = 0; i < 7000; ++i)
        ++hist[rng.below(std::uint64_t{7})];
    for (int h : hist)
        EXPECT_GT(h, 800);
    const Count big = Count(1) << 100;
    for (int i = 0; i < 100; ++i)
        EXPECT_LT(rng.below(big), big);
}
