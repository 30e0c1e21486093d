#include "nullcount/combinatorics.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

using namespace nullcount;

namespace {

// Functions [n] -> [m] counted by brute force: all, and onto.
std::pair<Count, Count> count_functions(std::size_t n, std::size_t m)
{
    Count all = 0;
    Count onto = 0;
    std::vector<std::size_t> f(n, 0);
    for (;;) {
        ++all;
        std::set<std::size_t> image(f.begin(), f.end());
        if (image.size() == m)
            ++onto;
        std::size_t i = 0;
        while (i < n && ++f[i] == m)
            f[i++] = 0;
        if (i == n || m == 0)
            break;
    }
    if (m == 0)
        return {n == 0 ? 1 : 0, n == 0 ? 1 : 0};
    return {all, onto};
}

Count subsets_of_size(std::size_t n, std::size_t k)
{
    Count c = 0;
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
        if (static_cast<std::size_t>(__builtin_popcount(mask)) == k)
            ++c;
    return c;
}

} // namespace

TEST(Combinatorics, SmallValues)
{
    EXPECT_EQ(pow(3, 4), 81);
    EXPECT_EQ(pow(0, 0), 1);
    EXPECT_EQ(factorial(5), 120);
    EXPECT_EQ(binom(5, 2), 10);
    EXPECT_EQ(binom(2, 5), 0);
    EXPECT_EQ(surj(3, 2), 6);
    EXPECT_EQ(surj(2, 3), 0);
    EXPECT_EQ(surj(0, 0), 1);
    EXPECT_EQ(surj(4, 4), 24);
    EXPECT_EQ(binom(100, 50).str(), "100891344545564193334812497256");
}

TEST(Combinatorics, MatchEnumeration)
{
    for (std::size_t n = 0; n <= 7; ++n)
        for (std::size_t m = 0; m <= 7; ++m) {
            EXPECT_EQ(binom(n, m), subsets_of_size(n, m)) << n << " " << m;
            auto [all, onto] = count_functions(n, m);
            EXPECT_EQ(surj(n, m), onto) << n << " " << m;
            EXPECT_EQ(pow(m, n), all) << n << " " << m;
        }
}

TEST(Combinatorics, ImagePartitionIdentity)
{
    for (std::size_t n = 0; n <= 6; ++n)
        for (std::size_t d = 0; d <= 6; ++d) {
            Count sum = 0;
            for (std::size_t m = 0; m <= d; ++m)
                sum += binom(d, m) * surj(n, m);
            EXPECT_EQ(sum, pow(d, n)) << n << " " << d;
        }
}

TEST(CombinatoricsTable, AgreesWithFreeFunctions)
{
    CombinatoricsTable t;
    for (std::size_t n = 0; n <= 20; ++n)
        for (std::size_t k = 0; k <= 22; ++k) {
            EXPECT_EQ(t.binom(n, k), binom(n, k));
            if (k <= 8) {
                EXPECT_EQ(t.surj(n % 9, k), surj(n % 9, k));
            }
        }
    EXPECT_EQ(t.pow(7, 3), 343);
    EXPECT_EQ(t.multinomial(5, {2, 2, 1}), 30);
    EXPECT_EQ(t.multinomial(0, {}), 1);
}
