#ifndef NULLCOUNT_COMBINATORICS_HPP
#define NULLCOUNT_COMBINATORICS_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cassert>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace nullcount {

/// Exact nonnegative count. Every counter in the library returns this.
using Count = boost::multiprecision::cpp_int;

inline Count pow(std::uint64_t base, std::uint64_t exponent)
{
    Count result = 1;
    Count b = base;
    while (exponent != 0) {
        if (exponent & 1U)
            result *= b;
        exponent >>= 1U;
        if (exponent != 0)
            b *= b;
    }
    return result;
}

inline Count factorial(std::uint64_t n)
{
    Count result = 1;
    for (std::uint64_t i = 2; i <= n; ++i)
        result *= i;
    return result;
}

/// Binomial coefficient; 0 when k > n.
inline Count binom(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    Count result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;
    }
    return result;
}

/// Number of surjections {1..n} -> {1..m}, by the alternating sum
/// sum_{i=0}^{m-1} (-1)^i C(m,i) (m-i)^n. Zero when m > n; surj(0,0) = 1.
inline Count surj(std::uint64_t n, std::uint64_t m)
{
    if (m > n)
        return 0;
    if (m == 0)
        return n == 0 ? 1 : 0;
    // cpp_int is signed, so partial sums may dip below zero.
    Count sum = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
        Count term = binom(m, i) * pow(m - i, n);
        if (i % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    assert(sum >= 0);
    return sum;
}

/// Memoized binomial / surjection / power tables for the exact counters.
///
/// Rows are grown on demand up to the largest argument seen. A table is a
/// per-invocation object; it is not shared between threads.
class CombinatoricsTable {
public:
    const Count &binom(std::size_t n, std::size_t k)
    {
        static const Count zero = 0;
        if (k > n)
            return zero;
        grow_pascal(n);
        return pascal_[n][k];
    }

    const Count &surj(std::size_t n, std::size_t m)
    {
        auto key = std::make_pair(n, m);
        auto it = surj_.find(key);
        if (it == surj_.end())
            it = surj_.emplace(key, nullcount::surj(n, m)).first;
        return it->second;
    }

    const Count &pow(std::size_t base, std::size_t exponent)
    {
        auto key = std::make_pair(base, exponent);
        auto it = pow_.find(key);
        if (it == pow_.end())
            it = pow_.emplace(key, nullcount::pow(base, exponent)).first;
        return it->second;
    }

    /// n! / (k_1! ... k_r!) where sum k_i = n.
    Count multinomial(std::size_t n, const std::vector<std::size_t> &parts)
    {
        Count result = 1;
        std::size_t left = n;
        for (std::size_t k : parts) {
            assert(k <= left);
            result *= binom(left, k);
            left -= k;
        }
        assert(left == 0);
        return result;
    }

private:
    void grow_pascal(std::size_t n)
    {
        while (pascal_.size() <= n) {
            std::size_t row = pascal_.size();
            std::vector<Count> next(row + 1);
            next[0] = 1;
            next[row] = 1;
            for (std::size_t k = 1; k < row; ++k)
                next[k] = pascal_[row - 1][k - 1] + pascal_[row - 1][k];
            pascal_.push_back(std::move(next));
        }
    }

    std::vector<std::vector<Count>> pascal_;
    std::map<std::pair<std::size_t, std::size_t>, Count> surj_;
    std::map<std::pair<std::size_t, std::size_t>, Count> pow_;
};

} // namespace nullcount

#endif
