#ifndef NULLCOUNT_APPROX_HPP
#define NULLCOUNT_APPROX_HPP

#include "nullcount/combinatorics.hpp"
#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/query.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace nullcount {

/// Valuations under which one disjunct maps its atoms onto a fixed choice of
/// facts. Nulls unified with each other form a class; a class either has a
/// forced constant or ranges over the intersection of its members' domains.
/// Nulls not mentioned in any class are free.
struct Event {
    struct Class {
        std::vector<std::string> nulls; // sorted
        std::optional<std::string> forced;
        Domain values; // {forced} or the domain intersection; never empty
    };
    std::size_t disjunct = 0;
    /// Index into db.facts() per atom of the disjunct.
    std::vector<std::size_t> facts;
    std::vector<Class> classes;
};

inline constexpr std::uint64_t kMaxEvents = 10'000'000;
inline constexpr std::uint64_t kMaxSamples = 10'000'000'000ULL;

namespace detail {

// Union-find over query variables and nulls; a root may carry a constant.
struct Unifier {
    std::vector<int> parent;
    std::vector<int> constant; // -1 when none, otherwise a constant id

    explicit Unifier(std::size_t n) : parent(n), constant(n, -1) { std::iota(parent.begin(), parent.end(), 0); }

    int root(int x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }

    bool bind(int x, int c)
    {
        x = root(x);
        if (constant[x] == -1)
            constant[x] = c;
        return constant[x] == c;
    }

    bool unite(int a, int b)
    {
        a = root(a);
        b = root(b);
        if (a == b)
            return true;
        if (constant[a] != -1 && constant[b] != -1 && constant[a] != constant[b])
            return false;
        parent[b] = a;
        if (constant[a] == -1)
            constant[a] = constant[b];
        return true;
    }
};

inline Domain intersect(const Domain &a, const Domain &b)
{
    Domain out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

} // namespace detail

/// One event per disjunct and consistent assignment of its atoms to facts of
/// the same relation. A valuation satisfies `q` iff it lies in some event.
inline std::vector<Event> enumerate_events(const UnionQuery &q, const IncompleteDatabase &db)
{
    check_schema(q, db);
    const std::vector<Fact> &facts = db.facts();
    const std::vector<std::string> &nulls = db.nulls();
    std::map<std::string, int> null_id;
    for (std::size_t i = 0; i < nulls.size(); ++i)
        null_id.emplace(nulls[i], static_cast<int>(i));
    std::map<std::string, int> constant_id;
    std::vector<std::string> constants;
    auto intern = [&](const std::string &c) {
        auto [it, fresh] = constant_id.emplace(c, static_cast<int>(constants.size()));
        if (fresh)
            constants.push_back(c);
        return it->second;
    };

    std::vector<Event> events;
    for (std::size_t d = 0; d < q.disjuncts().size(); ++d) {
        const SjfBCQ &cq = q.disjuncts()[d];
        std::map<std::string, int> var_id; // after the nulls
        for (const auto &v : cq.variables())
            var_id.emplace(v, static_cast<int>(nulls.size() + var_id.size()));
        std::vector<std::pair<std::size_t, std::size_t>> ranges; // facts of each atom's relation
        for (const Atom &a : cq.atoms()) {
            auto run = db.relation(a.relation);
            std::size_t begin = static_cast<std::size_t>(run.data() - facts.data());
            ranges.emplace_back(begin, begin + run.size());
        }

        std::vector<std::size_t> chosen(cq.size());
        auto emit = [&](detail::Unifier &u) {
            std::map<int, Event::Class> by_root;
            std::map<int, std::size_t> members;
            for (std::size_t n = 0; n < nulls.size(); ++n)
                ++members[u.root(static_cast<int>(n))];
            for (std::size_t n = 0; n < nulls.size(); ++n) {
                int r = u.root(static_cast<int>(n));
                if (u.constant[r] == -1 && members[r] == 1)
                    continue; // free null
                auto &cls = by_root[r];
                cls.nulls.push_back(nulls[n]);
                const Domain &dom = db.domain_of(nulls[n]);
                if (cls.nulls.size() == 1) {
                    if (u.constant[r] != -1) {
                        cls.forced = constants[static_cast<std::size_t>(u.constant[r])];
                        cls.values = {*cls.forced};
                    } else {
                        cls.values = dom;
                    }
                }
                cls.values = detail::intersect(cls.values, dom);
                if (cls.values.empty())
                    return;
            }
            Event e{d, chosen, {}};
            for (auto &[r, cls] : by_root)
                e.classes.push_back(std::move(cls));
            if (events.size() >= kMaxEvents)
                throw ResourceLimit("more than " + std::to_string(kMaxEvents) + " events");
            events.push_back(std::move(e));
        };

        auto assign = [&](auto &self, std::size_t i, const detail::Unifier &u) -> void {
            if (i == cq.size()) {
                detail::Unifier copy = u;
                emit(copy);
                return;
            }
            const Atom &atom = cq[i];
            for (std::size_t f = ranges[i].first; f < ranges[i].second; ++f) {
                detail::Unifier next = u;
                bool ok = true;
                for (std::size_t k = 0; k < atom.vars.size() && ok; ++k) {
                    int v = var_id.at(atom.vars[k]);
                    const Term &t = facts[f].args[k];
                    ok = t.is_null() ? next.unite(v, null_id.at(t.name())) : next.bind(v, intern(t.name()));
                }
                if (!ok)
                    continue;
                chosen[i] = f;
                self(self, i + 1, next);
            }
        };
        assign(assign, 0, detail::Unifier(nulls.size() + var_id.size()));
    }
    return events;
}

/// Number of valuations in the event.
inline Count event_size(const Event &e, const IncompleteDatabase &db)
{
    Count size = 1;
    for (const auto &cls : e.classes)
        size *= cls.values.size();
    for (const auto &n : db.nulls()) {
        bool bound = std::any_of(e.classes.begin(), e.classes.end(), [&](const Event::Class &cls) {
            return std::binary_search(cls.nulls.begin(), cls.nulls.end(), n);
        });
        if (!bound)
            size *= db.domain_of(n).size();
    }
    return size;
}

struct EstimateReport {
    Count estimate;
    double epsilon = 0;
    double delta = 0;
    /// Trials drawn; zero only when there are no events.
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint64_t events = 0;
    unsigned threads = 1;
};

/// SplitMix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, k) by rejection from power-of-two draws.
    std::uint64_t below(std::uint64_t k)
    {
        if (k <= 1)
            return 0;
        const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(k - 1);
        for (;;) {
            std::uint64_t r = next() & mask;
            if (r < k)
                return r;
        }
    }

    /// Uniform in [0, k) for a big k.
    Count below(const Count &k)
    {
        if (k <= 1)
            return 0;
        const std::size_t bits = boost::multiprecision::msb(Count(k - 1)) + 1;
        for (;;) {
            Count r = 0;
            for (std::size_t done = 0; done < bits; done += 64)
                r = (r << 64) | next();
            r &= (Count(1) << bits) - 1;
            if (r < k)
                return r;
        }
    }

    static std::uint64_t mix(std::uint64_t x)
    {
        x = (x ^ (x >> 33)) * 0xff51afd7ed558ccdULL;
        x = (x ^ (x >> 33)) * 0xc4ceb9fe1a85ec53ULL;
        return x ^ (x >> 33);
    }

private:
    std::uint64_t state_;
};

inline std::uint64_t karp_luby_samples(std::uint64_t events, double epsilon, double delta)
{
    if (!(epsilon > 0 && epsilon < 1))
        throw InvalidTolerance("epsilon must lie strictly between 0 and 1");
    if (!(delta > 0 && delta < 1))
        throw InvalidTolerance("delta must lie strictly between 0 and 1");
    const double m = std::ceil(8.0 * static_cast<double>(events) * std::log(2.0 / delta) / (epsilon * epsilon));
    if (m > static_cast<double>(kMaxSamples))
        throw ResourceLimit("estimate needs " + std::to_string(m) + " samples");
    return static_cast<std::uint64_t>(m);
}

namespace detail {

struct CompiledEvent {
    std::vector<std::vector<int>> classes; // null ids
    std::vector<int> forced;               // constant id or -1
    std::vector<std::vector<int>> values;  // constant ids
};

} // namespace detail

/// Karp-Luby estimate of the number of valuations satisfying `q`.
/// Deterministic for a fixed (seed, threads) pair.
inline EstimateReport karp_luby_estimate(const UnionQuery &q, const IncompleteDatabase &db, double epsilon,
                                         double delta, std::uint64_t seed, unsigned threads = 1)
{
    karp_luby_samples(1, epsilon, delta); // validates the tolerances first
    const std::vector<Event> events = enumerate_events(q, db);
    threads = std::max(1U, threads);
    EstimateReport report{0, epsilon, delta, 0, seed, events.size(), threads};
    if (events.empty())
        return report;
    const std::uint64_t m = karp_luby_samples(events.size(), epsilon, delta);
    report.samples = m;

    // Intern constants and compile events to ids.
    const std::vector<std::string> &nulls = db.nulls();
    std::map<std::string, int> null_id;
    for (std::size_t i = 0; i < nulls.size(); ++i)
        null_id.emplace(nulls[i], static_cast<int>(i));
    std::map<std::string, int> constant_id;
    auto intern = [&](const std::string &c) {
        return constant_id.emplace(c, static_cast<int>(constant_id.size())).first->second;
    };
    std::vector<std::vector<int>> domains(nulls.size());
    for (std::size_t i = 0; i < nulls.size(); ++i)
        for (const auto &c : db.domain_of(nulls[i]))
            domains[i].push_back(intern(c));
    std::vector<detail::CompiledEvent> compiled;
    std::vector<Count> sizes;
    for (const Event &e : events) {
        detail::CompiledEvent c;
        for (const auto &cls : e.classes) {
            std::vector<int> ids;
            for (const auto &n : cls.nulls)
                ids.push_back(null_id.at(n));
            c.classes.push_back(std::move(ids));
            c.forced.push_back(cls.forced ? intern(*cls.forced) : -1);
            std::vector<int> vals;
            for (const auto &v : cls.values)
                vals.push_back(intern(v));
            c.values.push_back(std::move(vals));
        }
        compiled.push_back(std::move(c));
        sizes.push_back(event_size(e, db));
    }
    std::vector<Count> prefix(sizes.size());
    std::partial_sum(sizes.begin(), sizes.end(), prefix.begin());
    const Count &W = prefix.back();
    const bool small = W <= std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> prefix64;
    if (small)
        for (const Count &p : prefix)
            prefix64.push_back(static_cast<std::uint64_t>(p));

    auto contains = [&](const detail::CompiledEvent &e, const std::vector<int> &val) {
        for (std::size_t k = 0; k < e.classes.size(); ++k) {
            const int first = val[static_cast<std::size_t>(e.classes[k][0])];
            if (e.forced[k] != -1 && first != e.forced[k])
                return false;
            for (int n : e.classes[k])
                if (val[static_cast<std::size_t>(n)] != first)
                    return false;
        }
        return true;
    };

    auto worker = [&](unsigned w, std::uint64_t trials, std::uint64_t &successes) {
        Rng rng(Rng::mix(seed ^ w));
        std::vector<int> val(nulls.size());
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t) {
            std::size_t i;
            if (small) {
                std::uint64_t r = rng.below(prefix64.back());
                i = static_cast<std::size_t>(std::upper_bound(prefix64.begin(), prefix64.end(), r) - prefix64.begin());
            } else {
                Count r = rng.below(W);
                i = static_cast<std::size_t>(std::upper_bound(prefix.begin(), prefix.end(), r) - prefix.begin());
            }
            for (std::size_t n = 0; n < nulls.size(); ++n)
                val[n] = domains[n][rng.below(domains[n].size())];
            const detail::CompiledEvent &e = compiled[i];
            for (std::size_t k = 0; k < e.classes.size(); ++k) {
                const int v = e.values[k][rng.below(e.values[k].size())];
                for (int n : e.classes[k])
                    val[static_cast<std::size_t>(n)] = v;
            }
            bool least = true;
            for (std::size_t j = 0; j < i && least; ++j)
                least = !contains(compiled[j], val);
            hits += least ? 1 : 0;
        }
        successes = hits;
    };

    std::vector<std::uint64_t> successes(threads, 0);
    if (threads == 1) {
        worker(0, m, successes[0]);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t begin = m * w / threads;
            const std::uint64_t end = m * (w + 1) / threads;
            pool.emplace_back(worker, w, end - begin, std::ref(successes[w]));
        }
        for (auto &t : pool)
            t.join();
    }
    const std::uint64_t hits = std::accumulate(successes.begin(), successes.end(), std::uint64_t{0});
    // round(W * hits / m)
    report.estimate = (W * hits * 2 + m) / (Count(m) * 2);
    return report;
}

} // namespace nullcount

#endif
