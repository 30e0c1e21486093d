#ifndef NULLCOUNT_ORACLE_HPP
#define NULLCOUNT_ORACLE_HPP

#include "nullcount/combinatorics.hpp"
#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/graph.hpp"
#include "nullcount/query.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace nullcount {

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

struct OracleOptions {
    /// Refuse databases with more valuations than this.
    std::uint64_t cap = kDefaultEnumerationCap;
    unsigned threads = 1;
    /// Enumerate each group of nulls that share a fact on its own and merge
    /// the partial completions with multiplicities. With false, the plain
    /// Cartesian product over all nulls is walked.
    bool factorize = true;
};

namespace detail {

struct VectorHash {
    template <typename T>
    std::size_t operator()(const std::vector<T> &v) const noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
        for (T x : v) {
            h ^= static_cast<std::uint64_t>(x);
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

class Interner {
public:
    int id(const std::string &s)
    {
        auto [it, fresh] = ids_.emplace(s, static_cast<int>(names_.size()));
        if (fresh)
            names_.push_back(s);
        return it->second;
    }
    int find(const std::string &s) const
    {
        auto it = ids_.find(s);
        return it == ids_.end() ? -1 : it->second;
    }
    const std::string &name(int id) const { return names_[static_cast<std::size_t>(id)]; }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::map<std::string, int> ids_;
    std::vector<std::string> names_;
};

/// Union query over interned relation and constant ids.
class CompiledQuery {
public:
    CompiledQuery(const UnionQuery &q, Interner &relations)
    {
        for (const auto &d : q.disjuncts()) {
            Disjunct cd;
            std::map<std::string, int> vars;
            for (const auto &a : d.atoms()) {
                CompiledAtom ca{relations.id(a.relation), {}};
                for (const auto &v : a.vars)
                    ca.vars.push_back(vars.emplace(v, static_cast<int>(vars.size())).first->second);
                cd.atoms.push_back(std::move(ca));
            }
            cd.var_count = vars.size();
            disjuncts_.push_back(std::move(cd));
        }
    }

    /// `tuples[r]` holds the tuples of relation r flattened row by row.
    bool holds(const std::vector<std::vector<int>> &tuples) const
    {
        for (const auto &d : disjuncts_) {
            std::vector<int> binding(d.var_count, -1);
            if (search(d, 0, binding, tuples))
                return true;
        }
        return false;
    }

private:
    struct CompiledAtom {
        int relation;
        std::vector<int> vars;
    };
    struct Disjunct {
        std::vector<CompiledAtom> atoms;
        std::size_t var_count = 0;
    };

    static bool search(const Disjunct &d, std::size_t k, std::vector<int> &binding,
                       const std::vector<std::vector<int>> &tuples)
    {
        if (k == d.atoms.size())
            return true;
        const CompiledAtom &a = d.atoms[k];
        if (static_cast<std::size_t>(a.relation) >= tuples.size())
            return false;
        const std::vector<int> &rows = tuples[static_cast<std::size_t>(a.relation)];
        const std::size_t arity = a.vars.size();
        std::vector<int> bound;
        for (std::size_t off = 0; off + arity <= rows.size(); off += arity) {
            bound.clear();
            bool ok = true;
            for (std::size_t p = 0; p < arity; ++p) {
                int &slot = binding[static_cast<std::size_t>(a.vars[p])];
                if (slot == -1) {
                    slot = rows[off + p];
                    bound.push_back(a.vars[p]);
                } else if (slot != rows[off + p]) {
                    ok = false;
                    break;
                }
            }
            if (ok && search(d, k + 1, binding, tuples))
                return true;
            for (int v : bound)
                binding[static_cast<std::size_t>(v)] = -1;
        }
        return false;
    }

    std::vector<Disjunct> disjuncts_;
};

using CompletionKey = std::vector<std::uint32_t>; // sorted ground-fact ids
using Frontier = std::unordered_map<CompletionKey, std::uint64_t, VectorHash>;

/// Interned view of an incomplete database for exhaustive enumeration.
class Enumerator {
public:
    explicit Enumerator(const IncompleteDatabase &db)
    {
        const auto &nulls = db.nulls();
        std::map<std::string, int> null_index;
        for (std::size_t i = 0; i < nulls.size(); ++i) {
            null_index.emplace(nulls[i], static_cast<int>(i));
            std::vector<int> dom;
            for (const auto &c : db.domain_of(nulls[i]))
                dom.push_back(constants_.id(c));
            domains_.push_back(std::move(dom));
        }
        for (const Fact &f : db.facts()) {
            Row row{relations_.id(f.relation), {}};
            for (const Term &t : f.args)
                row.args.push_back(t.is_null() ? -1 - null_index.at(t.name()) : constants_.id(t.name()));
            rows_.push_back(std::move(row));
        }
    }

    Interner &relations() noexcept { return relations_; }

    /// Distinct completions with the number of valuations producing each.
    Frontier completions(const OracleOptions &opt)
    {
        const std::size_t n = domains_.size();
        std::vector<std::size_t> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t i = 1; i < n && !opt.factorize; ++i)
            parent[i] = 0;
        for (const Row &r : rows_) {
            int first = 0;
            for (int a : r.args)
                if (a < 0) {
                    if (first == 0)
                        first = a;
                    else
                        parent[find(null_of(a))] = find(null_of(first));
                }
        }

        CompletionKey base;
        std::map<std::size_t, std::vector<std::size_t>> group_rows;
        std::map<std::size_t, std::vector<std::size_t>> group_nulls;
        for (std::size_t i = 0; i < n; ++i)
            group_nulls[find(i)].push_back(i);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const auto &args = rows_[r].args;
            auto null = std::find_if(args.begin(), args.end(), [](int a) { return a < 0; });
            if (null == args.end())
                base.push_back(fact_id(rows_[r].relation, args));
            else
                group_rows[find(null_of(*null))].push_back(r);
        }
        std::sort(base.begin(), base.end());
        base.erase(std::unique(base.begin(), base.end()), base.end());

        Frontier frontier;
        frontier.emplace(std::move(base), 1);
        for (const auto &[root, members] : group_nulls) {
            Frontier options = enumerate_group(members, group_rows[root], opt.threads);
            Frontier next;
            CompletionKey merged;
            for (const auto &[key, mult] : frontier)
                for (const auto &[part, count] : options) {
                    merged.clear();
                    std::set_union(key.begin(), key.end(), part.begin(), part.end(), std::back_inserter(merged));
                    next[merged] += mult * count;
                }
            frontier = std::move(next);
        }
        return frontier;
    }

    /// Per-relation flattened tuples of a completion, indexed by relation id.
    std::vector<std::vector<int>> tuples(const CompletionKey &key) const
    {
        std::vector<std::vector<int>> out(relations_.size());
        for (std::uint32_t id : key) {
            const std::vector<int> &f = facts_[id];
            auto &dst = out[static_cast<std::size_t>(f[0])];
            dst.insert(dst.end(), f.begin() + 1, f.end());
        }
        return out;
    }

    Completion completion(const CompletionKey &key) const
    {
        std::vector<Fact> facts;
        for (std::uint32_t id : key) {
            const std::vector<int> &f = facts_[id];
            Fact fact{relations_.name(f[0]), {}};
            for (std::size_t i = 1; i < f.size(); ++i)
                fact.args.push_back(Term::constant(constants_.name(f[i])));
            facts.push_back(std::move(fact));
        }
        return Completion(std::move(facts));
    }

private:
    struct Row {
        int relation;
        std::vector<int> args; // constant id, or -1 - null index
    };

    static std::size_t null_of(int arg) { return static_cast<std::size_t>(-1 - arg); }

    std::uint32_t fact_id(int relation, const std::vector<int> &ground_args)
    {
        std::vector<int> key;
        key.reserve(ground_args.size() + 1);
        key.push_back(relation);
        key.insert(key.end(), ground_args.begin(), ground_args.end());
        auto [it, fresh] = fact_ids_.emplace(key, static_cast<std::uint32_t>(facts_.size()));
        if (fresh)
            facts_.push_back(std::move(key));
        return it->second;
    }

    // Distinct partial completions of one group of nulls with multiplicities.
    Frontier enumerate_group(const std::vector<std::size_t> &members, const std::vector<std::size_t> &rows,
                             unsigned threads)
    {
        // Position of each member null in the group's mixed-radix digits.
        std::map<std::size_t, std::size_t> digit_of;
        for (std::size_t i = 0; i < members.size(); ++i)
            digit_of.emplace(members[i], i);

        // Every row gets a table of fact ids over the values of its own nulls,
        // so that workers never touch the shared fact table.
        struct RowTable {
            std::vector<std::size_t> digits; // group digit per distinct null of the row
            std::vector<std::uint32_t> ids;
        };
        std::vector<RowTable> tables;
        for (std::size_t r : rows) {
            RowTable t;
            for (int a : rows_[r].args)
                if (a < 0) {
                    std::size_t d = digit_of.at(null_of(a));
                    if (std::find(t.digits.begin(), t.digits.end(), d) == t.digits.end())
                        t.digits.push_back(d);
                }
            std::size_t size = 1;
            for (std::size_t d : t.digits)
                size *= domains_[members[d]].size();
            std::vector<std::size_t> local(t.digits.size(), 0);
            std::vector<int> args(rows_[r].args.size());
            for (std::size_t idx = 0; idx < size; ++idx) {
                std::size_t rest = idx;
                for (std::size_t k = t.digits.size(); k-- > 0;) {
                    std::size_t radix = domains_[members[t.digits[k]]].size();
                    local[k] = rest % radix;
                    rest /= radix;
                }
                for (std::size_t p = 0; p < args.size(); ++p) {
                    int a = rows_[r].args[p];
                    if (a >= 0) {
                        args[p] = a;
                        continue;
                    }
                    std::size_t d = digit_of.at(null_of(a));
                    std::size_t k = static_cast<std::size_t>(
                        std::find(t.digits.begin(), t.digits.end(), d) - t.digits.begin());
                    args[p] = domains_[members[d]][local[k]];
                }
                t.ids.push_back(fact_id(rows_[r].relation, args));
            }
            tables.push_back(std::move(t));
        }

        std::vector<std::size_t> radix;
        std::uint64_t total = 1;
        for (std::size_t m : members) {
            radix.push_back(domains_[m].size());
            total *= domains_[m].size();
        }

        auto run = [&](std::uint64_t lo, std::uint64_t hi, Frontier &out) {
            std::vector<std::size_t> digit(members.size(), 0);
            std::uint64_t rest = lo;
            for (std::size_t k = members.size(); k-- > 0;) {
                digit[k] = static_cast<std::size_t>(rest % radix[k]);
                rest /= radix[k];
            }
            CompletionKey key;
            for (std::uint64_t idx = lo; idx < hi; ++idx) {
                key.clear();
                for (const RowTable &t : tables) {
                    std::size_t at = 0;
                    for (std::size_t d : t.digits)
                        at = at * radix[d] + digit[d];
                    key.push_back(t.ids[at]);
                }
                std::sort(key.begin(), key.end());
                key.erase(std::unique(key.begin(), key.end()), key.end());
                ++out[key];
                for (std::size_t k = members.size(); k-- > 0;) {
                    if (++digit[k] < radix[k])
                        break;
                    digit[k] = 0;
                }
            }
        };

        Frontier result;
        const unsigned workers = threads <= 1 || total < 4096 ? 1U : threads;
        if (workers == 1) {
            run(0, total, result);
            return result;
        }
        std::vector<Frontier> partial(workers);
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t lo = total * w / workers;
            std::uint64_t hi = total * (w + 1) / workers;
            pool.emplace_back(run, lo, hi, std::ref(partial[w]));
        }
        for (auto &t : pool)
            t.join();
        for (const auto &p : partial)
            for (const auto &[key, count] : p)
                result[key] += count;
        return result;
    }

    Interner constants_;
    Interner relations_;
    std::vector<std::vector<int>> domains_; // per null index
    std::vector<Row> rows_;
    std::unordered_map<std::vector<int>, std::uint32_t, VectorHash> fact_ids_;
    std::vector<std::vector<int>> facts_; // fact id -> relation, args
};

inline void check_cap(const IncompleteDatabase &db, std::uint64_t cap)
{
    Count total = total_valuations(db);
    if (total > cap)
        throw ResourceLimit("database has " + total.str() + " valuations, above the enumeration cap of " +
                            std::to_string(cap));
}

} // namespace detail

/// Whether some disjunct of `q` maps homomorphically into `db`.
inline bool model_check(const UnionQuery &q, const Completion &db)
{
    detail::Interner relations;
    detail::Interner constants;
    std::vector<std::vector<int>> tuples;
    for (const Fact &f : db.facts()) {
        auto r = static_cast<std::size_t>(relations.id(f.relation));
        if (tuples.size() <= r)
            tuples.resize(r + 1);
        for (const Term &t : f.args)
            tuples[r].push_back(constants.id(t.name()));
    }
    detail::CompiledQuery compiled(q, relations);
    for (const auto &d : q.disjuncts())
        for (const auto &a : d.atoms()) {
            auto run = db.relation(a.relation);
            if (!run.empty() && run.front().arity() != a.arity())
                throw SchemaMismatch("relation " + a.relation + " has a different arity in the query");
        }
    return compiled.holds(tuples);
}

/// Number of valuations whose completion satisfies `q`, by exhaustive
/// enumeration. Throws ResourceLimit above `opt.cap` valuations.
inline Count brute_count_val(const UnionQuery &q, const IncompleteDatabase &db, const OracleOptions &opt = {})
{
    check_schema(q, db);
    detail::check_cap(db, opt.cap);
    detail::Enumerator e(db);
    detail::CompiledQuery compiled(q, e.relations());
    Count total = 0;
    for (const auto &[key, mult] : e.completions(opt))
        if (compiled.holds(e.tuples(key)))
            total += mult;
    return total;
}

/// Number of distinct completions satisfying `q`, by exhaustive enumeration.
inline Count brute_count_comp(const UnionQuery &q, const IncompleteDatabase &db, const OracleOptions &opt = {})
{
    check_schema(q, db);
    detail::check_cap(db, opt.cap);
    detail::Enumerator e(db);
    detail::CompiledQuery compiled(q, e.relations());
    Count total = 0;
    for (const auto &[key, mult] : e.completions(opt))
        if (compiled.holds(e.tuples(key)))
            ++total;
    return total;
}

/// All distinct completions of `db`, sorted.
inline std::vector<Completion> enumerate_completions(const IncompleteDatabase &db, const OracleOptions &opt = {})
{
    detail::check_cap(db, opt.cap);
    detail::Enumerator e(db);
    std::vector<Completion> out;
    for (const auto &[key, mult] : e.completions(opt))
        out.push_back(e.completion(key));
    std::sort(out.begin(), out.end());
    return out;
}

/// Calls `fn(valuation)` for every valuation of `db`, nulls in sorted order,
/// last null varying fastest.
inline void for_each_valuation(const IncompleteDatabase &db, const std::function<void(const Valuation &)> &fn,
                               std::uint64_t cap = kDefaultEnumerationCap)
{
    detail::check_cap(db, cap);
    const auto &nulls = db.nulls();
    std::vector<std::size_t> digit(nulls.size(), 0);
    Valuation v;
    for (const auto &n : nulls)
        v.assign(n, db.domain_of(n).front());
    for (;;) {
        fn(v);
        std::size_t k = nulls.size();
        for (; k-- > 0;) {
            const Domain &dom = db.domain_of(nulls[k]);
            if (++digit[k] < dom.size()) {
                v.assign(nulls[k], dom[digit[k]]);
                break;
            }
            digit[k] = 0;
            v.assign(nulls[k], dom[0]);
        }
        if (k == static_cast<std::size_t>(-1))
            return;
    }
}

namespace detail {

inline bool can_ground_to(const IncompleteDatabase &db, const Fact &f, const Fact &g)
{
    if (f.relation != g.relation || f.arity() != g.arity())
        return false;
    for (std::size_t i = 0; i < f.arity(); ++i) {
        const Term &t = f.args[i];
        if (t.is_constant()) {
            if (t != g.args[i])
                return false;
        } else {
            const Domain &dom = db.domain_of(t.name());
            if (!std::binary_search(dom.begin(), dom.end(), g.args[i].name()))
                return false;
        }
    }
    return true;
}

} // namespace detail

/// Whether some valuation of the Codd table `db` yields exactly `s`.
/// Facts of `db` on the left, facts of `s` on the right, an edge where the
/// fact can be grounded to the ground fact; `s` is a completion iff every
/// left node has an edge and a matching covers the right side.
inline bool is_completion(const IncompleteDatabase &db, const Completion &s)
{
    if (!db.is_codd())
        throw NotCodd();
    const auto &left = db.facts();
    const auto &right = s.facts();
    std::vector<std::vector<std::size_t>> adj(left.size());
    for (std::size_t i = 0; i < left.size(); ++i) {
        for (std::size_t j = 0; j < right.size(); ++j)
            if (detail::can_ground_to(db, left[i], right[j]))
                adj[i].push_back(j);
        if (adj[i].empty())
            return false;
    }
    if (right.size() > left.size())
        return false;

    std::vector<std::size_t> match_right(right.size(), left.size());
    std::vector<char> seen;
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
        for (std::size_t v : adj[u]) {
            if (seen[v])
                continue;
            seen[v] = 1;
            if (match_right[v] == left.size() || augment(match_right[v])) {
                match_right[v] = u;
                return true;
            }
        }
        return false;
    };
    std::size_t matched = 0;
    for (std::size_t u = 0; u < left.size() && matched < right.size(); ++u) {
        seen.assign(right.size(), 0);
        if (augment(u))
            ++matched;
    }
    return matched == right.size();
}

// Graph oracles. All enumerate exhaustively and refuse graphs with more than
// 10 nodes or 15 edges.

inline constexpr std::size_t kGraphOracleMaxNodes = 10;
inline constexpr std::size_t kGraphOracleMaxEdges = 15;

namespace detail {

inline void check_graph_size(const Graph &g)
{
    if (g.node_count() > kGraphOracleMaxNodes || g.edge_count() > kGraphOracleMaxEdges)
        throw ResourceLimit("graph oracles accept at most " + std::to_string(kGraphOracleMaxNodes) + " nodes and " +
                            std::to_string(kGraphOracleMaxEdges) + " edges");
}

} // namespace detail

inline Count count_3col(const Graph &g)
{
    detail::check_graph_size(g);
    const std::size_t n = g.node_count();
    std::vector<int> color(n, 0);
    Count total = 0;
    for (;;) {
        bool proper = std::all_of(g.edges().begin(), g.edges().end(),
                                  [&](const auto &e) { return color[e.first] != color[e.second]; });
        if (proper)
            ++total;
        std::size_t k = n;
        for (; k-- > 0;) {
            if (++color[k] < 3)
                break;
            color[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1))
            return total;
    }
}

inline Count count_is(const Graph &g)
{
    detail::check_graph_size(g);
    Count total = 0;
    for (std::uint32_t set = 0; set < (1U << g.node_count()); ++set) {
        bool independent = std::none_of(g.edges().begin(), g.edges().end(), [&](const auto &e) {
            return ((set >> e.first) & 1U) != 0 && ((set >> e.second) & 1U) != 0;
        });
        if (independent)
            ++total;
    }
    return total;
}

inline Count count_vc(const Graph &g)
{
    detail::check_graph_size(g);
    Count total = 0;
    for (std::uint32_t set = 0; set < (1U << g.node_count()); ++set) {
        bool cover = std::all_of(g.edges().begin(), g.edges().end(), [&](const auto &e) {
            return ((set >> e.first) & 1U) != 0 || ((set >> e.second) & 1U) != 0;
        });
        if (cover)
            ++total;
    }
    return total;
}

/// Maps from nodes to incident edges such that no edge is chosen by both
/// of its endpoints.
inline Count count_avoiding(const Graph &g)
{
    detail::check_graph_size(g);
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        incident[g.edges()[e].first].push_back(e);
        incident[g.edges()[e].second].push_back(e);
    }
    for (const auto &inc : incident)
        if (inc.empty())
            return 0;
    std::vector<std::size_t> pick(n, 0);
    Count total = 0;
    std::vector<int> chosen(g.edge_count());
    for (;;) {
        std::fill(chosen.begin(), chosen.end(), 0);
        bool avoiding = true;
        for (std::size_t v = 0; v < n && avoiding; ++v)
            if (++chosen[incident[v][pick[v]]] > 1)
                avoiding = false;
        if (avoiding)
            ++total;
        std::size_t k = n;
        for (; k-- > 0;) {
            if (++pick[k] < incident[k].size())
                break;
            pick[k] = 0;
        }
        if (k == static_cast<std::size_t>(-1))
            return total;
    }
}

/// Edge subsets whose spanned subgraph has at most one cycle per component,
/// i.e. no more edges than nodes in every component.
inline Count count_pf(const Graph &g)
{
    detail::check_graph_size(g);
    const std::size_t n = g.node_count();
    const std::size_t m = g.edge_count();
    Count total = 0;
    std::vector<std::size_t> parent(n);
    std::vector<std::size_t> nodes(n);
    std::vector<std::size_t> edges(n);
    for (std::uint32_t set = 0; set < (1U << m); ++set) {
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t e = 0; e < m; ++e)
            if ((set >> e) & 1U)
                parent[find(g.edges()[e].first)] = find(g.edges()[e].second);
        std::fill(nodes.begin(), nodes.end(), 0);
        std::fill(edges.begin(), edges.end(), 0);
        for (std::size_t v = 0; v < n; ++v)
            ++nodes[find(v)];
        for (std::size_t e = 0; e < m; ++e)
            if ((set >> e) & 1U)
                ++edges[find(g.edges()[e].first)];
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v)
            ok = edges[v] <= nodes[v];
        if (ok)
            ++total;
    }
    return total;
}

} // namespace nullcount

#endif
