#ifndef NULLCOUNT_EXACT_HPP
#define NULLCOUNT_EXACT_HPP

#include "nullcount/combinatorics.hpp"
#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/query.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace nullcount {

// ---------------------------------------------------------------------------
// Every variable occurs once.

/// Zero if a relation of the query is empty, otherwise every valuation
/// satisfies the query.
inline Count count_val_all_distinct(const SjfBCQ &q, const IncompleteDatabase &db)
{
    const PatternProfile p = pattern_profile(q);
    if (p.repeated_variable || p.shared_variable)
        throw PatternMismatch("count_val_all_distinct needs every variable to occur once");
    check_schema(q, db);
    for (const auto &a : q.atoms())
        if (db.relation(a.relation).empty())
            return 0;
    return total_valuations(db);
}

// ---------------------------------------------------------------------------
// Codd tables, atoms pairwise variable-disjoint.

namespace detail {

inline std::size_t intersection_size(const std::vector<const Domain *> &domains)
{
    if (domains.empty())
        return 0;
    const Domain *smallest = domains.front();
    for (const Domain *d : domains)
        if (d->size() < smallest->size())
            smallest = d;
    std::size_t count = 0;
    for (const auto &value : *smallest)
        if (std::all_of(domains.begin(), domains.end(),
                        [&](const Domain *d) { return std::binary_search(d->begin(), d->end(), value); }))
            ++count;
    return count;
}

} // namespace detail

/// Constants are read as nulls with singleton domains; the table is then a
/// product of per-atom terms total - prod over tuples of (non-matching
/// valuations of that tuple).
inline Count count_val_codd(const SjfBCQ &q, const IncompleteDatabase &db)
{
    if (pattern_profile(q).shared_variable)
        throw PatternMismatch("count_val_codd needs pairwise variable-disjoint atoms");
    if (!db.is_codd())
        throw NotCodd();
    check_schema(q, db);

    Count result = 1;
    std::set<std::string> in_query;
    std::vector<Domain> singletons;
    for (const Atom &atom : q.atoms()) {
        in_query.insert(atom.relation);
        // Positions of each distinct variable of the atom.
        std::vector<std::vector<std::size_t>> positions;
        for (const auto &var : atom.distinct_vars()) {
            std::vector<std::size_t> pos;
            for (std::size_t i = 0; i < atom.vars.size(); ++i)
                if (atom.vars[i] == var)
                    pos.push_back(i);
            positions.push_back(std::move(pos));
        }

        Count total = 1;
        Count non_matching = 1;
        Domain singleton(1);
        for (const Fact &f : db.relation(atom.relation)) {
            Count tuple_total = 1;
            for (const Term &t : f.args)
                if (t.is_null())
                    tuple_total *= db.domain_of(t.name()).size();
            Count matching = 1;
            for (const auto &pos : positions) {
                std::vector<Domain> owned;
                owned.reserve(pos.size());
                std::vector<const Domain *> doms;
                for (std::size_t p : pos) {
                    const Term &t = f.args[p];
                    if (t.is_null()) {
                        doms.push_back(&db.domain_of(t.name()));
                    } else {
                        owned.push_back(Domain{t.name()});
                        doms.push_back(&owned.back());
                    }
                }
                matching *= detail::intersection_size(doms);
                if (matching == 0)
                    break;
            }
            total *= tuple_total;
            non_matching *= tuple_total - matching;
        }
        result *= total - non_matching;
        if (result == 0)
            return 0;
    }
    // Nulls of relations outside the query are unconstrained.
    for (const Fact &f : db.facts())
        if (!in_query.contains(f.relation))
            for (const Term &t : f.args)
                if (t.is_null())
                    result *= db.domain_of(t.name()).size();
    return result;
}

// ---------------------------------------------------------------------------
// Uniform naive tables: ear removal, basic singletons, inclusion-exclusion.

/// Outcome of deleting every variable with a single occurrence. `atoms` may
/// be empty, in which case the reduced query is always true.
struct EarRemovalResult {
    std::vector<Atom> atoms;
    IncompleteDatabase db;
    Count multiplier;
    /// An atom lost all its variables and its relation is empty.
    bool unsatisfiable = false;

    std::optional<SjfBCQ> reduced_query() const
    {
        if (atoms.empty())
            return std::nullopt;
        return SjfBCQ(atoms);
    }
};

inline EarRemovalResult remove_ear_variables(const SjfBCQ &q, const IncompleteDatabase &db)
{
    const Domain &dom = db.uniform_domain();
    check_schema(q, db);
    std::map<std::string, std::size_t> occurrences;
    for (const auto &a : q.atoms())
        for (const auto &v : a.vars)
            ++occurrences[v];

    std::vector<Atom> atoms;
    bool unsatisfiable = false;
    std::vector<Fact> projected;
    for (const Atom &a : q.atoms()) {
        std::vector<std::size_t> kept;
        Atom reduced{a.relation, {}};
        for (std::size_t i = 0; i < a.vars.size(); ++i)
            if (occurrences[a.vars[i]] > 1) {
                kept.push_back(i);
                reduced.vars.push_back(a.vars[i]);
            }
        auto facts = db.relation(a.relation);
        if (kept.empty()) {
            // A nullary atom holds iff its relation is nonempty.
            if (facts.empty())
                unsatisfiable = true;
            continue;
        }
        for (const Fact &f : facts) {
            Fact g{f.relation, {}};
            for (std::size_t i : kept)
                g.args.push_back(f.args[i]);
            projected.push_back(std::move(g));
        }
        atoms.push_back(std::move(reduced));
    }
    IncompleteDatabase reduced_db = IncompleteDatabase::uniform(std::move(projected), dom);
    Count multiplier = pow(dom.size(), db.nulls().size() - reduced_db.nulls().size());
    return {std::move(atoms), std::move(reduced_db), std::move(multiplier), unsatisfiable};
}

/// Conjunction of groups C_i(x_i), each a set of unary atoms over one
/// variable; relations are distinct across groups.
struct BasicSingletonQuery {
    struct Group {
        std::string variable;
        std::vector<std::string> relations;
    };
    std::vector<Group> groups;
};

/// Requires every atom to be unary and the connectivity graph to be a union
/// of single-variable cliques.
inline BasicSingletonQuery basic_singleton_query(const SjfBCQ &q)
{
    for (const auto &a : q.atoms())
        if (a.arity() != 1)
            throw PatternMismatch("atom " + to_string(a) + " is not unary");
    if (!connectivity_graph(q).satisfies_clique_criterion())
        throw PatternMismatch("query is not a conjunction of basic singletons");
    BasicSingletonQuery bsq;
    std::map<std::string, std::size_t> index;
    for (const auto &a : q.atoms()) {
        auto [it, fresh] = index.emplace(a.vars[0], bsq.groups.size());
        if (fresh)
            bsq.groups.push_back({a.vars[0], {}});
        bsq.groups[it->second].relations.push_back(a.relation);
    }
    return bsq;
}

/// Constants and nulls of unary relations grouped by the exact set of
/// relations (a bitmask over `relations`) they occur in.
struct BlockDecomposition {
    struct Block {
        std::vector<std::string> constants;
        std::vector<std::string> nulls;
    };
    std::vector<std::string> relations;
    std::map<std::uint32_t, Block> blocks;

    std::uint32_t mask_of_constant(const std::string &c) const
    {
        for (const auto &[mask, block] : blocks)
            if (std::binary_search(block.constants.begin(), block.constants.end(), c))
                return mask;
        return 0;
    }
};

inline BlockDecomposition block_decomposition(const IncompleteDatabase &db, std::vector<std::string> relations)
{
    if (relations.size() > 16)
        throw ResourceLimit("too many relations for a block decomposition");
    BlockDecomposition out;
    out.relations = std::move(relations);
    std::map<std::string, std::uint32_t> constant_mask;
    std::map<std::string, std::uint32_t> null_mask;
    for (std::size_t r = 0; r < out.relations.size(); ++r)
        for (const Fact &f : db.relation(out.relations[r])) {
            if (f.arity() != 1)
                throw PatternMismatch("relation " + f.relation + " is not unary");
            const Term &t = f.args[0];
            (t.is_null() ? null_mask : constant_mask)[t.name()] |= 1U << r;
        }
    for (const auto &[c, mask] : constant_mask)
        out.blocks[mask].constants.push_back(c);
    for (const auto &[n, mask] : null_mask)
        out.blocks[mask].nulls.push_back(n);
    return out;
}

/// Number of valuations under which no group in `subset` is satisfied.
///
/// Dynamic program over the values of the uniform domain. The state is the
/// number of nulls of each block not yet placed; a value takes k_t nulls of
/// block t in binom(remaining, k_t) ways, and is rejected if the relations
/// it then occurs in contain a whole group of `subset`.
inline Count count_NS(const BasicSingletonQuery &bsq, const std::vector<std::size_t> &subset,
                      const IncompleteDatabase &db)
{
    const Domain &dom = db.uniform_domain();
    std::vector<std::string> relations;
    std::vector<std::uint32_t> group_masks;
    for (std::size_t i : subset) {
        if (i >= bsq.groups.size())
            throw PatternMismatch("group index out of range");
        std::uint32_t mask = 0;
        for (const auto &r : bsq.groups[i].relations) {
            mask |= 1U << relations.size();
            relations.push_back(r);
        }
        group_masks.push_back(mask);
    }
    const BlockDecomposition blocks = block_decomposition(db, relations);
    auto violates = [&](std::uint32_t profile) {
        return std::any_of(group_masks.begin(), group_masks.end(),
                           [&](std::uint32_t g) { return (profile & g) == g; });
    };

    // A constant present in every relation of a group satisfies it outright.
    for (const auto &[mask, block] : blocks.blocks)
        if (!block.constants.empty() && violates(mask))
            return 0;

    // Null blocks: type mask and size.
    std::vector<std::uint32_t> types;
    std::vector<std::size_t> sizes;
    std::size_t placed_nulls = 0;
    for (const auto &[mask, block] : blocks.blocks)
        if (!block.nulls.empty()) {
            types.push_back(mask);
            sizes.push_back(block.nulls.size());
            placed_nulls += block.nulls.size();
        }
    const std::size_t free_nulls = db.nulls().size() - placed_nulls;

    // Mixed-radix state over remaining counts per type.
    std::vector<std::size_t> stride(types.size());
    std::size_t states = 1;
    for (std::size_t t = 0; t < types.size(); ++t) {
        stride[t] = states;
        states *= sizes[t] + 1;
    }
    const std::size_t profiles = std::size_t{1} << relations.size();
    CombinatoricsTable comb;

    std::vector<Count> dp(states);
    dp[states - 1] = 1; // everything remaining
    std::vector<Count> layer(states * profiles);
    std::vector<Count> next(states * profiles);

    for (const auto &value : dom) {
        const std::uint32_t base = blocks.mask_of_constant(value);
        std::fill(layer.begin(), layer.end(), Count(0));
        for (std::size_t s = 0; s < states; ++s)
            if (dp[s] != 0)
                layer[s * profiles + base] = dp[s];
        for (std::size_t t = 0; t < types.size(); ++t) {
            std::fill(next.begin(), next.end(), Count(0));
            for (std::size_t s = 0; s < states; ++s) {
                const std::size_t remaining = (s / stride[t]) % (sizes[t] + 1);
                for (std::size_t p = 0; p < profiles; ++p) {
                    const Count &w = layer[s * profiles + p];
                    if (w == 0)
                        continue;
                    next[s * profiles + p] += w;
                    const std::size_t q = p | types[t];
                    for (std::size_t k = 1; k <= remaining; ++k)
                        next[(s - k * stride[t]) * profiles + q] += w * comb.binom(remaining, k);
                }
            }
            layer.swap(next);
        }
        std::fill(dp.begin(), dp.end(), Count(0));
        for (std::size_t s = 0; s < states; ++s)
            for (std::size_t p = 0; p < profiles; ++p)
                if (layer[s * profiles + p] != 0 && !violates(static_cast<std::uint32_t>(p)))
                    dp[s] += layer[s * profiles + p];
    }
    return dp[0] * pow(dom.size(), free_nulls);
}

/// Inclusion-exclusion over groups after ear removal:
/// sum over S of (-1)^|S| N_S, times the ear multiplier.
inline Count count_val_uniform(const SjfBCQ &q, const IncompleteDatabase &db)
{
    if (!db.is_uniform())
        throw NonUniform();
    const PatternProfile p = pattern_profile(q);
    if (p.repeated_variable || p.path || p.shared_pair)
        throw PatternMismatch("count_val_uniform needs a query without R(x,x), path or shared-pair patterns");
    EarRemovalResult ear = remove_ear_variables(q, db);
    if (ear.unsatisfiable)
        return 0;
    if (ear.atoms.empty())
        return ear.multiplier * total_valuations(ear.db);
    const BasicSingletonQuery bsq = basic_singleton_query(SjfBCQ(ear.atoms));
    const std::size_t m = bsq.groups.size();
    if (m > 20)
        throw ResourceLimit("too many groups for inclusion-exclusion");
    Count sum = 0;
    for (std::uint32_t bits = 0; bits < (1U << m); ++bits) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < m; ++i)
            if ((bits >> i) & 1U)
                subset.push_back(i);
        Count ns = count_NS(bsq, subset, ear.db);
        if (subset.size() % 2 == 0)
            sum += ns;
        else
            sum -= ns;
    }
    return ear.multiplier * sum;
}

// ---------------------------------------------------------------------------
// Completions of uniform unary tables.

inline constexpr std::uint64_t kCompletionVectorLimit = 1'000'000'000;

namespace detail {

// Decides whether deficient values can all be covered. Entry e stands for
// `count` values that must each receive a set of null types (one null per
// type) chosen from `covers`; type t may be used at most budget[t] times.
class CoverProblem {
public:
    struct Entry {
        std::vector<std::vector<std::size_t>> covers; // minimal covers, as type indices
        std::size_t count = 0;
    };

    CoverProblem(std::vector<Entry> entries, std::vector<std::size_t> budget)
        : entries_(std::move(entries)), budget_(std::move(budget))
    {
        std::sort(entries_.begin(), entries_.end(),
                  [](const Entry &a, const Entry &b) { return a.covers.size() < b.covers.size(); });
    }

    bool feasible()
    {
        for (const auto &e : entries_)
            if (e.count > 0 && e.covers.empty())
                return false;
        if (greedy())
            return true;
        if (!necessary())
            return false;
        memo_.clear();
        std::vector<std::size_t> budget = budget_;
        return search(0, 0, entries_.empty() ? 0 : entries_[0].count, budget);
    }

private:
    bool greedy() const
    {
        std::vector<std::size_t> budget = budget_;
        for (const auto &e : entries_)
            for (std::size_t u = 0; u < e.count; ++u) {
                const std::vector<std::size_t> *best = nullptr;
                std::size_t best_slack = 0;
                for (const auto &c : e.covers) {
                    std::size_t slack = SIZE_MAX;
                    for (std::size_t t : c)
                        slack = std::min(slack, budget[t]);
                    if (slack == 0)
                        continue;
                    if (best == nullptr || c.size() < best->size() ||
                        (c.size() == best->size() && slack > best_slack)) {
                        best = &c;
                        best_slack = slack;
                    }
                }
                if (best == nullptr)
                    return false;
                for (std::size_t t : *best)
                    --budget[t];
            }
        return true;
    }

    // Each covered value needs at least one null overall, and for every
    // type t the values whose covers all use t need that many t-nulls.
    bool necessary() const
    {
        std::size_t demand = 0;
        std::size_t supply = 0;
        for (const auto &e : entries_)
            demand += e.count;
        for (std::size_t b : budget_)
            supply += b;
        if (demand > supply)
            return false;
        std::vector<std::size_t> forced(budget_.size(), 0);
        for (const auto &e : entries_)
            for (std::size_t t = 0; t < budget_.size(); ++t)
                if (std::all_of(e.covers.begin(), e.covers.end(), [&](const auto &c) {
                        return std::find(c.begin(), c.end(), t) != c.end();
                    }))
                    forced[t] += e.count;
        for (std::size_t t = 0; t < budget_.size(); ++t)
            if (forced[t] > budget_[t])
                return false;
        return true;
    }

    // Distribute the `left` values of entry i over its covers j, j+1, ...
    bool search(std::size_t i, std::size_t j, std::size_t left, std::vector<std::size_t> &budget)
    {
        if (i == entries_.size())
            return true;
        const Entry &e = entries_[i];
        if (left == 0)
            return search(i + 1, 0, i + 1 < entries_.size() ? entries_[i + 1].count : 0, budget);
        if (j == e.covers.size())
            return false;
        std::vector<std::size_t> key{i, j, left};
        key.insert(key.end(), budget.begin(), budget.end());
        if (auto it = memo_.find(key); it != memo_.end())
            return it->second;
        const auto &cover = e.covers[j];
        std::size_t most = left;
        for (std::size_t t : cover)
            most = std::min(most, budget[t]);
        bool ok = false;
        for (std::size_t take = most + 1; take-- > 0 && !ok;) {
            for (std::size_t t : cover)
                budget[t] -= take;
            ok = search(i, j + 1, left - take, budget);
            for (std::size_t t : cover)
                budget[t] += take;
        }
        memo_.emplace(std::move(key), ok);
        return ok;
    }

    std::vector<Entry> entries_;
    std::vector<std::size_t> budget_;
    std::map<std::vector<std::size_t>, bool> memo_;
};

// Minimal sets of types, each a subset of `target`, whose union covers
// `deficit`.
inline std::vector<std::vector<std::size_t>> minimal_covers(std::uint32_t target, std::uint32_t deficit,
                                                            const std::vector<std::uint32_t> &types)
{
    std::vector<std::size_t> usable;
    for (std::size_t t = 0; t < types.size(); ++t)
        if ((types[t] & ~target) == 0 && (types[t] & deficit) != 0)
            usable.push_back(t);
    if (usable.size() > 20)
        throw ResourceLimit("too many null types for the cover search");
    std::vector<std::uint32_t> covering;
    for (std::uint32_t bits = 1; bits < (1U << usable.size()); ++bits) {
        std::uint32_t u = 0;
        for (std::size_t i = 0; i < usable.size(); ++i)
            if ((bits >> i) & 1U)
                u |= types[usable[i]];
        if ((u & deficit) == deficit)
            covering.push_back(bits);
    }
    std::vector<std::vector<std::size_t>> out;
    for (std::uint32_t bits : covering) {
        bool minimal = std::none_of(covering.begin(), covering.end(), [&](std::uint32_t other) {
            return other != bits && (other & bits) == other;
        });
        if (!minimal)
            continue;
        std::vector<std::size_t> cover;
        for (std::size_t i = 0; i < usable.size(); ++i)
            if ((bits >> i) & 1U)
                cover.push_back(usable[i]);
        out.push_back(std::move(cover));
    }
    return out;
}

} // namespace detail

/// Completions of a uniform table over unary relations that satisfy `q`.
///
/// A completion is determined by which relations each domain value ends up
/// in (its profile). Values with the same constant profile are
/// interchangeable, so the count is a sum over how many values of each
/// constant class get each profile, weighted by multinomials, of an
/// indicator that the profile counts satisfy `q` and are realizable by
/// placing the nulls.
inline Count count_comp_uniform_unary(const SjfBCQ &q, const IncompleteDatabase &db)
{
    if (!db.is_uniform())
        throw NonUniform();
    const PatternProfile p = pattern_profile(q);
    if (p.repeated_variable || p.binary)
        throw PatternMismatch("count_comp_uniform_unary needs unary atoms");
    check_schema(q, db);
    const Domain &dom = db.uniform_domain();

    // Every relation of the database and the query takes part in the profile.
    std::vector<std::string> relations;
    for (const auto &[name, arity] : db.schema()) {
        if (arity != 1)
            throw PatternMismatch("relation " + name + " is not unary");
        relations.push_back(name);
    }
    for (const auto &a : q.atoms())
        if (!db.schema().contains(a.relation))
            relations.push_back(a.relation);
    const BlockDecomposition blocks = block_decomposition(db, relations);
    const std::size_t L = relations.size();
    auto mask_of = [&](const std::string &r) {
        return 1U << static_cast<std::uint32_t>(std::find(relations.begin(), relations.end(), r) - relations.begin());
    };

    std::vector<std::uint32_t> groups;
    {
        std::map<std::string, std::uint32_t> by_var;
        for (const auto &a : q.atoms())
            by_var[a.vars[0]] |= mask_of(a.relation);
        for (const auto &[v, m] : by_var)
            groups.push_back(m);
    }

    // Groups already witnessed by a constant outside the domain.
    std::vector<bool> witnessed(groups.size(), false);
    std::map<std::uint32_t, std::size_t> class_size; // constant profile -> values of dom in it
    std::size_t unused = dom.size();
    for (const auto &[mask, block] : blocks.blocks)
        for (const auto &c : block.constants) {
            if (std::binary_search(dom.begin(), dom.end(), c)) {
                ++class_size[mask];
                --unused;
            } else {
                for (std::size_t g = 0; g < groups.size(); ++g)
                    if ((mask & groups[g]) == groups[g])
                        witnessed[g] = true;
            }
        }
    if (unused > 0)
        class_size[0] += unused;

    std::vector<std::uint32_t> types;
    std::vector<std::size_t> budget;
    for (const auto &[mask, block] : blocks.blocks)
        if (!block.nulls.empty()) {
            types.push_back(mask);
            budget.push_back(block.nulls.size());
        }

    // Per constant class: its targets (supersets of the class profile).
    struct Class {
        std::uint32_t base;
        std::size_t size;
        std::vector<std::uint32_t> targets;
    };
    std::vector<Class> classes;
    const std::uint32_t full = (1U << L) - 1;
    std::uint32_t reachable = 0; // relations some null can add a value to
    for (std::uint32_t t : types)
        reachable |= t;
    Count vectors = 1;
    for (const auto &[base, size] : class_size) {
        Class c{base, size, {}};
        for (std::uint32_t t = 0; t <= full; ++t)
            if ((t & base) == base && (t & ~(base | reachable)) == 0)
                c.targets.push_back(t);
        vectors *= binom(size + c.targets.size() - 1, c.targets.size() - 1);
        classes.push_back(std::move(c));
    }
    if (vectors > kCompletionVectorLimit)
        throw ResourceLimit("completion count needs " + vectors.str() + " profile vectors, above the limit of " +
                            std::to_string(kCompletionVectorLimit));

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::vector<std::size_t>>> cover_cache;
    auto covers = [&](std::uint32_t target, std::uint32_t base) -> const std::vector<std::vector<std::size_t>> & {
        auto key = std::make_pair(target, base);
        auto it = cover_cache.find(key);
        if (it == cover_cache.end())
            it = cover_cache.emplace(key, detail::minimal_covers(target, target & ~base, types)).first;
        return it->second;
    };

    CombinatoricsTable comb;
    Count total = 0;
    // counts[c][k]: number of values of class c that get target k.
    std::vector<std::vector<std::size_t>> counts(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        counts[c].assign(classes[c].targets.size(), 0);

    auto evaluate = [&] {
        std::vector<bool> sat = witnessed;
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (std::size_t k = 0; k < counts[c].size(); ++k)
                if (counts[c][k] > 0) {
                    const std::uint32_t t = classes[c].targets[k];
                    for (std::size_t g = 0; g < groups.size(); ++g)
                        if ((t & groups[g]) == groups[g])
                            sat[g] = true;
                }
        if (std::find(sat.begin(), sat.end(), false) != sat.end())
            return;
        // Every null needs a value whose profile contains its type.
        for (std::uint32_t type : types) {
            bool sink = false;
            for (std::size_t c = 0; c < classes.size() && !sink; ++c)
                for (std::size_t k = 0; k < counts[c].size() && !sink; ++k)
                    sink = counts[c][k] > 0 && (classes[c].targets[k] & type) == type;
            if (!sink)
                return;
        }
        std::vector<detail::CoverProblem::Entry> entries;
        for (std::size_t c = 0; c < classes.size(); ++c)
            for (std::size_t k = 0; k < counts[c].size(); ++k)
                if (counts[c][k] > 0 && classes[c].targets[k] != classes[c].base)
                    entries.push_back({covers(classes[c].targets[k], classes[c].base), counts[c][k]});
        detail::CoverProblem problem(std::move(entries), budget);
        if (!problem.feasible())
            return;
        Count weight = 1;
        for (std::size_t c = 0; c < classes.size(); ++c)
            weight *= comb.multinomial(classes[c].size, counts[c]);
        total += weight;
    };

    // Enumerate compositions class by class.
    std::function<void(std::size_t, std::size_t, std::size_t)> walk = [&](std::size_t c, std::size_t k,
                                                                           std::size_t left) {
        if (c == classes.size()) {
            evaluate();
            return;
        }
        auto &slots = counts[c];
        if (k + 1 == slots.size()) {
            slots[k] = left;
            walk(c + 1, 0, c + 1 < classes.size() ? classes[c + 1].size : 0);
            slots[k] = 0;
            return;
        }
        for (std::size_t take = 0; take <= left; ++take) {
            slots[k] = take;
            walk(c, k + 1, left - take);
        }
        slots[k] = 0;
    };
    walk(0, 0, classes.empty() ? 0 : classes[0].size);
    return total;
}

// ---------------------------------------------------------------------------
// Dispatcher.

/// Table and domain kind of a database. A per-null database whose domains
/// all coincide counts as uniform.
inline std::pair<TableKind, DomainKind> setting_of(const IncompleteDatabase &db)
{
    TableKind table = db.is_codd() ? TableKind::codd : TableKind::naive;
    DomainKind domain = db.is_uniform() || (!db.nulls().empty() && db.to_uniform().has_value())
                            ? DomainKind::uniform
                            : DomainKind::nonuniform;
    return {table, domain};
}

/// Routes to the polynomial algorithm for the database's setting; throws
/// NotTractable with the classifier's witness patterns when there is none.
inline Count count_exact(const SjfBCQ &q, const IncompleteDatabase &db, Problem problem)
{
    check_schema(q, db);
    auto [table, domain] = setting_of(db);
    const DichotomyVerdict verdict = classify(q, table, domain, problem);
    const PatternProfile p = pattern_profile(q);
    auto refuse = [&]() -> Count {
        std::string what = std::string("no polynomial algorithm for ") + to_string(problem) + " on " +
                           to_string(table) + "/" + to_string(domain) + " tables: " + to_string(verdict.exact);
        throw NotTractable(what, verdict.witnesses);
    };

    if (problem == Problem::valuations) {
        if (!p.repeated_variable && !p.shared_variable)
            return count_val_all_distinct(q, db);
        if (table == TableKind::codd && !p.shared_variable)
            return count_val_codd(q, db);
        if (domain == DomainKind::uniform && !p.repeated_variable && !p.path && !p.shared_pair)
            return count_val_uniform(q, db.is_uniform() ? db : *db.to_uniform());
        return refuse();
    }
    if (!verdict.tractable())
        return refuse();
    for (const auto &[name, arity] : db.schema())
        if (arity != 1)
            throw NotTractable("completion counting needs every relation to be unary; " + name + " is not", {});
    return count_comp_uniform_unary(q, db.is_uniform() ? db : *db.to_uniform());
}

} // namespace nullcount

#endif
