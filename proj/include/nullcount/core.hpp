#ifndef NULLCOUNT_CORE_HPP
#define NULLCOUNT_CORE_HPP

#include "nullcount/combinatorics.hpp"
#include "nullcount/errors.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nullcount {

struct RelationSymbol {
    std::string name;
    std::size_t arity = 0;

    auto operator<=>(const RelationSymbol &) const = default;
};

/// A constant or a labeled null. Null names carry a leading underscore,
/// constant names never do, so the two namespaces are disjoint.
class Term {
public:
    enum class Kind { constant, null };

    static Term constant(std::string name)
    {
        if (name.empty() || name.front() == '_')
            throw Error("invalid constant name '" + name + "'");
        return Term(Kind::constant, std::move(name));
    }

    static Term null(std::string name)
    {
        if (name.size() < 2 || name.front() != '_')
            throw Error("invalid null name '" + name + "'");
        return Term(Kind::null, std::move(name));
    }

    /// Classifies by the underscore convention.
    static Term parse(std::string name)
    {
        if (!name.empty() && name.front() == '_')
            return null(std::move(name));
        return constant(std::move(name));
    }

    Kind kind() const noexcept { return kind_; }
    bool is_null() const noexcept { return kind_ == Kind::null; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }
    const std::string &name() const noexcept { return name_; }

    auto operator<=>(const Term &) const = default;

private:
    Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
};

struct Fact {
    std::string relation;
    std::vector<Term> args;

    std::size_t arity() const noexcept { return args.size(); }

    bool is_ground() const
    {
        return std::none_of(args.begin(), args.end(), [](const Term &t) { return t.is_null(); });
    }

    auto operator<=>(const Fact &) const = default;
};

inline std::string to_string(const Fact &fact)
{
    std::string out = fact.relation + "(";
    for (std::size_t i = 0; i < fact.args.size(); ++i) {
        if (i != 0)
            out += ", ";
        out += fact.args[i].name();
    }
    return out + ")";
}

namespace detail {

inline void sort_unique(auto &values)
{
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
}

// Facts are sorted by relation name first, so each relation is a contiguous run.
inline std::span<const Fact> relation_run(const std::vector<Fact> &facts, const std::string &relation)
{
    auto lo = std::lower_bound(facts.begin(), facts.end(), relation,
                               [](const Fact &f, const std::string &r) { return f.relation < r; });
    auto hi = std::upper_bound(lo, facts.end(), relation,
                               [](const std::string &r, const Fact &f) { return r < f.relation; });
    return {lo, hi};
}

} // namespace detail

/// A ground database in canonical form: sorted by (relation, args) with
/// duplicates removed, so equality of completions is vector equality.
class Completion {
public:
    Completion() = default;

    explicit Completion(std::vector<Fact> facts) : facts_(std::move(facts))
    {
        for (const Fact &f : facts_)
            if (!f.is_ground())
                throw Error("completion fact " + to_string(f) + " contains a null");
        detail::sort_unique(facts_);
    }

    const std::vector<Fact> &facts() const noexcept { return facts_; }
    std::size_t size() const noexcept { return facts_.size(); }
    bool empty() const noexcept { return facts_.empty(); }

    std::span<const Fact> relation(const std::string &name) const { return detail::relation_run(facts_, name); }

    bool contains(const Fact &fact) const { return std::binary_search(facts_.begin(), facts_.end(), fact); }

    auto operator<=>(const Completion &) const = default;

private:
    std::vector<Fact> facts_;
};

using Domain = std::vector<std::string>;
using DomainMap = std::map<std::string, Domain>;

/// Facts over constants and nulls, plus either one domain per null or one
/// uniform domain shared by all nulls.
class IncompleteDatabase {
public:
    IncompleteDatabase() : domains_(DomainMap{}) {}

    static IncompleteDatabase per_null(std::vector<Fact> facts, DomainMap domains)
    {
        for (auto &[null, dom] : domains)
            normalize_domain(null, dom);
        return IncompleteDatabase(std::move(facts), std::move(domains));
    }

    static IncompleteDatabase uniform(std::vector<Fact> facts, Domain domain)
    {
        normalize_domain("uniform domain", domain);
        return IncompleteDatabase(std::move(facts), std::move(domain));
    }

    const std::vector<Fact> &facts() const noexcept { return facts_; }
    std::span<const Fact> relation(const std::string &name) const { return detail::relation_run(facts_, name); }

    /// Relation name -> arity, for every relation with at least one fact.
    const std::map<std::string, std::size_t> &schema() const noexcept { return schema_; }

    /// Distinct nulls occurring in the facts, sorted.
    const std::vector<std::string> &nulls() const noexcept { return nulls_; }

    bool is_uniform() const noexcept { return std::holds_alternative<Domain>(domains_); }
    bool is_codd() const noexcept { return codd_; }

    const Domain &uniform_domain() const
    {
        if (!is_uniform())
            throw NonUniform();
        return std::get<Domain>(domains_);
    }

    const Domain &domain_of(const std::string &null) const
    {
        if (is_uniform())
            return std::get<Domain>(domains_);
        const auto &map = std::get<DomainMap>(domains_);
        auto it = map.find(null);
        if (it == map.end())
            throw MissingAssignment("null " + null + " has no domain");
        return it->second;
    }

    /// The same facts with every null given its current domain explicitly.
    IncompleteDatabase to_per_null() const
    {
        DomainMap map;
        for (const auto &n : nulls_)
            map.emplace(n, domain_of(n));
        return IncompleteDatabase(facts_, std::move(map));
    }

    /// The same facts with one shared domain; requires all null domains to
    /// coincide. A database without nulls takes `fallback` as its domain.
    std::optional<IncompleteDatabase> to_uniform(const Domain &fallback = {}) const
    {
        if (is_uniform())
            return *this;
        if (nulls_.empty()) {
            if (fallback.empty())
                return std::nullopt;
            return uniform(facts_, fallback);
        }
        const Domain &first = domain_of(nulls_.front());
        for (const auto &n : nulls_)
            if (domain_of(n) != first)
                return std::nullopt;
        return uniform(facts_, first);
    }

private:
    IncompleteDatabase(std::vector<Fact> facts, std::variant<DomainMap, Domain> domains)
        : facts_(std::move(facts)), domains_(std::move(domains))
    {
        detail::sort_unique(facts_);
        std::map<std::string, std::size_t> occurrences;
        for (const Fact &f : facts_) {
            if (f.args.empty())
                throw SchemaMismatch("relation " + f.relation + " has arity 0");
            auto [it, fresh] = schema_.emplace(f.relation, f.arity());
            if (!fresh && it->second != f.arity())
                throw SchemaMismatch("relation " + f.relation + " used with arities " +
                                     std::to_string(it->second) + " and " + std::to_string(f.arity()));
            for (const Term &t : f.args)
                if (t.is_null())
                    ++occurrences[t.name()];
        }
        codd_ = true;
        for (const auto &[null, count] : occurrences) {
            nulls_.push_back(null);
            if (count > 1)
                codd_ = false;
        }
        if (auto *map = std::get_if<DomainMap>(&domains_)) {
            for (const auto &n : nulls_)
                if (!map->contains(n))
                    throw MissingAssignment("null " + n + " has no domain");
            for (const auto &[n, dom] : *map)
                if (!occurrences.contains(n))
                    throw SchemaMismatch("domain given for null " + n + " which occurs in no fact");
        }
    }

    static void normalize_domain(const std::string &owner, Domain &dom)
    {
        detail::sort_unique(dom);
        if (dom.empty())
            throw DomainViolation("empty domain for " + owner);
        for (const auto &c : dom)
            if (c.empty() || c.front() == '_')
                throw DomainViolation("domain of " + owner + " contains non-constant '" + c + "'");
    }

    std::vector<Fact> facts_;
    std::variant<DomainMap, Domain> domains_;
    std::map<std::string, std::size_t> schema_;
    std::vector<std::string> nulls_;
    bool codd_ = true;
};

/// A map from nulls to constants.
class Valuation {
public:
    Valuation() = default;
    explicit Valuation(std::map<std::string, std::string> assignment) : assignment_(std::move(assignment)) {}

    void assign(const std::string &null, const std::string &constant) { assignment_[null] = constant; }

    const std::string *find(const std::string &null) const
    {
        auto it = assignment_.find(null);
        return it == assignment_.end() ? nullptr : &it->second;
    }

    const std::map<std::string, std::string> &assignment() const noexcept { return assignment_; }

private:
    std::map<std::string, std::string> assignment_;
};

inline Completion apply_valuation(const IncompleteDatabase &db, const Valuation &v)
{
    for (const auto &n : db.nulls()) {
        const std::string *value = v.find(n);
        if (value == nullptr)
            throw MissingAssignment("valuation does not assign null " + n);
        const Domain &dom = db.domain_of(n);
        if (!std::binary_search(dom.begin(), dom.end(), *value))
            throw DomainViolation("value " + *value + " is outside the domain of " + n);
    }
    std::vector<Fact> ground;
    ground.reserve(db.facts().size());
    for (const Fact &f : db.facts()) {
        Fact g{f.relation, {}};
        g.args.reserve(f.args.size());
        for (const Term &t : f.args)
            g.args.push_back(t.is_null() ? Term::constant(*v.find(t.name())) : t);
        ground.push_back(std::move(g));
    }
    return Completion(std::move(ground));
}

inline Count total_valuations(const IncompleteDatabase &db)
{
    Count total = 1;
    for (const auto &n : db.nulls())
        total *= db.domain_of(n).size();
    return total;
}

inline bool is_codd(const IncompleteDatabase &db) { return db.is_codd(); }

} // namespace nullcount

#endif
