#ifndef NULLCOUNT_QUERY_HPP
#define NULLCOUNT_QUERY_HPP

#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nullcount {

struct Atom {
    std::string relation;
    std::vector<std::string> vars;

    std::size_t arity() const noexcept { return vars.size(); }

    std::size_t occurrences(const std::string &var) const
    {
        return static_cast<std::size_t>(std::count(vars.begin(), vars.end(), var));
    }

    /// Distinct variables in first-occurrence order.
    std::vector<std::string> distinct_vars() const
    {
        std::vector<std::string> out;
        for (const auto &v : vars)
            if (std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(v);
        return out;
    }

    bool operator==(const Atom &) const = default;
};

/// Self-join-free Boolean conjunctive query: at least one atom, every atom
/// has at least one variable, and no relation symbol is used twice.
class SjfBCQ {
public:
    explicit SjfBCQ(std::vector<Atom> atoms) : atoms_(std::move(atoms))
    {
        if (atoms_.empty())
            throw Error("a query needs at least one atom");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].vars.empty())
                throw Error("atom " + atoms_[i].relation + " has no variable");
            if (!seen.insert(atoms_[i].relation).second)
                throw SelfJoinError(atoms_[i].relation, i);
        }
    }

    const std::vector<Atom> &atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    const Atom &operator[](std::size_t i) const { return atoms_[i]; }

    std::vector<std::string> variables() const
    {
        std::set<std::string> vars;
        for (const auto &a : atoms_)
            vars.insert(a.vars.begin(), a.vars.end());
        return {vars.begin(), vars.end()};
    }

    const Atom *find(const std::string &relation) const
    {
        for (const auto &a : atoms_)
            if (a.relation == relation)
                return &a;
        return nullptr;
    }

    bool operator==(const SjfBCQ &) const = default;

private:
    std::vector<Atom> atoms_;
};

/// Disjunction of self-join-free conjunctions; relations may repeat across
/// disjuncts.
class UnionQuery {
public:
    explicit UnionQuery(std::vector<SjfBCQ> disjuncts) : disjuncts_(std::move(disjuncts))
    {
        if (disjuncts_.empty())
            throw Error("a union query needs at least one disjunct");
    }
    UnionQuery(SjfBCQ q) : disjuncts_{std::move(q)} {} // NOLINT: a conjunction is a one-disjunct union

    const std::vector<SjfBCQ> &disjuncts() const noexcept { return disjuncts_; }
    bool is_conjunctive() const noexcept { return disjuncts_.size() == 1; }

private:
    std::vector<SjfBCQ> disjuncts_;
};

inline std::string to_string(const Atom &atom)
{
    std::string out = atom.relation + "(";
    for (std::size_t i = 0; i < atom.vars.size(); ++i)
        out += (i == 0 ? "" : ",") + atom.vars[i];
    return out + ")";
}

inline std::string to_string(const SjfBCQ &q)
{
    std::string out;
    for (std::size_t i = 0; i < q.size(); ++i)
        out += (i == 0 ? "" : " & ") + to_string(q[i]);
    return out;
}

inline std::string to_string(const UnionQuery &q)
{
    std::string out;
    for (std::size_t i = 0; i < q.disjuncts().size(); ++i)
        out += (i == 0 ? "" : " | ") + to_string(q.disjuncts()[i]);
    return out;
}

namespace detail {

class QueryParser {
public:
    explicit QueryParser(std::string_view text) : text_(text) {}

    UnionQuery parse()
    {
        std::vector<SjfBCQ> disjuncts;
        disjuncts.push_back(conjunct());
        skip_space();
        while (peek() == '|') {
            ++pos_;
            disjuncts.push_back(conjunct());
            skip_space();
        }
        if (pos_ != text_.size())
            fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
        // A relation reused across disjuncts must keep its arity.
        std::map<std::string, std::size_t> arity;
        for (const auto &d : disjuncts)
            for (const auto &a : d.atoms()) {
                auto [it, fresh] = arity.emplace(a.relation, a.arity());
                if (!fresh && it->second != a.arity())
                    throw ParseError("relation " + a.relation + " used with two arities", 0);
            }
        return UnionQuery(std::move(disjuncts));
    }

private:
    SjfBCQ conjunct()
    {
        std::vector<Atom> atoms;
        std::map<std::string, std::size_t> seen;
        for (;;) {
            skip_space();
            std::size_t start = pos_;
            Atom a = atom();
            if (seen.contains(a.relation))
                throw SelfJoinError(a.relation, start);
            seen.emplace(a.relation, start);
            atoms.push_back(std::move(a));
            skip_space();
            if (peek() != '&')
                break;
            ++pos_;
        }
        return SjfBCQ(std::move(atoms));
    }

    Atom atom()
    {
        if (!std::isupper(static_cast<unsigned char>(peek())))
            fail("expected a relation name (uppercase initial)");
        Atom a{identifier(), {}};
        skip_space();
        expect('(');
        for (;;) {
            skip_space();
            if (!std::islower(static_cast<unsigned char>(peek())))
                fail("expected a variable (lowercase initial)");
            a.vars.push_back(identifier());
            skip_space();
            if (peek() == ',') {
                ++pos_;
                continue;
            }
            expect(')');
            return a;
        }
    }

    std::string identifier()
    {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
                ++pos_;
            else
                break;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    void expect(char c)
    {
        if (peek() != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string &what) const { throw ParseError(what, pos_); }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Grammar: query := conj ("|" conj)*; conj := atom ("&" atom)*;
/// atom := RelName "(" var ("," var)* ")". Relation names start uppercase,
/// variables lowercase; identifiers may contain letters, digits, '_' and '\''.
inline UnionQuery parse_query(std::string_view text) { return detail::QueryParser(text).parse(); }

/// Like parse_query but rejects unions.
inline SjfBCQ parse_conjunctive_query(std::string_view text)
{
    UnionQuery u = parse_query(text);
    if (!u.is_conjunctive())
        throw ParseError("expected a single conjunctive query, got a union", 0);
    return u.disjuncts().front();
}

/// Every query relation that occurs in `db` must be used there with the
/// query's arity. Relations missing from `db` are empty.
inline void check_schema(const UnionQuery &q, const IncompleteDatabase &db)
{
    for (const auto &d : q.disjuncts())
        for (const auto &a : d.atoms()) {
            auto it = db.schema().find(a.relation);
            if (it != db.schema().end() && it->second != a.arity())
                throw SchemaMismatch("relation " + a.relation + " has arity " + std::to_string(it->second) +
                                     " in the database but " + std::to_string(a.arity()) + " in the query");
        }
}

/// Whether `p` is a pattern of `q`: there is an injection f from the atoms
/// of p to the atoms of q and an injective variable map g such that for each
/// atom A of p the multiset g(A) is contained in the multiset of f(A).
///
/// Plain backtracking; patterns are tiny.
inline bool has_pattern(const SjfBCQ &q, const SjfBCQ &p)
{
    if (p.size() > q.size())
        return false;

    struct PatternAtom {
        std::vector<std::pair<std::string, std::size_t>> vars; // distinct var, occurrences
    };
    std::vector<PatternAtom> pattern;
    for (const auto &a : p.atoms()) {
        PatternAtom pa;
        for (const auto &v : a.distinct_vars())
            pa.vars.emplace_back(v, a.occurrences(v));
        pattern.push_back(std::move(pa));
    }

    std::vector<bool> atom_used(q.size(), false);
    std::map<std::string, std::string> g;
    std::set<std::string> image;

    // match(i, target, k): atom i of p is mapped to atom `target` of q and its
    // first k distinct variables are placed.
    auto match = [&](auto &&self, std::size_t i, std::size_t target, std::size_t k) -> bool {
        if (i == pattern.size())
            return true;
        if (target == q.size()) {
            for (std::size_t t = 0; t < q.size(); ++t) {
                if (atom_used[t])
                    continue;
                atom_used[t] = true;
                if (self(self, i, t, 0))
                    return true;
                atom_used[t] = false;
            }
            return false;
        }
        const auto &pa = pattern[i];
        if (k == pa.vars.size())
            return self(self, i + 1, q.size(), 0);
        const auto &[var, need] = pa.vars[k];
        const Atom &qa = q[target];
        if (auto it = g.find(var); it != g.end())
            return qa.occurrences(it->second) >= need && self(self, i, target, k + 1);
        for (const auto &candidate : qa.distinct_vars()) {
            if (image.contains(candidate) || qa.occurrences(candidate) < need)
                continue;
            g.emplace(var, candidate);
            image.insert(candidate);
            if (self(self, i, target, k + 1))
                return true;
            g.erase(var);
            image.erase(candidate);
        }
        return false;
    };
    return match(match, 0, q.size(), 0);
}

namespace patterns {

inline const SjfBCQ &repeated_variable() // R(x,x)
{
    static const SjfBCQ q({{"R", {"x", "x"}}});
    return q;
}
inline const SjfBCQ &shared_variable() // R(x) & S(x)
{
    static const SjfBCQ q({{"R", {"x"}}, {"S", {"x"}}});
    return q;
}
inline const SjfBCQ &path() // R(x) & S(x,y) & T(y)
{
    static const SjfBCQ q({{"R", {"x"}}, {"S", {"x", "y"}}, {"T", {"y"}}});
    return q;
}
inline const SjfBCQ &shared_pair() // R(x,y) & S(x,y)
{
    static const SjfBCQ q({{"R", {"x", "y"}}, {"S", {"x", "y"}}});
    return q;
}
inline const SjfBCQ &binary() // R(x,y)
{
    static const SjfBCQ q({{"R", {"x", "y"}}});
    return q;
}

} // namespace patterns

/// Presence of the five patterns that drive every dichotomy.
struct PatternProfile {
    bool repeated_variable = false; // R(x,x)
    bool shared_variable = false;   // R(x) & S(x)
    bool path = false;              // R(x) & S(x,y) & T(y)
    bool shared_pair = false;       // R(x,y) & S(x,y)
    bool binary = false;            // R(x,y)

    bool operator==(const PatternProfile &) const = default;
};

inline constexpr const char *kRepeatedVariableName = "R(x,x)";
inline constexpr const char *kSharedVariableName = "R(x)&S(x)";
inline constexpr const char *kPathName = "R(x)&S(x,y)&T(y)";
inline constexpr const char *kSharedPairName = "R(x,y)&S(x,y)";
inline constexpr const char *kBinaryName = "R(x,y)";

/// Structural characterization of the five patterns; agrees with
/// has_pattern against the canonical pattern queries.
inline PatternProfile pattern_profile(const SjfBCQ &q)
{
    PatternProfile p;
    std::vector<std::set<std::string>> vars;
    for (const auto &a : q.atoms()) {
        std::set<std::string> s(a.vars.begin(), a.vars.end());
        if (s.size() < a.vars.size())
            p.repeated_variable = true;
        if (s.size() >= 2)
            p.binary = true;
        vars.push_back(std::move(s));
    }
    auto shared = [&](std::size_t i, std::size_t j) {
        std::vector<std::string> out;
        std::set_intersection(vars[i].begin(), vars[i].end(), vars[j].begin(), vars[j].end(),
                              std::back_inserter(out));
        return out;
    };
    const std::size_t m = q.size();
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto s = shared(i, j);
            if (!s.empty())
                p.shared_variable = true;
            if (s.size() >= 2)
                p.shared_pair = true;
        }
    // Middle atom b shares x with a and a different y with c.
    for (std::size_t b = 0; b < m && !p.path; ++b)
        for (std::size_t a = 0; a < m && !p.path; ++a) {
            if (a == b)
                continue;
            for (std::size_t c = 0; c < m && !p.path; ++c) {
                if (c == a || c == b)
                    continue;
                for (const auto &x : shared(a, b))
                    for (const auto &y : shared(b, c))
                        if (x != y)
                            p.path = true;
            }
        }
    return p;
}

/// Atoms as nodes; an edge between two atoms sharing a variable, labeled by
/// the shared variables.
struct ConnectivityGraph {
    struct Edge {
        std::size_t a = 0;
        std::size_t b = 0;
        std::vector<std::string> label;
    };

    std::size_t node_count = 0;
    std::vector<Edge> edges;

    const Edge *edge(std::size_t a, std::size_t b) const
    {
        if (a > b)
            std::swap(a, b);
        for (const auto &e : edges)
            if (e.a == a && e.b == b)
                return &e;
        return nullptr;
    }

    /// Connected components as sorted atom-index lists, ordered by smallest member.
    std::vector<std::vector<std::size_t>> components() const
    {
        std::vector<std::size_t> parent(node_count);
        for (std::size_t i = 0; i < node_count; ++i)
            parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto &e : edges)
            parent[find(e.a)] = find(e.b);
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < node_count; ++i)
            groups[find(i)].push_back(i);
        std::vector<std::vector<std::size_t>> out;
        for (auto &[root, members] : groups)
            out.push_back(std::move(members));
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Every component is a clique whose edges all carry the same single
    /// variable. This is the shape the inclusion-exclusion counter needs.
    bool satisfies_clique_criterion() const
    {
        for (const auto &comp : components()) {
            std::string common;
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (std::size_t j = i + 1; j < comp.size(); ++j) {
                    const Edge *e = edge(comp[i], comp[j]);
                    if (e == nullptr || e->label.size() != 1)
                        return false;
                    if (common.empty())
                        common = e->label.front();
                    else if (common != e->label.front())
                        return false;
                }
        }
        return true;
    }
};

inline ConnectivityGraph connectivity_graph(const SjfBCQ &q)
{
    ConnectivityGraph g;
    g.node_count = q.size();
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j) {
            std::set<std::string> a(q[i].vars.begin(), q[i].vars.end());
            std::set<std::string> b(q[j].vars.begin(), q[j].vars.end());
            std::vector<std::string> label;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(label));
            if (!label.empty())
                g.edges.push_back({i, j, std::move(label)});
        }
    return g;
}

enum class TableKind { naive, codd };
enum class DomainKind { nonuniform, uniform };
enum class Problem { valuations, completions };
enum class ExactVerdict { fp, sharp_p_hard, sharp_p_complete, open };
enum class ApproxVerdict { fpras, no_fpras_unless_np_eq_rp, fp, open };

inline const char *to_string(TableKind k) { return k == TableKind::naive ? "naive" : "codd"; }
inline const char *to_string(DomainKind k) { return k == DomainKind::uniform ? "uniform" : "nonuniform"; }
inline const char *to_string(Problem p) { return p == Problem::valuations ? "val" : "comp"; }

inline const char *to_string(ExactVerdict v)
{
    switch (v) {
    case ExactVerdict::fp: return "FP";
    case ExactVerdict::sharp_p_hard: return "#P-hard";
    case ExactVerdict::sharp_p_complete: return "#P-complete";
    case ExactVerdict::open: return "Open";
    }
    return "?";
}

inline const char *to_string(ApproxVerdict v)
{
    switch (v) {
    case ApproxVerdict::fpras: return "FPRAS";
    case ApproxVerdict::no_fpras_unless_np_eq_rp: return "no FPRAS unless NP=RP";
    case ApproxVerdict::fp: return "FP";
    case ApproxVerdict::open: return "Open";
    }
    return "?";
}

struct DichotomyVerdict {
    TableKind table = TableKind::naive;
    DomainKind domain = DomainKind::nonuniform;
    Problem problem = Problem::valuations;
    ExactVerdict exact = ExactVerdict::fp;
    ApproxVerdict approx = ApproxVerdict::fp;
    /// Hard patterns of this cell found in the query.
    std::vector<std::string> witnesses;

    bool tractable() const noexcept { return exact == ExactVerdict::fp; }
};

/// Exact and approximate complexity of counting valuations or completions
/// for `q` in one of the eight (table, domain, problem) settings.
inline DichotomyVerdict classify(const SjfBCQ &q, TableKind table, DomainKind domain, Problem problem)
{
    const PatternProfile p = pattern_profile(q);
    DichotomyVerdict v{table, domain, problem, ExactVerdict::fp, ApproxVerdict::fp, {}};
    auto witness = [&](bool present, const char *name) {
        if (present)
            v.witnesses.emplace_back(name);
        return present;
    };
    const bool naive_uniform_val_hard = p.repeated_variable || p.path || p.shared_pair;

    if (problem == Problem::valuations) {
        v.approx = ApproxVerdict::fpras;
        bool hard = false;
        if (domain == DomainKind::nonuniform) {
            if (table == TableKind::naive)
                hard = witness(p.repeated_variable, kRepeatedVariableName) |
                       witness(p.shared_variable, kSharedVariableName);
            else
                hard = witness(p.shared_variable, kSharedVariableName);
        } else if (table == TableKind::naive) {
            hard = witness(p.repeated_variable, kRepeatedVariableName) | witness(p.path, kPathName) |
                   witness(p.shared_pair, kSharedPairName);
        } else {
            hard = witness(p.path, kPathName);
            if (!hard && naive_uniform_val_hard) {
                v.exact = ExactVerdict::open;
                return v;
            }
        }
        v.exact = hard ? ExactVerdict::sharp_p_complete : ExactVerdict::fp;
        return v;
    }

    if (domain == DomainKind::nonuniform) {
        // Hard for every query: R(x) is a pattern of any query.
        v.witnesses.emplace_back("R(x)");
        v.exact = table == TableKind::codd ? ExactVerdict::sharp_p_complete : ExactVerdict::sharp_p_hard;
        v.approx = ApproxVerdict::no_fpras_unless_np_eq_rp;
        return v;
    }
    const bool hard = witness(p.repeated_variable, kRepeatedVariableName) | witness(p.binary, kBinaryName);
    if (!hard) {
        v.exact = ExactVerdict::fp;
        v.approx = ApproxVerdict::fp;
        return v;
    }
    v.exact = table == TableKind::codd ? ExactVerdict::sharp_p_complete : ExactVerdict::sharp_p_hard;
    v.approx = table == TableKind::codd ? ApproxVerdict::open : ApproxVerdict::no_fpras_unless_np_eq_rp;
    return v;
}

} // namespace nullcount

#endif
