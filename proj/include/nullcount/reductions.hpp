#ifndef NULLCOUNT_REDUCTIONS_HPP
#define NULLCOUNT_REDUCTIONS_HPP

#include "nullcount/combinatorics.hpp"
#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/graph.hpp"
#include "nullcount/oracle.hpp"
#include "nullcount/query.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace nullcount {

/// graph invariant = offset + scale * (count of `problem` for `query` on `db`)
struct Identity {
    /// One of "3col", "is", "vc", "avoiding", "pf", "3colorable" (0 or 1).
    std::string invariant;
    Count offset = 0;
    Count scale = 1;

    Count apply(const Count &count) const { return offset + scale * count; }
};

struct ReductionInstance {
    std::string kind;
    IncompleteDatabase db;
    SjfBCQ query;
    Problem problem;
    Identity identity;
};

/// Evaluates a named graph invariant with the brute-force graph counters.
inline Count graph_invariant(const std::string &name, const Graph &g)
{
    if (name == "3col")
        return count_3col(g);
    if (name == "is")
        return count_is(g);
    if (name == "vc")
        return count_vc(g);
    if (name == "avoiding")
        return count_avoiding(g);
    if (name == "pf")
        return count_pf(g);
    if (name == "3colorable")
        return count_3col(g) > 0 ? 1 : 0;
    throw Error("unknown graph invariant " + name);
}

/// Count of the instance's problem via the brute-force oracle.
inline Count brute_count(const ReductionInstance &r, const OracleOptions &opt = {})
{
    return r.problem == Problem::valuations ? brute_count_val(r.query, r.db, opt)
                                            : brute_count_comp(r.query, r.db, opt);
}

namespace detail {

inline Term node_null(std::size_t v) { return Term::null("_v" + std::to_string(v)); }
inline Term c(const std::string &name) { return Term::constant(name); }

inline const std::string kFresh = "@fresh0";

// Nodes on side 0 and side 1 of a two-coloring.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> sides(const Graph &g)
{
    auto coloring = g.two_coloring();
    if (!coloring)
        throw NotBipartite();
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (std::size_t v = 0; v < g.node_count(); ++v)
        ((*coloring)[v] == 0 ? out.first : out.second).push_back(v);
    return out;
}

/// Two-coloring with each connected component flipped so that the larger
/// side is as small as possible; first <= second in size.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> balanced_sides(const Graph &g)
{
    auto coloring = g.two_coloring();
    if (!coloring)
        throw NotBipartite();
    const std::size_t n = g.node_count();
    std::vector<int> comp(n, -1);
    std::vector<std::array<std::vector<std::size_t>, 2>> parts;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != -1)
            continue;
        const int id = static_cast<int>(parts.size());
        parts.emplace_back();
        std::vector<std::size_t> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            parts[id][(*coloring)[v]].push_back(v);
            for (std::size_t w : g.neighbors(v))
                if (comp[w] == -1) {
                    comp[w] = id;
                    stack.push_back(w);
                }
        }
    }
    // Subset-sum over achievable side-0 sizes, remembering one choice each.
    const std::size_t k = parts.size();
    std::vector<std::vector<int>> choice(k + 1, std::vector<int>(n + 1, -1));
    choice[0][0] = 0;
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t size = 0; size <= n; ++size) {
            if (choice[c][size] == -1)
                continue;
            for (int flip = 0; flip < 2; ++flip) {
                const std::size_t next = size + parts[c][flip].size();
                if (next <= n && choice[c + 1][next] == -1)
                    choice[c + 1][next] = flip;
            }
        }
    std::size_t best = 0;
    for (std::size_t size = 0; size <= n; ++size)
        if (choice[k][size] != -1 && std::max(size, n - size) < std::max(best, n - best))
            best = size;
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
    for (std::size_t c = k, size = best; c-- > 0;) {
        const int flip = choice[c + 1][size];
        out.first.insert(out.first.end(), parts[c][flip].begin(), parts[c][flip].end());
        out.second.insert(out.second.end(), parts[c][1 - flip].begin(), parts[c][1 - flip].end());
        size -= parts[c][flip].size();
    }
    if (out.first.size() > out.second.size())
        std::swap(out.first, out.second);
    return out;
}

} // namespace detail

/// R(_u,_v) and R(_v,_u) per edge over {1,2,3}; a valuation fails R(x,x)
/// iff it is a proper coloring. Isolated nodes have no null.
inline ReductionInstance encode_3col(const Graph &g)
{
    std::vector<Fact> facts;
    for (const auto &[a, b] : g.edges()) {
        facts.push_back({"R", {detail::node_null(a), detail::node_null(b)}});
        facts.push_back({"R", {detail::node_null(b), detail::node_null(a)}});
    }
    const std::size_t n = g.node_count();
    return {"3col",
            IncompleteDatabase::uniform(std::move(facts), {"1", "2", "3"}),
            parse_conjunctive_query("R(x,x)"),
            Problem::valuations,
            {"3col", pow(3, n), -pow(3, g.isolated_count())}};
}

namespace detail {

inline ReductionInstance encode_is_common(const Graph &g, std::string kind, std::vector<Fact> extra,
                                          const char *query)
{
    std::vector<Fact> facts = std::move(extra);
    for (const auto &[a, b] : g.edges()) {
        facts.push_back({"S", {node_null(a), node_null(b)}});
        facts.push_back({"S", {node_null(b), node_null(a)}});
    }
    return {std::move(kind),
            IncompleteDatabase::uniform(std::move(facts), {"0", "1"}),
            parse_conjunctive_query(query),
            Problem::valuations,
            {"is", pow(2, g.node_count()), -pow(2, g.isolated_count())}};
}

} // namespace detail

/// Nodes valued 1 that are adjacent violate independence, witnessed by
/// R(1), S(1,1), T(1).
inline ReductionInstance encode_is_path(const Graph &g)
{
    return detail::encode_is_common(g, "is_path", {{"R", {detail::c("1")}}, {"T", {detail::c("1")}}},
                                    "R(x)&S(x,y)&T(y)");
}

inline ReductionInstance encode_is_rxysxy(const Graph &g)
{
    return detail::encode_is_common(g, "is_rxysxy", {{"R", {detail::c("1"), detail::c("1")}}}, "R(x,y)&S(x,y)");
}

/// Codd table for R(x): one null per edge ranging over its endpoints, one
/// null per node ranging over {node, fresh}, and R(fresh). Completions are
/// in bijection with vertex covers.
inline ReductionInstance encode_vc(const Graph &g)
{
    std::vector<Fact> facts{{"R", {detail::c(detail::kFresh)}}};
    DomainMap domains;
    const auto &names = g.nodes();
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        const auto &[a, b] = g.edges()[i];
        std::string null = "_e" + std::to_string(i);
        facts.push_back({"R", {Term::null(null)}});
        domains.emplace(null, Domain{names[a], names[b]});
    }
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        std::string null = "_v" + std::to_string(v);
        facts.push_back({"R", {Term::null(null)}});
        domains.emplace(null, Domain{names[v], detail::kFresh});
    }
    return {"vc", IncompleteDatabase::per_null(std::move(facts), std::move(domains)), parse_conjunctive_query("R(x)"),
            Problem::completions, {"vc", 0, 1}};
}

/// Naive table over {0,1} whose completions number 2^|V| + #IS.
inline ReductionInstance encode_is_comp_uniform(const Graph &g)
{
    std::vector<Fact> facts;
    for (std::size_t v = 0; v < g.node_count(); ++v)
        facts.push_back({"R", {detail::c("@v." + g.nodes()[v]), detail::node_null(v)}});
    for (const auto &[a, b] : g.edges()) {
        facts.push_back({"R", {detail::node_null(a), detail::node_null(b)}});
        facts.push_back({"R", {detail::node_null(b), detail::node_null(a)}});
    }
    for (auto [x, y] : {std::pair{"0", "0"}, {"0", "1"}, {"1", "0"}})
        facts.push_back({"R", {detail::c(x), detail::c(y)}});
    facts.push_back({"R", {Term::null("_f"), Term::null("_f")}});
    return {"is_comp_uniform",
            IncompleteDatabase::uniform(std::move(facts), {"0", "1"}),
            parse_conjunctive_query("R(x,x)"),
            Problem::completions,
            {"is", -pow(2, g.node_count()), 1}};
}

/// 8 completions if the graph is 3-colorable, 7 otherwise.
inline ReductionInstance encode_gadget_3col(const Graph &g)
{
    std::vector<Fact> facts;
    for (const auto &[a, b] : g.edges()) {
        facts.push_back({"R", {detail::node_null(a), detail::node_null(b)}});
        facts.push_back({"R", {detail::node_null(b), detail::node_null(a)}});
    }
    for (auto [x, y] : {std::pair{"1", "2"}, {"2", "1"}, {"2", "3"}, {"3", "2"}, {"1", "3"}, {"3", "1"}})
        facts.push_back({"R", {detail::c(x), detail::c(y)}});
    for (int i = 1; i <= 3; ++i) {
        Term p = Term::null("_aux" + std::to_string(i));
        Term q = Term::null("_aux" + std::to_string(i) + "'");
        facts.push_back({"R", {p, q}});
        facts.push_back({"R", {q, p}});
    }
    facts.push_back({"R", {detail::c(detail::kFresh), detail::c(detail::kFresh)}});
    return {"gadget",
            IncompleteDatabase::uniform(std::move(facts), {"1", "2", "3"}),
            parse_conjunctive_query("R(x,x)"),
            Problem::completions,
            {"3colorable", -7, 1}};
}

/// Codd table for R(x)&S(x): each node picks an incident edge; the query
/// holds iff both endpoints of some edge pick it.
inline ReductionInstance encode_avoidance(const Graph &g)
{
    auto [left, right] = detail::sides(g);
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (g.degree(v) == 0)
            throw IsolatedNode(g.nodes()[v]);
    std::vector<Fact> facts;
    DomainMap domains;
    Count assignments = 1;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        Domain incident;
        for (std::size_t i = 0; i < g.edge_count(); ++i)
            if (g.edges()[i].first == v || g.edges()[i].second == v)
                incident.push_back("@e" + std::to_string(i));
        assignments *= incident.size();
        domains.emplace("_v" + std::to_string(v), std::move(incident));
    }
    for (std::size_t u : left)
        facts.push_back({"R", {detail::node_null(u)}});
    for (std::size_t v : right)
        facts.push_back({"S", {detail::node_null(v)}});
    return {"avoidance", IncompleteDatabase::per_null(std::move(facts), std::move(domains)),
            parse_conjunctive_query("R(x)&S(x)"), Problem::valuations, {"avoiding", assignments, -1}};
}

/// Uniform Codd table over the node names whose completions are the edge
/// sets inducing pseudoforests. Edges are oriented from side 0 to side 1.
inline ReductionInstance encode_pseudoforest(const Graph &g)
{
    auto coloring = g.two_coloring();
    if (!coloring)
        throw NotBipartite();
    const auto &names = g.nodes();
    const std::size_t n = g.node_count();
    auto oriented_edge = [&](std::size_t s, std::size_t t) {
        return (*coloring)[s] == 0 && (*coloring)[t] == 1 && g.has_edge(s, t);
    };
    std::vector<Fact> facts;
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = 0; t < n; ++t)
            if (!oriented_edge(s, t))
                facts.push_back({"R", {detail::c(names[s]), detail::c(names[t])}});
    for (std::size_t v = 0; v < n; ++v) {
        if ((*coloring)[v] == 0)
            facts.push_back({"R", {detail::c(names[v]), detail::node_null(v)}});
        else
            facts.push_back({"R", {detail::node_null(v), detail::c(names[v])}});
    }
    facts.push_back({"R", {detail::c(detail::kFresh), detail::c(detail::kFresh)}});
    Domain dom(names.begin(), names.end());
    if (dom.empty())
        dom.push_back(detail::kFresh); // no nulls; any domain will do
    return {"pseudoforest", IncompleteDatabase::uniform(std::move(facts), std::move(dom)),
            parse_conjunctive_query("R(x,y)"), Problem::completions, {"pf", 0, 1}};
}

inline std::vector<std::string> reduction_kinds()
{
    return {"3col", "is_path", "is_rxysxy", "vc", "is_comp_uniform", "gadget", "avoidance", "pseudoforest"};
}

inline ReductionInstance encode(const std::string &kind, const Graph &g)
{
    if (kind == "3col")
        return encode_3col(g);
    if (kind == "is_path")
        return encode_is_path(g);
    if (kind == "is_rxysxy")
        return encode_is_rxysxy(g);
    if (kind == "vc")
        return encode_vc(g);
    if (kind == "is_comp_uniform")
        return encode_is_comp_uniform(g);
    if (kind == "gadget")
        return encode_gadget_3col(g);
    if (kind == "avoidance")
        return encode_avoidance(g);
    if (kind == "pseudoforest")
        return encode_pseudoforest(g);
    throw Error("unknown reduction " + kind);
}

// ---------------------------------------------------------------------------
// Independent sets of bipartite graphs from valuation counts.

/// A'[a][i] = surj(a, i) for 0 <= a, i <= n.
inline std::vector<std::vector<Count>> surjection_matrix(std::size_t n)
{
    std::vector<std::vector<Count>> m(n + 1, std::vector<Count>(n + 1));
    for (std::size_t a = 0; a <= n; ++a)
        for (std::size_t i = 0; i <= n; ++i)
            m[a][i] = surj(a, i);
    return m;
}

inline bool is_lower_triangular_invertible(const std::vector<std::vector<Count>> &m)
{
    for (std::size_t a = 0; a < m.size(); ++a) {
        if (m[a].size() != m.size() || m[a][a] == 0)
            return false;
        for (std::size_t i = a + 1; i < m.size(); ++i)
            if (m[a][i] != 0)
                return false;
    }
    return true;
}

/// The database D_{a,b}: S(c_i, c_j) per edge (x_i, y_j), `a` R-nulls and
/// `b` T-nulls over {c_1..c_n}.
inline IncompleteDatabase bis_database(const std::vector<std::pair<std::size_t, std::size_t>> &edges, std::size_t n,
                                       std::size_t a, std::size_t b)
{
    auto constant = [](std::size_t i) { return "@a" + std::to_string(i + 1); };
    std::vector<Fact> facts;
    for (const auto &[i, j] : edges)
        facts.push_back({"S", {Term::constant(constant(i)), Term::constant(constant(j))}});
    for (std::size_t k = 0; k < a; ++k)
        facts.push_back({"R", {Term::null("_r" + std::to_string(k))}});
    for (std::size_t k = 0; k < b; ++k)
        facts.push_back({"T", {Term::null("_t" + std::to_string(k))}});
    Domain dom;
    for (std::size_t i = 0; i < n; ++i)
        dom.push_back(constant(i));
    return IncompleteDatabase::uniform(std::move(facts), std::move(dom));
}

/// Number of independent sets of a bipartite graph, recovered from
/// (n+1)^2 valuation counts of R(x)&S(x,y)&T(y) on Codd tables.
inline Count recover_bis(const Graph &g, const OracleOptions &opt = {})
{
    auto [xs, ys] = detail::balanced_sides(g);
    const std::size_t n = ys.size();
    const std::size_t pad = ys.size() - xs.size();
    if (n == 0)
        return 1;

    std::vector<std::size_t> pos(g.node_count());
    for (std::size_t i = 0; i < xs.size(); ++i)
        pos[xs[i]] = i;
    for (std::size_t j = 0; j < ys.size(); ++j)
        pos[ys[j]] = j;
    std::vector<bool> in_x(g.node_count(), false);
    for (std::size_t x : xs)
        in_x[x] = true;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto &[u, v] : g.edges())
        edges.emplace_back(in_x[u] ? pos[u] : pos[v], in_x[u] ? pos[v] : pos[u]);

    const auto A = surjection_matrix(n);
    if (!is_lower_triangular_invertible(A))
        throw Error("surjection matrix is not lower triangular with nonzero diagonal");

    const SjfBCQ q = parse_conjunctive_query("R(x)&S(x,y)&T(y)");
    std::vector<std::vector<Count>> C(n + 1, std::vector<Count>(n + 1));
    for (std::size_t a = 0; a <= n; ++a)
        for (std::size_t b = 0; b <= n; ++b) {
            IncompleteDatabase db = bis_database(edges, n, a, b);
            C[a][b] = total_valuations(db) - brute_count_val(q, db, opt);
        }

    // C = A Z A^T. Solve A M = C, then A Z^T = M^T, by forward substitution.
    auto solve = [&](const std::vector<std::vector<Count>> &rhs) {
        std::vector<std::vector<Count>> x(n + 1, std::vector<Count>(n + 1));
        for (std::size_t col = 0; col <= n; ++col)
            for (std::size_t row = 0; row <= n; ++row) {
                Count r = rhs[row][col];
                for (std::size_t k = 0; k < row; ++k)
                    r -= A[row][k] * x[k][col];
                if (r % A[row][row] != 0)
                    throw Error("independent-set system has no integral solution");
                x[row][col] = r / A[row][row];
            }
        return x;
    };
    auto transpose = [&](const std::vector<std::vector<Count>> &m) {
        std::vector<std::vector<Count>> t(n + 1, std::vector<Count>(n + 1));
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j)
                t[j][i] = m[i][j];
        return t;
    };
    const auto Zt = solve(transpose(solve(C)));
    Count sum = 0;
    for (const auto &row : Zt)
        for (const Count &z : row)
            sum += z;
    return sum >> pad; // padding doubled the count once per added node
}

} // namespace nullcount

#endif
