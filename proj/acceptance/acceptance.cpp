// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// a criterion fails, except for the ones listed in kKnownRed.

#include "golden.hpp"
#include "testing.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>

using namespace nullcount;
namespace nt = nullcount::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2fs", s);
    return buf;
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Criteria that cannot be met as worded; reported red but not fatal.
// 2: asks for an Open verdict on R(x)&S(x) for valuations on uniform Codd
// tables, where the query is polynomial (uniform naive tables already are).
const std::set<int> kKnownRed{2};

Outcome sample_instance()
{
    const std::string data = NULLCOUNT_DATA_DIR;
    auto start = Clock::now();
    auto val = nt::run_cli({"count", "-d", data + "/sample.idb", "--query-file", data + "/sample.query",
                            "--problem", "val"});
    auto comp = nt::run_cli({"count", "-d", data + "/sample.idb", "--query-file", data + "/sample.query",
                             "--problem", "comp"});
    const double t = seconds_since(start);
    Outcome o;
    o.pass = val.code == 0 && comp.code == 0 && val.out == "4\n" && comp.out == "3\n" && t < 1.0;
    o.detail = "val=" + val.out.substr(0, val.out.size() - 1) + " comp=" + comp.out.substr(0, comp.out.size() - 1) +
               " in " + fmt(t);
    return o;
}

Outcome dichotomy_table()
{
    Outcome o;
    std::size_t cells = 0;
    std::size_t matched = 0;
    for (const auto &[query, expected] : nt::classification_golden()) {
        auto r = nt::run_cli({"classify", "-q", query});
        std::istringstream want(expected);
        std::istringstream got(r.out);
        std::string a;
        std::string b;
        while (std::getline(want, a)) {
            ++cells;
            if (std::getline(got, b) && a == b)
                ++matched;
        }
    }
    const bool golden = cells == 48 && matched == cells;

    auto cell = [](const char *q) {
        return classify(parse_conjunctive_query(q), TableKind::codd, DomainKind::uniform, Problem::valuations).exact;
    };
    const bool open_cells = cell("R(x,x)") == ExactVerdict::open && cell("R(x,y)&S(x,y)") == ExactVerdict::open;
    const bool literal = cell("R(x)&S(x)") == ExactVerdict::open;

    o.pass = golden && open_cells && literal;
    o.detail = "golden " + std::to_string(matched) + "/" + std::to_string(cells) + " cells" +
               (open_cells ? "; Open (val, codd, uniform) on R(x,x) and R(x,y)&S(x,y)" : "; Open cells missing") +
               (literal ? "" : "; R(x)&S(x) at (val, codd, uniform) is FP, not Open as the criterion states");
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    auto start = Clock::now();
    std::string per_route;
    for (auto route : {nt::ExactRoute::all_distinct, nt::ExactRoute::codd, nt::ExactRoute::uniform,
                       nt::ExactRoute::comp_unary}) {
        nt::Rng64 rng(7000 + static_cast<unsigned>(route));
        int agree = 0;
        const int n = 250;
        for (int i = 0; i < n; ++i) {
            auto in = nt::random_instance(rng, route);
            const Problem p = route == nt::ExactRoute::comp_unary ? Problem::completions : Problem::valuations;
            const Count brute = p == Problem::valuations ? brute_count_val(in.query, in.db)
                                                         : brute_count_comp(in.query, in.db);
            if (nt::run_route(route, in) == brute && brute == nt::reference_count(route, in))
                ++agree;
        }
        o.pass = o.pass && agree == n;
        per_route += " " + nt::to_string(route) + "=" + std::to_string(agree) + "/" + std::to_string(n);
    }
    const double t = seconds_since(start);
    o.pass = o.pass && t < 60;
    o.detail = per_route.substr(1) + " in " + fmt(t);
    return o;
}

Outcome matching_test()
{
    Outcome o;
    nt::Rng64 rng(4242);
    nt::DbShape shape;
    shape.codd = true;
    std::size_t checks = 0;
    std::size_t agree = 0;
    for (int i = 0; i < 100; ++i) {
        auto q = nt::random_query(rng);
        auto db = nt::random_database(rng, q, shape);
        auto all = enumerate_completions(db);
        for (const auto &s : nt::candidate_groundings(db, all)) {
            ++checks;
            agree += is_completion(db, s) == std::binary_search(all.begin(), all.end(), s);
        }
    }
    o.pass = agree == checks;
    o.detail = std::to_string(agree) + "/" + std::to_string(checks) + " groundings over 100 Codd tables";
    return o;
}

Graph random_bipartite(nt::Rng64 &rng, std::size_t max_nodes)
{
    for (;;) {
        const std::size_t n = 2 + nt::pick(rng, max_nodes - 1);
        const std::size_t left = 1 + nt::pick(rng, n - 1);
        Graph g;
        for (std::size_t v = 0; v < n; ++v)
            g.add_node("n" + std::to_string(v));
        for (std::size_t a = 0; a < left; ++a)
            for (std::size_t b = left; b < n; ++b)
                if (nt::coin(rng, 0.5))
                    g.add_edge(a, b);
        if (g.edge_count() <= 15)
            return g;
    }
}

Outcome reduction_identities()
{
    Outcome o;
    auto start = Clock::now();
    OracleOptions big;
    big.cap = 100'000'000;
    std::size_t checks = 0;
    std::size_t failures = 0;
    auto check = [&](const std::string &kind, const Graph &g) {
        if (auto holds = nt::identity_holds(kind, g, big)) {
            ++checks;
            if (!*holds) {
                ++failures;
                std::cerr << "identity fails for " << kind << " on\n" << format_graph(g);
            }
        }
    };
    for (const Graph &g : nt::all_graphs(5))
        for (const auto &kind : reduction_kinds())
            check(kind, g);
    nt::Rng64 rng(99);
    for (int i = 0; i < 50; ++i) {
        Graph g = nt::random_graph(rng, 7, 15);
        for (const auto &kind : reduction_kinds())
            check(kind, g);
        Graph b = random_bipartite(rng, 7);
        check("avoidance", b);
        check("pseudoforest", b);
    }
    auto gadget = [](std::size_t n) {
        Graph g;
        for (std::size_t v = 0; v < n; ++v)
            g.add_node("n" + std::to_string(v));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                g.add_edge(a, b);
        return brute_count(encode_gadget_3col(g));
    };
    const Count k3 = gadget(3);
    const Count k4 = gadget(4);
    o.pass = failures == 0 && k3 == 8 && k4 == 7;
    o.detail = std::to_string(checks - failures) + "/" + std::to_string(checks) + " identities; gadget K3=" +
               k3.str() + " K4=" + k4.str() + " in " + fmt(seconds_since(start));
    return o;
}

Outcome bis_recovery()
{
    Outcome o;
    std::size_t graphs = 0;
    std::size_t agree = 0;
    for (std::size_t a = 0; a <= 3; ++a)
        for (std::size_t b = 0; b <= 3; ++b) {
            const std::size_t pairs = a * b;
            for (std::uint32_t mask = 0; mask < (1U << pairs); ++mask) {
                Graph g;
                for (std::size_t i = 0; i < a; ++i)
                    g.add_node("x" + std::to_string(i));
                for (std::size_t j = 0; j < b; ++j)
                    g.add_node("y" + std::to_string(j));
                for (std::size_t k = 0; k < pairs; ++k)
                    if ((mask >> k) & 1U)
                        g.add_edge(k / b, a + k % b);
                ++graphs;
                try {
                    agree += recover_bis(g) == count_is(g);
                } catch (const Error &e) {
                    std::cerr << "recover_bis: " << e.what() << "\n";
                }
            }
        }
    bool matrices = true;
    for (std::size_t n = 0; n <= 7; ++n)
        matrices = matrices && is_lower_triangular_invertible(surjection_matrix(n));
    o.pass = agree == graphs && matrices;
    o.detail = std::to_string(agree) + "/" + std::to_string(graphs) + " bipartite graphs; surjection matrices " +
               (matrices ? "triangular and invertible" : "FAIL the check");
    return o;
}

Outcome estimator_calibration()
{
    Outcome o;
    auto start = Clock::now();
    nt::Rng64 rng(31337);
    int worst = 100;
    int passing = 0;
    for (int i = 0; i < 50; ++i) {
        auto in = nt::random_positive_instance(rng);
        const Count truth = nt::naive_count_val(in.query, in.db);
        int good = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const Count est = karp_luby_estimate(in.query, in.db, 0.2, 0.25, seed * 7919 + 1).estimate;
            const Count diff = est > truth ? Count(est - truth) : Count(truth - est);
            good += diff * 5 <= truth;
        }
        worst = std::min(worst, good);
        passing += good >= 70;
    }
    auto single = parse_database("@domain uniform 1 2 3\nR(_a,_a)\n");
    bool exact = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        exact = exact && karp_luby_estimate(parse_query("R(x,x)"), single, 0.2, 0.25, seed).estimate == 3;
    o.pass = passing == 50 && exact;
    o.detail = std::to_string(passing) + "/50 instances at >= 70% (worst " + std::to_string(worst) +
               "/100); single-event instance " + (exact ? "exact" : "NOT exact") + " in " + fmt(seconds_since(start));
    return o;
}

Outcome combinatorics()
{
    Outcome o;
    std::size_t checks = 0;
    std::size_t agree = 0;
    for (std::size_t n = 0; n <= 7; ++n)
        for (std::size_t k = 0; k <= 7; ++k) {
            Count subsets = 0;
            for (std::uint32_t mask = 0; mask < (1U << n); ++mask)
                subsets += static_cast<std::size_t>(std::popcount(mask)) == k;
            // Functions [n] -> [k] as base-k odometers; count the onto ones.
            Count onto = 0;
            std::vector<std::size_t> f(n, 0);
            if (k > 0 || n == 0) {
                for (;;) {
                    std::vector<bool> hit(k, false);
                    for (std::size_t x : f)
                        hit[x] = true;
                    onto += std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
                    std::size_t i = 0;
                    while (i < n && ++f[i] == k)
                        f[i++] = 0;
                    if (i == n)
                        break;
                }
            }
            checks += 2;
            agree += binom(n, k) == subsets;
            agree += surj(n, k) == onto;
        }
    for (std::size_t n = 0; n <= 6; ++n)
        for (std::size_t d = 0; d <= 6; ++d) {
            Count sum = 0;
            for (std::size_t m = 0; m <= d; ++m)
                sum += binom(d, m) * surj(n, m);
            ++checks;
            agree += sum == pow(d, n);
        }
    o.pass = agree == checks;
    o.detail = std::to_string(agree) + "/" + std::to_string(checks) + " enumeration and identity checks";
    return o;
}

Outcome performance()
{
    Outcome o;
    Domain dom;
    for (int v = 0; v < 100; ++v)
        dom.push_back("c" + std::to_string(v));

    std::vector<Fact> unary;
    for (int i = 0; i < 1000; ++i)
        unary.push_back({i % 2 ? "R" : "S", {Term::null("_n" + std::to_string(i))}});
    for (int c = 0; c < 10; ++c) {
        unary.push_back({"R", {Term::constant("c" + std::to_string(c))}});
        unary.push_back({"S", {Term::constant("c" + std::to_string(c + 5))}});
    }
    auto comp_db = IncompleteDatabase::uniform(unary, Domain(dom.begin(), dom.begin() + 64));
    auto t0 = Clock::now();
    const Count comp = count_comp_uniform_unary(parse_conjunctive_query("R(x)&S(x)"), comp_db);
    const double t_comp = seconds_since(t0);

    std::vector<Fact> codd;
    DomainMap domains;
    for (int i = 0; i < 10'000; ++i) {
        std::string a = "_a" + std::to_string(i);
        std::string b = "_b" + std::to_string(i);
        codd.push_back({"R", {Term::null(a), Term::null(b)}});
        domains.emplace(a, dom);
        domains.emplace(b, dom);
    }
    auto codd_db = IncompleteDatabase::per_null(codd, domains);
    auto t1 = Clock::now();
    const Count val = count_val_codd(parse_conjunctive_query("R(x,x)"), codd_db);
    const double t_val = seconds_since(t1);

    o.pass = t_comp < 10 && t_val < 5 && comp > 0 && val > 0;
    o.detail = "comp_uniform_unary (1000 nulls, d=64) " + fmt(t_comp) + "; val_codd (10^4 facts, d=100) " + fmt(t_val);
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"sample instance", sample_instance},
        {"dichotomy table", dichotomy_table},
        {"oracle equivalence", oracle_equivalence},
        {"matching test", matching_test},
        {"reduction identities", reduction_identities},
        {"independent-set recovery", bis_recovery},
        {"estimator calibration", estimator_calibration},
        {"combinatorics", combinatorics},
        {"performance", performance},
    };
    int fatal = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception &e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const bool known = !o.pass && kKnownRed.contains(id);
        std::cout << "criterion " << id << " " << (o.pass ? "PASS" : "FAIL") << (known ? " (known)" : "") << "  "
                  << criteria[i].first << ": " << o.detail << std::endl;
        if (!o.pass && !known)
            ++fatal;
    }
    return fatal == 0 ? 0 : 1;
}
