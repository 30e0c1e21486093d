#ifndef NULLCOUNT_TOOLS_CLI_HPP
#define NULLCOUNT_TOOLS_CLI_HPP

#include "CLI11.hpp"

#include "nullcount/nullcount.hpp"
#include "nullcount/report.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace nullcount::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kParse = 2, kSemantic = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string query_text;
    std::string query_file;
    std::string database;
    std::string completion;
    std::string graph;
    std::string output;
    std::string reduction;
    std::string problem;
    std::string table;
    std::string domain;
    std::string method = "auto";
    std::string format; // empty: json for estimate, plain otherwise
    double epsilon = 0;
    double delta = 0;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool verify = false;
};

inline std::string load(const std::string &path)
{
    try {
        return read_file(path);
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
}

inline void save(const std::string &path, const std::string &contents)
{
    try {
        write_file(path, contents);
    } catch (const Error &e) {
        throw UsageError(e.what());
    }
}

inline UnionQuery load_query(const RunConfig &cfg)
{
    if (cfg.query_text.empty() == cfg.query_file.empty())
        throw UsageError("give exactly one of --query and --query-file");
    return parse_query(cfg.query_text.empty() ? load(cfg.query_file) : cfg.query_text);
}

inline std::uint64_t enumeration_cap()
{
    const char *env = std::getenv("NULLCOUNT_ENUM_CAP");
    if (env == nullptr || *env == '\0')
        return kDefaultEnumerationCap;
    try {
        std::size_t used = 0;
        unsigned long long cap = std::stoull(env, &used);
        if (used != std::string(env).size())
            throw std::invalid_argument(env);
        return cap;
    } catch (const std::exception &) {
        throw UsageError(std::string("NULLCOUNT_ENUM_CAP is not a number: ") + env);
    }
}

inline Problem problem_of(const std::string &name)
{
    return name == "comp" ? Problem::completions : Problem::valuations;
}

// --table / --domain on a database are assertions about its shape.
inline void check_overrides(const RunConfig &cfg, const IncompleteDatabase &db)
{
    auto [table, domain] = setting_of(db);
    if (cfg.table == "codd" && table != TableKind::codd)
        throw NotCodd();
    if (cfg.domain == "uniform" && domain != DomainKind::uniform)
        throw NonUniform();
}

inline int cmd_classify(const RunConfig &cfg, std::ostream &out)
{
    const SjfBCQ q = [&] {
        UnionQuery u = load_query(cfg);
        if (!u.is_conjunctive())
            throw ParseError("classify takes a single conjunctive query", 0);
        return u.disjuncts().front();
    }();
    std::vector<DichotomyVerdict> verdicts;
    for (Problem p : {Problem::valuations, Problem::completions}) {
        if (!cfg.problem.empty() && cfg.problem != to_string(p))
            continue;
        for (TableKind t : {TableKind::naive, TableKind::codd}) {
            if (!cfg.table.empty() && cfg.table != to_string(t))
                continue;
            for (DomainKind d : {DomainKind::nonuniform, DomainKind::uniform}) {
                if (!cfg.domain.empty() && cfg.domain != to_string(d))
                    continue;
                verdicts.push_back(classify(q, t, d, p));
            }
        }
    }
    if (cfg.format == "json") {
        if (verdicts.size() == 1) {
            out << dump(to_json(verdicts.front()));
        } else {
            nlohmann::json all = nlohmann::json::array();
            for (const auto &v : verdicts)
                all.push_back(to_json(v));
            out << dump(all);
        }
        return kOk;
    }
    for (const auto &v : verdicts) {
        out << to_string(v.problem) << ' ' << to_string(v.table) << ' ' << to_string(v.domain) << ": "
            << to_string(v.exact) << ", " << to_string(v.approx);
        if (!v.witnesses.empty()) {
            out << " [";
            for (std::size_t i = 0; i < v.witnesses.size(); ++i)
                out << (i ? ", " : "") << v.witnesses[i];
            out << ']';
        }
        out << '\n';
    }
    return kOk;
}

inline int cmd_count(const RunConfig &cfg, std::ostream &out, std::ostream &err)
{
    const UnionQuery q = load_query(cfg);
    const IncompleteDatabase db = parse_database(load(cfg.database));
    check_schema(q, db);
    check_overrides(cfg, db);
    const Problem problem = problem_of(cfg.problem);
    OracleOptions opt;
    opt.cap = enumeration_cap();
    opt.threads = cfg.threads;

    Count count;
    std::string used = cfg.method;
    auto brute = [&] {
        return problem == Problem::valuations ? brute_count_val(q, db, opt) : brute_count_comp(q, db, opt);
    };
    if (cfg.method == "exact") {
        if (!q.is_conjunctive())
            throw NotTractable("exact counting takes a single conjunctive query", {});
        count = count_exact(q.disjuncts().front(), db, problem);
    } else if (cfg.method == "brute") {
        count = brute();
    } else if (cfg.method == "estimate") {
        if (problem != Problem::valuations)
            throw NotTractable("no estimator for completion counts", {});
        count = karp_luby_estimate(q, db, cfg.epsilon, cfg.delta, cfg.seed, cfg.threads).estimate;
    } else {
        std::optional<Count> exact;
        if (q.is_conjunctive()) {
            try {
                exact = count_exact(q.disjuncts().front(), db, problem);
                used = "exact";
            } catch (const NotTractable &e) {
                err << "note: " << e.what() << "; enumerating\n";
            }
        }
        if (!exact) {
            exact = brute();
            used = "brute";
        }
        count = *exact;
    }
    if (cfg.format == "json")
        out << dump({{"count", count.str()}, {"method", used}, {"problem", to_string(problem)}});
    else
        out << count << '\n';
    return kOk;
}

inline int cmd_estimate(const RunConfig &cfg, std::ostream &out)
{
    const UnionQuery q = load_query(cfg);
    const IncompleteDatabase db = parse_database(load(cfg.database));
    check_overrides(cfg, db);
    const EstimateReport r = karp_luby_estimate(q, db, cfg.epsilon, cfg.delta, cfg.seed, cfg.threads);
    if (cfg.format == "plain")
        out << r.estimate << '\n'; // the report is the default
    else
        out << dump(to_json(r));
    return kOk;
}

inline int cmd_check_completion(const RunConfig &cfg, std::ostream &out)
{
    const IncompleteDatabase db = parse_database(load(cfg.database));
    const Completion s = parse_completion(load(cfg.completion));
    bool result;
    if (db.is_codd()) {
        result = is_completion(db, s);
    } else {
        OracleOptions opt;
        opt.cap = enumeration_cap();
        opt.threads = cfg.threads;
        const auto all = enumerate_completions(db, opt);
        result = std::binary_search(all.begin(), all.end(), s);
    }
    out << (result ? "true" : "false") << '\n';
    return kOk;
}

inline int cmd_reduce(const RunConfig &cfg, std::ostream &out)
{
    const Graph g = parse_graph(load(cfg.graph));
    const ReductionInstance r = encode(cfg.reduction, g);
    save(cfg.output + ".idb", format_database(r.db));
    save(cfg.output + ".identity.json", dump(identity_json(r)));
    out << "query: " << to_string(r.query) << '\n' << "problem: " << to_string(r.problem) << '\n';
    if (cfg.verify) {
        OracleOptions opt;
        opt.cap = enumeration_cap();
        opt.threads = cfg.threads;
        const Count count = brute_count(r, opt);
        const Count invariant = graph_invariant(r.identity.invariant, g);
        const bool holds = r.identity.apply(count) == invariant;
        out << "count: " << count << '\n'
            << r.identity.invariant << ": " << invariant << '\n'
            << "identity: " << (holds ? "holds" : "FAILS") << '\n';
        return holds ? kOk : kSemantic;
    }
    return kOk;
}

inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Count valuations and completions of incomplete databases"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_query = [&](CLI::App *sub) {
        sub->add_option("-q,--query", cfg.query_text, "query text, e.g. \"R(x)&S(x,y)\"");
        sub->add_option("--query-file", cfg.query_file, "file holding the query");
    };
    auto add_setting = [&](CLI::App *sub) {
        sub->add_option("--table", cfg.table)->check(CLI::IsMember({"naive", "codd"}));
        sub->add_option("--domain", cfg.domain)->check(CLI::IsMember({"uniform", "nonuniform"}));
    };
    auto add_tolerances = [&](CLI::App *sub, bool required) {
        auto *e = sub->add_option("--epsilon", cfg.epsilon, "relative error, in (0,1)");
        auto *d = sub->add_option("--delta", cfg.delta, "failure probability, in (0,1)");
        auto *s = sub->add_option("--seed", cfg.seed);
        if (required) {
            e->required();
            d->required();
            s->required();
        }
    };
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--threads", cfg.threads)->check(CLI::Range(1U, 256U));
        sub->add_option("--format", cfg.format)->check(CLI::IsMember({"plain", "json"}));
    };

    auto *classify_cmd = app.add_subcommand("classify", "complexity verdicts for a query");
    add_query(classify_cmd);
    add_setting(classify_cmd);
    classify_cmd->add_option("--problem", cfg.problem)->check(CLI::IsMember({"val", "comp"}));
    classify_cmd->add_option("--format", cfg.format)->check(CLI::IsMember({"plain", "json"}));

    auto *count_cmd = app.add_subcommand("count", "count valuations or completions satisfying a query");
    add_query(count_cmd);
    add_setting(count_cmd);
    count_cmd->add_option("-d,--database", cfg.database)->required();
    count_cmd->add_option("--problem", cfg.problem)->required()->check(CLI::IsMember({"val", "comp"}));
    count_cmd->add_option("--method", cfg.method)->check(CLI::IsMember({"auto", "exact", "brute", "estimate"}));
    add_tolerances(count_cmd, false);
    add_common(count_cmd);

    auto *estimate_cmd = app.add_subcommand("estimate", "randomized estimate of the valuation count");
    add_query(estimate_cmd);
    add_setting(estimate_cmd);
    estimate_cmd->add_option("-d,--database", cfg.database)->required();
    add_tolerances(estimate_cmd, true);
    add_common(estimate_cmd);

    auto *check_cmd = app.add_subcommand("check-completion", "is a ground database a completion?");
    check_cmd->add_option("-d,--database", cfg.database)->required();
    check_cmd->add_option("-c,--completion", cfg.completion)->required();
    check_cmd->add_option("--threads", cfg.threads)->check(CLI::Range(1U, 256U));

    auto *reduce_cmd = app.add_subcommand("reduce", "encode a graph as a counting instance");
    std::string kinds;
    for (const auto &k : reduction_kinds())
        kinds += (kinds.empty() ? "" : ", ") + k;
    reduce_cmd->add_option("kind", cfg.reduction, "one of: " + kinds)
        ->required()
        ->check(CLI::IsMember(reduction_kinds()));
    reduce_cmd->add_option("-g,--graph", cfg.graph)->required();
    reduce_cmd->add_option("-o,--output", cfg.output, "writes <out>.idb and <out>.identity.json")->required();
    reduce_cmd->add_flag("--verify", cfg.verify, "check the identity with the brute-force counters");
    reduce_cmd->add_option("--threads", cfg.threads)->check(CLI::Range(1U, 256U));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    if (count_cmd->parsed() && cfg.method == "estimate") {
        if (count_cmd->count("--epsilon") == 0 || count_cmd->count("--delta") == 0 || count_cmd->count("--seed") == 0) {
            err << "error: --method estimate needs --epsilon, --delta and --seed\n";
            return kUsage;
        }
    }

    try {
        if (classify_cmd->parsed())
            return cmd_classify(cfg, out);
        if (count_cmd->parsed())
            return cmd_count(cfg, out, err);
        if (estimate_cmd->parsed())
            return cmd_estimate(cfg, out);
        if (check_cmd->parsed())
            return cmd_check_completion(cfg, out);
        return cmd_reduce(cfg, out);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const NotTractable &e) {
        err << "error: " << e.what();
        if (!e.witnesses().empty()) {
            err << " (hard patterns:";
            for (const auto &w : e.witnesses())
                err << ' ' << w;
            err << ')';
        }
        err << '\n';
        return kSemantic;
    } catch (const SemanticError &e) {
        err << "error: " << e.what() << '\n';
        return kSemantic;
    } catch (const Error &e) {
        // Well-formed text that does not describe a valid object.
        err << "parse error: " << e.what() << '\n';
        return kParse;
    }
}

} // namespace nullcount::cli

#endif
