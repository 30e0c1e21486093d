#ifndef NULLCOUNT_IO_HPP
#define NULLCOUNT_IO_HPP

#include "nullcount/core.hpp"
#include "nullcount/errors.hpp"
#include "nullcount/graph.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace nullcount {

namespace detail {

inline bool is_term_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '@' || c == '.' ||
           c == '-' || c == '+';
}

// Strips a trailing comment and surrounding whitespace.
inline std::string_view clean_line(std::string_view line)
{
    if (auto hash = line.find('#'); hash != std::string_view::npos)
        line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
        line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
        line.remove_suffix(1);
    return line;
}

inline std::vector<std::string> split_words(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

template <typename Fn>
void for_each_line(std::string_view text, Fn &&fn)
{
    std::size_t number = 1;
    while (!text.empty()) {
        std::size_t end = text.find('\n');
        std::string_view line = text.substr(0, end);
        std::string_view cleaned = clean_line(line);
        if (!cleaned.empty())
            fn(cleaned, number);
        if (end == std::string_view::npos)
            break;
        text.remove_prefix(end + 1);
        ++number;
    }
}

// `R(a, _x, b)`; `line` is the line number for error reporting.
inline Fact parse_fact(std::string_view text, std::size_t line)
{
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
            ++i;
    };
    auto fail = [&](const std::string &what) -> Fact { throw ParseError(what, line); };

    if (i >= text.size() || !std::isalpha(static_cast<unsigned char>(text[i])))
        return fail("expected a relation name");
    std::size_t start = i;
    while (i < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\''))
        ++i;
    Fact fact{std::string(text.substr(start, i - start)), {}};
    skip();
    if (i >= text.size() || text[i] != '(')
        return fail("expected '(' after relation " + fact.relation);
    ++i;
    for (;;) {
        skip();
        start = i;
        while (i < text.size() && is_term_char(text[i]))
            ++i;
        if (i == start)
            return fail("expected a constant or null in " + fact.relation);
        std::string term(text.substr(start, i - start));
        if (term.front() == '_' && term.size() < 2)
            return fail("null name '_' is too short");
        fact.args.push_back(Term::parse(std::move(term)));
        skip();
        if (i < text.size() && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < text.size() && text[i] == ')') {
            ++i;
            break;
        }
        return fail("expected ',' or ')' in " + fact.relation);
    }
    skip();
    if (i != text.size())
        return fail("trailing characters after fact");
    return fact;
}

inline void check_constant_token(const std::string &token, std::size_t line)
{
    if (token.front() == '_')
        throw ParseError("domain value '" + token + "' looks like a null", line);
    for (char c : token)
        if (!is_term_char(c))
            throw ParseError("invalid character in domain value '" + token + "'", line);
}

} // namespace detail

/// Incomplete-database text format, one item per line, `#` comments:
///   @domain uniform c1 c2 ...      (uniform mode), or
///   @null _n c1 c2 ...             (one per null, per-null mode)
///   R(a, _x, b)                    (facts)
inline IncompleteDatabase parse_database(std::string_view text)
{
    std::vector<Fact> facts;
    DomainMap per_null;
    std::optional<Domain> uniform;
    std::size_t null_line = 0;

    detail::for_each_line(text, [&](std::string_view line, std::size_t number) {
        if (line.front() != '@') {
            facts.push_back(detail::parse_fact(line, number));
            return;
        }
        std::vector<std::string> words = detail::split_words(line);
        if (words[0] == "@domain") {
            if (words.size() < 2 || words[1] != "uniform")
                throw ParseError("expected '@domain uniform c1 c2 ...'", number);
            if (uniform)
                throw ParseError("second @domain line", number);
            if (null_line != 0)
                throw ParseError("@domain uniform mixed with @null lines", number);
            Domain dom;
            for (std::size_t i = 2; i < words.size(); ++i) {
                detail::check_constant_token(words[i], number);
                dom.push_back(words[i]);
            }
            if (dom.empty())
                throw ParseError("empty uniform domain", number);
            uniform = std::move(dom);
        } else if (words[0] == "@null") {
            if (uniform)
                throw ParseError("@null line mixed with @domain uniform", number);
            if (words.size() < 3)
                throw ParseError("expected '@null _n c1 c2 ...'", number);
            if (words[1].size() < 2 || words[1].front() != '_')
                throw ParseError("'" + words[1] + "' is not a null name", number);
            if (per_null.contains(words[1]))
                throw ParseError("second domain for null " + words[1], number);
            Domain dom;
            for (std::size_t i = 2; i < words.size(); ++i) {
                detail::check_constant_token(words[i], number);
                dom.push_back(words[i]);
            }
            per_null.emplace(words[1], std::move(dom));
            null_line = number;
        } else {
            throw ParseError("unknown directive " + words[0], number);
        }
    });

    if (uniform)
        return IncompleteDatabase::uniform(std::move(facts), std::move(*uniform));
    return IncompleteDatabase::per_null(std::move(facts), std::move(per_null));
}

inline std::string format_database(const IncompleteDatabase &db)
{
    std::ostringstream out;
    if (db.is_uniform()) {
        out << "@domain uniform";
        for (const auto &c : db.uniform_domain())
            out << ' ' << c;
        out << '\n';
    } else {
        for (const auto &n : db.nulls()) {
            out << "@null " << n;
            for (const auto &c : db.domain_of(n))
                out << ' ' << c;
            out << '\n';
        }
    }
    for (const Fact &f : db.facts())
        out << to_string(f) << '\n';
    return out.str();
}

/// A ground database: one fact per line, no directives.
inline Completion parse_completion(std::string_view text)
{
    std::vector<Fact> facts;
    detail::for_each_line(text, [&](std::string_view line, std::size_t number) {
        if (line.front() == '@')
            throw ParseError("directives are not allowed in a ground database", number);
        Fact f = detail::parse_fact(line, number);
        if (!f.is_ground())
            throw ParseError("fact " + to_string(f) + " contains a null", number);
        facts.push_back(std::move(f));
    });
    return Completion(std::move(facts));
}

inline std::string format_completion(const Completion &c)
{
    std::string out;
    for (const Fact &f : c.facts())
        out += to_string(f) + "\n";
    return out;
}

/// Graph text format: `u v` per edge, a lone `u` declares an isolated node,
/// `#` comments.
inline Graph parse_graph(std::string_view text)
{
    Graph g;
    detail::for_each_line(text, [&](std::string_view line, std::size_t number) {
        std::vector<std::string> words = detail::split_words(line);
        for (const auto &w : words)
            if (!Graph::valid_node_name(w))
                throw ParseError("invalid node name '" + w + "'", number);
        if (words.size() == 1) {
            g.add_node(words[0]);
        } else if (words.size() == 2) {
            if (words[0] == words[1])
                throw ParseError("self-loop on node " + words[0], number);
            g.add_edge(words[0], words[1]);
        } else {
            throw ParseError("expected 'u v' or 'u'", number);
        }
    });
    return g;
}

inline std::string format_graph(const Graph &g)
{
    std::string out;
    std::vector<bool> covered(g.node_count(), false);
    for (const auto &[a, b] : g.edges()) {
        out += g.nodes()[a] + " " + g.nodes()[b] + "\n";
        covered[a] = covered[b] = true;
    }
    for (std::size_t v = 0; v < g.node_count(); ++v)
        if (!covered[v])
            out += g.nodes()[v] + "\n";
    return out;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string &path, const std::string &contents)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path);
    out << contents;
}

} // namespace nullcount

#endif
