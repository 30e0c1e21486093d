#ifndef NULLCOUNT_GRAPH_HPP
#define NULLCOUNT_GRAPH_HPP

#include "nullcount/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nullcount {

/// Simple undirected graph with named nodes. Nodes are indexed in insertion
/// order; edges are stored once as (a, b) with a < b.
class Graph {
public:
    Graph() = default;

    static bool valid_node_name(const std::string &name)
    {
        if (name.empty() || name.front() == '_' || name.front() == '@')
            return false;
        return std::all_of(name.begin(), name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '-';
        });
    }

    std::size_t add_node(const std::string &name)
    {
        if (auto it = index_.find(name); it != index_.end())
            return it->second;
        if (!valid_node_name(name))
            throw Error("invalid node name '" + name + "'");
        index_.emplace(name, nodes_.size());
        nodes_.push_back(name);
        adjacency_.emplace_back();
        return nodes_.size() - 1;
    }

    void add_edge(std::size_t a, std::size_t b)
    {
        if (a == b)
            throw Error("self-loop on node " + nodes_.at(a));
        if (a > b)
            std::swap(a, b);
        if (has_edge(a, b))
            return;
        edges_.emplace_back(a, b);
        adjacency_.at(a).push_back(b);
        adjacency_.at(b).push_back(a);
    }

    void add_edge(const std::string &a, const std::string &b)
    {
        const std::size_t u = add_node(a); // sequenced: node ids follow first appearance
        add_edge(u, add_node(b));
    }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<std::string> &nodes() const noexcept { return nodes_; }
    const std::vector<std::pair<std::size_t, std::size_t>> &edges() const noexcept { return edges_; }
    const std::vector<std::size_t> &neighbors(std::size_t v) const { return adjacency_.at(v); }
    std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }

    bool has_edge(std::size_t a, std::size_t b) const
    {
        const auto &adj = adjacency_.at(a);
        return std::find(adj.begin(), adj.end(), b) != adj.end();
    }

    std::optional<std::size_t> find(const std::string &name) const
    {
        auto it = index_.find(name);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    /// Side (0 or 1) per node, or nullopt if some cycle is odd. The first
    /// node of every component gets side 0.
    std::optional<std::vector<int>> two_coloring() const
    {
        std::vector<int> side(nodes_.size(), -1);
        for (std::size_t s = 0; s < nodes_.size(); ++s) {
            if (side[s] != -1)
                continue;
            side[s] = 0;
            std::vector<std::size_t> stack{s};
            while (!stack.empty()) {
                std::size_t v = stack.back();
                stack.pop_back();
                for (std::size_t w : adjacency_[v]) {
                    if (side[w] == -1) {
                        side[w] = 1 - side[v];
                        stack.push_back(w);
                    } else if (side[w] == side[v]) {
                        return std::nullopt;
                    }
                }
            }
        }
        return side;
    }

    std::size_t isolated_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(adjacency_.begin(), adjacency_.end(), [](const auto &adj) { return adj.empty(); }));
    }

private:
    std::vector<std::string> nodes_;
    std::map<std::string, std::size_t> index_;
    std::vector<std::pair<std::size_t, std::size_t>> edges_;
    std::vector<std::vector<std::size_t>> adjacency_;
};

} // namespace nullcount

#endif
