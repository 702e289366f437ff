#pragma once

// Non-significance similarity graph and homogeneous groups: units are
// nodes, edges join pairs whose impact does NOT differ significantly,
// and homogeneous groups are the maximal cliques of that graph.
// Exports to Pajek .net and Graphviz DOT.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraccite/stats.hpp"

namespace fraccite {

struct grouping_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct similarity_graph {
    std::vector<std::string> nodes;                         // sorted by unit_id
    std::vector<std::pair<std::string, std::string>> edges; // normalized first < second, sorted
    double alpha = 0.05;
    std::string method;

    bool has_edge(std::string_view a, std::string_view b) const {
        auto key = a < b ? std::make_pair(std::string(a), std::string(b))
                         : std::make_pair(std::string(b), std::string(a));
        return std::binary_search(edges.begin(), edges.end(), key);
    }
};

// Edge (i,j) iff the pairwise comparison is not significant. The
// comparisons must cover every pair of the involved units.
inline similarity_graph build_similarity_graph(const posthoc_result& posthoc) {
    similarity_graph g;
    g.alpha = posthoc.alpha;
    g.method = posthoc_method_name(posthoc.method);
    std::set<std::string> nodes;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& c : posthoc.comparisons) {
        nodes.insert(c.unit_i);
        nodes.insert(c.unit_j);
        auto key = c.unit_i < c.unit_j ? std::make_pair(c.unit_i, c.unit_j)
                                       : std::make_pair(c.unit_j, c.unit_i);
        seen.insert(key);
        if (!c.significant) g.edges.push_back(std::move(key));
    }
    g.nodes.assign(nodes.begin(), nodes.end());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j)
            if (!seen.count({g.nodes[i], g.nodes[j]}))
                throw grouping_error("missing pairwise comparison for (" + g.nodes[i] + ", " +
                                     g.nodes[j] + ")");
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

using homogeneous_group = std::vector<std::string>;  // sorted members

namespace detail {

// Bron-Kerbosch with pivoting over adjacency bitsets (node indices).
inline void bron_kerbosch(std::vector<std::size_t>& r, std::vector<std::size_t> p,
                          std::vector<std::size_t> x,
                          const std::vector<std::vector<bool>>& adj,
                          std::vector<std::vector<std::size_t>>& cliques) {
    if (p.empty() && x.empty()) {
        cliques.push_back(r);
        return;
    }
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = 0;
    for (std::size_t u : p) {
        std::size_t deg = 0;
        for (std::size_t v : p) deg += adj[u][v];
        if (deg >= best) {
            best = deg;
            pivot = u;
        }
    }
    std::vector<std::size_t> candidates;
    for (std::size_t v : p)
        if (!adj[pivot][v]) candidates.push_back(v);
    for (std::size_t v : candidates) {
        std::vector<std::size_t> p2, x2;
        for (std::size_t u : p)
            if (adj[v][u]) p2.push_back(u);
        for (std::size_t u : x)
            if (adj[v][u]) x2.push_back(u);
        r.push_back(v);
        bron_kerbosch(r, std::move(p2), std::move(x2), adj, cliques);
        r.pop_back();
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

}  // namespace detail

// All maximal cliques, members sorted, cliques in lexicographic order.
// Isolated nodes appear as singleton groups.
inline std::vector<homogeneous_group> maximal_cliques(const similarity_graph& g) {
    const std::size_t n = g.nodes.size();
    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(g.nodes[i], i);
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : g.edges) {
        const std::size_t i = index.at(a), j = index.at(b);
        adj[i][j] = adj[j][i] = true;
    }
    std::vector<std::vector<std::size_t>> raw;
    std::vector<std::size_t> r;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    detail::bron_kerbosch(r, std::move(p), {}, adj, raw);
    std::vector<homogeneous_group> groups;
    groups.reserve(raw.size());
    for (auto& clique : raw) {
        homogeneous_group members;
        members.reserve(clique.size());
        for (std::size_t i : clique) members.push_back(g.nodes[i]);
        std::sort(members.begin(), members.end());
        groups.push_back(std::move(members));
    }
    std::sort(groups.begin(), groups.end());
    return groups;
}

// Connected components, each sorted, listed in lexicographic order.
inline std::vector<std::vector<std::string>> connected_components(const similarity_graph& g) {
    std::map<std::string, std::string> parent;
    for (const auto& n : g.nodes) parent[n] = n;
    std::function<std::string(const std::string&)> find = [&](const std::string& a) {
        return parent[a] == a ? a : parent[a] = find(parent[a]);
    };
    for (const auto& [a, b] : g.edges) parent[find(a)] = find(b);
    std::map<std::string, std::vector<std::string>> buckets;
    for (const auto& n : g.nodes) buckets[find(n)].push_back(n);
    std::vector<std::vector<std::string>> out;
    for (auto& [root, members] : buckets) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Pajek .net: `*Vertices n`, 1-based quoted labels, `*Edges` with index
// pairs; LF line endings.
inline std::string export_pajek(const similarity_graph& g) {
    std::ostringstream out;
    out << "*Vertices " << g.nodes.size() << '\n';
    std::map<std::string_view, std::size_t> index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        index.emplace(g.nodes[i], i + 1);
        out << (i + 1) << " \"" << g.nodes[i] << "\"\n";
    }
    out << "*Edges\n";
    for (const auto& [a, b] : g.edges) out << index.at(a) << ' ' << index.at(b) << '\n';
    return out.str();
}

// Undirected DOT graph; each homogeneous group becomes an annotated
// subgraph cluster.
inline std::string export_dot(const similarity_graph& g,
                              std::span<const homogeneous_group> groups) {
    std::ostringstream out;
    out << "graph impact_similarity {\n";
    out << "  // edges join units whose impact is not significantly different (alpha = "
        << g.alpha << ", " << g.method << ")\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
        out << "  subgraph cluster_" << i << " {\n";
        out << "    label=\"group " << (i + 1) << "\";\n    ";
        for (const auto& m : groups[i]) out << '"' << m << "\"; ";
        out << "\n  }\n";
    }
    for (const auto& node : g.nodes) out << "  \"" << node << "\";\n";
    for (const auto& [a, b] : g.edges) out << "  \"" << a << "\" -- \"" << b << "\";\n";
    out << "}\n";
    return out.str();
}

}  // namespace fraccite
