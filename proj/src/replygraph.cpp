#include "observatory/replygraph.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace observatory::graph {

void ReplyGraph::add_edge(const std::string& from, const std::string& to, int64_t weight) {
    if (from == to) throw std::invalid_argument("graph: self-loops are not representable");
    if (weight < 1) throw std::invalid_argument("graph: edge weight must be >= 1");
    nodes.insert(from);
    nodes.insert(to);
    edges[{from, to}] += weight;
}

int64_t ReplyGraph::weighted_degree(const std::string& node) const {
    int64_t degree = 0;
    for (const auto& [edge, weight] : edges) {
        if (edge.first == node) degree += weight;
        if (edge.second == node) degree += weight;
    }
    return degree;
}

ReplyGraph build_graph(const std::vector<PostRecord>& posts,
                       const std::vector<CommentRecord>& comments) {
    ReplyGraph g;
    std::unordered_map<std::string, const PostRecord*> post_by_id;
    for (const PostRecord& p : posts) post_by_id[p.id] = &p;

    g.total_comments = static_cast<int64_t>(comments.size());
    for (const CommentRecord& c : comments) {
        g.comments_by_agent[c.agent_id] += 1;
        auto it = post_by_id.find(c.post_id);
        if (it == post_by_id.end()) {
            ++g.unresolved_comments;
            continue;
        }
        const std::string& author = it->second->agent_id;
        if (author == c.agent_id) {
            ++g.self_comment_tally;
            g.self_comments_by_agent[c.agent_id] += 1;
            continue;
        }
        g.add_edge(c.agent_id, author);
    }
    return g;
}

GraphMetrics graph_metrics(const ReplyGraph& g, const std::set<std::string>& bot_agents) {
    GraphMetrics m;
    m.node_count = static_cast<int64_t>(g.nodes.size());
    m.edge_count = static_cast<int64_t>(g.edges.size());
    if (m.node_count >= 2) {
        m.density = static_cast<double>(m.edge_count) /
            (static_cast<double>(m.node_count) * static_cast<double>(m.node_count - 1));
    }

    std::set<std::pair<std::string, std::string>> adjacent; // unordered pairs
    for (const auto& [edge, _] : g.edges) {
        auto pair = edge.first < edge.second ? edge : std::make_pair(edge.second, edge.first);
        adjacent.insert(pair);
    }
    for (const auto& [a, b] : adjacent) {
        if (g.edges.count({a, b}) && g.edges.count({b, a})) ++m.reciprocal_pairs;
    }
    m.reciprocity_rate = adjacent.empty()
        ? 0.0
        : static_cast<double>(m.reciprocal_pairs) / static_cast<double>(adjacent.size());

    const auto labels = detect_communities(g);
    std::map<int64_t, int64_t> sizes;
    for (const auto& [_, community] : labels) sizes[community] += 1;
    for (const auto& [_, size] : sizes) m.community_sizes.push_back(size);
    std::sort(m.community_sizes.rbegin(), m.community_sizes.rend());
    m.community_count = static_cast<int64_t>(m.community_sizes.size());

    if (g.total_comments > 0) {
        int64_t self_total = 0, bot_total = 0, self_and_bot = 0;
        for (const auto& [agent, n] : g.self_comments_by_agent) self_total += n;
        for (const auto& [agent, n] : g.comments_by_agent) {
            if (bot_agents.count(agent)) {
                bot_total += n;
                auto it = g.self_comments_by_agent.find(agent);
                if (it != g.self_comments_by_agent.end()) self_and_bot += it->second;
            }
        }
        const double total = static_cast<double>(g.total_comments);
        m.self_rate = static_cast<double>(self_total) / total;
        m.bot_rate = static_cast<double>(bot_total) / total;
        // organic = total - |self ∪ bot|
        m.organic_ratio =
            static_cast<double>(g.total_comments - (self_total + bot_total - self_and_bot)) / total;
    }
    return m;
}

std::map<std::string, int64_t> detect_communities(const ReplyGraph& g) {
    std::map<std::string, int64_t> labels;
    if (g.nodes.empty()) return labels;

    // undirected projection with summed weights
    std::vector<std::string> ids(g.nodes.begin(), g.nodes.end());
    std::unordered_map<std::string, size_t> index;
    for (size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;

    const size_t n = ids.size();
    std::vector<std::unordered_map<size_t, double>> weight(n); // community -> community
    std::vector<double> degree(n, 0.0);
    double total_weight = 0.0;
    for (const auto& [edge, w] : g.edges) {
        const size_t a = index[edge.first], b = index[edge.second];
        weight[a][b] += static_cast<double>(w);
        weight[b][a] += static_cast<double>(w);
        degree[a] += static_cast<double>(w);
        degree[b] += static_cast<double>(w);
        total_weight += static_cast<double>(w);
    }

    // each node starts as its own community; representative = min node id
    std::vector<size_t> community(n);
    std::vector<std::string> representative(n);
    std::vector<bool> alive(n, true);
    for (size_t i = 0; i < n; ++i) {
        community[i] = i;
        representative[i] = ids[i];
    }

    if (total_weight > 0) {
        auto pair_key = [&](size_t x, size_t y) {
            return representative[x] < representative[y]
                ? std::make_pair(representative[x], representative[y])
                : std::make_pair(representative[y], representative[x]);
        };
        while (true) {
            double best_gain = 0.0;
            size_t best_a = 0, best_b = 0;
            bool found = false;
            for (size_t a = 0; a < n; ++a) {
                if (!alive[a]) continue;
                for (const auto& [b, w_ab] : weight[a]) {
                    if (!alive[b] || b <= a) continue; // each pair once
                    const double gain = w_ab / total_weight -
                        degree[a] * degree[b] / (2.0 * total_weight * total_weight);
                    if (gain <= 0.0) continue; // only strictly positive merges
                    // exact comparison plus id tie-break keeps the choice
                    // independent of map iteration order
                    const bool better = !found || gain > best_gain ||
                        (gain == best_gain && pair_key(a, b) < pair_key(best_a, best_b));
                    if (better) {
                        best_gain = gain;
                        best_a = a;
                        best_b = b;
                        found = true;
                    }
                }
            }
            if (!found) break;

            // merge best_b into best_a
            const size_t a = best_a, b = best_b;
            for (const auto& [c, w] : weight[b]) {
                if (c == a) continue;
                weight[a][c] += w;
                weight[c][a] += w;
                weight[c].erase(b);
            }
            weight[a].erase(b);
            degree[a] += degree[b];
            alive[b] = false;
            if (representative[b] < representative[a]) representative[a] = representative[b];
            for (size_t i = 0; i < n; ++i)
                if (community[i] == b) community[i] = a;
            weight[b].clear();
        }
    }

    // stable labels: communities numbered by their smallest member id
    std::map<std::string, std::vector<size_t>> by_rep;
    for (size_t i = 0; i < n; ++i) by_rep[representative[community[i]]].push_back(i);
    int64_t label = 0;
    for (const auto& [_, members] : by_rep) {
        for (size_t i : members) labels[ids[i]] = label;
        ++label;
    }
    return labels;
}

ReplyGraph filtered_subgraph(const ReplyGraph& g, int64_t top_k, int64_t min_weight) {
    if (top_k < 1) throw std::invalid_argument("graph: top_k must be >= 1");

    std::map<std::string, int64_t> degree;
    for (const std::string& node : g.nodes) degree[node] = 0;
    for (const auto& [edge, w] : g.edges) {
        degree[edge.first] += w;
        degree[edge.second] += w;
    }
    std::vector<std::pair<std::string, int64_t>> ranked(degree.begin(), degree.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first; // ties resolve by ascending node id
    });
    std::set<std::string> kept;
    for (size_t i = 0; i < ranked.size() && static_cast<int64_t>(i) < top_k; ++i)
        kept.insert(ranked[i].first);

    ReplyGraph out;
    for (const auto& [edge, w] : g.edges) {
        if (w < min_weight) continue;
        if (!kept.count(edge.first) || !kept.count(edge.second)) continue;
        out.add_edge(edge.first, edge.second, w);
    }
    // isolated nodes are dropped: nodes only enter through kept edges
    return out;
}

} // namespace observatory::graph
