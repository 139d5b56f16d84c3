#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "observatory/model.hpp"

namespace observatory::graph {

/// Directed weighted agent-interaction graph. An edge A -> B means A
/// commented on a post by B; self-comments never become edges and are
/// tallied separately.
struct ReplyGraph {
    std::set<std::string> nodes;
    std::map<std::pair<std::string, std::string>, int64_t> edges; // (src, dst) -> weight
    int64_t self_comment_tally = 0;
    int64_t unresolved_comments = 0; // post_id not found
    int64_t total_comments = 0;
    // per-agent engagement tallies used for the organic/self/bot split
    std::map<std::string, int64_t> comments_by_agent;
    std::map<std::string, int64_t> self_comments_by_agent;

    void add_edge(const std::string& from, const std::string& to, int64_t weight = 1);
    int64_t weighted_degree(const std::string& node) const; // in + out
};

ReplyGraph build_graph(const std::vector<PostRecord>& posts,
                       const std::vector<CommentRecord>& comments);

struct GraphMetrics {
    int64_t node_count = 0;
    int64_t edge_count = 0;
    double density = 0.0; // E / (N * (N - 1)), 0 below 2 nodes
    int64_t reciprocal_pairs = 0;
    double reciprocity_rate = 0.0; // reciprocal pairs / unordered adjacent pairs
    std::vector<int64_t> community_sizes; // non-increasing
    int64_t community_count = 0;
    double organic_ratio = 0.0; // comments neither self-directed nor bot-authored
    double self_rate = 0.0;
    double bot_rate = 0.0;
};

GraphMetrics graph_metrics(const ReplyGraph& g, const std::set<std::string>& bot_agents);

/// Agglomerative greedy modularity maximization on the undirected
/// projection (weights summed across directions). Merges the pair with the
/// largest positive modularity gain until none remains; ties resolve to
/// the lexicographically smallest community-representative pair.
std::map<std::string, int64_t> detect_communities(const ReplyGraph& g);

/// Top-k nodes by weighted degree (ties by ascending node id), edges below
/// min_weight dropped, then isolated nodes dropped.
ReplyGraph filtered_subgraph(const ReplyGraph& g, int64_t top_k = 300, int64_t min_weight = 2);

} // namespace observatory::graph
