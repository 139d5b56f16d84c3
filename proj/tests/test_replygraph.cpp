#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "observatory/replygraph.hpp"
#include "observatory/rng.hpp"

using namespace observatory;
using namespace observatory::graph;

namespace {

PostRecord mk_post(const std::string& id, const std::string& agent) {
    PostRecord p;
    p.id = id;
    p.agent_id = agent;
    p.agent_name = agent;
    p.submolt = "s";
    p.title = "t";
    p.content = "c";
    p.created_at = "2026-02-09T10:00:00+00:00";
    p.fetched_at = p.created_at;
    return p;
}

CommentRecord mk_comment(const std::string& id, const std::string& agent, const std::string& post) {
    CommentRecord c;
    c.id = id;
    c.agent_id = agent;
    c.agent_name = agent;
    c.post_id = post;
    c.content = "body";
    c.created_at = "2026-02-09T11:00:00+00:00";
    c.fetched_at = c.created_at;
    return c;
}

} // namespace

TEST_CASE("edges aggregate comment interactions by (commenter, author)") {
    std::vector<PostRecord> posts = {mk_post("P1", "B")};
    std::vector<CommentRecord> comments = {
        mk_comment("C1", "A", "P1"),
        mk_comment("C2", "A", "P1"),
    };
    ReplyGraph g = build_graph(posts, comments);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges.at({"A", "B"}) == 2);
    CHECK(g.nodes == std::set<std::string>{"A", "B"});
    CHECK(g.self_comment_tally == 0);
}

TEST_CASE("self comments are tallied, never edges") {
    std::vector<PostRecord> posts = {mk_post("P1", "A")};
    std::vector<CommentRecord> comments = {mk_comment("C1", "A", "P1")};
    ReplyGraph g = build_graph(posts, comments);
    CHECK(g.edges.empty());
    CHECK(g.nodes.empty());
    CHECK(g.self_comment_tally == 1);
}

TEST_CASE("unresolvable comments are skipped and counted") {
    std::vector<PostRecord> posts = {mk_post("P1", "A")};
    std::vector<CommentRecord> comments = {
        mk_comment("C1", "B", "P1"),
        mk_comment("C2", "B", "P_missing"),
    };
    ReplyGraph g = build_graph(posts, comments);
    CHECK(g.edges.size() == 1);
    CHECK(g.unresolved_comments == 1);
    CHECK(g.total_comments == 2);
}

TEST_CASE("empty comment set yields an empty graph") {
    ReplyGraph g = build_graph({mk_post("P1", "A")}, {});
    CHECK(g.nodes.empty());
    CHECK(g.edges.empty());
    auto m = graph_metrics(g, {});
    CHECK(m.density == 0.0);
    CHECK(m.node_count == 0);
}

TEST_CASE("density and reciprocal pairs on a 3-node fixture") {
    ReplyGraph g;
    g.add_edge("A", "B");
    g.add_edge("B", "A");
    g.nodes.insert("C");
    auto m = graph_metrics(g, {});
    CHECK(m.node_count == 3);
    CHECK(m.edge_count == 2);
    CHECK(m.density == doctest::Approx(2.0 / 6.0));
    CHECK(m.reciprocal_pairs == 1);
    CHECK(m.reciprocity_rate == doctest::Approx(1.0));
}

TEST_CASE("edge-weight conservation: weights + self + unresolved = comments") {
    Rng rng(9);
    for (int iter = 0; iter < 30; ++iter) {
        std::vector<PostRecord> posts;
        for (int p = 0; p < 12; ++p)
            posts.push_back(mk_post("P" + std::to_string(p), "a" + std::to_string(rng.below(6))));
        std::vector<CommentRecord> comments;
        for (int c = 0; c < 80; ++c) {
            std::string post = rng.chance(0.1) ? "P_missing" : "P" + std::to_string(rng.below(12));
            comments.push_back(mk_comment("C" + std::to_string(c), "a" + std::to_string(rng.below(6)), post));
        }
        ReplyGraph g = build_graph(posts, comments);
        int64_t weight_sum = 0;
        for (const auto& [_, w] : g.edges) weight_sum += w;
        CHECK(weight_sum + g.self_comment_tally + g.unresolved_comments ==
              static_cast<int64_t>(comments.size()));
    }
}

// Brute-force oracle over the adjacency matrix for random graphs.
TEST_CASE("metrics match an adjacency-matrix oracle on random graphs") {
    Rng rng(10);
    for (int iter = 0; iter < 60; ++iter) {
        const size_t n = 2 + rng.below(20);
        std::vector<std::vector<int64_t>> adj(n, std::vector<int64_t>(n, 0));
        ReplyGraph g;
        for (size_t i = 0; i < n; ++i) g.nodes.insert("n" + std::to_string(i));
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                if (rng.chance(0.15)) {
                    adj[i][j] = 1 + static_cast<int64_t>(rng.below(4));
                    g.add_edge("n" + std::to_string(i), "n" + std::to_string(j), adj[i][j]);
                }
            }
        }
        auto m = graph_metrics(g, {});

        int64_t edges = 0, reciprocal = 0, adjacent = 0;
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                if (adj[i][j] > 0) ++edges;
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                if (adj[i][j] > 0 || adj[j][i] > 0) ++adjacent;
                if (adj[i][j] > 0 && adj[j][i] > 0) ++reciprocal;
            }
        }
        CHECK(m.edge_count == edges);
        CHECK(m.reciprocal_pairs == reciprocal);
        CHECK(m.density ==
              doctest::Approx(static_cast<double>(edges) / (double(n) * double(n - 1))));
        if (adjacent > 0)
            CHECK(m.reciprocity_rate == doctest::Approx(double(reciprocal) / double(adjacent)));

        // weighted degree oracle
        for (size_t i = 0; i < n; ++i) {
            int64_t expected = 0;
            for (size_t j = 0; j < n; ++j) expected += adj[i][j] + adj[j][i];
            CHECK(g.weighted_degree("n" + std::to_string(i)) == expected);
        }
    }
}

// ---------------------------------------------------------------------------
// Communities
// ---------------------------------------------------------------------------

namespace {

/// Exhaustive modularity over every 2-partition of the undirected
/// projection, used as the oracle for the two-clique fixture.
double modularity_of_partition(const std::map<std::pair<std::string, std::string>, int64_t>& edges,
                               const std::map<std::string, int>& side) {
    std::map<std::pair<std::string, std::string>, double> undirected;
    std::map<std::string, double> degree;
    double total = 0;
    for (const auto& [e, w] : edges) {
        auto key = e.first < e.second ? e : std::make_pair(e.second, e.first);
        undirected[key] += w;
        degree[e.first] += w;
        degree[e.second] += w;
        total += w;
    }
    double q = 0;
    for (const auto& [e, w] : undirected)
        if (side.at(e.first) == side.at(e.second)) q += w / total;
    std::map<int, double> side_degree;
    for (const auto& [node, d] : degree) side_degree[side.at(node)] += d;
    for (const auto& [_, d] : side_degree) q -= (d / (2 * total)) * (d / (2 * total));
    return q;
}

} // namespace

TEST_CASE("two 4-cliques joined by one edge split into two communities") {
    ReplyGraph g;
    const std::vector<std::string> left = {"a1", "a2", "a3", "a4"};
    const std::vector<std::string> right = {"b1", "b2", "b3", "b4"};
    for (const auto& group : {left, right})
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j) g.add_edge(group[i], group[j]);
    g.add_edge("a1", "b1");

    auto labels = detect_communities(g);
    std::set<int64_t> left_labels, right_labels;
    for (const auto& node : left) left_labels.insert(labels.at(node));
    for (const auto& node : right) right_labels.insert(labels.at(node));
    CHECK(left_labels.size() == 1);
    CHECK(right_labels.size() == 1);
    CHECK(*left_labels.begin() != *right_labels.begin());

    // oracle: the clique split maximizes modularity over all 2-partitions
    const std::vector<std::string> nodes = {"a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"};
    double best = -1;
    std::map<std::string, int> best_side;
    for (int mask = 0; mask < 256; ++mask) {
        std::map<std::string, int> side;
        for (int i = 0; i < 8; ++i) side[nodes[static_cast<size_t>(i)]] = (mask >> i) & 1;
        const double q = modularity_of_partition(g.edges, side);
        if (q > best) {
            best = q;
            best_side = side;
        }
    }
    std::set<int> oracle_left, oracle_right;
    for (const auto& node : left) oracle_left.insert(best_side.at(node));
    for (const auto& node : right) oracle_right.insert(best_side.at(node));
    CHECK(oracle_left.size() == 1);
    CHECK(oracle_right.size() == 1);
    CHECK(*oracle_left.begin() != *oracle_right.begin());
}

TEST_CASE("a single edge forms one community") {
    ReplyGraph g;
    g.add_edge("A", "B");
    auto labels = detect_communities(g);
    REQUIRE(labels.size() == 2);
    CHECK(labels.at("A") == labels.at("B"));
}

TEST_CASE("edgeless nodes stay in singleton communities") {
    ReplyGraph g;
    g.nodes = {"A", "B", "C"};
    auto labels = detect_communities(g);
    REQUIRE(labels.size() == 3);
    std::set<int64_t> distinct;
    for (const auto& [_, label] : labels) distinct.insert(label);
    CHECK(distinct.size() == 3);

    CHECK(detect_communities(ReplyGraph{}).empty());
}

TEST_CASE("community labels partition the node set deterministically") {
    Rng rng(11);
    ReplyGraph g;
    for (int i = 0; i < 25; ++i) {
        g.add_edge("n" + std::to_string(rng.below(12)), "m" + std::to_string(rng.below(12)),
                   1 + static_cast<int64_t>(rng.below(3)));
    }
    auto first = detect_communities(g);
    auto second = detect_communities(g);
    CHECK(first == second);
    for (const std::string& node : g.nodes) CHECK(first.count(node) == 1);

    auto m = graph_metrics(g, {});
    int64_t labeled = 0;
    for (int64_t size : m.community_sizes) labeled += size;
    CHECK(labeled == m.node_count);
    for (size_t i = 1; i < m.community_sizes.size(); ++i)
        CHECK(m.community_sizes[i - 1] >= m.community_sizes[i]);
}

// ---------------------------------------------------------------------------
// Filtered subgraph
// ---------------------------------------------------------------------------

TEST_CASE("filtered subgraph keeps the top-k nodes by weighted degree") {
    ReplyGraph g;
    g.add_edge("hub1", "hub2", 10);
    g.add_edge("hub2", "hub1", 8);
    g.add_edge("hub1", "minor", 1);
    g.add_edge("minor", "tiny", 1);

    ReplyGraph sub = filtered_subgraph(g, 2, 2);
    CHECK(sub.nodes == std::set<std::string>{"hub1", "hub2"});
    CHECK(sub.edges.size() == 2);
    CHECK(sub.edges.at({"hub1", "hub2"}) == 10);
}

TEST_CASE("edges below min_weight vanish and isolated nodes drop") {
    ReplyGraph g;
    g.add_edge("A", "B", 1);
    g.add_edge("B", "C", 1);
    ReplyGraph sub = filtered_subgraph(g, 300, 2);
    CHECK(sub.edges.empty());
    CHECK(sub.nodes.empty());
}

TEST_CASE("degree ties resolve by ascending node id") {
    ReplyGraph g;
    g.add_edge("zeta", "beta", 2);
    g.add_edge("alpha", "gamma", 2);
    // all four nodes have weighted degree 2; top 2 must be alpha, beta
    ReplyGraph sub = filtered_subgraph(g, 2, 1);
    // alpha and beta are not connected to each other, so no edges survive
    CHECK(sub.nodes.empty());

    ReplyGraph g2;
    g2.add_edge("alpha", "beta", 2);
    g2.add_edge("zeta", "eta", 2);
    ReplyGraph sub2 = filtered_subgraph(g2, 2, 1);
    CHECK(sub2.nodes == std::set<std::string>{"alpha", "beta"});
}

TEST_CASE("engagement ratios split organic, self, and bot comments") {
    std::vector<PostRecord> posts = {mk_post("P1", "A"), mk_post("P2", "B")};
    std::vector<CommentRecord> comments = {
        mk_comment("C1", "A", "P1"), // self
        mk_comment("C2", "bot", "P1"),
        mk_comment("C3", "bot", "P2"),
        mk_comment("C4", "C", "P2"), // organic
        mk_comment("C5", "A", "P2"), // organic (A on B's post)
    };
    ReplyGraph g = build_graph(posts, comments);
    auto m = graph_metrics(g, {"bot"});
    CHECK(m.self_rate == doctest::Approx(0.2));
    CHECK(m.bot_rate == doctest::Approx(0.4));
    CHECK(m.organic_ratio == doctest::Approx(0.4));

    // a bot self-commenting lands in the overlap, not double-counted
    comments.push_back(mk_comment("C6", "A", "P1"));
    ReplyGraph g2 = build_graph(posts, comments);
    auto m2 = graph_metrics(g2, {"A"});
    // A authored C1, C5, C6: all bot; C1 and C6 also self
    CHECK(m2.bot_rate == doctest::Approx(3.0 / 6.0));
    CHECK(m2.self_rate == doctest::Approx(2.0 / 6.0));
    CHECK(m2.organic_ratio == doctest::Approx(1.0 - 3.0 / 6.0));
}
