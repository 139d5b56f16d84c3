// Acceptance suite: runs every top-level criterion end to end and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "observatory/annotator.hpp"
#include "observatory/collector.hpp"
#include "observatory/exporter.hpp"
#include "observatory/model.hpp"
#include "observatory/parquet.hpp"
#include "observatory/replygraph.hpp"
#include "observatory/reports.hpp"
#include "observatory/riskscore.hpp"
#include "observatory/rng.hpp"
#include "observatory/simulator.hpp"
#include "observatory/store.hpp"

using namespace observatory;
namespace fs = std::filesystem;

namespace {

struct Check {
    int failures = 0;
    int checks = 0;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            detail << "\n    failed: " << what;
        }
    }

    template <typename A, typename B>
    void expect_eq(const A& a, const B& b, const std::string& what) {
        ++checks;
        if (!(a == static_cast<A>(b))) {
            ++failures;
            detail << "\n    failed: " << what << " (got " << a << ", want " << b << ")";
        }
    }
};

int g_failed_criteria = 0;

void criterion(const std::string& name, const std::function<void(Check&)>& body) {
    Check check;
    try {
        body(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("unhandled exception: ") + e.what());
    }
    if (check.failures == 0) {
        std::cout << "PASS  " << name << " (" << check.checks << " checks)\n";
    } else {
        ++g_failed_criteria;
        std::cout << "FAIL  " << name << " (" << check.failures << "/" << check.checks
                  << " checks failed)" << check.detail.str() << "\n";
    }
    std::cout.flush();
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "observatory_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

PostRecord make_post(const std::string& id, const std::string& created, const std::string& fetched,
                     int64_t score) {
    PostRecord p;
    p.id = id;
    p.agent_id = "a1";
    p.agent_name = "agent";
    p.submolt = "general";
    p.title = "title " + id;
    p.content = "body " + id;
    p.score = score;
    p.created_at = created;
    p.fetched_at = fetched;
    return p;
}

// ---------------------------------------------------------------------------
// 1. End-to-end simulator pipeline
// ---------------------------------------------------------------------------

void end_to_end_pipeline(Check& check) {
    const auto started = std::chrono::steady_clock::now();

    sim::SimConfig config;
    config.seed = 20260415;
    config.agent_count = 1'000;
    config.day_count = 10;
    config.base_daily_posts = 2'800;
    config.spike_days = {{"2026-01-30", 25'000}}; // one spike day
    config.injection_rate = 0.01;
    config.crypto_rate = 0.05;
    config.pump_rate = 0.01;
    config.duplicate_rate = 0.02;
    config.manipulation_rate = 0.02;
    config.comment_to_post_ratio = 0.4;
    config.submolt_count = 10;
    config.rate_limit = 1'000;
    auto [corpus, truth] = sim::generate_corpus(config);
    check.expect(corpus.posts.size() > 45'000 && corpus.posts.size() < 55'000,
                 "corpus size near 50k posts");
    check.expect(corpus.comments.size() > 15'000 && corpus.comments.size() < 25'000,
                 "corpus size near 20k comments");

    // collect on the default cadences over a virtual clock
    const fs::path dir = scratch_dir("pipeline");
    Store store((dir / "store.db").string());
    Timestamp clock = *parse_date(config.start_date);
    sim::SimPlatform platform(corpus, [&clock]() { return clock; });
    collect::Collector collector(platform, store, collect::PollSchedule{});
    const Timestamp end = add_days(clock, config.day_count + 1); // drain tail
    while (clock.utc_micros <= end.utc_micros) {
        collector.run_poll_cycle(clock);
        Timestamp next = collector.next_due();
        clock = next.utc_micros > clock.utc_micros ? next : add_seconds(clock, 1);
    }
    check.expect_eq(store.count(TableName::posts), static_cast<int64_t>(corpus.posts.size()),
                    "collector captured every post");
    check.expect_eq(store.count(TableName::comments), static_cast<int64_t>(corpus.comments.size()),
                    "collector captured every comment");
    check.expect_eq(platform.write_call_count(), 0, "passivity: zero write calls observed");

    // export to date partitions
    exporter::ExportOptions options;
    options.export_date = "2026-02-10";
    auto result =
        exporter::run_export(store, (dir / "export").string(), (dir / "state.json").string(), options);
    check.expect(result.failures.empty(), "export ran clean");

    // annotate from the partitions
    std::vector<PostRecord> posts;
    for (auto& [date, row] : exporter::read_all_rows((dir / "export").string(), TableName::posts))
        posts.push_back(post_from_row(row));
    std::vector<CommentRecord> comments;
    for (auto& [date, row] : exporter::read_all_rows((dir / "export").string(), TableName::comments))
        comments.push_back(comment_from_row(row));
    check.expect_eq(posts.size(), corpus.posts.size(), "partitions carry every post");
    check.expect_eq(comments.size(), corpus.comments.size(), "partitions carry every comment");

    // partition count equals a direct group-by on corpus creation dates
    std::set<std::string> corpus_dates;
    for (const PostRecord& p : corpus.posts) corpus_dates.insert(utc_date(*parse_timestamp(p.created_at)));
    check.expect_eq(exporter::list_partition_dates((dir / "export").string(), TableName::posts).size(),
                    corpus_dates.size(), "one post partition per corpus day");

    annotate::Annotator annotator;
    auto annotations = annotate::annotate_corpus(posts, comments, annotator);
    check.expect_eq(annotations.summary.at("injection"), truth.counts.at(sim::kFlagInjection),
                    "injection count equals ground truth");
    check.expect_eq(annotations.summary.at("crypto"), truth.counts.at(sim::kFlagCrypto),
                    "crypto count equals ground truth");
    check.expect_eq(annotations.summary.at("pump_dump"), truth.counts.at(sim::kFlagPumpDump),
                    "pump-and-dump count equals ground truth");
    check.expect_eq(annotations.summary.at("duplicate_spam"),
                    truth.counts.at(sim::kFlagDuplicateSpam),
                    "exact-duplicate count equals ground truth");
    check.expect_eq(annotations.summary.at("bot_comment"), truth.counts.at(sim::kFlagBotComment),
                    "bot-comment count equals ground truth");

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    check.expect(elapsed < 300.0,
                 "pipeline finished under 5 minutes (took " + std::to_string(elapsed) + "s)");
}

// ---------------------------------------------------------------------------
// 2. Exporter property suite (>= 1000 randomized property runs)
// ---------------------------------------------------------------------------

void exporter_properties(Check& check) {
    Rng rng(424242);
    const int scenarios = 200; // 5 property checks per scenario
    for (int iter = 0; iter < scenarios; ++iter) {
        const fs::path dir = scratch_dir("exporter_prop");
        Store store(":memory:");
        const int n = 1 + static_cast<int>(rng.below(35));
        std::set<std::string> ids;
        store.begin();
        for (int i = 0; i < n; ++i) {
            const std::string id = "P" + std::to_string(rng.below(50));
            Timestamp created = make_utc(2026, 3, 1 + static_cast<int>(rng.below(14)),
                                         static_cast<int>(rng.below(24)),
                                         static_cast<int>(rng.below(60)));
            Timestamp fetched = add_seconds(created, 60 + static_cast<int64_t>(rng.below(3'600)));
            store.upsert_post(make_post(id, format_timestamp(created), format_timestamp(fetched),
                                        static_cast<int64_t>(rng.below(100))));
            ids.insert(id);
        }
        store.commit();

        exporter::ExportOptions options;
        options.export_date = "2026-03-20";
        options.tables = {"posts"};
        const std::string out = (dir / "out").string();
        const std::string state_path = (dir / "state.json").string();
        auto first = exporter::run_export(store, out, state_path, options);

        // property: per-partition primary-key uniqueness
        bool unique_ok = true;
        size_t total_rows = 0;
        for (const std::string& date : exporter::list_partition_dates(out, TableName::posts)) {
            pq::Table part = exporter::read_partition(out, TableName::posts, date);
            std::set<std::string> keys;
            for (const Row& row : part.rows) {
                if (!keys.insert(std::get<std::string>(row[0])).second) unique_ok = false;
            }
            total_rows += part.rows.size();
        }
        check.expect(unique_ok, "pk uniqueness in scenario " + std::to_string(iter));

        // property: row conservation (rows across partitions = distinct keys)
        check.expect(total_rows == ids.size(), "row conservation in scenario " + std::to_string(iter));

        // property: idempotence (byte-identical second run, state included)
        std::map<std::string, std::string> bytes;
        for (const std::string& date : exporter::list_partition_dates(out, TableName::posts))
            bytes[date] =
                file_bytes(fs::path(exporter::partition_dir(out, TableName::posts)) / (date + ".parquet"));
        const std::string state_bytes = file_bytes(state_path);
        exporter::run_export(store, out, state_path, options);
        bool idempotent = file_bytes(state_path) == state_bytes;
        for (const std::string& date : exporter::list_partition_dates(out, TableName::posts)) {
            if (file_bytes(fs::path(exporter::partition_dir(out, TableName::posts)) /
                           (date + ".parquet")) != bytes[date])
                idempotent = false;
        }
        check.expect(idempotent, "idempotence in scenario " + std::to_string(iter));

        // property: backfill update-wins within the 7-day window
        auto before_state = exporter::load_state(state_path);
        const auto watermark = before_state.get(TableName::posts);
        const std::string victim = *ids.begin();
        std::vector<Row> rows = store.scan(TableName::posts);
        PostRecord updated;
        for (const Row& row : rows)
            if (std::get<std::string>(row[0]) == victim) updated = post_from_row(row);
        updated.score = 7'777;
        updated.fetched_at =
            format_timestamp(add_seconds(*watermark, 1 + static_cast<int64_t>(rng.below(86'400))));
        store.upsert_post(updated);
        exporter::run_export(store, out, state_path, options);

        bool update_present = false;
        for (const std::string& date : exporter::list_partition_dates(out, TableName::posts)) {
            pq::Table part = exporter::read_partition(out, TableName::posts, date);
            for (const Row& row : part.rows) {
                if (std::get<std::string>(row[0]) == victim &&
                    std::get<int64_t>(row[7]) == 7'777)
                    update_present = true;
            }
        }
        check.expect(update_present, "backfill update-wins in scenario " + std::to_string(iter));

        // property: watermark monotonicity across all three runs
        auto after_state = exporter::load_state(state_path);
        const auto new_watermark = after_state.get(TableName::posts);
        check.expect(watermark.has_value() && new_watermark.has_value() &&
                         !(*new_watermark < *watermark),
                     "watermark monotonicity in scenario " + std::to_string(iter));
    }
}

// ---------------------------------------------------------------------------
// 3. Rate-budget math
// ---------------------------------------------------------------------------

void rate_budget(Check& check) {
    check.expect_eq(collect::capture_budget(50, 120), 36'000, "capture_budget(50, 120s)");
    const double coverage = collect::estimate_coverage(371'085, 36'000);
    check.expect(coverage < 0.10, "spike-day coverage below 10%");
    check.expect(coverage > 0.0, "spike-day coverage positive");
    check.expect_eq(collect::capture_budget(1, 86'400), 1, "one page per day");
    check.expect(collect::estimate_coverage(20'421, 36'000) == 1.0, "steady-state coverage capped at 1");
    check.expect(collect::estimate_coverage(0, 36'000) == 1.0, "zero-volume coverage is 1");
}

// ---------------------------------------------------------------------------
// 4. Risk-score suite
// ---------------------------------------------------------------------------

void risk_scores(Check& check) {
    risk::RiskIndicators ones;
    ones.injection_rate = ones.duplicate_rate = ones.crypto_rate = ones.manipulation_count_norm =
        ones.abnormal_frequency = ones.repetitiveness = ones.submolt_concentration =
            ones.self_interaction_rate = 1.0;
    check.expect(risk::composite_score(ones) == 100.0, "all-ones scores exactly 100");
    check.expect(risk::composite_score(risk::RiskIndicators{}) == 0.0, "all-zero scores exactly 0");
    risk::RiskIndicators two;
    two.injection_rate = 1.0;
    two.duplicate_rate = 1.0;
    check.expect(risk::composite_score(two) == 40.0, "injection+duplicate scores exactly 40");

    check.expect(risk::assign_tier(14.999999) == risk::Tier::low, "tier boundary below 15");
    check.expect(risk::assign_tier(15.0) == risk::Tier::moderate, "tier boundary at 15");
    check.expect(risk::assign_tier(34.999999) == risk::Tier::moderate, "tier boundary below 35");
    check.expect(risk::assign_tier(35.0) == risk::Tier::high, "tier boundary at 35");
    check.expect(risk::assign_tier(59.999999) == risk::Tier::high, "tier boundary below 60");
    check.expect(risk::assign_tier(60.0) == risk::Tier::critical, "tier boundary at 60");

    // census partition + brute-force oracle on synthetic populations
    Rng seeds(7);
    for (int round = 0; round < 3; ++round) {
        sim::SimConfig config;
        config.seed = 1000 + static_cast<uint64_t>(round);
        config.agent_count = 40;
        config.day_count = 2;
        config.base_daily_posts = 230 + static_cast<int64_t>(seeds.below(200));
        config.injection_rate = 0.02 * round;
        config.crypto_rate = 0.05;
        config.pump_rate = 0.01;
        config.duplicate_rate = 0.04;
        config.manipulation_rate = 0.03;
        config.comment_to_post_ratio = 0.5;
        auto [corpus, truth] = sim::generate_corpus(config);
        annotate::Annotator annotator;
        auto ann = annotate::annotate_corpus(corpus.posts, corpus.comments, annotator);
        auto scores =
            risk::score_population(corpus.posts, corpus.comments, ann.posts, ann.comments);

        check.expect(scores.census.tier_total() == scores.census.eligible,
                     "tier census partitions eligible agents (round " + std::to_string(round) + ")");
        check.expect(scores.census.eligible + scores.census.ineligible ==
                         static_cast<int64_t>(scores.profiles.size()),
                     "census covers every agent (round " + std::to_string(round) + ")");

        // brute-force recomputation to 1e-9
        std::map<std::string, const annotate::PostAnnotation*> pann;
        for (const auto& a : ann.posts) pann[a.id] = &a;
        std::map<std::string, const annotate::CommentAnnotation*> cann;
        for (const auto& a : ann.comments) cann[a.id] = &a;
        std::map<std::string, const PostRecord*> post_by_id;
        for (const auto& p : corpus.posts) post_by_id[p.id] = &p;

        bool oracle_ok = true;
        for (const risk::RiskProfile& profile : scores.profiles) {
            std::vector<const PostRecord*> agent_posts;
            for (const auto& p : corpus.posts)
                if (p.agent_id == profile.agent_id) agent_posts.push_back(&p);
            if (agent_posts.size() < 2) {
                if (profile.eligible) oracle_ok = false;
                continue;
            }
            const double n_posts = static_cast<double>(agent_posts.size());
            double inj = 0, dup = 0, cry = 0;
            for (const auto* p : agent_posts) {
                if (pann.at(p->id)->injection) inj += 1;
                if (pann.at(p->id)->duplicate_spam) dup += 1;
                if (pann.at(p->id)->crypto) cry += 1;
            }
            double manip = 0, self_comments = 0, total_comments = 0;
            for (const auto& cm : corpus.comments) {
                if (cm.agent_id != profile.agent_id) continue;
                total_comments += 1;
                if (cann.at(cm.id)->manipulation) manip += 1;
                auto it = post_by_id.find(cm.post_id);
                if (it != post_by_id.end() && it->second->agent_id == cm.agent_id) self_comments += 1;
            }
            std::set<std::string> days;
            std::map<std::string, int64_t> submolts;
            std::map<std::string, int64_t> tokens;
            int64_t token_total = 0;
            for (const auto* p : agent_posts) {
                days.insert(utc_date(*parse_timestamp(p->created_at)));
                submolts[p->submolt] += 1;
                std::string token;
                for (char ch : p->content + " ") {
                    if (std::isspace(static_cast<unsigned char>(ch))) {
                        if (!token.empty()) tokens[token] += 1, ++token_total, token.clear();
                    } else {
                        token.push_back(
                            static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
                    }
                }
            }
            double entropy = 0;
            for (auto& [_, cnt] : tokens) {
                const double p = double(cnt) / double(token_total);
                entropy -= p * std::log(p);
            }
            const double rep =
                tokens.size() <= 1 ? 0.0
                                   : std::max(0.0, std::min(1.0, 1.0 - entropy / std::log(double(tokens.size()))));
            int64_t max_submolt = 0;
            for (auto& [_, cnt] : submolts) max_submolt = std::max(max_submolt, cnt);
            const double expected = 25.0 * (inj / n_posts) + 15.0 * (dup / n_posts) +
                12.0 * (cry / n_posts) + 10.0 * std::min(1.0, manip / 10.0) +
                10.0 * std::min(1.0, n_posts / double(days.size()) / 200.0) + 10.0 * rep +
                10.0 * (double(max_submolt) / n_posts) +
                8.0 * (total_comments == 0 ? 0.0 : self_comments / total_comments);
            if (!profile.score || std::abs(*profile.score - expected) > 1e-9) oracle_ok = false;
        }
        check.expect(oracle_ok, "brute-force oracle matches to 1e-9 (round " + std::to_string(round) + ")");
    }
}

// ---------------------------------------------------------------------------
// 5. Graph suite
// ---------------------------------------------------------------------------

void graph_suite(Check& check) {
    Rng rng(5150);
    int exact_failures = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const size_t n_agents = 2 + rng.below(49); // at most 50 nodes
        std::vector<PostRecord> posts;
        for (size_t p = 0; p < n_agents; ++p) {
            PostRecord post;
            post.id = "P" + std::to_string(p);
            post.agent_id = "a" + std::to_string(p);
            post.agent_name = post.agent_id;
            post.submolt = "s";
            post.title = "t";
            post.content = "c";
            post.created_at = "2026-02-09T10:00:00+00:00";
            post.fetched_at = post.created_at;
            posts.push_back(post);
        }
        std::vector<CommentRecord> comments;
        const size_t n_comments = rng.below(120);
        std::set<std::string> bot_agents;
        for (size_t c = 0; c < n_comments; ++c) {
            CommentRecord cm;
            cm.id = "C" + std::to_string(c);
            const size_t commenter = rng.below(n_agents);
            cm.agent_id = "a" + std::to_string(commenter);
            cm.agent_name = cm.agent_id;
            cm.post_id = rng.chance(0.08) ? "P_missing" : "P" + std::to_string(rng.below(n_agents));
            cm.content = "c";
            cm.created_at = "2026-02-09T11:00:00+00:00";
            cm.fetched_at = cm.created_at;
            comments.push_back(cm);
            if (rng.chance(0.1)) bot_agents.insert(cm.agent_id);
        }

        graph::ReplyGraph g = graph::build_graph(posts, comments);
        graph::GraphMetrics m = graph::graph_metrics(g, bot_agents);

        // adjacency-matrix brute force
        std::map<std::string, std::map<std::string, int64_t>> adj;
        int64_t self_tally = 0, unresolved = 0;
        std::map<std::string, int64_t> by_agent, self_by_agent;
        for (const CommentRecord& cm : comments) {
            by_agent[cm.agent_id] += 1;
            bool found = false;
            std::string author;
            for (const PostRecord& p : posts)
                if (p.id == cm.post_id) {
                    found = true;
                    author = p.agent_id;
                }
            if (!found) {
                ++unresolved;
                continue;
            }
            if (author == cm.agent_id) {
                ++self_tally;
                self_by_agent[cm.agent_id] += 1;
                continue;
            }
            adj[cm.agent_id][author] += 1;
        }
        std::set<std::string> nodes;
        int64_t edges = 0, weight_total = 0;
        for (const auto& [src, row] : adj) {
            for (const auto& [dst, w] : row) {
                nodes.insert(src);
                nodes.insert(dst);
                ++edges;
                weight_total += w;
            }
        }
        int64_t reciprocal = 0, adjacent = 0;
        for (const auto& [src, row] : adj) {
            for (const auto& [dst, w] : row) {
                if (src < dst) {
                    ++adjacent;
                    if (adj.count(dst) && adj.at(dst).count(src)) ++reciprocal;
                } else if (!adj.count(dst) || !adj.at(dst).count(src)) {
                    ++adjacent; // one-directional edge seen from the larger id
                }
            }
        }
        const double density = nodes.size() >= 2
            ? double(edges) / (double(nodes.size()) * double(nodes.size() - 1))
            : 0.0;

        int64_t self_total = 0, bot_total = 0, overlap = 0;
        for (const auto& [agent, cnt] : self_by_agent) self_total += cnt;
        for (const auto& [agent, cnt] : by_agent) {
            if (bot_agents.count(agent)) {
                bot_total += cnt;
                auto it = self_by_agent.find(agent);
                if (it != self_by_agent.end()) overlap += it->second;
            }
        }
        const double total = double(comments.size());
        const double self_rate = comments.empty() ? 0.0 : self_total / total;
        const double bot_rate = comments.empty() ? 0.0 : bot_total / total;
        const double organic = comments.empty()
            ? 0.0
            : (total - double(self_total + bot_total - overlap)) / total;

        bool ok = m.node_count == static_cast<int64_t>(nodes.size()) && m.edge_count == edges &&
            m.reciprocal_pairs == reciprocal && m.density == density && m.self_rate == self_rate &&
            m.bot_rate == bot_rate && m.organic_ratio == organic;

        // weighted degree oracle
        for (const std::string& node : nodes) {
            int64_t expected = 0;
            for (const auto& [src, row] : adj)
                for (const auto& [dst, w] : row) {
                    if (src == node) expected += w;
                    if (dst == node) expected += w;
                }
            if (g.weighted_degree(node) != expected) ok = false;
        }

        // conservation
        int64_t g_weight = 0;
        for (const auto& [_, w] : g.edges) g_weight += w;
        if (g_weight + g.self_comment_tally + g.unresolved_comments !=
            static_cast<int64_t>(comments.size()))
            ok = false;
        if (g_weight != weight_total || g.self_comment_tally != self_tally ||
            g.unresolved_comments != unresolved)
            ok = false;
        if (!ok) ++exact_failures;
    }
    check.expect(exact_failures == 0,
                 "200 random graphs match the adjacency-matrix oracle exactly (" +
                     std::to_string(exact_failures) + " failed)");

    // conservation on a simulator run
    sim::SimConfig config;
    config.seed = 31337;
    config.agent_count = 80;
    config.day_count = 2;
    config.base_daily_posts = 300;
    config.comment_to_post_ratio = 0.7;
    config.orphan_comment_count = 4;
    auto [corpus, truth] = sim::generate_corpus(config);
    graph::ReplyGraph g = graph::build_graph(corpus.posts, corpus.comments);
    int64_t weight_sum = 0;
    for (const auto& [_, w] : g.edges) weight_sum += w;
    check.expect(weight_sum + g.self_comment_tally + g.unresolved_comments ==
                     static_cast<int64_t>(corpus.comments.size()),
                 "edge-weight conservation on a simulator corpus");

    // two-clique fixture
    graph::ReplyGraph cliques;
    const std::vector<std::string> left = {"a1", "a2", "a3", "a4"};
    const std::vector<std::string> right = {"b1", "b2", "b3", "b4"};
    for (const auto& group : {left, right})
        for (size_t i = 0; i < group.size(); ++i)
            for (size_t j = i + 1; j < group.size(); ++j) cliques.add_edge(group[i], group[j]);
    cliques.add_edge("a1", "b1");
    auto labels = graph::detect_communities(cliques);
    std::set<int64_t> distinct;
    for (const auto& [_, label] : labels) distinct.insert(label);
    check.expect(distinct.size() == 2, "two joined 4-cliques yield exactly 2 communities");
    std::set<int64_t> left_labels;
    for (const auto& node : left) left_labels.insert(labels.at(node));
    check.expect(left_labels.size() == 1, "left clique is one community");
}

// ---------------------------------------------------------------------------
// 6. Consistency checks
// ---------------------------------------------------------------------------

void consistency_checks(Check& check) {
    Rng rng(606);
    for (int round = 0; round < 5; ++round) {
        const int64_t k = static_cast<int64_t>(rng.below(12));
        sim::SimConfig config;
        config.seed = 9'000 + static_cast<uint64_t>(round);
        config.agent_count = 20;
        config.day_count = 1;
        config.base_daily_posts = 100;
        config.comment_to_post_ratio = 0.5;
        config.orphan_comment_count = k;
        auto [corpus, truth] = sim::generate_corpus(config);
        auto report = reports::check_consistency(corpus.posts, corpus.comments);
        check.expect(report.orphan_comments == k,
                     "exactly k orphans reported (k=" + std::to_string(k) + ")");
        check.expect(report.linked_comments + report.orphan_comments == report.comment_total,
                     "linked + orphans = total (round " + std::to_string(round) + ")");
    }
}

// ---------------------------------------------------------------------------
// 7. Sentiment partition property
// ---------------------------------------------------------------------------

void sentiment_partition(Check& check) {
    annotate::Annotator annotator;

    for (uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        sim::SimConfig config;
        config.seed = seed;
        config.agent_count = 25;
        config.day_count = 1;
        config.base_daily_posts = 200;
        config.crypto_rate = 0.1;
        config.comment_to_post_ratio = 0.3;
        auto [corpus, truth] = sim::generate_corpus(config);
        auto ann = annotate::annotate_corpus(corpus.posts, corpus.comments, annotator);
        check.expect(ann.summary.at("sentiment_positive") + ann.summary.at("sentiment_neutral") +
                             ann.summary.at("sentiment_negative") ==
                         static_cast<int64_t>(corpus.posts.size()),
                     "classes partition the corpus (seed " + std::to_string(seed) + ")");
    }

    auto empty = annotate::annotate_corpus({}, {}, annotator);
    check.expect(empty.sentiment_mean == 0.0, "empty corpus mean defined as 0");

    annotate::SocialLexiconEstimator social;
    annotate::ConservativeLexiconEstimator conservative;
    const std::string samples[] = {
        "I love this, great work!", "terrible awful scam", "neutral words about gardens",
        "not good, not bad", "",
    };
    bool symmetric = true;
    for (const std::string& text : samples) {
        auto ab = annotate::composite_sentiment(text, social, conservative);
        auto ba = annotate::composite_sentiment(text, conservative, social);
        if (ab.score != ba.score || ab.cls != ba.cls) symmetric = false;
    }
    check.expect(symmetric, "swapping estimator order changes nothing");
}

// ---------------------------------------------------------------------------
// 8. Optional real-archive fixture
// ---------------------------------------------------------------------------

void archive_fixture(Check& check, const char* fixture) {
    const std::string dir = fixture;
    std::vector<PostRecord> posts;
    for (auto& [date, row] : exporter::read_all_rows(dir, TableName::posts))
        posts.push_back(post_from_row(row));
    std::vector<CommentRecord> comments;
    for (auto& [date, row] : exporter::read_all_rows(dir, TableName::comments))
        comments.push_back(comment_from_row(row));

    auto consistency = reports::check_consistency(posts, comments);
    check.expect_eq(consistency.orphan_comments, 33, "fixture: orphan comments");
    check.expect_eq(consistency.posts_with_archived_comments, 173'157,
                    "fixture: posts with archived comments");
    check.expect_eq(consistency.posts_claiming_comments, 728'759, "fixture: posts claiming comments");

    // partition counts per table
    const int64_t expected_parts[6] = {78, 78, 73, 70, 14, 14};
    const TableName tables[6] = {TableName::agents,    TableName::posts,
                                 TableName::comments,  TableName::submolts,
                                 TableName::snapshots, TableName::word_frequency};
    for (int i = 0; i < 6; ++i) {
        check.expect_eq(
            static_cast<int64_t>(exporter::list_partition_dates(dir, tables[i]).size()),
            expected_parts[i], std::string("fixture: partitions for ") + to_string(tables[i]));
    }

    annotate::Annotator annotator;
    auto ann = annotate::annotate_corpus(posts, comments, annotator);
    check.expect_eq(ann.summary.at("duplicate_spam"), 374'844, "fixture: duplicate spam posts");
    check.expect_eq(ann.summary.at("bot_comment"), 224'792, "fixture: bot comments");
    check.expect_eq(ann.summary.at("sentiment_positive") + ann.summary.at("sentiment_neutral") +
                        ann.summary.at("sentiment_negative"),
                    2'615'098, "fixture: sentiment classes sum to the post count");

    auto scores = risk::score_population(posts, comments, ann.posts, ann.comments);
    check.expect_eq(scores.census.eligible, 125'692, "fixture: tier census sums to eligible agents");

    // pattern-dependent rows are reported, not asserted
    std::cout << "  fixture pattern-dependent counts (informational): injection="
              << ann.summary.at("injection") << " crypto=" << ann.summary.at("crypto")
              << " pump_dump=" << ann.summary.at("pump_dump") << "\n";
}

} // namespace

int main() {
    std::cout << "observatory acceptance suite\n";
    criterion("end-to-end simulator pipeline (collect -> export -> annotate, exact truth counts)",
              end_to_end_pipeline);
    criterion("exporter property suite (1000 randomized property runs)", exporter_properties);
    criterion("rate-budget math (36000 budget, <10% spike coverage)", rate_budget);
    criterion("risk-score suite (weights, tiers, census partition, 1e-9 oracle)", risk_scores);
    criterion("graph suite (200 random graphs vs adjacency oracle, conservation, 2 cliques)",
              graph_suite);
    criterion("consistency checks (k dangling comments -> k orphans)", consistency_checks);
    criterion("sentiment partition property (classes partition, empty mean 0, order symmetry)",
              sentiment_partition);

    if (const char* fixture = std::getenv("OBSERVATORY_ARCHIVE_FIXTURE")) {
        criterion("real-archive fixture (exact published-snapshot statistics)",
                  [fixture](Check& check) { archive_fixture(check, fixture); });
    } else {
        std::cout << "SKIP  real-archive fixture (set OBSERVATORY_ARCHIVE_FIXTURE to enable)\n";
    }

    if (g_failed_criteria == 0) {
        std::cout << "all acceptance criteria passed\n";
    } else {
        std::cout << g_failed_criteria << " acceptance criteria FAILED\n";
    }
    return g_failed_criteria;
}
