#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include "observatory/annotator.hpp"
#include "observatory/collector.hpp"
#include "observatory/exporter.hpp"
#include "observatory/http_source.hpp"
#include "observatory/model.hpp"
#include "observatory/replygraph.hpp"
#include "observatory/reports.hpp"
#include "observatory/riskscore.hpp"
#include "observatory/simulator.hpp"
#include "observatory/store.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace observatory;

namespace {

Timestamp wall_clock_now() {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    Timestamp ts;
    ts.utc_micros = std::chrono::duration_cast<std::chrono::microseconds>(now).count();
    return ts;
}

std::string today_utc() { return utc_date(wall_clock_now()); }

std::vector<PostRecord> posts_from_partitions(const std::string& dir) {
    std::vector<PostRecord> posts;
    for (auto& [date, row] : exporter::read_all_rows(dir, TableName::posts))
        posts.push_back(post_from_row(row));
    return posts;
}

std::vector<CommentRecord> comments_from_partitions(const std::string& dir) {
    std::vector<CommentRecord> comments;
    for (auto& [date, row] : exporter::read_all_rows(dir, TableName::comments))
        comments.push_back(comment_from_row(row));
    return comments;
}

annotate::PatternSet load_patterns(const std::string& path) {
    if (path.empty()) return annotate::PatternSet::builtin();
    return annotate::PatternSet::from_file(path);
}

int run_simulate(const sim::SimConfig& config, const std::vector<std::string>& spikes,
                 const std::string& out_dir) {
    sim::SimConfig c = config;
    for (const std::string& spec : spikes) {
        const size_t colon = spec.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--spike expects DATE:POST_COUNT");
        c.spike_days.push_back({spec.substr(0, colon), std::stoll(spec.substr(colon + 1))});
    }
    auto [corpus, truth] = sim::generate_corpus(c);
    sim::write_corpus(corpus, truth, out_dir);
    std::cout << "corpus: " << corpus.agents.size() << " agents, " << corpus.posts.size()
              << " posts, " << corpus.comments.size() << " comments, " << corpus.submolts.size()
              << " submolts -> " << out_dir << "\n";
    for (const auto& [flag, count] : truth.counts)
        std::cout << "  truth." << flag << " = " << count << "\n";
    return 0;
}

int run_collect(const std::string& store_path, const std::string& source_spec,
                int64_t duration_seconds, const std::string& config_path) {
    collect::PollSchedule schedule;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw CLI::ValidationError("cannot read config: " + config_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        schedule = collect::schedule_from_config(text);
    }

    Store store(store_path);

    auto finish = [&](collect::Collector& collector) {
        std::cout << "collected: posts=" << collector.total_fetched("posts")
                  << " comments=" << collector.total_fetched("comments")
                  << " agents=" << collector.total_fetched("agents")
                  << " submolts=" << collector.total_fetched("submolts")
                  << " snapshots=" << collector.total_fetched("snapshots") << "\n";
        std::cout << "store rows: posts=" << store.count(TableName::posts)
                  << " comments=" << store.count(TableName::comments)
                  << " agents=" << store.count(TableName::agents)
                  << " word_frequency=" << store.count(TableName::word_frequency) << "\n";
    };

    if (source_spec.rfind("sim:", 0) == 0) {
        sim::Corpus corpus = sim::load_corpus(source_spec.substr(4));
        Timestamp clock = *parse_date(corpus.config.start_date);
        sim::SimPlatform platform(corpus, [&clock]() { return clock; });
        collect::Collector collector(platform, store, schedule);
        const Timestamp end = add_seconds(clock, duration_seconds);
        // event-driven virtual clock: jump straight to the next due feed
        while (clock.utc_micros <= end.utc_micros) {
            collector.run_poll_cycle(clock);
            Timestamp next = collector.next_due();
            if (next.utc_micros <= clock.utc_micros) next = add_seconds(clock, 1);
            clock = next;
        }
        finish(collector);
        std::cout << "simulated requests: " << platform.request_count()
                  << ", write calls observed: " << platform.write_call_count() << "\n";
        return 0;
    }
    if (source_spec.rfind("http:", 0) == 0) {
        collect::HttpSource source(source_spec);
        collect::Collector collector(source, store, schedule);
        const Timestamp end = add_seconds(wall_clock_now(), duration_seconds);
        while (true) {
            const Timestamp now = wall_clock_now();
            if (now.utc_micros > end.utc_micros) break;
            collector.run_poll_cycle(now);
            const Timestamp next = collector.next_due();
            if (next.utc_micros > now.utc_micros) {
                const int64_t sleep_us = std::min(next.utc_micros, end.utc_micros + 1) - now.utc_micros;
                std::this_thread::sleep_for(std::chrono::microseconds(sleep_us));
            }
        }
        finish(collector);
        return 0;
    }
    throw CLI::ValidationError("--source must be sim:<dir> or http:<base-url>");
}

int run_export_cmd(const std::string& store_path, const std::string& out_dir,
                   std::string state_path, const std::string& export_date,
                   const std::vector<std::string>& tables) {
    if (state_path.empty()) state_path = (fs::path(out_dir) / "state.json").string();
    Store store(store_path, /*read_only=*/true);
    exporter::ExportOptions options;
    options.export_date = export_date.empty() ? today_utc() : export_date;
    options.tables = tables;
    auto result = exporter::run_export(store, out_dir, state_path, options);
    for (const auto& [table, dates] : result.written_partitions)
        std::cout << table << ": " << dates.size() << " partition(s) written\n";
    for (const auto& entry : result.manifest.tables) {
        std::cout << entry.table << ": partitions=" << entry.partitions
                  << " last_exported=" << (entry.last_exported ? *entry.last_exported : "-") << "\n";
    }
    if (!result.failures.empty()) {
        for (const auto& [table, error] : result.failures)
            std::cerr << "export failed for " << table << ": " << error << "\n";
        return 1;
    }
    return 0;
}

int run_annotate(const std::string& in_dir, const std::string& out_dir,
                 const std::string& patterns_path) {
    annotate::Annotator annotator(load_patterns(patterns_path));
    const auto post_rows = exporter::read_all_rows(in_dir, TableName::posts);
    const auto comment_rows = exporter::read_all_rows(in_dir, TableName::comments);
    std::vector<PostRecord> posts;
    std::vector<std::string> post_dates;
    for (const auto& [date, row] : post_rows) {
        posts.push_back(post_from_row(row));
        post_dates.push_back(date);
    }
    std::vector<CommentRecord> comments;
    std::vector<std::string> comment_dates;
    for (const auto& [date, row] : comment_rows) {
        comments.push_back(comment_from_row(row));
        comment_dates.push_back(date);
    }

    auto result = annotate::annotate_corpus(posts, comments, annotator);

    // annotation partitions mirror the input dump_date layout
    const std::vector<ColumnDef> post_cols = {
        {"id", ColType::text, false},          {"injection", ColType::boolean, false},
        {"crypto", ColType::boolean, false},   {"pump_dump", ColType::boolean, false},
        {"duplicate_spam", ColType::boolean, false}, {"ideological", ColType::boolean, false},
        {"sentiment_score", ColType::real, false},   {"sentiment_class", ColType::text, false},
    };
    std::map<std::string, pq::Table> post_parts;
    for (size_t i = 0; i < posts.size(); ++i) {
        const annotate::PostAnnotation& a = result.posts[i];
        pq::Table& t = post_parts[post_dates[i]];
        if (t.columns.empty()) t.columns = post_cols;
        t.rows.push_back({a.id, a.injection, a.crypto, a.pump_dump, a.duplicate_spam, a.ideological,
                          a.sentiment_score, std::string(annotate::to_string(a.sentiment_class))});
    }
    const std::vector<ColumnDef> comment_cols = {
        {"id", ColType::text, false},
        {"bot_comment", ColType::boolean, false},
        {"manipulation", ColType::boolean, false},
        {"api_injection", ColType::boolean, false},
    };
    std::map<std::string, pq::Table> comment_parts;
    for (size_t i = 0; i < comments.size(); ++i) {
        const annotate::CommentAnnotation& a = result.comments[i];
        pq::Table& t = comment_parts[comment_dates[i]];
        if (t.columns.empty()) t.columns = comment_cols;
        t.rows.push_back({a.id, a.bot_comment, a.manipulation, a.api_injection});
    }
    fs::create_directories(fs::path(out_dir) / "posts");
    fs::create_directories(fs::path(out_dir) / "comments");
    for (const auto& [date, table] : post_parts)
        pq::write_parquet((fs::path(out_dir) / "posts" / (date + ".parquet")).string(), table);
    for (const auto& [date, table] : comment_parts)
        pq::write_parquet((fs::path(out_dir) / "comments" / (date + ".parquet")).string(), table);

    {
        json clusters = json::array();
        for (const auto& cluster : result.near_duplicates.clusters) clusters.push_back(cluster);
        json j{{"clusters", clusters},
               {"parameters",
                {{"shingle_size", result.near_duplicates.params.shingle_size},
                 {"signature_length", result.near_duplicates.params.signature_length},
                 {"threshold", result.near_duplicates.params.threshold},
                 {"bands", result.near_duplicates.bands},
                 {"rows_per_band", result.near_duplicates.rows_per_band}}}};
        std::ofstream out(fs::path(out_dir) / "clusters.json", std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    {
        json j{{"counts", result.summary},
               {"sentiment_mean", result.sentiment_mean},
               {"sentiment_failures", result.sentiment_failures},
               {"patterns_version", result.patterns_version},
               {"patterns_hash", result.patterns_hash},
               {"caveat",
                "heuristic pattern and lexicon annotations; approximate labels, not ground truth"}};
        std::ofstream out(fs::path(out_dir) / "summary.json", std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    for (const auto& [flag, count] : result.summary) std::cout << flag << " = " << count << "\n";
    return 0;
}

struct LoadedAnnotations {
    std::vector<annotate::PostAnnotation> posts;
    std::vector<annotate::CommentAnnotation> comments;
};

LoadedAnnotations load_annotations(const std::string& dir) {
    LoadedAnnotations out;
    auto read_dir = [](const std::string& sub) {
        std::vector<pq::Table> tables;
        if (!fs::exists(sub)) return tables;
        std::vector<std::string> files;
        for (const auto& entry : fs::directory_iterator(sub))
            if (entry.path().extension() == ".parquet") files.push_back(entry.path().string());
        std::sort(files.begin(), files.end());
        for (const std::string& f : files) tables.push_back(pq::read_parquet(f));
        return tables;
    };
    for (const pq::Table& t : read_dir((fs::path(dir) / "posts").string())) {
        for (const Row& row : t.rows) {
            annotate::PostAnnotation a;
            a.id = std::get<std::string>(row[0]);
            a.injection = std::get<bool>(row[1]);
            a.crypto = std::get<bool>(row[2]);
            a.pump_dump = std::get<bool>(row[3]);
            a.duplicate_spam = std::get<bool>(row[4]);
            a.ideological = std::get<bool>(row[5]);
            a.sentiment_score = std::get<double>(row[6]);
            const std::string& cls = std::get<std::string>(row[7]);
            a.sentiment_class = cls == "positive" ? annotate::SentimentClass::positive
                : cls == "negative"               ? annotate::SentimentClass::negative
                                                  : annotate::SentimentClass::neutral;
            out.posts.push_back(std::move(a));
        }
    }
    for (const pq::Table& t : read_dir((fs::path(dir) / "comments").string())) {
        for (const Row& row : t.rows) {
            annotate::CommentAnnotation a;
            a.id = std::get<std::string>(row[0]);
            a.bot_comment = std::get<bool>(row[1]);
            a.manipulation = std::get<bool>(row[2]);
            a.api_injection = std::get<bool>(row[3]);
            out.comments.push_back(std::move(a));
        }
    }
    return out;
}

int run_score(const std::string& in_dir, const std::string& annotations_dir,
              const std::string& out_dir, const risk::RiskCaps& caps) {
    const auto posts = posts_from_partitions(in_dir);
    const auto comments = comments_from_partitions(in_dir);
    const LoadedAnnotations ann = load_annotations(annotations_dir);
    auto scores = risk::score_population(posts, comments, ann.posts, ann.comments, caps);

    fs::create_directories(out_dir);
    pq::Table t;
    t.columns = {
        {"agent_id", ColType::text, false},
        {"eligible", ColType::boolean, false},
        {"injection_rate", ColType::real, true},
        {"duplicate_rate", ColType::real, true},
        {"crypto_rate", ColType::real, true},
        {"manipulation_count_norm", ColType::real, true},
        {"abnormal_frequency", ColType::real, true},
        {"repetitiveness", ColType::real, true},
        {"submolt_concentration", ColType::real, true},
        {"self_interaction_rate", ColType::real, true},
        {"score", ColType::real, true},
        {"tier", ColType::text, true},
    };
    for (const risk::RiskProfile& p : scores.profiles) {
        Row row;
        row.emplace_back(p.agent_id);
        row.emplace_back(p.eligible);
        if (p.eligible) {
            const risk::RiskIndicators& i = p.indicators;
            row.emplace_back(i.injection_rate);
            row.emplace_back(i.duplicate_rate);
            row.emplace_back(i.crypto_rate);
            row.emplace_back(i.manipulation_count_norm);
            row.emplace_back(i.abnormal_frequency);
            row.emplace_back(i.repetitiveness);
            row.emplace_back(i.submolt_concentration);
            row.emplace_back(i.self_interaction_rate);
            row.emplace_back(*p.score);
            row.emplace_back(std::string(risk::to_string(*p.tier)));
        } else {
            for (int k = 0; k < 10; ++k) row.emplace_back(std::monostate{});
        }
        t.rows.push_back(std::move(row));
    }
    pq::write_parquet((fs::path(out_dir) / "profiles.parquet").string(), t);

    json census{{"low", scores.census.low},
                {"moderate", scores.census.moderate},
                {"high", scores.census.high},
                {"critical", scores.census.critical},
                {"eligible", scores.census.eligible},
                {"ineligible", scores.census.ineligible},
                {"caps",
                 {{"manipulation_comments", caps.manipulation_comments},
                  {"posts_per_day", caps.posts_per_day}}},
                {"note", "normalization caps are configured defaults, not calibrated values"}};
    std::ofstream out(fs::path(out_dir) / "census.json", std::ios::trunc);
    out << census.dump(2) << "\n";
    std::cout << "eligible=" << scores.census.eligible << " low=" << scores.census.low
              << " moderate=" << scores.census.moderate << " high=" << scores.census.high
              << " critical=" << scores.census.critical << "\n";
    return 0;
}

std::set<std::string> bot_agents_from(const std::vector<CommentRecord>& comments,
                                      const std::vector<annotate::CommentAnnotation>& annotations) {
    std::map<std::string, const CommentRecord*> by_id;
    for (const CommentRecord& c : comments) by_id[c.id] = &c;
    std::set<std::string> bots;
    for (const auto& a : annotations) {
        if (!a.bot_comment) continue;
        auto it = by_id.find(a.id);
        if (it != by_id.end()) bots.insert(it->second->agent_id);
    }
    return bots;
}

int run_graph(const std::string& in_dir, const std::string& annotations_dir,
              const std::string& out_dir, int64_t top_k, int64_t min_weight) {
    const auto posts = posts_from_partitions(in_dir);
    const auto comments = comments_from_partitions(in_dir);
    graph::ReplyGraph g = graph::build_graph(posts, comments);

    std::set<std::string> bots;
    if (!annotations_dir.empty())
        bots = bot_agents_from(comments, load_annotations(annotations_dir).comments);
    graph::GraphMetrics metrics = graph::graph_metrics(g, bots);
    const auto communities = graph::detect_communities(g);
    graph::ReplyGraph filtered = graph::filtered_subgraph(g, top_k, min_weight);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "edges.tsv", std::ios::trunc);
        for (const auto& [edge, w] : g.edges)
            out << edge.first << '\t' << edge.second << '\t' << w << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "communities.tsv", std::ios::trunc);
        for (const auto& [node, label] : communities) out << node << '\t' << label << '\n';
    }
    {
        std::ofstream out(fs::path(out_dir) / "filtered_edges.tsv", std::ios::trunc);
        for (const auto& [edge, w] : filtered.edges)
            out << edge.first << '\t' << edge.second << '\t' << w << '\n';
    }
    {
        json sizes = json::array();
        for (int64_t s : metrics.community_sizes) sizes.push_back(s);
        json j{{"node_count", metrics.node_count},
               {"edge_count", metrics.edge_count},
               {"density", metrics.density},
               {"reciprocal_pairs", metrics.reciprocal_pairs},
               {"reciprocity_rate", metrics.reciprocity_rate},
               {"community_count", metrics.community_count},
               {"community_sizes", sizes},
               {"organic_ratio", metrics.organic_ratio},
               {"self_rate", metrics.self_rate},
               {"bot_rate", metrics.bot_rate},
               {"self_comment_tally", g.self_comment_tally},
               {"unresolved_comments", g.unresolved_comments},
               {"total_comments", g.total_comments},
               {"filtered", {{"top_k", top_k}, {"min_weight", min_weight},
                             {"nodes", static_cast<int64_t>(filtered.nodes.size())},
                             {"edges", static_cast<int64_t>(filtered.edges.size())}}}};
        std::ofstream out(fs::path(out_dir) / "metrics.json", std::ios::trunc);
        out << j.dump(2) << "\n";
    }
    std::cout << "nodes=" << metrics.node_count << " edges=" << metrics.edge_count
              << " density=" << metrics.density << " communities=" << metrics.community_count
              << "\n";
    return 0;
}

int run_report(const std::string& in_dir, const std::string& annotations_dir,
               const std::string& risk_dir, const std::string& graph_dir,
               const std::string& out_dir, const std::string& acquisition_date) {
    std::vector<PostRecord> posts;
    std::vector<CommentRecord> comments;
    std::vector<AgentRecord> agents;
    std::vector<SubmoltRecord> submolts;
    std::map<std::string, std::vector<std::string>> partition_dates;
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::posts)) {
        posts.push_back(post_from_row(row));
        partition_dates["posts"].push_back(date);
    }
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::comments)) {
        comments.push_back(comment_from_row(row));
        partition_dates["comments"].push_back(date);
    }
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::agents)) {
        agents.push_back(agent_from_row(row));
        partition_dates["agents"].push_back(date);
    }
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::submolts)) {
        submolts.push_back(submolt_from_row(row));
        partition_dates["submolts"].push_back(date);
    }
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::snapshots))
        partition_dates["snapshots"].push_back(date);
    for (auto& [date, row] : exporter::read_all_rows(in_dir, TableName::word_frequency))
        partition_dates["word_frequency"].push_back(date);

    reports::ReportInputs inputs;
    inputs.stats = reports::descriptive_stats(posts, comments, agents, submolts, partition_dates,
                                              acquisition_date.empty() ? "2026-03-10" : acquisition_date);
    inputs.consistency = reports::check_consistency(posts, comments);

    if (!annotations_dir.empty()) {
        std::ifstream in(fs::path(annotations_dir) / "summary.json");
        if (in) {
            json j = json::parse(in);
            for (const auto& [flag, count] : j.at("counts").items())
                inputs.annotation_summary[flag] = count.get<int64_t>();
            inputs.patterns_hash = j.value("patterns_hash", "");
        }
    }
    if (!risk_dir.empty()) {
        std::ifstream in(fs::path(risk_dir) / "census.json");
        if (in) {
            json j = json::parse(in);
            risk::TierCensus census;
            census.low = j.at("low").get<int64_t>();
            census.moderate = j.at("moderate").get<int64_t>();
            census.high = j.at("high").get<int64_t>();
            census.critical = j.at("critical").get<int64_t>();
            census.eligible = j.at("eligible").get<int64_t>();
            census.ineligible = j.at("ineligible").get<int64_t>();
            inputs.risk_census = census;
        }
    }
    if (!graph_dir.empty()) {
        std::ifstream in(fs::path(graph_dir) / "metrics.json");
        if (in) {
            json j = json::parse(in);
            graph::GraphMetrics m;
            m.node_count = j.at("node_count").get<int64_t>();
            m.edge_count = j.at("edge_count").get<int64_t>();
            m.density = j.at("density").get<double>();
            m.reciprocal_pairs = j.at("reciprocal_pairs").get<int64_t>();
            m.reciprocity_rate = j.at("reciprocity_rate").get<double>();
            m.community_count = j.at("community_count").get<int64_t>();
            for (const auto& s : j.at("community_sizes")) m.community_sizes.push_back(s.get<int64_t>());
            m.organic_ratio = j.at("organic_ratio").get<double>();
            m.self_rate = j.at("self_rate").get<double>();
            m.bot_rate = j.at("bot_rate").get<double>();
            inputs.graph = m;
        }
    }

    auto written = reports::emit_report(inputs, out_dir);
    std::cout << "report: " << written.size() << " file(s) under " << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"passive observatory pipeline for an agent-only social platform"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "generate a synthetic labeled corpus");
    sim::SimConfig sim_config;
    std::vector<std::string> spike_specs;
    std::string sim_out;
    simulate->add_option("--out", sim_out, "output corpus directory")->required();
    simulate->add_option("--seed", sim_config.seed, "rng seed");
    simulate->add_option("--agents", sim_config.agent_count, "agent count");
    simulate->add_option("--days", sim_config.day_count, "day count");
    simulate->add_option("--base-daily-posts", sim_config.base_daily_posts, "posts per normal day");
    simulate->add_option("--spike", spike_specs, "spike day DATE:POST_COUNT (repeatable)");
    simulate->add_option("--tail-exponent", sim_config.activity_tail_exponent,
                         "per-agent activity power-law exponent (> 1)");
    simulate->add_option("--injection-rate", sim_config.injection_rate, "fraction of injection posts");
    simulate->add_option("--crypto-rate", sim_config.crypto_rate, "fraction of crypto posts");
    simulate->add_option("--pump-rate", sim_config.pump_rate, "fraction of pump-and-dump posts");
    simulate->add_option("--duplicate-rate", sim_config.duplicate_rate, "fraction of duplicates");
    simulate->add_option("--manipulation-rate", sim_config.manipulation_rate,
                         "fraction of manipulation comments");
    simulate->add_option("--comment-ratio", sim_config.comment_to_post_ratio, "comments per post");
    simulate->add_option("--submolts", sim_config.submolt_count, "submolt count");
    simulate->add_option("--rate-limit", sim_config.rate_limit, "source requests per minute");
    simulate->add_option("--orphan-comments", sim_config.orphan_comment_count,
                         "deliberately dangling comments");
    simulate->add_option("--start-date", sim_config.start_date, "first day (YYYY-MM-DD)");

    // collect
    auto* collect_cmd = app.add_subcommand("collect", "poll a platform source into the store");
    std::string store_path, source_spec, collect_config;
    int64_t duration = 3600;
    collect_cmd->add_option("--store", store_path, "sqlite store path")->required();
    collect_cmd->add_option("--source", source_spec, "sim:<dir> or http:<base-url>")->required();
    collect_cmd->add_option("--duration", duration, "seconds to run (virtual for sim sources)");
    collect_cmd->add_option("--config", collect_config, "schedule config file (key = value)");

    // export
    auto* export_cmd = app.add_subcommand("export", "incremental date-partitioned export");
    std::string export_store, export_out, export_state, export_date;
    std::vector<std::string> export_tables;
    export_cmd->add_option("--store", export_store, "sqlite store path")->required();
    export_cmd->add_option("--out", export_out, "export directory")->required();
    export_cmd->add_option("--state", export_state, "state.json path (default: <out>/state.json)");
    export_cmd->add_option("--export-date", export_date, "fallback dump_date (default: today UTC)");
    export_cmd->add_option("--tables", export_tables, "restrict to these tables");

    // annotate
    auto* annotate_cmd = app.add_subcommand("annotate", "heuristic content annotations");
    std::string ann_in, ann_out, ann_patterns;
    annotate_cmd->add_option("--in", ann_in, "export directory with data/ partitions")->required();
    annotate_cmd->add_option("--out", ann_out, "annotation output directory")->required();
    annotate_cmd->add_option("--patterns", ann_patterns, "pattern file (default: builtin set)");

    // patterns
    auto* patterns_cmd = app.add_subcommand("patterns", "write the builtin pattern file");
    std::string patterns_out;
    patterns_cmd->add_option("--out", patterns_out, "destination path")->required();

    // score
    auto* score_cmd = app.add_subcommand("score", "per-agent composite risk scores");
    std::string score_in, score_ann, score_out;
    risk::RiskCaps caps;
    score_cmd->add_option("--in", score_in, "export directory")->required();
    score_cmd->add_option("--annotations", score_ann, "annotation directory")->required();
    score_cmd->add_option("--out", score_out, "output directory")->required();
    score_cmd->add_option("--manipulation-cap", caps.manipulation_comments,
                          "manipulation-comment normalization cap");
    score_cmd->add_option("--frequency-cap", caps.posts_per_day, "posts-per-day normalization cap");

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "reply-graph metrics and communities");
    std::string graph_in, graph_ann, graph_out;
    int64_t top_k = 300, min_weight = 2;
    graph_cmd->add_option("--in", graph_in, "export directory")->required();
    graph_cmd->add_option("--annotations", graph_ann, "annotation directory (for bot agents)");
    graph_cmd->add_option("--out", graph_out, "output directory")->required();
    graph_cmd->add_option("--top-k", top_k, "filtered subgraph node budget");
    graph_cmd->add_option("--min-weight", min_weight, "filtered subgraph edge weight floor");

    // report
    auto* report_cmd = app.add_subcommand("report", "static HTML and CSV report");
    std::string report_in, report_ann, report_risk, report_graph, report_out, acquisition_date;
    report_cmd->add_option("--in", report_in, "export directory")->required();
    report_cmd->add_option("--annotations", report_ann, "annotation directory");
    report_cmd->add_option("--risk", report_risk, "risk output directory");
    report_cmd->add_option("--graph", report_graph, "graph output directory");
    report_cmd->add_option("--out", report_out, "report output directory")->required();
    report_cmd->add_option("--acquisition-date", acquisition_date,
                           "pre/post split boundary (default 2026-03-10)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim_config, spike_specs, sim_out);
        if (collect_cmd->parsed()) return run_collect(store_path, source_spec, duration, collect_config);
        if (export_cmd->parsed())
            return run_export_cmd(export_store, export_out, export_state, export_date, export_tables);
        if (annotate_cmd->parsed()) return run_annotate(ann_in, ann_out, ann_patterns);
        if (patterns_cmd->parsed()) {
            annotate::PatternSet::builtin().save(patterns_out);
            std::cout << "pattern set v" << annotate::PatternSet::builtin().version << " ("
                      << annotate::PatternSet::builtin().content_hash_hex() << ") -> " << patterns_out
                      << "\n";
            return 0;
        }
        if (score_cmd->parsed()) return run_score(score_in, score_ann, score_out, caps);
        if (graph_cmd->parsed()) return run_graph(graph_in, graph_ann, graph_out, top_k, min_weight);
        if (report_cmd->parsed())
            return run_report(report_in, report_ann, report_risk, report_graph, report_out,
                              acquisition_date);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
