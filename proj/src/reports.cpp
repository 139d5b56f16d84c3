#include "observatory/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "observatory/collector.hpp"

namespace observatory::reports {

namespace fs = std::filesystem;

ConsistencyReport check_consistency(const std::vector<PostRecord>& posts,
                                    const std::vector<CommentRecord>& comments) {
    ConsistencyReport r;
    std::unordered_set<std::string> post_ids;
    post_ids.reserve(posts.size());
    for (const PostRecord& p : posts) post_ids.insert(p.id);

    std::unordered_set<std::string> posts_with_comments;
    r.comment_total = static_cast<int64_t>(comments.size());
    for (const CommentRecord& c : comments) {
        if (post_ids.count(c.post_id)) {
            ++r.linked_comments;
            posts_with_comments.insert(c.post_id);
        } else {
            ++r.orphan_comments;
        }
    }
    for (const PostRecord& p : posts) {
        if (p.comment_count > 0) ++r.posts_claiming_comments;
    }
    r.posts_with_archived_comments = static_cast<int64_t>(posts_with_comments.size());
    r.reverse_coverage = r.posts_claiming_comments == 0
        ? 0.0
        : static_cast<double>(r.posts_with_archived_comments) /
            static_cast<double>(r.posts_claiming_comments);
    return r;
}

namespace {

int64_t nearest_rank_median(std::vector<int64_t> values) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    const size_t rank = (values.size() + 1) / 2; // 1-based ceil(n/2)
    return values[rank - 1];
}

std::string date_of(const std::string& iso) {
    if (auto ts = parse_timestamp(iso)) return utc_date(*ts);
    return "";
}

} // namespace

StatsBundle descriptive_stats(const std::vector<PostRecord>& posts,
                              const std::vector<CommentRecord>& comments,
                              const std::vector<AgentRecord>& agents,
                              const std::vector<SubmoltRecord>& submolts,
                              const std::map<std::string, std::vector<std::string>>& partition_dates,
                              const std::string& acquisition_date, double spike_sigma) {
    if (!valid_date_text(acquisition_date))
        throw std::invalid_argument("stats: acquisition date must be YYYY-MM-DD");
    StatsBundle s;
    s.acquisition_date = acquisition_date;
    s.spike_sigma = spike_sigma;
    s.empty_corpus = posts.empty() && comments.empty() && agents.empty();

    s.totals["posts"] = static_cast<int64_t>(posts.size());
    s.totals["comments"] = static_cast<int64_t>(comments.size());
    s.totals["agents"] = static_cast<int64_t>(agents.size());
    s.totals["submolts"] = static_cast<int64_t>(submolts.size());
    for (const auto& [table, dates] : partition_dates)
        s.totals[table] = static_cast<int64_t>(dates.size());

    // per-agent post counts
    std::map<std::string, int64_t> per_agent;
    for (const PostRecord& p : posts) per_agent[p.agent_id] += 1;
    s.agent_activity.posting_agents = static_cast<int64_t>(per_agent.size());
    if (!per_agent.empty()) {
        std::vector<int64_t> counts;
        int64_t singles = 0, total = 0;
        for (const auto& [_, n] : per_agent) {
            counts.push_back(n);
            if (n == 1) ++singles;
            total += n;
            s.agent_activity.max = std::max(s.agent_activity.max, n);
        }
        s.agent_activity.share_single_post =
            static_cast<double>(singles) / static_cast<double>(per_agent.size());
        s.agent_activity.median = nearest_rank_median(counts);
        s.agent_activity.mean = static_cast<double>(total) / static_cast<double>(per_agent.size());

        std::sort(counts.begin(), counts.end());
        std::vector<int64_t> unique(counts);
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (int64_t x : unique) {
            const auto at_least =
                counts.end() - std::lower_bound(counts.begin(), counts.end(), x);
            s.agent_ccdf.push_back(
                {x, static_cast<double>(at_least) / static_cast<double>(counts.size())});
        }
    }

    // hourly histogram (UTC)
    std::array<int64_t, 24> hour_counts{};
    for (const PostRecord& p : posts) {
        if (auto ts = parse_timestamp(p.created_at)) ++hour_counts[static_cast<size_t>(utc_hour(*ts))];
    }
    for (int64_t c : hour_counts) s.hourly_post_count += c;
    if (s.hourly_post_count > 0) {
        for (size_t h = 0; h < 24; ++h)
            s.hourly_shares[h] =
                static_cast<double>(hour_counts[h]) / static_cast<double>(s.hourly_post_count);
    }

    // submolt ranking
    {
        std::map<std::string, int64_t> by_submolt;
        for (const PostRecord& p : posts) by_submolt[p.submolt] += 1;
        for (const auto& [name, n] : by_submolt) s.submolt_ranking.push_back({name, n});
        std::sort(s.submolt_ranking.begin(), s.submolt_ranking.end(),
                  [](const SubmoltCount& a, const SubmoltCount& b) {
                      if (a.posts != b.posts) return a.posts > b.posts;
                      return a.submolt < b.submolt;
                  });
    }

    // content lengths
    auto summarize_lengths = [](auto&& records) {
        LengthSummary out;
        std::vector<int64_t> lengths;
        int64_t total = 0;
        for (const auto& r : records) {
            const int64_t len = count_codepoints(r.content);
            lengths.push_back(len);
            total += len;
            out.max = std::max(out.max, len);
        }
        if (lengths.empty()) return out;
        out.median = nearest_rank_median(lengths);
        out.mean = static_cast<double>(total) / static_cast<double>(lengths.size());
        for (int64_t len : lengths)
            if (len == out.max) ++out.count_at_max;
        return out;
    };
    s.post_length = summarize_lengths(posts);
    s.comment_length = summarize_lengths(comments);

    // daily timeline
    {
        std::map<std::string, DailyCount> by_day;
        for (const PostRecord& p : posts) {
            const std::string d = date_of(p.created_at);
            if (d.empty()) continue;
            by_day[d].date = d;
            by_day[d].posts += 1;
        }
        for (const CommentRecord& c : comments) {
            const std::string d = date_of(c.created_at);
            if (d.empty()) continue;
            by_day[d].date = d;
            by_day[d].comments += 1;
        }
        for (const auto& [_, day] : by_day) s.daily_timeline.push_back(day);
    }

    // new agents per day and influx spikes over the first_seen window
    {
        std::map<std::string, int64_t> new_agents;
        for (const AgentRecord& a : agents) {
            const std::string d = date_of(a.first_seen_at);
            if (!d.empty()) new_agents[d] += 1;
        }
        if (!new_agents.empty()) {
            const Timestamp first = *parse_date(new_agents.begin()->first);
            const Timestamp last = *parse_date(new_agents.rbegin()->first);
            std::vector<std::pair<std::string, int64_t>> window;
            for (Timestamp d = first; d.utc_micros <= last.utc_micros; d = add_days(d, 1)) {
                const std::string date = utc_date(d);
                auto it = new_agents.find(date);
                window.emplace_back(date, it == new_agents.end() ? 0 : it->second);
            }
            double mean = 0;
            for (const auto& [_, n] : window) mean += static_cast<double>(n);
            mean /= static_cast<double>(window.size());
            double var = 0;
            for (const auto& [_, n] : window) {
                const double d = static_cast<double>(n) - mean;
                var += d * d;
            }
            var /= static_cast<double>(window.size());
            const double sigma = std::sqrt(var);
            s.new_agents_per_day_mean = mean;
            for (const auto& [date, n] : window)
                if (static_cast<double>(n) > mean + spike_sigma * sigma) s.spike_days.push_back(date);
        }
    }

    // posting rate over the observed span
    {
        int64_t min_us = 0, max_us = 0;
        bool any = false;
        for (const PostRecord& p : posts) {
            if (auto ts = parse_timestamp(p.created_at)) {
                if (!any || ts->utc_micros < min_us) min_us = ts->utc_micros;
                if (!any || ts->utc_micros > max_us) max_us = ts->utc_micros;
                any = true;
            }
        }
        const double span_hours = any ? static_cast<double>(max_us - min_us) / 3.6e9 : 0.0;
        s.mean_hourly_posting_rate =
            span_hours > 0 ? static_cast<double>(posts.size()) / span_hours : 0.0;
    }

    // engagement
    for (const PostRecord& p : posts) {
        s.max_score = std::max(s.max_score, p.score);
        if (p.score > 100) ++s.high_engagement_count;
    }

    // acquisition split per table on dump_date
    {
        auto split_of = [&](const std::string& table, const std::vector<std::string>& dates) {
            AcquisitionSplit split;
            split.table = table;
            for (const std::string& d : dates) {
                if (d <= acquisition_date) ++split.pre;
                else ++split.post;
            }
            return split;
        };
        if (!partition_dates.empty()) {
            for (const auto& [table, dates] : partition_dates)
                s.acquisition.push_back(split_of(table, dates));
        } else {
            std::vector<std::string> post_dates, comment_dates, agent_dates, submolt_dates;
            for (const PostRecord& p : posts)
                post_dates.push_back(derive_local_fields(p.created_at, "", acquisition_date).dump_date);
            for (const CommentRecord& c : comments)
                comment_dates.push_back(derive_local_fields(c.created_at, "", acquisition_date).dump_date);
            for (const AgentRecord& a : agents)
                agent_dates.push_back(derive_local_fields(a.first_seen_at, "", acquisition_date).dump_date);
            for (const SubmoltRecord& m : submolts)
                submolt_dates.push_back(derive_local_fields(m.first_seen_at, "", acquisition_date).dump_date);
            s.acquisition.push_back(split_of("posts", post_dates));
            s.acquisition.push_back(split_of("comments", comment_dates));
            s.acquisition.push_back(split_of("agents", agent_dates));
            s.acquisition.push_back(split_of("submolts", submolt_dates));
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

std::string format_value(double v) {
    if (std::abs(v - std::round(v)) < 1e-12 && std::abs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(std::llround(v)));
        return buf;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string out = buf;
    while (out.size() > 1 && out.back() == '0') out.pop_back();
    if (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

namespace {

struct CsvTable {
    std::string name; // file stem and html table id
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string html_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string svg_bar_chart(const std::vector<std::pair<std::string, double>>& series,
                          const std::string& title) {
    if (series.empty()) return "";
    double max_v = 0;
    for (const auto& [_, v] : series) max_v = std::max(max_v, v);
    if (max_v <= 0) max_v = 1;
    const double width = 720.0, base = 140.0;
    const double bar_w = width / static_cast<double>(series.size());
    std::ostringstream svg;
    svg << "<figure><figcaption>" << html_escape(title) << "</figcaption>";
    svg << "<svg viewBox=\"0 0 720 170\" role=\"img\" width=\"720\" height=\"170\">";
    for (size_t i = 0; i < series.size(); ++i) {
        const double h = series[i].second / max_v * (base - 10.0);
        svg << "<rect x=\"" << format_value(static_cast<double>(i) * bar_w + 1) << "\" y=\""
            << format_value(base - h) << "\" width=\"" << format_value(std::max(1.0, bar_w - 2))
            << "\" height=\"" << format_value(h) << "\" fill=\"#4a7fb5\"><title>"
            << html_escape(series[i].first) << ": " << format_value(series[i].second)
            << "</title></rect>";
    }
    svg << "</svg></figure>\n";
    return svg.str();
}

} // namespace

std::vector<std::string> emit_report(const ReportInputs& inputs, const std::string& out_dir) {
    const StatsBundle& s = inputs.stats;
    std::vector<CsvTable> tables;

    {
        CsvTable t{"totals", {"table", "rows"}, {}};
        for (const auto& [table, rows] : s.totals)
            t.rows.push_back({table, format_value(static_cast<double>(rows))});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"agent_activity",
                   {"posting_agents", "share_single_post", "median", "mean", "max"},
                   {{format_value(static_cast<double>(s.agent_activity.posting_agents)),
                     format_value(s.agent_activity.share_single_post),
                     format_value(static_cast<double>(s.agent_activity.median)),
                     format_value(s.agent_activity.mean),
                     format_value(static_cast<double>(s.agent_activity.max))}}};
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"agent_post_ccdf", {"posts", "fraction"}, {}};
        for (const CcdfPoint& p : s.agent_ccdf)
            t.rows.push_back({format_value(static_cast<double>(p.posts)), format_value(p.fraction)});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"hourly_histogram", {"hour", "share"}, {}};
        for (size_t h = 0; h < 24; ++h)
            t.rows.push_back({format_value(static_cast<double>(h)), format_value(s.hourly_shares[h])});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"submolt_ranking", {"submolt", "posts"}, {}};
        for (const SubmoltCount& c : s.submolt_ranking)
            t.rows.push_back({c.submolt, format_value(static_cast<double>(c.posts))});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"content_length", {"kind", "median", "mean", "max", "count_at_max"}, {}};
        t.rows.push_back({"posts", format_value(static_cast<double>(s.post_length.median)),
                          format_value(s.post_length.mean),
                          format_value(static_cast<double>(s.post_length.max)),
                          format_value(static_cast<double>(s.post_length.count_at_max))});
        t.rows.push_back({"comments", format_value(static_cast<double>(s.comment_length.median)),
                          format_value(s.comment_length.mean),
                          format_value(static_cast<double>(s.comment_length.max)),
                          format_value(static_cast<double>(s.comment_length.count_at_max))});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"daily_timeline", {"date", "posts", "comments"}, {}};
        for (const DailyCount& d : s.daily_timeline)
            t.rows.push_back({d.date, format_value(static_cast<double>(d.posts)),
                              format_value(static_cast<double>(d.comments))});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"coverage", {"date", "posts", "estimated_coverage"}, {}};
        const int64_t budget = collect::capture_budget(50, 120);
        for (const DailyCount& d : s.daily_timeline)
            t.rows.push_back({d.date, format_value(static_cast<double>(d.posts)),
                              format_value(collect::estimate_coverage(d.posts, budget))});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"spike_days", {"date"}, {}};
        for (const std::string& d : s.spike_days) t.rows.push_back({d});
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"activity_summary",
                   {"new_agents_per_day_mean", "mean_hourly_posting_rate", "spike_sigma"},
                   {{format_value(s.new_agents_per_day_mean),
                     format_value(s.mean_hourly_posting_rate), format_value(s.spike_sigma)}}};
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"engagement",
                   {"max_score", "high_engagement_count", "threshold"},
                   {{format_value(static_cast<double>(s.max_score)),
                     format_value(static_cast<double>(s.high_engagement_count)), "100"}}};
        tables.push_back(std::move(t));
    }
    {
        CsvTable t{"acquisition_split", {"table", "pre", "post", "boundary"}, {}};
        for (const AcquisitionSplit& a : s.acquisition)
            t.rows.push_back({a.table, format_value(static_cast<double>(a.pre)),
                              format_value(static_cast<double>(a.post)), s.acquisition_date});
        tables.push_back(std::move(t));
    }
    {
        const ConsistencyReport& c = inputs.consistency;
        CsvTable t{"consistency",
                   {"comment_total", "linked_comments", "orphan_comments", "posts_claiming_comments",
                    "posts_with_archived_comments", "reverse_coverage"},
                   {{format_value(static_cast<double>(c.comment_total)),
                     format_value(static_cast<double>(c.linked_comments)),
                     format_value(static_cast<double>(c.orphan_comments)),
                     format_value(static_cast<double>(c.posts_claiming_comments)),
                     format_value(static_cast<double>(c.posts_with_archived_comments)),
                     format_value(c.reverse_coverage)}}};
        tables.push_back(std::move(t));
    }
    if (!inputs.annotation_summary.empty()) {
        CsvTable t{"annotation_summary", {"flag", "count"}, {}};
        for (const auto& [flag, count] : inputs.annotation_summary)
            t.rows.push_back({flag, format_value(static_cast<double>(count))});
        tables.push_back(std::move(t));
    }
    if (inputs.risk_census) {
        const risk::TierCensus& c = *inputs.risk_census;
        CsvTable t{"risk_census", {"tier", "count"}, {}};
        t.rows.push_back({"low", format_value(static_cast<double>(c.low))});
        t.rows.push_back({"moderate", format_value(static_cast<double>(c.moderate))});
        t.rows.push_back({"high", format_value(static_cast<double>(c.high))});
        t.rows.push_back({"critical", format_value(static_cast<double>(c.critical))});
        t.rows.push_back({"eligible", format_value(static_cast<double>(c.eligible))});
        t.rows.push_back({"ineligible", format_value(static_cast<double>(c.ineligible))});
        tables.push_back(std::move(t));
    }
    if (inputs.graph) {
        const graph::GraphMetrics& g = *inputs.graph;
        CsvTable t{"graph_metrics", {"metric", "value"}, {}};
        t.rows.push_back({"node_count", format_value(static_cast<double>(g.node_count))});
        t.rows.push_back({"edge_count", format_value(static_cast<double>(g.edge_count))});
        t.rows.push_back({"density", format_value(g.density)});
        t.rows.push_back({"reciprocal_pairs", format_value(static_cast<double>(g.reciprocal_pairs))});
        t.rows.push_back({"reciprocity_rate", format_value(g.reciprocity_rate)});
        t.rows.push_back({"community_count", format_value(static_cast<double>(g.community_count))});
        for (size_t i = 0; i < g.community_sizes.size() && i < 3; ++i)
            t.rows.push_back({"community_size_" + std::to_string(i + 1),
                              format_value(static_cast<double>(g.community_sizes[i]))});
        t.rows.push_back({"organic_ratio", format_value(g.organic_ratio)});
        t.rows.push_back({"self_rate", format_value(g.self_rate)});
        t.rows.push_back({"bot_rate", format_value(g.bot_rate)});
        tables.push_back(std::move(t));
    }

    std::vector<std::string> written;
    try {
        fs::create_directories(fs::path(out_dir) / "csv");
        for (const CsvTable& t : tables) {
            const fs::path path = fs::path(out_dir) / "csv" / (t.name + ".csv");
            std::ofstream out(path, std::ios::trunc);
            if (!out) throw std::runtime_error("report: cannot write " + path.string());
            for (size_t i = 0; i < t.header.size(); ++i)
                out << (i ? "," : "") << csv_escape(t.header[i]);
            out << "\n";
            for (const auto& row : t.rows) {
                for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
                out << "\n";
            }
            if (!out) throw std::runtime_error("report: write failed: " + path.string());
            written.push_back(path.string());
        }

        std::ostringstream html;
        html << "<!DOCTYPE html>\n<html lang=\"en\"><head><meta charset=\"utf-8\">\n"
             << "<title>observatory report</title>\n"
             << "<style>body{font-family:sans-serif;margin:2em;max-width:80em}"
             << "table{border-collapse:collapse;margin:1em 0}"
             << "td,th{border:1px solid #bbb;padding:0.25em 0.6em;text-align:right}"
             << "th:first-child,td:first-child{text-align:left}"
             << "caption{font-weight:bold;text-align:left;padding:0.3em 0}</style></head><body>\n"
             << "<h1>Observatory report</h1>\n";
        if (s.empty_corpus) html << "<p><em>Warning: empty corpus; all statistics are zero.</em></p>\n";
        if (!inputs.patterns_hash.empty())
            html << "<p>Annotation pattern set hash: <code>" << html_escape(inputs.patterns_hash)
                 << "</code>. Risk caps and heuristic thresholds are pragmatic defaults, not "
                    "calibrated cutoffs.</p>\n";

        std::vector<std::pair<std::string, double>> daily;
        for (const DailyCount& d : s.daily_timeline)
            daily.emplace_back(d.date, static_cast<double>(d.posts));
        html << svg_bar_chart(daily, "Posts per day");
        std::vector<std::pair<std::string, double>> hourly;
        for (size_t h = 0; h < 24; ++h)
            hourly.emplace_back("hour " + std::to_string(h), s.hourly_shares[h]);
        html << svg_bar_chart(hourly, "Share of posts by hour (UTC)");

        for (const CsvTable& t : tables) {
            html << "<table id=\"" << t.name << "\"><caption>" << html_escape(t.name)
                 << "</caption><tr>";
            for (const std::string& h : t.header) html << "<th>" << html_escape(h) << "</th>";
            html << "</tr>\n";
            for (const auto& row : t.rows) {
                html << "<tr>";
                for (const std::string& cell : row) html << "<td>" << html_escape(cell) << "</td>";
                html << "</tr>\n";
            }
            html << "</table>\n";
        }
        html << "</body></html>\n";

        const fs::path html_path = fs::path(out_dir) / "report.html";
        std::ofstream out(html_path, std::ios::trunc);
        if (!out) throw std::runtime_error("report: cannot write " + html_path.string());
        out << html.str();
        if (!out) throw std::runtime_error("report: write failed: " + html_path.string());
        written.push_back(html_path.string());
    } catch (...) {
        for (const std::string& path : written) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        throw;
    }
    return written;
}

} // namespace observatory::reports
