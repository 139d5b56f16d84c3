#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "observatory/model.hpp"
#include "observatory/replygraph.hpp"
#include "observatory/riskscore.hpp"

namespace observatory::reports {

struct ConsistencyReport {
    int64_t comment_total = 0;
    int64_t linked_comments = 0;
    int64_t orphan_comments = 0;
    int64_t posts_claiming_comments = 0;       // comment_count > 0
    int64_t posts_with_archived_comments = 0;  // at least one comment present
    double reverse_coverage = 0.0;             // archived / claiming
};

/// Post-comment linkage: an orphan is a comment whose post_id resolves to
/// no archived post. linked + orphan = total always.
ConsistencyReport check_consistency(const std::vector<PostRecord>& posts,
                                    const std::vector<CommentRecord>& comments);

struct AgentActivitySummary {
    int64_t posting_agents = 0;
    double share_single_post = 0.0;
    int64_t median = 0; // nearest-rank
    double mean = 0.0;
    int64_t max = 0;
};

struct CcdfPoint {
    int64_t posts = 0;
    double fraction = 0.0; // agents with count >= posts
};

struct LengthSummary {
    int64_t median = 0;
    double mean = 0.0;
    int64_t max = 0;
    int64_t count_at_max = 0;
};

struct DailyCount {
    std::string date;
    int64_t posts = 0;
    int64_t comments = 0;
};

struct SubmoltCount {
    std::string submolt;
    int64_t posts = 0;
};

struct AcquisitionSplit {
    std::string table;
    int64_t pre = 0;  // dump_date <= boundary
    int64_t post = 0;
};

struct StatsBundle {
    std::map<std::string, int64_t> totals;
    AgentActivitySummary agent_activity;
    std::vector<CcdfPoint> agent_ccdf; // non-increasing fractions
    std::array<double, 24> hourly_shares{};
    int64_t hourly_post_count = 0;
    std::vector<SubmoltCount> submolt_ranking;
    LengthSummary post_length;
    LengthSummary comment_length;
    std::vector<DailyCount> daily_timeline;
    std::vector<std::string> spike_days; // new-agent influx above mean + sigma threshold
    double new_agents_per_day_mean = 0.0;
    double mean_hourly_posting_rate = 0.0; // posts over the min..max created_at span
    int64_t max_score = 0;
    int64_t high_engagement_count = 0; // score > 100
    std::vector<AcquisitionSplit> acquisition;
    std::string acquisition_date;
    double spike_sigma = 3.0;
    bool empty_corpus = false;
};

/// Descriptive statistics over archived records. partition_dates carries
/// one dump_date per row for every table and drives totals plus the
/// acquisition split; tables absent from it fall back to the record lists.
StatsBundle descriptive_stats(const std::vector<PostRecord>& posts,
                              const std::vector<CommentRecord>& comments,
                              const std::vector<AgentRecord>& agents,
                              const std::vector<SubmoltRecord>& submolts,
                              const std::map<std::string, std::vector<std::string>>& partition_dates,
                              const std::string& acquisition_date = "2026-03-10",
                              double spike_sigma = 3.0);

struct ReportInputs {
    StatsBundle stats;
    ConsistencyReport consistency;
    std::map<std::string, int64_t> annotation_summary; // empty when not run
    std::string patterns_hash;
    std::optional<risk::TierCensus> risk_census;
    std::optional<graph::GraphMetrics> graph;
};

/// Writes csv/<family>.csv files plus a self-contained report.html whose
/// tables carry exactly the CSV values. Partial outputs are removed on
/// failure.
std::vector<std::string> emit_report(const ReportInputs& inputs, const std::string& out_dir);

/// Shared number formatting so HTML and CSV stay cell-identical.
std::string format_value(double v);

} // namespace observatory::reports
