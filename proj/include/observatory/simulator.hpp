#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "observatory/model.hpp"
#include "observatory/source.hpp"

namespace observatory::sim {

struct SpikeDay {
    std::string date; // YYYY-MM-DD
    int64_t post_count = 0;
};

struct SimConfig {
    uint64_t seed = 1;
    int64_t agent_count = 100;
    int64_t day_count = 5;
    int64_t base_daily_posts = 200;
    std::vector<SpikeDay> spike_days;
    double activity_tail_exponent = 1.8; // per-agent activity weight distribution
    double injection_rate = 0.01;
    double crypto_rate = 0.05;
    double pump_rate = 0.01;
    double duplicate_rate = 0.02;
    double manipulation_rate = 0.02;
    double comment_to_post_ratio = 0.4;
    int64_t submolt_count = 8;
    int64_t rate_limit = 120;         // source requests per minute
    int64_t orphan_comment_count = 0; // comments pointing at absent posts
    std::string start_date = "2026-01-27";
};

/// What the generator deliberately planted, for exact-count verification.
struct GroundTruth {
    std::map<std::string, int64_t> counts;
    std::map<std::string, std::vector<std::string>> flagged_ids;
    std::map<std::string, int64_t> per_agent_posts;
    std::vector<std::pair<std::string, std::string>> duplicate_pairs;
};

// Flag keys used in GroundTruth.
inline constexpr const char* kFlagInjection = "injection";
inline constexpr const char* kFlagCrypto = "crypto";
inline constexpr const char* kFlagPumpDump = "pump_dump";
inline constexpr const char* kFlagDuplicateSpam = "duplicate_spam";
inline constexpr const char* kFlagBotComment = "bot_comment";
inline constexpr const char* kFlagManipulation = "manipulation";
inline constexpr const char* kFlagApiInjection = "api_injection";
inline constexpr const char* kFlagOrphanComment = "orphan_comment";

struct Corpus {
    SimConfig config;
    std::vector<AgentRecord> agents;     // platform profiles; observatory stamps empty
    std::vector<PostRecord> posts;       // ascending created_at, unique instants
    std::vector<CommentRecord> comments; // ascending created_at, unique instants
    std::vector<SubmoltRecord> submolts;
};

/// Deterministic generation: a fixed config yields a byte-identical corpus
/// and truth. Every flagged record embeds a concrete instance of a pattern
/// from the annotator's published pattern set; clean records stay clear of
/// the pattern vocabulary.
std::pair<Corpus, GroundTruth> generate_corpus(const SimConfig& config);

void write_corpus(const Corpus& corpus, const GroundTruth& truth, const std::string& dir);
Corpus load_corpus(const std::string& dir);
GroundTruth load_truth(const std::string& dir);

/// Mock platform serving a generated corpus through the read-only source
/// interface. Visibility is governed by an injected clock: a record exists
/// once its created_at is at or before now. The per-minute request budget
/// is the one piece of mutable state and is guarded by a mutex.
class SimPlatform final : public PlatformSource {
public:
    SimPlatform(Corpus corpus, std::function<Timestamp()> clock);

    Fetch<std::vector<PostRecord>> list_posts(const std::optional<Timestamp>& before,
                                              int limit) override;
    Fetch<std::vector<CommentRecord>> list_comments(const std::optional<Timestamp>& before,
                                                    int limit) override;
    Fetch<AgentRecord> get_agent(const std::string& id) override;
    Fetch<std::vector<SubmoltRecord>> list_submolts() override;
    Fetch<SnapshotRecord> get_snapshot() override;

    int64_t request_count() const { return requests_; }
    /// The source interface exposes no mutating call; this counter exists
    /// so tests can assert that fact end to end.
    int64_t write_call_count() const { return write_calls_; }

    const Corpus& corpus() const { return corpus_; }

private:
    bool throttle_check(int64_t& retry_after);

    Corpus corpus_;
    std::function<Timestamp()> clock_;
    std::map<std::string, size_t> agent_index_;
    std::vector<std::vector<int64_t>> post_comment_times_; // per post, ascending
    std::vector<int64_t> post_instants_;                   // ascending, unique
    std::vector<int64_t> comment_instants_;                // ascending, unique
    std::mutex budget_mutex_;
    int64_t window_minute_ = -1;
    int64_t window_count_ = 0;
    int64_t requests_ = 0;
    int64_t write_calls_ = 0;
};

} // namespace observatory::sim
