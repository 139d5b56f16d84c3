#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "observatory/model.hpp"
#include "observatory/source.hpp"
#include "observatory/store.hpp"

namespace observatory::collect {

/// Polling cadences. Durations are seconds.
struct PollSchedule {
    int64_t posts_interval = 120;
    int64_t posts_page_size = 50;
    int64_t comments_interval = 120;
    int64_t comments_page_size = 50;
    int64_t agents_interval = 15 * 60;
    int64_t agents_per_cycle = 50; // profile refreshes per due cycle
    int64_t submolts_interval = 60 * 60;
    int64_t word_frequency_interval = 10 * 60;
    int64_t word_frequency_window = 10 * 60;
    int64_t snapshots_interval = 60 * 60;

    void validate() const;
};

/// Parses a key-value config document ("key = value" lines, '#' comments).
/// Unknown keys are rejected.
PollSchedule schedule_from_config(const std::string& text);

/// Theoretical capture budget in posts per day: floor(page_size * 86400 / interval).
int64_t capture_budget(int64_t page_size, int64_t interval_seconds);

/// A page-size/interval pair and its derived daily budget.
struct RateBudget {
    int64_t page_size = 50;
    int64_t interval_seconds = 120;

    int64_t posts_per_day() const { return capture_budget(page_size, interval_seconds); }
};

/// min(1, budget / daily_volume); 1 when the day had no posts.
double estimate_coverage(int64_t daily_volume, int64_t budget);

struct CycleReport {
    // feed name -> records fetched; a feed appears only if it ran
    std::map<std::string, int64_t> fetched;
    std::map<std::string, int64_t> throttled; // feeds skipped on a throttle verdict
    std::map<std::string, std::string> errors;
};

/// Scheduled read-only poller. Feed state (due times, history cursors)
/// persists across cycles; all writes funnel through the single store.
class Collector {
public:
    Collector(PlatformSource& source, Store& store, PollSchedule schedule);

    /// Polls every feed whose next-due time is at or before `now`, once.
    /// Fetched records are upserted with fetched_at = now. A throttled
    /// feed backs off one full interval.
    CycleReport run_poll_cycle(const Timestamp& now);

    /// Next instant at which any feed becomes due.
    Timestamp next_due() const;

    /// Tokenizes posts created in [now - window, now] by whitespace,
    /// lowercased, every token counted, and upserts the per-hour rows.
    static std::vector<WordFrequencyRecord> compute_word_frequency(Store& store,
                                                                   int64_t window_seconds,
                                                                   const Timestamp& now);

    int64_t total_fetched(const std::string& feed) const;

private:
    struct Feed {
        std::string name;
        int64_t interval = 0;
        Timestamp due{0, 0};
    };

    void poll_posts(const Timestamp& now, CycleReport& report);
    void poll_comments(const Timestamp& now, CycleReport& report);
    void poll_agents(const Timestamp& now, CycleReport& report);
    void poll_submolts(const Timestamp& now, CycleReport& report);
    void poll_word_frequency(const Timestamp& now, CycleReport& report);
    void poll_snapshots(const Timestamp& now, CycleReport& report);

    PlatformSource& source_;
    Store& store_;
    PollSchedule schedule_;
    std::vector<Feed> feeds_;
    std::map<std::string, int64_t> totals_;

    // Reverse-chronological history walk for paged feeds: when a full page
    // of unseen records arrives, older history may remain; keep walking
    // with a before-cursor until a page overlaps known records or runs dry.
    struct PageCursor {
        bool backfilling = false;
        std::optional<Timestamp> before;
    };
    PageCursor posts_cursor_;
    PageCursor comments_cursor_;
    size_t agent_rr_ = 0; // round-robin position over known agent ids
};

} // namespace observatory::collect
