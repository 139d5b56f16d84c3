#include "observatory/collector.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

namespace observatory::collect {

void PollSchedule::validate() const {
    for (int64_t v : {posts_interval, comments_interval, agents_interval, submolts_interval,
                      word_frequency_interval, word_frequency_window, snapshots_interval}) {
        if (v <= 0) throw std::invalid_argument("schedule: intervals must be > 0");
    }
    if (posts_page_size < 1 || comments_page_size < 1 || agents_per_cycle < 1)
        throw std::invalid_argument("schedule: page sizes must be >= 1");
}

PollSchedule schedule_from_config(const std::string& text) {
    PollSchedule s;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            const auto e = v.find_last_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            return v.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        int64_t n = 0;
        try {
            n = std::stoll(value);
        } catch (...) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": '" + value +
                                        "' is not an integer");
        }
        if (key == "posts_interval") s.posts_interval = n;
        else if (key == "posts_page_size") s.posts_page_size = n;
        else if (key == "comments_interval") s.comments_interval = n;
        else if (key == "comments_page_size") s.comments_page_size = n;
        else if (key == "agents_interval") s.agents_interval = n;
        else if (key == "agents_per_cycle") s.agents_per_cycle = n;
        else if (key == "submolts_interval") s.submolts_interval = n;
        else if (key == "word_frequency_interval") s.word_frequency_interval = n;
        else if (key == "word_frequency_window") s.word_frequency_window = n;
        else if (key == "snapshots_interval") s.snapshots_interval = n;
        else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    s.validate();
    return s;
}

int64_t capture_budget(int64_t page_size, int64_t interval_seconds) {
    if (interval_seconds <= 0) throw std::domain_error("capture_budget: interval must be > 0");
    if (page_size < 0) throw std::domain_error("capture_budget: page size must be >= 0");
    return page_size * 86'400 / interval_seconds;
}

double estimate_coverage(int64_t daily_volume, int64_t budget) {
    if (budget < 0) throw std::domain_error("estimate_coverage: budget must be >= 0");
    if (daily_volume <= 0) return 1.0;
    const double frac = static_cast<double>(budget) / static_cast<double>(daily_volume);
    return frac > 1.0 ? 1.0 : frac;
}

Collector::Collector(PlatformSource& source, Store& store, PollSchedule schedule)
    : source_(source), store_(store), schedule_(std::move(schedule)) {
    schedule_.validate();
    feeds_ = {
        {"posts", schedule_.posts_interval, Timestamp{0, 0}},
        {"comments", schedule_.comments_interval, Timestamp{0, 0}},
        {"agents", schedule_.agents_interval, Timestamp{0, 0}},
        {"submolts", schedule_.submolts_interval, Timestamp{0, 0}},
        {"word_frequency", schedule_.word_frequency_interval, Timestamp{0, 0}},
        {"snapshots", schedule_.snapshots_interval, Timestamp{0, 0}},
    };
}

Timestamp Collector::next_due() const {
    Timestamp best = feeds_.front().due;
    for (const Feed& f : feeds_)
        if (f.due < best) best = f.due;
    return best;
}

int64_t Collector::total_fetched(const std::string& feed) const {
    auto it = totals_.find(feed);
    return it == totals_.end() ? 0 : it->second;
}

CycleReport Collector::run_poll_cycle(const Timestamp& now) {
    CycleReport report;
    store_.begin();
    for (Feed& feed : feeds_) {
        if (feed.due > now) continue;
        const size_t errors_before = report.errors.size();
        const size_t throttles_before = report.throttled.size();
        if (feed.name == "posts") poll_posts(now, report);
        else if (feed.name == "comments") poll_comments(now, report);
        else if (feed.name == "agents") poll_agents(now, report);
        else if (feed.name == "submolts") poll_submolts(now, report);
        else if (feed.name == "word_frequency") poll_word_frequency(now, report);
        else if (feed.name == "snapshots") poll_snapshots(now, report);

        if (report.throttled.size() > throttles_before) {
            // skip one interval on a throttle verdict
            feed.due = add_seconds(now, 2 * feed.interval);
        } else {
            feed.due = add_seconds(now, feed.interval);
            (void)errors_before; // transport failures retry at the normal cadence
        }
    }
    store_.commit();
    for (const auto& [feed, n] : report.fetched) totals_[feed] += n;
    return report;
}

namespace {

std::string stamp(const Timestamp& now) { return format_timestamp(Timestamp{now.utc_micros, 0}); }

} // namespace

void Collector::poll_posts(const Timestamp& now, CycleReport& report) {
    auto& cur = posts_cursor_;
    const int limit = static_cast<int>(schedule_.posts_page_size);
    auto page = cur.backfilling ? source_.list_posts(cur.before, limit)
                                : source_.list_posts(std::nullopt, limit);
    if (page.status == FetchStatus::throttled) {
        report.throttled["posts"] = page.retry_after_seconds.value_or(0);
        return;
    }
    if (page.status == FetchStatus::error) {
        report.errors["posts"] = page.error;
        return;
    }
    bool any_seen = false;
    for (PostRecord p : page.value) {
        p.fetched_at = stamp(now);
        if (store_.upsert_post(p) == UpsertOutcome::replaced) any_seen = true;
    }
    report.fetched["posts"] = static_cast<int64_t>(page.value.size());

    const bool full = static_cast<int>(page.value.size()) == limit;
    std::optional<Timestamp> oldest;
    if (!page.value.empty()) oldest = parse_timestamp(page.value.back().created_at);
    if (cur.backfilling) {
        if (!full || any_seen || !oldest) {
            cur.backfilling = false; // reached known records or the end
        } else {
            cur.before = oldest;
        }
    } else if (full && !any_seen && oldest) {
        // a whole page of unseen posts: older history may be missing
        cur.backfilling = true;
        cur.before = oldest;
    }
}

void Collector::poll_comments(const Timestamp& now, CycleReport& report) {
    auto& cur = comments_cursor_;
    const int limit = static_cast<int>(schedule_.comments_page_size);
    auto page = cur.backfilling ? source_.list_comments(cur.before, limit)
                                : source_.list_comments(std::nullopt, limit);
    if (page.status == FetchStatus::throttled) {
        report.throttled["comments"] = page.retry_after_seconds.value_or(0);
        return;
    }
    if (page.status == FetchStatus::error) {
        report.errors["comments"] = page.error;
        return;
    }
    bool any_seen = false;
    for (CommentRecord c : page.value) {
        c.fetched_at = stamp(now);
        if (store_.upsert_comment(c) == UpsertOutcome::replaced) any_seen = true;
    }
    report.fetched["comments"] = static_cast<int64_t>(page.value.size());

    const bool full = static_cast<int>(page.value.size()) == limit;
    std::optional<Timestamp> oldest;
    if (!page.value.empty()) oldest = parse_timestamp(page.value.back().created_at);
    if (cur.backfilling) {
        if (!full || any_seen || !oldest) {
            cur.backfilling = false;
        } else {
            cur.before = oldest;
        }
    } else if (full && !any_seen && oldest) {
        cur.backfilling = true;
        cur.before = oldest;
    }
}

void Collector::poll_agents(const Timestamp& now, CycleReport& report) {
    const auto ids = store_.distinct_agent_ids();
    report.fetched["agents"] = 0;
    if (ids.empty()) return;
    const size_t budget = static_cast<size_t>(
        std::min<int64_t>(schedule_.agents_per_cycle, static_cast<int64_t>(ids.size())));
    for (size_t i = 0; i < budget; ++i) {
        const std::string& id = ids[(agent_rr_ + i) % ids.size()];
        auto fetched = source_.get_agent(id);
        if (fetched.status == FetchStatus::throttled) {
            report.throttled["agents"] = fetched.retry_after_seconds.value_or(0);
            agent_rr_ = (agent_rr_ + i) % ids.size();
            return;
        }
        if (fetched.status == FetchStatus::error) continue; // unknown ids stay unknown
        AgentRecord a = fetched.value;
        a.first_seen_at = stamp(now);
        a.last_seen_at = stamp(now);
        store_.upsert_agent(a);
        report.fetched["agents"] += 1;
    }
    agent_rr_ = (agent_rr_ + budget) % ids.size();
}

void Collector::poll_submolts(const Timestamp& now, CycleReport& report) {
    auto fetched = source_.list_submolts();
    if (fetched.status == FetchStatus::throttled) {
        report.throttled["submolts"] = fetched.retry_after_seconds.value_or(0);
        return;
    }
    if (fetched.status == FetchStatus::error) {
        report.errors["submolts"] = fetched.error;
        return;
    }
    for (SubmoltRecord s : fetched.value) {
        s.first_seen_at = stamp(now);
        store_.upsert_submolt(s);
    }
    report.fetched["submolts"] = static_cast<int64_t>(fetched.value.size());
}

void Collector::poll_word_frequency(const Timestamp& now, CycleReport& report) {
    const auto rows = compute_word_frequency(store_, schedule_.word_frequency_window, now);
    for (const WordFrequencyRecord& r : rows) store_.upsert_word_frequency(r);
    report.fetched["word_frequency"] = static_cast<int64_t>(rows.size());
}

void Collector::poll_snapshots(const Timestamp&, CycleReport& report) {
    auto fetched = source_.get_snapshot();
    if (fetched.status == FetchStatus::throttled) {
        report.throttled["snapshots"] = fetched.retry_after_seconds.value_or(0);
        return;
    }
    if (fetched.status == FetchStatus::error) {
        report.errors["snapshots"] = fetched.error;
        return;
    }
    store_.upsert_snapshot(fetched.value);
    report.fetched["snapshots"] = 1;
}

std::vector<WordFrequencyRecord> Collector::compute_word_frequency(Store& store,
                                                                   int64_t window_seconds,
                                                                   const Timestamp& now) {
    if (window_seconds <= 0) throw std::invalid_argument("word frequency window must be > 0");
    const Timestamp from = add_seconds(now, -window_seconds);
    const auto rows = store.query_rows_between(TableName::posts, "created_at", from, now);

    std::map<std::string, int64_t> counts;
    for (const Row& row : rows) {
        const std::string& content = std::get<std::string>(row[5]);
        std::string token;
        auto flush = [&]() {
            if (!token.empty()) {
                counts[token] += 1;
                token.clear();
            }
        };
        for (char ch : content) {
            if (std::isspace(static_cast<unsigned char>(ch))) {
                flush();
            } else {
                token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            }
        }
        flush();
    }

    const std::string hour = format_timestamp(truncate_to_hour_utc(now));
    std::vector<WordFrequencyRecord> out;
    out.reserve(counts.size());
    for (const auto& [word, count] : counts) out.push_back({word, hour, count});
    return out;
}

} // namespace observatory::collect
