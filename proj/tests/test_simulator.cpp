#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "observatory/rng.hpp"

#include "observatory/model.hpp"
#include "observatory/simulator.hpp"

using namespace observatory;
using namespace observatory::sim;
namespace fs = std::filesystem;

namespace {

SimConfig small_config() {
    SimConfig c;
    c.seed = 7;
    c.agent_count = 40;
    c.day_count = 3;
    c.base_daily_posts = 120;
    c.spike_days = {{"2026-01-28", 300}};
    c.injection_rate = 0.05;
    c.crypto_rate = 0.08;
    c.pump_rate = 0.03;
    c.duplicate_rate = 0.06;
    c.manipulation_rate = 0.05;
    c.comment_to_post_ratio = 0.5;
    c.submolt_count = 4;
    c.rate_limit = 1'000'000;
    return c;
}

// Reference scan, independent of the annotator: plain substring probes for
// hallmark strings of each planted pattern family.
bool contains_ci(const std::string& haystack, const std::string& needle) {
    auto lower = [](std::string s) {
        for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return s;
    };
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

bool scan_injection(const std::string& text) {
    for (const char* probe :
         {"ignore previous instructions", "ai agents reading this", "post /api", "curl -x",
          "<system>", "[inst]", "<hidden", "new instructions:", "disregard everything",
          "reveal your system prompt", "you are now"})
        if (contains_ci(text, probe)) return true;
    return false;
}

bool scan_crypto(const std::string& text) {
    for (const char* probe :
         {"$mbc", "$qnt", "$doge", "blockchain", "tokenomics", "wallets", "airdrop", "0x8f3a",
          "bitcoin", "ethereum", "defi", "guaranteed gains", "pump", "dump", "rug pull",
          "to the moon", "100x", "lambos"})
        if (contains_ci(text, probe)) return true;
    return false;
}

bool scan_pump(const std::string& text) {
    for (const char* probe : {"pump", "dump", "rug pull", "to the moon", "100x", "lambos"})
        if (contains_ci(text, probe)) return true;
    return false;
}

} // namespace

TEST_CASE("empty config produces an empty corpus with zeroed truth") {
    SimConfig c;
    c.agent_count = 0;
    c.base_daily_posts = 0;
    c.day_count = 4;
    auto [corpus, truth] = generate_corpus(c);
    CHECK(corpus.agents.empty());
    CHECK(corpus.posts.empty());
    CHECK(corpus.comments.empty());
    for (const auto& [flag, count] : truth.counts) {
        CAPTURE(flag);
        CHECK(count == 0);
    }
}

TEST_CASE("posts configured without agents are a configuration error") {
    SimConfig c;
    c.agent_count = 0;
    c.base_daily_posts = 10;
    CHECK_THROWS_AS(generate_corpus(c), std::invalid_argument);
}

TEST_CASE("rates outside [0,1] are rejected") {
    SimConfig c = small_config();
    c.injection_rate = 1.5;
    CHECK_THROWS_AS(generate_corpus(c), std::invalid_argument);
}

TEST_CASE("equal seeds produce byte-identical corpora and truth") {
    auto dir_a = fs::temp_directory_path() / "sim_det_a";
    auto dir_b = fs::temp_directory_path() / "sim_det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    {
        auto [corpus, truth] = generate_corpus(small_config());
        write_corpus(corpus, truth, dir_a.string());
    }
    {
        auto [corpus, truth] = generate_corpus(small_config());
        write_corpus(corpus, truth, dir_b.string());
    }
    for (const char* name : {"agents.jsonl", "posts.jsonl", "comments.jsonl", "submolts.jsonl",
                             "truth.json", "config.json"}) {
        std::ifstream fa(dir_a / name, std::ios::binary), fb(dir_b / name, std::ios::binary);
        std::string ca((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string cb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        CAPTURE(name);
        CHECK(ca == cb);
        CHECK(!ca.empty());
    }
}

TEST_CASE("different seeds differ") {
    SimConfig a = small_config();
    SimConfig b = small_config();
    b.seed = 8;
    auto [ca, ta] = generate_corpus(a);
    auto [cb, tb] = generate_corpus(b);
    REQUIRE(ca.posts.size() == cb.posts.size());
    bool any_diff = false;
    for (size_t i = 0; i < ca.posts.size() && !any_diff; ++i)
        any_diff = ca.posts[i].content != cb.posts[i].content;
    CHECK(any_diff);
}

TEST_CASE("truth counts match an independent re-scan of the generated text") {
    auto [corpus, truth] = generate_corpus(small_config());

    int64_t injection = 0, crypto = 0, pump = 0;
    for (const PostRecord& p : corpus.posts) {
        const std::string text = p.title + " " + p.content;
        if (scan_injection(text)) ++injection;
        if (scan_crypto(text)) ++crypto;
        if (scan_pump(text)) ++pump;
    }
    CHECK(injection == truth.counts.at(kFlagInjection));
    CHECK(crypto == truth.counts.at(kFlagCrypto));
    CHECK(pump == truth.counts.at(kFlagPumpDump));
    CHECK(truth.counts.at(kFlagInjection) > 0);
    CHECK(truth.counts.at(kFlagPumpDump) > 0);

    // duplicate truth equals a direct group-by on (agent_name, title)
    std::map<std::pair<std::string, std::string>, int64_t> groups;
    for (const PostRecord& p : corpus.posts) groups[{p.agent_name, p.title}] += 1;
    int64_t dup = 0;
    for (const PostRecord& p : corpus.posts)
        if (groups[{p.agent_name, p.title}] >= 2) ++dup;
    CHECK(dup == truth.counts.at(kFlagDuplicateSpam));
    CHECK(dup > 0);

    // bot-comment truth equals a group-by on (agent_name, content)
    std::map<std::pair<std::string, std::string>, int64_t> cgroups;
    for (const CommentRecord& c : corpus.comments) cgroups[{c.agent_name, c.content}] += 1;
    int64_t bots = 0;
    for (const CommentRecord& c : corpus.comments)
        if (cgroups[{c.agent_name, c.content}] >= 2) ++bots;
    CHECK(bots == truth.counts.at(kFlagBotComment));
}

TEST_CASE("inverse-CDF power-law sampling matches the analytic pmf") {
    // oracle: empirical frequencies against k^-alpha / Z over a truncated
    // support, fixed seed
    const double alpha = 2.0;
    const uint64_t support = 1'000;
    PowerLawSampler sampler(alpha, support);
    Rng rng(314159);
    const int n = 200'000;
    std::map<uint64_t, int64_t> histogram;
    for (int i = 0; i < n; ++i) histogram[sampler.sample(rng)] += 1;

    double z = 0;
    for (uint64_t k = 1; k <= support; ++k) z += std::pow(double(k), -alpha);
    for (uint64_t k : {1ULL, 2ULL, 3ULL, 5ULL, 10ULL}) {
        const double expected = std::pow(double(k), -alpha) / z;
        const double got = double(histogram[k]) / double(n);
        const double sigma = std::sqrt(expected * (1 - expected) / n);
        CAPTURE(k);
        CHECK(std::abs(got - expected) < 5 * sigma + 1e-9);
    }
    for (const auto& [k, _] : histogram) {
        CHECK(k >= 1);
        CHECK(k <= support);
    }
    CHECK_THROWS_AS(PowerLawSampler(1.0, 100), std::invalid_argument);
}

TEST_CASE("per-agent activity is heavy-tailed") {
    auto [corpus, truth] = generate_corpus(small_config());
    std::vector<int64_t> counts;
    for (const auto& [_, n] : truth.per_agent_posts) counts.push_back(n);
    REQUIRE(!counts.empty());
    std::sort(counts.begin(), counts.end());
    const int64_t median = counts[(counts.size() - 1) / 2];
    CHECK(counts.back() >= 4 * median); // a dominant heavy hitter exists
}

TEST_CASE("per-agent post counts in truth match the corpus") {
    auto [corpus, truth] = generate_corpus(small_config());
    std::map<std::string, int64_t> counts;
    for (const PostRecord& p : corpus.posts) counts[p.agent_id] += 1;
    CHECK(counts == truth.per_agent_posts);
}

TEST_CASE("spike day carries the configured post count") {
    auto [corpus, truth] = generate_corpus(small_config());
    std::map<std::string, int64_t> per_day;
    for (const PostRecord& p : corpus.posts) per_day[utc_date(*parse_timestamp(p.created_at))] += 1;
    CHECK(per_day["2026-01-28"] == 300);
    CHECK(per_day["2026-01-27"] == 120);
    CHECK(per_day["2026-01-29"] == 120);
}

TEST_CASE("orphan comments dangle exactly as configured") {
    SimConfig c = small_config();
    c.orphan_comment_count = 5;
    auto [corpus, truth] = generate_corpus(c);
    CHECK(truth.counts.at(kFlagOrphanComment) == 5);
    std::unordered_set<std::string> post_ids;
    for (const PostRecord& p : corpus.posts) post_ids.insert(p.id);
    int64_t dangling = 0;
    for (const CommentRecord& cm : corpus.comments)
        if (!post_ids.count(cm.post_id)) ++dangling;
    CHECK(dangling == 5);
}

TEST_CASE("comment parents reference existing earlier comments") {
    auto [corpus, truth] = generate_corpus(small_config());
    std::unordered_set<std::string> seen;
    int64_t with_parent = 0;
    for (const CommentRecord& c : corpus.comments) {
        if (c.parent_id) {
            ++with_parent;
            CHECK(seen.count(*c.parent_id) == 1);
        }
        seen.insert(c.id);
    }
    CHECK(with_parent > 0);
}

TEST_CASE("corpus round-trips through the directory format") {
    auto dir = fs::temp_directory_path() / "sim_roundtrip";
    fs::remove_all(dir);
    auto [corpus, truth] = generate_corpus(small_config());
    write_corpus(corpus, truth, dir.string());
    Corpus back = load_corpus(dir.string());
    GroundTruth tback = load_truth(dir.string());
    CHECK(back.posts.size() == corpus.posts.size());
    CHECK(back.comments.size() == corpus.comments.size());
    CHECK(back.agents.size() == corpus.agents.size());
    CHECK(back.posts[0].id == corpus.posts[0].id);
    CHECK(back.posts.back().content == corpus.posts.back().content);
    CHECK(tback.counts == truth.counts);
    CHECK(tback.duplicate_pairs == truth.duplicate_pairs);
    CHECK(back.config.seed == corpus.config.seed);
}

// --- serving ---------------------------------------------------------------

namespace {

struct FixedClock {
    Timestamp now;
    Timestamp operator()() const { return now; }
};

} // namespace

TEST_CASE("serve_page returns newest first and honors the cursor") {
    SimConfig c;
    c.seed = 3;
    c.agent_count = 3;
    c.day_count = 1;
    c.base_daily_posts = 3;
    c.submolt_count = 1;
    c.comment_to_post_ratio = 0;
    c.injection_rate = c.crypto_rate = c.pump_rate = c.duplicate_rate = 0;
    auto [corpus, truth] = generate_corpus(c);
    REQUIRE(corpus.posts.size() == 3);
    const auto t1 = *parse_timestamp(corpus.posts[0].created_at);
    const auto t2 = *parse_timestamp(corpus.posts[1].created_at);
    const auto t3 = *parse_timestamp(corpus.posts[2].created_at);
    REQUIRE(t1 < t2);
    REQUIRE(t2 < t3);

    Timestamp end = add_days(*parse_date(c.start_date), 1);
    SimPlatform platform(corpus, [end]() { return end; });

    auto newest = platform.list_posts(std::nullopt, 2);
    REQUIRE(newest.ok());
    REQUIRE(newest.value.size() == 2);
    CHECK(newest.value[0].id == corpus.posts[2].id);
    CHECK(newest.value[1].id == corpus.posts[1].id);

    auto older = platform.list_posts(t2, 50);
    REQUIRE(older.ok());
    REQUIRE(older.value.size() == 1); // strictly older than t2
    CHECK(older.value[0].id == corpus.posts[0].id);

    auto none = platform.list_posts(t1, 50);
    REQUIRE(none.ok());
    CHECK(none.value.empty());

    CHECK_FALSE(platform.list_posts(std::nullopt, 0).ok());
}

TEST_CASE("posts newer than the clock are invisible") {
    SimConfig c = small_config();
    auto [corpus, truth] = generate_corpus(c);
    Timestamp mid = add_days(*parse_date(c.start_date), 1); // after day 0 only
    SimPlatform platform(corpus, [mid]() { return mid; });
    auto page = platform.list_posts(std::nullopt, 10'000);
    REQUIRE(page.ok());
    CHECK(page.value.size() == 120); // day 0 posts only
    for (const PostRecord& p : page.value)
        CHECK(parse_timestamp(p.created_at)->utc_micros <= mid.utc_micros);
}

TEST_CASE("pagination to exhaustion yields every post exactly once") {
    auto [corpus, truth] = generate_corpus(small_config());
    Timestamp end = add_days(*parse_date(corpus.config.start_date), corpus.config.day_count + 1);
    SimPlatform platform(corpus, [end]() { return end; });

    std::set<std::string> seen;
    std::optional<Timestamp> cursor;
    while (true) {
        auto page = platform.list_posts(cursor, 37);
        REQUIRE(page.ok());
        if (page.value.empty()) break;
        for (const PostRecord& p : page.value) {
            CHECK(seen.insert(p.id).second); // exactly once
        }
        cursor = parse_timestamp(page.value.back().created_at);
    }
    CHECK(seen.size() == corpus.posts.size());
}

TEST_CASE("the per-minute budget throttles and then recovers") {
    SimConfig c = small_config();
    c.rate_limit = 2;
    auto [corpus, truth] = generate_corpus(c);
    Timestamp now = add_days(*parse_date(c.start_date), 1);
    SimPlatform platform(corpus, [&now]() { return now; });

    CHECK(platform.list_posts(std::nullopt, 1).ok());
    CHECK(platform.list_posts(std::nullopt, 1).ok());
    auto third = platform.list_posts(std::nullopt, 1);
    CHECK(third.status == FetchStatus::throttled);
    REQUIRE(third.retry_after_seconds.has_value());
    CHECK(*third.retry_after_seconds >= 1);
    CHECK(*third.retry_after_seconds <= 60);

    now = add_seconds(now, 61);
    CHECK(platform.list_posts(std::nullopt, 1).ok());
    CHECK(platform.write_call_count() == 0);
}

TEST_CASE("snapshots pass platform aggregates through") {
    SimConfig c = small_config();
    auto [corpus, truth] = generate_corpus(c);
    Timestamp end = add_days(*parse_date(c.start_date), c.day_count);
    SimPlatform platform(corpus, [end]() { return end; });
    auto snap = platform.get_snapshot();
    REQUIRE(snap.ok());
    CHECK(snap.value.total_agents == static_cast<int64_t>(corpus.agents.size()));
    CHECK(snap.value.total_posts == static_cast<int64_t>(corpus.posts.size()));
    CHECK(snap.value.total_comments == static_cast<int64_t>(corpus.comments.size()));
    CHECK(!snap.value.top_words.empty());
    // unknown agent is a transport-style error, not a crash
    CHECK(platform.get_agent("a_nope").status == FetchStatus::error);
}
