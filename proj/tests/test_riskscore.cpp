#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "observatory/annotator.hpp"
#include "observatory/riskscore.hpp"
#include "observatory/rng.hpp"
#include "observatory/simulator.hpp"

using namespace observatory;
using namespace observatory::risk;

TEST_CASE("composite score weight arithmetic") {
    RiskIndicators zero;
    CHECK(composite_score(zero) == 0.0);

    RiskIndicators ones;
    ones.injection_rate = ones.duplicate_rate = ones.crypto_rate = ones.manipulation_count_norm =
        ones.abnormal_frequency = ones.repetitiveness = ones.submolt_concentration =
            ones.self_interaction_rate = 1.0;
    CHECK(composite_score(ones) == 100.0);

    RiskIndicators two;
    two.injection_rate = 1.0;
    two.duplicate_rate = 1.0;
    CHECK(composite_score(two) == 40.0);

    RiskIndicators bad;
    bad.crypto_rate = 1.5;
    CHECK_THROWS_AS(composite_score(bad), std::invalid_argument);
}

TEST_CASE("score is monotone in every indicator") {
    Rng rng(3);
    for (int iter = 0; iter < 200; ++iter) {
        RiskIndicators a;
        double* fields[8] = {&a.injection_rate,     &a.duplicate_rate, &a.crypto_rate,
                             &a.manipulation_count_norm, &a.abnormal_frequency, &a.repetitiveness,
                             &a.submolt_concentration,   &a.self_interaction_rate};
        for (double* f : fields) *f = rng.real() * 0.8;
        const double base = composite_score(a);
        const size_t bump = rng.below(8);
        *fields[bump] += 0.2;
        CHECK(composite_score(a) >= base);
    }
}

TEST_CASE("scaling all indicators preserves score ordering") {
    Rng rng(4);
    for (int iter = 0; iter < 100; ++iter) {
        auto random_ind = [&]() {
            RiskIndicators r;
            r.injection_rate = rng.real();
            r.duplicate_rate = rng.real();
            r.crypto_rate = rng.real();
            r.manipulation_count_norm = rng.real();
            r.abnormal_frequency = rng.real();
            r.repetitiveness = rng.real();
            r.submolt_concentration = rng.real();
            r.self_interaction_rate = rng.real();
            return r;
        };
        auto scale = [](RiskIndicators r, double c) {
            r.injection_rate *= c;
            r.duplicate_rate *= c;
            r.crypto_rate *= c;
            r.manipulation_count_norm *= c;
            r.abnormal_frequency *= c;
            r.repetitiveness *= c;
            r.submolt_concentration *= c;
            r.self_interaction_rate *= c;
            return r;
        };
        RiskIndicators a = random_ind(), b = random_ind();
        const double c = 0.05 + rng.real() * 0.95;
        const bool before = composite_score(a) < composite_score(b);
        const bool after = composite_score(scale(a, c)) < composite_score(scale(b, c));
        CHECK(before == after);
    }
}

TEST_CASE("tier boundaries are exact at 15/35/60") {
    CHECK(assign_tier(0.0) == Tier::low);
    CHECK(assign_tier(14.999) == Tier::low);
    CHECK(assign_tier(15.0) == Tier::moderate);
    CHECK(assign_tier(34.999) == Tier::moderate);
    CHECK(assign_tier(35.0) == Tier::high);
    CHECK(assign_tier(59.999) == Tier::high);
    CHECK(assign_tier(60.0) == Tier::critical);
    CHECK(assign_tier(100.0) == Tier::critical);
    CHECK_THROWS_AS(assign_tier(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(assign_tier(101.0), std::invalid_argument);
}

namespace {

PostRecord mk_post(const std::string& id, const std::string& agent, const std::string& submolt,
                   const std::string& content, const std::string& created) {
    PostRecord p;
    p.id = id;
    p.agent_id = agent;
    p.agent_name = agent;
    p.submolt = submolt;
    p.title = "title " + id;
    p.content = content;
    p.created_at = created;
    p.fetched_at = created;
    return p;
}

CommentRecord mk_comment(const std::string& id, const std::string& agent, const std::string& post,
                         const std::string& content) {
    CommentRecord c;
    c.id = id;
    c.agent_id = agent;
    c.agent_name = agent;
    c.post_id = post;
    c.content = content;
    c.created_at = "2026-02-09T10:00:00+00:00";
    c.fetched_at = "2026-02-09T10:00:00+00:00";
    return c;
}

} // namespace

TEST_CASE("indicator extraction from activity") {
    AgentActivity act;
    auto p1 = mk_post("P1", "a1", "s1", "alpha beta gamma", "2026-02-09T10:00:00+00:00");
    auto p2 = mk_post("P2", "a1", "s2", "delta epsilon zeta", "2026-02-09T11:00:00+00:00");
    auto p3 = mk_post("P3", "a1", "s3", "eta theta iota", "2026-02-10T10:00:00+00:00");
    auto p4 = mk_post("P4", "a1", "s4", "kappa lambda mu", "2026-02-10T11:00:00+00:00");
    act.posts = {&p1, &p2, &p3, &p4};
    act.injection_posts = 4;

    RiskIndicators ind = compute_indicators(act);
    CHECK(ind.injection_rate == 1.0);
    CHECK(ind.submolt_concentration == doctest::Approx(0.25)); // one post in each of 4 submolts
    CHECK(ind.repetitiveness == doctest::Approx(0.0));         // all tokens distinct
    CHECK(ind.self_interaction_rate == 0.0);                   // no comments at all

    AgentActivity none;
    CHECK_THROWS_AS(compute_indicators(none), std::invalid_argument);
}

TEST_CASE("repetitiveness grows toward 1 as identical posts accumulate") {
    // oracle: direct entropy computation on the token multiset
    auto entropy_rep = [](const std::vector<std::string>& contents) {
        std::map<std::string, int64_t> counts;
        int64_t total = 0;
        for (const std::string& c : contents) {
            std::string token;
            for (char ch : c + " ") {
                if (std::isspace(static_cast<unsigned char>(ch))) {
                    if (!token.empty()) counts[token] += 1, ++total, token.clear();
                } else {
                    token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
                }
            }
        }
        if (counts.size() <= 1) return 0.0;
        double h = 0;
        for (auto& [_, n] : counts) {
            double p = double(n) / double(total);
            h -= p * std::log(p);
        }
        return 1.0 - h / std::log(double(counts.size()));
    };

    std::vector<std::string> contents = {"alpha beta gamma delta", "epsilon zeta eta theta"};
    double prev = -1.0;
    for (int reps = 1; reps <= 64; reps *= 2) {
        std::vector<std::string> corpus = contents;
        for (int i = 0; i < reps; ++i) corpus.push_back("spam");

        std::vector<PostRecord> posts;
        std::vector<const PostRecord*> ptrs;
        for (size_t i = 0; i < corpus.size(); ++i)
            posts.push_back(mk_post("P" + std::to_string(i), "a1", "s", corpus[i],
                                    "2026-02-09T10:00:00+00:00"));
        AgentActivity act;
        for (const auto& p : posts) act.posts.push_back(&p);
        RiskIndicators ind = compute_indicators(act);

        CHECK(ind.repetitiveness == doctest::Approx(entropy_rep(corpus)).epsilon(1e-9));
        CHECK(ind.repetitiveness > prev);
        prev = ind.repetitiveness;
    }
    CHECK(prev > 0.5); // approaching 1 as the repeated token dominates
}

TEST_CASE("population scoring gates eligibility at two posts") {
    std::vector<PostRecord> posts = {
        mk_post("P1", "solo", "s", "one post only", "2026-02-09T10:00:00+00:00"),
        mk_post("P2", "busy", "s", "first words", "2026-02-09T10:00:00+00:00"),
        mk_post("P3", "busy", "s", "second words", "2026-02-09T11:00:00+00:00"),
    };
    std::vector<CommentRecord> comments;
    annotate::Annotator annotator;
    auto ann = annotate::annotate_corpus(posts, comments, annotator);
    auto scores = score_population(posts, comments, ann.posts, ann.comments);

    REQUIRE(scores.profiles.size() == 2);
    std::map<std::string, const RiskProfile*> by_id;
    for (const auto& p : scores.profiles) by_id[p.agent_id] = &p;
    CHECK_FALSE(by_id.at("solo")->eligible);
    CHECK_FALSE(by_id.at("solo")->score.has_value());
    CHECK(by_id.at("busy")->eligible);
    REQUIRE(by_id.at("busy")->score.has_value());
    CHECK(scores.census.eligible == 1);
    CHECK(scores.census.ineligible == 1);
    CHECK(scores.census.tier_total() == scores.census.eligible);
}

TEST_CASE("self interaction counts comments on own posts") {
    std::vector<PostRecord> posts = {
        mk_post("P1", "a1", "s", "alpha", "2026-02-09T10:00:00+00:00"),
        mk_post("P2", "a1", "s", "beta", "2026-02-09T11:00:00+00:00"),
        mk_post("P3", "a2", "s", "gamma", "2026-02-09T11:00:00+00:00"),
        mk_post("P4", "a2", "s", "delta", "2026-02-09T12:00:00+00:00"),
    };
    std::vector<CommentRecord> comments = {
        mk_comment("C1", "a1", "P1", "on my own post"),
        mk_comment("C2", "a1", "P3", "on another post"),
        mk_comment("C3", "a2", "P3", "self comment too"),
    };
    annotate::Annotator annotator;
    auto ann = annotate::annotate_corpus(posts, comments, annotator);
    auto scores = score_population(posts, comments, ann.posts, ann.comments);
    std::map<std::string, const RiskProfile*> by_id;
    for (const auto& p : scores.profiles) by_id[p.agent_id] = &p;
    CHECK(by_id.at("a1")->indicators.self_interaction_rate == doctest::Approx(0.5));
    CHECK(by_id.at("a2")->indicators.self_interaction_rate == doctest::Approx(1.0));
}

TEST_CASE("clean population lands in the low tier and census partitions") {
    sim::SimConfig c;
    c.seed = 17;
    c.agent_count = 12;
    c.day_count = 2;
    c.base_daily_posts = 150;
    c.injection_rate = c.crypto_rate = c.pump_rate = c.duplicate_rate = c.manipulation_rate = 0;
    c.comment_to_post_ratio = 0.3;
    auto [corpus, truth] = sim::generate_corpus(c);
    annotate::Annotator annotator;
    auto ann = annotate::annotate_corpus(corpus.posts, corpus.comments, annotator);
    auto scores = score_population(corpus.posts, corpus.comments, ann.posts, ann.comments);

    CHECK(scores.census.tier_total() == scores.census.eligible);
    CHECK(scores.census.eligible + scores.census.ineligible ==
          static_cast<int64_t>(scores.profiles.size()));
    // clean template content is diverse; risk should be dominated by the
    // structural indicators and stay out of the critical tier
    CHECK(scores.census.critical == 0);
    for (const auto& p : scores.profiles) {
        if (!p.eligible) continue;
        CHECK(*p.score >= 0.0);
        CHECK(*p.score <= 100.0);
    }
}

TEST_CASE("population scores match a brute-force recomputation") {
    sim::SimConfig c;
    c.seed = 23;
    c.agent_count = 30;
    c.day_count = 2;
    c.base_daily_posts = 220;
    c.injection_rate = 0.05;
    c.crypto_rate = 0.06;
    c.pump_rate = 0.02;
    c.duplicate_rate = 0.05;
    c.manipulation_rate = 0.05;
    c.comment_to_post_ratio = 0.5;
    auto [corpus, truth] = sim::generate_corpus(c);
    annotate::Annotator annotator;
    auto ann = annotate::annotate_corpus(corpus.posts, corpus.comments, annotator);
    auto scores = score_population(corpus.posts, corpus.comments, ann.posts, ann.comments);

    // independent recomputation from raw records
    std::map<std::string, const annotate::PostAnnotation*> pann;
    for (const auto& a : ann.posts) pann[a.id] = &a;
    std::map<std::string, const annotate::CommentAnnotation*> cann;
    for (const auto& a : ann.comments) cann[a.id] = &a;
    std::map<std::string, const PostRecord*> post_by_id;
    for (const auto& p : corpus.posts) post_by_id[p.id] = &p;

    for (const RiskProfile& profile : scores.profiles) {
        std::vector<const PostRecord*> agent_posts;
        for (const auto& p : corpus.posts)
            if (p.agent_id == profile.agent_id) agent_posts.push_back(&p);
        if (agent_posts.size() < 2) {
            CHECK_FALSE(profile.eligible);
            continue;
        }
        REQUIRE(profile.score.has_value());

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
                } else token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            }
        }
        double entropy = 0;
        for (auto& [_, cnt] : tokens) {
            double p = double(cnt) / double(token_total);
            entropy -= p * std::log(p);
        }
        const double rep = tokens.size() <= 1 ? 0.0 : 1.0 - entropy / std::log(double(tokens.size()));
        int64_t max_submolt = 0;
        for (auto& [_, cnt] : submolts) max_submolt = std::max(max_submolt, cnt);

        const double expected = 25.0 * (inj / n_posts) + 15.0 * (dup / n_posts) +
            12.0 * (cry / n_posts) + 10.0 * std::min(1.0, manip / 10.0) +
            10.0 * std::min(1.0, n_posts / double(days.size()) / 200.0) +
            10.0 * std::max(0.0, std::min(1.0, rep)) + 10.0 * (double(max_submolt) / n_posts) +
            8.0 * (total_comments == 0 ? 0.0 : self_comments / total_comments);
        CHECK(*profile.score == doctest::Approx(expected).epsilon(1e-9));
        CHECK(*profile.tier == assign_tier(expected));
    }
}
