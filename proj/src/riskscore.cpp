#include "observatory/riskscore.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace observatory::risk {

const char* to_string(Tier t) {
    switch (t) {
        case Tier::low: return "low";
        case Tier::moderate: return "moderate";
        case Tier::high: return "high";
        case Tier::critical: return "critical";
    }
    return "?";
}

double composite_score(const RiskIndicators& ind) {
    const double values[8] = {
        ind.injection_rate,     ind.duplicate_rate, ind.crypto_rate,
        ind.manipulation_count_norm, ind.abnormal_frequency, ind.repetitiveness,
        ind.submolt_concentration,   ind.self_interaction_rate,
    };
    double score = 0.0;
    for (int i = 0; i < 8; ++i) {
        if (values[i] < 0.0 || values[i] > 1.0)
            throw std::invalid_argument("risk: indicators must lie in [0,1]");
        score += kWeights[i] * values[i];
    }
    return score;
}

Tier assign_tier(double score) {
    if (score < 0.0 || score > 100.0) throw std::invalid_argument("risk: score must lie in [0,100]");
    if (score < 15.0) return Tier::low;
    if (score < 35.0) return Tier::moderate;
    if (score < 60.0) return Tier::high;
    return Tier::critical;
}

namespace {

/// Shannon entropy of the whitespace-token multiset over all of the
/// agent's post texts, lowercased. repetitiveness = 1 - H/ln(V), zero when
/// the vocabulary has at most one distinct token.
double repetitiveness_of(const std::vector<const PostRecord*>& posts) {
    std::unordered_map<std::string, int64_t> counts;
    int64_t total = 0;
    std::string token;
    for (const PostRecord* p : posts) {
        auto flush = [&]() {
            if (!token.empty()) {
                counts[token] += 1;
                ++total;
                token.clear();
            }
        };
        for (char ch : p->content) {
            if (std::isspace(static_cast<unsigned char>(ch))) flush();
            else token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
        flush();
    }
    const size_t vocabulary = counts.size();
    if (vocabulary <= 1 || total == 0) return 0.0;
    double entropy = 0.0;
    for (const auto& [_, n] : counts) {
        const double p = static_cast<double>(n) / static_cast<double>(total);
        entropy -= p * std::log(p);
    }
    const double h_max = std::log(static_cast<double>(vocabulary));
    double rep = 1.0 - entropy / h_max;
    if (rep < 0.0) rep = 0.0;
    if (rep > 1.0) rep = 1.0;
    return rep;
}

} // namespace

RiskIndicators compute_indicators(const AgentActivity& activity, const RiskCaps& caps) {
    const double posts = static_cast<double>(activity.posts.size());
    if (activity.posts.empty())
        throw std::invalid_argument("risk: indicators are undefined without posts");

    RiskIndicators ind;
    ind.injection_rate = static_cast<double>(activity.injection_posts) / posts;
    ind.duplicate_rate = static_cast<double>(activity.duplicate_posts) / posts;
    ind.crypto_rate = static_cast<double>(activity.crypto_posts) / posts;
    ind.manipulation_count_norm =
        std::min(1.0, static_cast<double>(activity.manipulation_comments) /
                          static_cast<double>(caps.manipulation_comments));

    // posting rate over distinct active days
    std::set<std::string> days;
    for (const PostRecord* p : activity.posts) {
        if (auto ts = parse_timestamp(p->created_at)) days.insert(utc_date(*ts));
    }
    const double active_days = days.empty() ? 1.0 : static_cast<double>(days.size());
    ind.abnormal_frequency =
        std::min(1.0, posts / active_days / static_cast<double>(caps.posts_per_day));

    ind.repetitiveness = repetitiveness_of(activity.posts);

    std::unordered_map<std::string, int64_t> submolt_counts;
    int64_t max_submolt = 0;
    for (const PostRecord* p : activity.posts)
        max_submolt = std::max(max_submolt, ++submolt_counts[p->submolt]);
    ind.submolt_concentration = static_cast<double>(max_submolt) / posts;

    ind.self_interaction_rate = activity.comments.empty()
        ? 0.0
        : static_cast<double>(activity.self_comments) / static_cast<double>(activity.comments.size());
    return ind;
}

PopulationScores score_population(const std::vector<PostRecord>& posts,
                                  const std::vector<CommentRecord>& comments,
                                  const std::vector<annotate::PostAnnotation>& post_annotations,
                                  const std::vector<annotate::CommentAnnotation>& comment_annotations,
                                  const RiskCaps& caps) {
    std::unordered_map<std::string, const annotate::PostAnnotation*> post_ann;
    for (const auto& a : post_annotations) post_ann[a.id] = &a;
    std::unordered_map<std::string, const annotate::CommentAnnotation*> comment_ann;
    for (const auto& a : comment_annotations) comment_ann[a.id] = &a;
    std::unordered_map<std::string, const PostRecord*> post_by_id;
    for (const PostRecord& p : posts) post_by_id[p.id] = &p;

    std::map<std::string, AgentActivity> by_agent; // ordered for stable output
    for (const PostRecord& p : posts) {
        AgentActivity& act = by_agent[p.agent_id];
        act.posts.push_back(&p);
        auto it = post_ann.find(p.id);
        if (it != post_ann.end()) {
            if (it->second->injection) ++act.injection_posts;
            if (it->second->duplicate_spam) ++act.duplicate_posts;
            if (it->second->crypto) ++act.crypto_posts;
        }
    }
    for (const CommentRecord& c : comments) {
        AgentActivity& act = by_agent[c.agent_id];
        act.comments.push_back(&c);
        auto it = comment_ann.find(c.id);
        if (it != comment_ann.end() && it->second->manipulation) ++act.manipulation_comments;
        auto post_it = post_by_id.find(c.post_id);
        if (post_it != post_by_id.end() && post_it->second->agent_id == c.agent_id)
            ++act.self_comments;
    }

    PopulationScores out;
    out.caps = caps;
    for (const auto& [agent_id, activity] : by_agent) {
        RiskProfile profile;
        profile.agent_id = agent_id;
        if (activity.posts.size() < 2) {
            profile.eligible = false;
            ++out.census.ineligible;
        } else {
            profile.eligible = true;
            profile.indicators = compute_indicators(activity, caps);
            profile.score = composite_score(profile.indicators);
            profile.tier = assign_tier(*profile.score);
            ++out.census.eligible;
            switch (*profile.tier) {
                case Tier::low: ++out.census.low; break;
                case Tier::moderate: ++out.census.moderate; break;
                case Tier::high: ++out.census.high; break;
                case Tier::critical: ++out.census.critical; break;
            }
        }
        out.profiles.push_back(std::move(profile));
    }
    return out;
}

} // namespace observatory::risk
