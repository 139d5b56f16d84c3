#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "observatory/annotator.hpp"
#include "observatory/model.hpp"

namespace observatory::risk {

/// Eight normalized indicators, each in [0, 1].
struct RiskIndicators {
    double injection_rate = 0.0;
    double duplicate_rate = 0.0;
    double crypto_rate = 0.0;
    double manipulation_count_norm = 0.0;
    double abnormal_frequency = 0.0;
    double repetitiveness = 0.0;
    double submolt_concentration = 0.0;
    double self_interaction_rate = 0.0;
};

enum class Tier { low, moderate, high, critical };

const char* to_string(Tier t);

struct RiskProfile {
    std::string agent_id;
    bool eligible = false; // agents need at least 2 posts to be scored
    RiskIndicators indicators;
    std::optional<double> score; // [0, 100], absent when ineligible
    std::optional<Tier> tier;
};

/// Normalization caps; the stated defaults are configuration, not
/// empirically calibrated values.
struct RiskCaps {
    int64_t manipulation_comments = 10;
    int64_t posts_per_day = 200;
};

/// Fixed indicator weights (sum 100).
inline constexpr double kWeights[8] = {25, 15, 12, 10, 10, 10, 10, 8};

/// Weighted sum of the eight indicators; [0, 100].
double composite_score(const RiskIndicators& ind);

/// low < 15 <= moderate < 35 <= high < 60 <= critical.
Tier assign_tier(double score);

/// Per-agent activity folded from records and annotations.
struct AgentActivity {
    std::vector<const PostRecord*> posts;
    std::vector<const CommentRecord*> comments; // authored by the agent
    int64_t injection_posts = 0;
    int64_t duplicate_posts = 0;
    int64_t crypto_posts = 0;
    int64_t manipulation_comments = 0;
    int64_t self_comments = 0; // on the agent's own posts
};

/// Indicator computation for a single agent; requires >= 1 post.
RiskIndicators compute_indicators(const AgentActivity& activity, const RiskCaps& caps = {});

struct TierCensus {
    int64_t low = 0;
    int64_t moderate = 0;
    int64_t high = 0;
    int64_t critical = 0;
    int64_t eligible = 0;
    int64_t ineligible = 0;

    int64_t tier_total() const { return low + moderate + high + critical; }
};

struct PopulationScores {
    std::vector<RiskProfile> profiles; // every observed agent, scored or not
    TierCensus census;
    RiskCaps caps;
};

/// Scores every agent observed in the corpus. Agents with fewer than two
/// posts are emitted with eligible=false and no score so downstream joins
/// keep them visible.
PopulationScores score_population(const std::vector<PostRecord>& posts,
                                  const std::vector<CommentRecord>& comments,
                                  const std::vector<annotate::PostAnnotation>& post_annotations,
                                  const std::vector<annotate::CommentAnnotation>& comment_annotations,
                                  const RiskCaps& caps = {});

} // namespace observatory::risk
