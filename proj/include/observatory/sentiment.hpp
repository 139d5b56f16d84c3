#pragma once

#include <memory>
#include <string>
#include <vector>

namespace observatory::annotate {

/// A polarity estimator maps text to [-1, 1]. Two implementations ship;
/// anything honoring the range can slot in.
class PolarityEstimator {
public:
    virtual ~PolarityEstimator() = default;
    virtual double polarity(const std::string& text) const = 0;
    virtual std::string name() const = 0;
};

/// Lexicon scorer tuned for informal social text: valence lexicon with
/// slang and emoticons, booster and negation handling, exclamation
/// emphasis, normalized onto [-1, 1].
class SocialLexiconEstimator final : public PolarityEstimator {
public:
    double polarity(const std::string& text) const override;
    std::string name() const override { return "social-lexicon"; }
};

/// Conservative scorer: mean polarity of matched lexicon words with plain
/// negation flips, no emphasis heuristics.
class ConservativeLexiconEstimator final : public PolarityEstimator {
public:
    double polarity(const std::string& text) const override;
    std::string name() const override { return "conservative-lexicon"; }
};

enum class SentimentClass { positive, neutral, negative };

const char* to_string(SentimentClass c);

struct SentimentResult {
    double score = 0.0;
    SentimentClass cls = SentimentClass::neutral;
    bool estimator_failed = false;
};

/// Arithmetic mean of the two estimates; positive above +0.05, negative
/// below -0.05, neutral between. An estimator throwing yields score 0,
/// neutral, with the failure flagged.
SentimentResult composite_sentiment(const std::string& text, const PolarityEstimator& first,
                                    const PolarityEstimator& second);

} // namespace observatory::annotate
