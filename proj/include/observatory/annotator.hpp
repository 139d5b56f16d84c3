#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "observatory/model.hpp"
#include "observatory/patterns.hpp"
#include "observatory/sentiment.hpp"

namespace observatory::annotate {

struct PostAnnotation {
    std::string id;
    bool injection = false;
    bool crypto = false;
    bool pump_dump = false;
    bool duplicate_spam = false;
    bool ideological = false;
    double sentiment_score = 0.0;
    SentimentClass sentiment_class = SentimentClass::neutral;
};

struct CommentAnnotation {
    std::string id;
    bool bot_comment = false;
    bool manipulation = false;
    bool api_injection = false;
};

struct NearDupParams {
    size_t shingle_size = 5;      // character shingles
    size_t signature_length = 128;
    double threshold = 0.8;       // estimated Jaccard link threshold
};

struct NearDupClusters {
    std::vector<std::vector<std::string>> clusters; // each size >= 2, ids sorted
    NearDupParams params;
    size_t bands = 0;
    size_t rows_per_band = 0;
};

/// Deterministic pattern matching over a compiled pattern set. All
/// matching is case-insensitive; identical inputs and pattern version
/// produce identical flags.
class Annotator {
public:
    explicit Annotator(PatternSet patterns = PatternSet::builtin());
    ~Annotator();
    Annotator(Annotator&&) noexcept;
    Annotator& operator=(Annotator&&) noexcept;

    const PatternSet& patterns() const;

    /// True iff title + " " + content matches at least one injection pattern.
    bool flag_injection(const std::string& title, const std::string& content) const;

    /// (crypto, pump_dump): crypto when any of the 8 groups matches;
    /// pump_dump when a pump sub-group matches. pump_dump implies crypto.
    std::pair<bool, bool> flag_crypto(const std::string& title, const std::string& content) const;

    /// True iff at least 2 of the 5 manipulation patterns match.
    bool flag_manipulation(const std::string& content) const;

    /// True iff at least 2 of the 4 thematic groups match.
    bool flag_ideological(const std::string& title, const std::string& content) const;

    /// Comment-level injection via the API-command subset.
    bool flag_api_injection(const std::string& content) const;

private:
    struct Compiled;
    std::unique_ptr<Compiled> compiled_;
};

/// Flags every record whose key tuple occurs at least twice; all
/// occurrences are flagged. Keys are (agent_name, title) for posts and
/// (agent_name, content) for comments.
std::vector<bool> find_exact_duplicates(const std::vector<std::pair<std::string, std::string>>& keys);

/// MinHash over character shingles with LSH banding; candidate pairs whose
/// estimated Jaccard reaches the threshold are linked, clusters are the
/// connected components of size >= 2. Bands are chosen as the smallest
/// divisor count whose S-curve midpoint (1/b)^(r) sits at or below the
/// threshold, keeping recall at the threshold high.
NearDupClusters near_duplicate_clusters(const std::vector<std::pair<std::string, std::string>>& docs,
                                        const NearDupParams& params = {});

struct CorpusAnnotations {
    std::vector<PostAnnotation> posts;
    std::vector<CommentAnnotation> comments;
    NearDupClusters near_duplicates;
    std::map<std::string, int64_t> summary; // flag -> count
    int64_t sentiment_failures = 0;
    double sentiment_mean = 0.0;
    std::string patterns_version;
    std::string patterns_hash;
};

/// Whole-corpus annotation: per-record flags, exact duplicates, sentiment
/// (content text), and near-duplicate clustering over posts that are not
/// exact duplicates.
CorpusAnnotations annotate_corpus(const std::vector<PostRecord>& posts,
                                  const std::vector<CommentRecord>& comments,
                                  const Annotator& annotator,
                                  const NearDupParams& near_dup = {});

} // namespace observatory::annotate
