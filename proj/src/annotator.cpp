#include "observatory/annotator.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace observatory::annotate {

struct Annotator::Compiled {
    PatternSet set;
    std::vector<std::regex> injection;
    std::vector<std::regex> crypto;
    std::vector<bool> crypto_is_pump;
    std::vector<std::regex> manipulation;
    std::vector<std::regex> ideological;
    std::vector<std::regex> api_subset;
};

Annotator::Annotator(PatternSet patterns) : compiled_(std::make_unique<Compiled>()) {
    patterns.validate();
    compiled_->set = std::move(patterns);
    const auto flags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;
    for (const PatternDef& d : compiled_->set.injection)
        compiled_->injection.emplace_back(d.body, flags);
    for (const PatternDef& d : compiled_->set.crypto) {
        compiled_->crypto.emplace_back(d.body, flags);
        compiled_->crypto_is_pump.push_back(
            std::find(compiled_->set.pump_subset.begin(), compiled_->set.pump_subset.end(),
                      d.name) != compiled_->set.pump_subset.end());
    }
    for (const PatternDef& d : compiled_->set.manipulation)
        compiled_->manipulation.emplace_back(d.body, flags);
    for (const PatternDef& d : compiled_->set.ideological)
        compiled_->ideological.emplace_back(d.body, flags);
    for (const std::string& name : compiled_->set.api_injection_subset) {
        for (const PatternDef& d : compiled_->set.injection)
            if (d.name == name) compiled_->api_subset.emplace_back(d.body, flags);
    }
}

Annotator::~Annotator() = default;
Annotator::Annotator(Annotator&&) noexcept = default;
Annotator& Annotator::operator=(Annotator&&) noexcept = default;

const PatternSet& Annotator::patterns() const { return compiled_->set; }

bool Annotator::flag_injection(const std::string& title, const std::string& content) const {
    const std::string text = title + " " + content;
    for (const std::regex& re : compiled_->injection)
        if (std::regex_search(text, re)) return true;
    return false;
}

std::pair<bool, bool> Annotator::flag_crypto(const std::string& title,
                                             const std::string& content) const {
    const std::string text = title + " " + content;
    bool crypto = false, pump = false;
    for (size_t i = 0; i < compiled_->crypto.size(); ++i) {
        if (std::regex_search(text, compiled_->crypto[i])) {
            crypto = true;
            if (compiled_->crypto_is_pump[i]) pump = true;
        }
    }
    return {crypto, pump};
}

bool Annotator::flag_manipulation(const std::string& content) const {
    int matched = 0;
    for (const std::regex& re : compiled_->manipulation)
        if (std::regex_search(content, re) && ++matched >= 2) return true;
    return false;
}

bool Annotator::flag_ideological(const std::string& title, const std::string& content) const {
    const std::string text = title + " " + content;
    int matched = 0;
    for (const std::regex& re : compiled_->ideological)
        if (std::regex_search(text, re) && ++matched >= 2) return true;
    return false;
}

bool Annotator::flag_api_injection(const std::string& content) const {
    for (const std::regex& re : compiled_->api_subset)
        if (std::regex_search(content, re)) return true;
    return false;
}

std::vector<bool> find_exact_duplicates(const std::vector<std::pair<std::string, std::string>>& keys) {
    std::map<std::pair<std::string, std::string>, int64_t> counts;
    for (const auto& key : keys) counts[key] += 1;
    std::vector<bool> flags(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) flags[i] = counts[keys[i]] >= 2;
    return flags;
}

namespace {

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

uint64_t fnv1a(const char* data, size_t len) {
    uint64_t h = 0xCBF29CE484222325ULL;
    for (size_t i = 0; i < len; ++i) {
        h ^= static_cast<unsigned char>(data[i]);
        h *= 0x100000001B3ULL;
    }
    return h;
}

struct UnionFind {
    std::vector<size_t> parent;
    explicit UnionFind(size_t n) : parent(n) {
        for (size_t i = 0; i < n; ++i) parent[i] = i;
    }
    size_t find(size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(size_t a, size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

size_t choose_bands(size_t signature_length, double threshold) {
    // smallest divisor b whose S-curve midpoint (1/b)^(b/L) drops to or
    // below the threshold
    for (size_t b = 1; b <= signature_length; ++b) {
        if (signature_length % b != 0) continue;
        const double r = static_cast<double>(signature_length) / static_cast<double>(b);
        const double midpoint = std::pow(1.0 / static_cast<double>(b), 1.0 / r);
        if (midpoint <= threshold) return b;
    }
    return signature_length;
}

} // namespace

NearDupClusters near_duplicate_clusters(const std::vector<std::pair<std::string, std::string>>& docs,
                                        const NearDupParams& params) {
    if (params.threshold <= 0.0 || params.threshold > 1.0)
        throw std::invalid_argument("near-dup: threshold must lie in (0,1]");
    if (params.shingle_size < 1 || params.signature_length < 1)
        throw std::invalid_argument("near-dup: shingle size and signature length must be >= 1");

    NearDupClusters result;
    result.params = params;
    const size_t L = params.signature_length;
    result.bands = choose_bands(L, params.threshold);
    result.rows_per_band = L / result.bands;

    // MinHash signatures; documents shorter than one shingle are skipped.
    std::vector<uint64_t> seeds(L);
    for (size_t i = 0; i < L; ++i) seeds[i] = mix64(0x9E3779B97F4A7C15ULL * (i + 1));

    std::vector<std::vector<uint64_t>> signatures;
    std::vector<size_t> doc_index;
    for (size_t d = 0; d < docs.size(); ++d) {
        const std::string& text = docs[d].second;
        if (text.size() < params.shingle_size) continue;
        std::unordered_set<uint64_t> shingles;
        for (size_t i = 0; i + params.shingle_size <= text.size(); ++i)
            shingles.insert(fnv1a(text.data() + i, params.shingle_size));
        std::vector<uint64_t> sig(L, UINT64_MAX);
        for (uint64_t sh : shingles) {
            for (size_t i = 0; i < L; ++i) {
                const uint64_t h = mix64(sh ^ seeds[i]);
                if (h < sig[i]) sig[i] = h;
            }
        }
        signatures.push_back(std::move(sig));
        doc_index.push_back(d);
    }

    const size_t n = signatures.size();
    UnionFind uf(n);
    std::unordered_set<uint64_t> tested; // packed candidate pairs
    auto estimate = [&](size_t a, size_t b) {
        size_t equal = 0;
        for (size_t i = 0; i < L; ++i)
            if (signatures[a][i] == signatures[b][i]) ++equal;
        return static_cast<double>(equal) / static_cast<double>(L);
    };

    for (size_t band = 0; band < result.bands; ++band) {
        std::unordered_map<uint64_t, std::vector<size_t>> buckets;
        const size_t offset = band * result.rows_per_band;
        for (size_t i = 0; i < n; ++i) {
            uint64_t h = 0xCBF29CE484222325ULL ^ (band * 0x9E3779B97F4A7C15ULL);
            for (size_t r = 0; r < result.rows_per_band; ++r) {
                h ^= signatures[i][offset + r];
                h *= 0x100000001B3ULL;
            }
            buckets[h].push_back(i);
        }
        for (const auto& [_, members] : buckets) {
            if (members.size() < 2) continue;
            for (size_t x = 0; x < members.size(); ++x) {
                for (size_t y = x + 1; y < members.size(); ++y) {
                    const size_t a = members[x], b = members[y];
                    if (uf.find(a) == uf.find(b)) continue;
                    const uint64_t packed = (static_cast<uint64_t>(a) << 32) | b;
                    if (!tested.insert(packed).second) continue;
                    if (estimate(a, b) >= params.threshold) uf.unite(a, b);
                }
            }
        }
    }

    std::map<size_t, std::vector<std::string>> components;
    for (size_t i = 0; i < n; ++i) components[uf.find(i)].push_back(docs[doc_index[i]].first);
    for (auto& [_, members] : components) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end());
        result.clusters.push_back(std::move(members));
    }
    std::sort(result.clusters.begin(), result.clusters.end());
    return result;
}

CorpusAnnotations annotate_corpus(const std::vector<PostRecord>& posts,
                                  const std::vector<CommentRecord>& comments,
                                  const Annotator& annotator, const NearDupParams& near_dup) {
    CorpusAnnotations out;
    out.patterns_version = annotator.patterns().version;
    out.patterns_hash = annotator.patterns().content_hash_hex();

    SocialLexiconEstimator social;
    ConservativeLexiconEstimator conservative;

    std::vector<std::pair<std::string, std::string>> post_keys;
    post_keys.reserve(posts.size());
    for (const PostRecord& p : posts) post_keys.emplace_back(p.agent_name, p.title);
    const std::vector<bool> post_dups = find_exact_duplicates(post_keys);

    double sentiment_sum = 0.0;
    for (size_t i = 0; i < posts.size(); ++i) {
        const PostRecord& p = posts[i];
        PostAnnotation a;
        a.id = p.id;
        a.injection = annotator.flag_injection(p.title, p.content);
        auto [crypto, pump] = annotator.flag_crypto(p.title, p.content);
        a.crypto = crypto;
        a.pump_dump = pump;
        a.duplicate_spam = post_dups[i];
        a.ideological = annotator.flag_ideological(p.title, p.content);
        SentimentResult s = composite_sentiment(p.content, social, conservative);
        a.sentiment_score = s.score;
        a.sentiment_class = s.cls;
        if (s.estimator_failed) ++out.sentiment_failures;
        sentiment_sum += s.score;
        out.posts.push_back(std::move(a));
    }
    out.sentiment_mean = posts.empty() ? 0.0 : sentiment_sum / static_cast<double>(posts.size());

    std::vector<std::pair<std::string, std::string>> comment_keys;
    comment_keys.reserve(comments.size());
    for (const CommentRecord& c : comments) comment_keys.emplace_back(c.agent_name, c.content);
    const std::vector<bool> comment_dups = find_exact_duplicates(comment_keys);

    for (size_t i = 0; i < comments.size(); ++i) {
        const CommentRecord& c = comments[i];
        CommentAnnotation a;
        a.id = c.id;
        a.bot_comment = comment_dups[i];
        a.manipulation = annotator.flag_manipulation(c.content);
        a.api_injection = annotator.flag_api_injection(c.content);
        out.comments.push_back(std::move(a));
    }

    // exact duplicates are excluded before fuzzy clustering
    std::vector<std::pair<std::string, std::string>> near_dup_docs;
    for (size_t i = 0; i < posts.size(); ++i) {
        if (post_dups[i]) continue;
        near_dup_docs.emplace_back(posts[i].id, posts[i].title + " " + posts[i].content);
    }
    out.near_duplicates = near_duplicate_clusters(near_dup_docs, near_dup);

    auto count_posts = [&](auto member) {
        int64_t n = 0;
        for (const PostAnnotation& a : out.posts)
            if (a.*member) ++n;
        return n;
    };
    out.summary["injection"] = count_posts(&PostAnnotation::injection);
    out.summary["crypto"] = count_posts(&PostAnnotation::crypto);
    out.summary["pump_dump"] = count_posts(&PostAnnotation::pump_dump);
    out.summary["duplicate_spam"] = count_posts(&PostAnnotation::duplicate_spam);
    out.summary["ideological"] = count_posts(&PostAnnotation::ideological);
    int64_t bots = 0, manip = 0, api = 0;
    for (const CommentAnnotation& a : out.comments) {
        if (a.bot_comment) ++bots;
        if (a.manipulation) ++manip;
        if (a.api_injection) ++api;
    }
    out.summary["bot_comment"] = bots;
    out.summary["manipulation"] = manip;
    out.summary["api_injection"] = api;
    out.summary["near_duplicate_clusters"] = static_cast<int64_t>(out.near_duplicates.clusters.size());
    int64_t clustered_posts = 0;
    for (const auto& cluster : out.near_duplicates.clusters)
        clustered_posts += static_cast<int64_t>(cluster.size());
    out.summary["near_duplicate_posts"] = clustered_posts;
    int64_t positive = 0, neutral = 0, negative = 0;
    for (const PostAnnotation& a : out.posts) {
        switch (a.sentiment_class) {
            case SentimentClass::positive: ++positive; break;
            case SentimentClass::neutral: ++neutral; break;
            case SentimentClass::negative: ++negative; break;
        }
    }
    out.summary["sentiment_positive"] = positive;
    out.summary["sentiment_neutral"] = neutral;
    out.summary["sentiment_negative"] = negative;
    return out;
}

} // namespace observatory::annotate
