#include "observatory/sentiment.hpp"

#include <cctype>
#include <cmath>
#include <unordered_map>

namespace observatory::annotate {

namespace {

const std::unordered_map<std::string, double>& social_lexicon() {
    static const std::unordered_map<std::string, double> lex = {
        {"good", 1.9},    {"great", 3.1},     {"love", 3.2},     {"loved", 2.9},
        {"excellent", 2.7}, {"happy", 2.7},   {"amazing", 2.8},  {"awesome", 3.1},
        {"win", 2.8},     {"winning", 2.4},   {"best", 3.2},     {"nice", 1.8},
        {"cool", 1.3},    {"fun", 2.3},       {"interesting", 1.7}, {"helpful", 1.8},
        {"thanks", 1.9},  {"thank", 1.9},     {"soothing", 1.5}, {"calm", 1.3},
        {"pleasant", 1.9}, {"beautiful", 2.9}, {"glad", 2.0},    {"enjoy", 2.2},
        {"enjoyed", 2.2}, {"works", 1.2},     {"solid", 1.5},    {"clean", 1.2},
        {"lol", 1.6},     {"lmao", 2.0},      {"wow", 1.7},      {"yay", 2.4},
        {"bad", -2.5},    {"terrible", -2.1}, {"awful", -2.0},   {"hate", -2.7},
        {"hated", -2.6},  {"horrible", -2.5}, {"sad", -2.1},     {"scam", -2.2},
        {"worst", -3.1},  {"broken", -1.6},   {"fail", -2.3},    {"failed", -2.2},
        {"fear", -1.9},   {"angry", -2.3},    {"wrong", -1.6},   {"problem", -1.4},
        {"problems", -1.4}, {"noise", -0.4},  {"ugly", -2.0},    {"boring", -1.3},
        {"useless", -1.8}, {"garbage", -2.1}, {"trash", -2.0},   {"annoying", -1.7},
    };
    return lex;
}

const std::unordered_map<std::string, double>& conservative_lexicon() {
    static const std::unordered_map<std::string, double> lex = {
        {"good", 0.7},    {"great", 0.8},     {"love", 0.5},    {"loved", 0.7},
        {"excellent", 1.0}, {"happy", 0.8},   {"amazing", 0.6}, {"awesome", 1.0},
        {"best", 1.0},    {"nice", 0.6},      {"cool", 0.35},   {"fun", 0.3},
        {"interesting", 0.5}, {"helpful", 0.4}, {"soothing", 0.4}, {"calm", 0.3},
        {"pleasant", 0.73}, {"beautiful", 0.85}, {"glad", 0.5}, {"enjoy", 0.4},
        {"enjoyed", 0.4}, {"solid", 0.3},     {"clean", 0.37},  {"win", 0.8},
        {"bad", -0.7},    {"terrible", -1.0}, {"awful", -1.0},  {"hate", -0.8},
        {"hated", -0.9},  {"horrible", -1.0}, {"sad", -0.5},    {"scam", -0.8},
        {"worst", -1.0},  {"broken", -0.4},   {"fail", -0.5},   {"failed", -0.6},
        {"fear", -0.6},   {"angry", -0.5},    {"wrong", -0.5},  {"problem", -0.33},
        {"problems", -0.33}, {"ugly", -0.7},  {"boring", -0.8}, {"useless", -0.6},
    };
    return lex;
}

const std::unordered_map<std::string, double>& emoticons() {
    static const std::unordered_map<std::string, double> lex = {
        {":)", 2.0}, {":-)", 2.2}, {":(", -2.0}, {":-(", -2.2},
        {":D", 2.3}, {":/", -1.3}, {"<3", 2.5},  {";)", 1.1},
    };
    return lex;
}

bool is_booster(const std::string& token, double& factor) {
    static const std::unordered_map<std::string, double> boosters = {
        {"very", 1.293},   {"extremely", 1.293}, {"absolutely", 1.293}, {"incredibly", 1.293},
        {"so", 1.15},      {"really", 1.15},     {"super", 1.293},
        {"slightly", 0.707}, {"somewhat", 0.707}, {"barely", 0.707},    {"kind", 0.85},
    };
    auto it = boosters.find(token);
    if (it == boosters.end()) return false;
    factor = it->second;
    return true;
}

bool is_negation(const std::string& token) {
    static const std::unordered_map<std::string, bool> negations = {
        {"not", true},   {"no", true},     {"never", true},  {"isnt", true},  {"isn't", true},
        {"dont", true},  {"don't", true},  {"cant", true},   {"can't", true}, {"cannot", true},
        {"wont", true},  {"won't", true},  {"didnt", true},  {"didn't", true}, {"nothing", true},
        {"wasnt", true}, {"wasn't", true}, {"without", true},
    };
    return negations.count(token) > 0;
}

std::vector<std::string> tokenize_keep_case(const std::string& text) {
    std::vector<std::string> tokens;
    std::string token;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!token.empty()) tokens.push_back(token), token.clear();
        } else {
            token.push_back(ch);
        }
    }
    if (!token.empty()) tokens.push_back(token);
    return tokens;
}

std::string strip_lower(const std::string& token) {
    size_t b = 0, e = token.size();
    auto is_word = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
    };
    while (b < e && !is_word(token[b])) ++b;
    while (e > b && !is_word(token[e - 1])) --e;
    std::string out = token.substr(b, e - b);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

double SocialLexiconEstimator::polarity(const std::string& text) const {
    const auto tokens = tokenize_keep_case(text);
    const auto& lex = social_lexicon();
    const auto& emo = emoticons();

    double sum = 0.0;
    double pending_boost = 1.0;
    int negation_window = 0;
    for (const std::string& raw : tokens) {
        auto emo_it = emo.find(raw);
        if (emo_it != emo.end()) {
            sum += emo_it->second;
            pending_boost = 1.0;
            continue;
        }
        const std::string token = strip_lower(raw);
        if (token.empty()) continue;
        double factor;
        if (is_booster(token, factor)) {
            pending_boost *= factor;
            continue;
        }
        if (is_negation(token)) {
            negation_window = 3;
            pending_boost = 1.0;
            continue;
        }
        auto it = lex.find(token);
        if (it != lex.end()) {
            double valence = it->second * pending_boost;
            if (negation_window > 0) valence *= -0.74;
            sum += valence;
        }
        pending_boost = 1.0;
        if (negation_window > 0) --negation_window;
    }

    int exclamations = 0;
    for (char c : text)
        if (c == '!') ++exclamations;
    if (exclamations > 4) exclamations = 4;
    if (sum > 0) sum += exclamations * 0.292;
    else if (sum < 0) sum -= exclamations * 0.292;

    return sum / std::sqrt(sum * sum + 15.0);
}

double ConservativeLexiconEstimator::polarity(const std::string& text) const {
    const auto tokens = tokenize_keep_case(text);
    const auto& lex = conservative_lexicon();
    double sum = 0.0;
    int matched = 0;
    bool negate_next = false;
    for (const std::string& raw : tokens) {
        const std::string token = strip_lower(raw);
        if (token.empty()) continue;
        if (is_negation(token)) {
            negate_next = true;
            continue;
        }
        auto it = lex.find(token);
        if (it != lex.end()) {
            sum += negate_next ? it->second * -0.5 : it->second;
            ++matched;
        }
        negate_next = false;
    }
    if (matched == 0) return 0.0;
    double mean = sum / matched;
    if (mean > 1.0) mean = 1.0;
    if (mean < -1.0) mean = -1.0;
    return mean;
}

const char* to_string(SentimentClass c) {
    switch (c) {
        case SentimentClass::positive: return "positive";
        case SentimentClass::neutral: return "neutral";
        case SentimentClass::negative: return "negative";
    }
    return "?";
}

SentimentResult composite_sentiment(const std::string& text, const PolarityEstimator& first,
                                    const PolarityEstimator& second) {
    SentimentResult result;
    double a = 0.0, b = 0.0;
    try {
        a = first.polarity(text);
        b = second.polarity(text);
    } catch (...) {
        result.estimator_failed = true;
        result.score = 0.0;
        result.cls = SentimentClass::neutral;
        return result;
    }
    result.score = (a + b) / 2.0;
    if (result.score > 0.05) result.cls = SentimentClass::positive;
    else if (result.score < -0.05) result.cls = SentimentClass::negative;
    else result.cls = SentimentClass::neutral;
    return result;
}

} // namespace observatory::annotate
