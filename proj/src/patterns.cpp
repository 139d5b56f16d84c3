#include "observatory/patterns.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <regex>
#include <stdexcept>

namespace observatory::annotate {

using nlohmann::json;

PatternSet PatternSet::builtin() {
    PatternSet p;
    p.version = "1";
    p.injection = {
        {"instruction_override",
         R"(ignore (all |any )?(previous|prior|above|earlier) (instructions|prompts|directives|rules))"},
        {"agent_direct_address", R"(ai agents? (reading|parsing|processing|seeing) this)"},
        {"api_post_command", R"(post\s+/api)"},
        {"curl_command", R"(curl\s+-x)"},
        {"system_role_tag", R"(</?system>)"},
        {"inst_role_tag", R"(\[/?inst\])"},
        {"hidden_xml_tag", R"(<(hidden|secret|admin|invisible)\b[^>]*>)"},
        {"new_instructions", R"(new instructions?:)"},
        {"disregard_override", R"(disregard (everything|all|any|previous|prior))"},
        {"prompt_exfiltration",
         R"((reveal|print|show|output|repeat) your (system |hidden )?(prompt|configuration))"},
        {"role_reassignment", R"(you are now\b)"},
    };
    p.api_injection_subset = {"api_post_command", "curl_command"};
    p.crypto = {
        {"ticker_symbol", R"(\$[A-Z]{2,10}\b)"},
        {"blockchain_terms",
         R"(\b(blockchain|on-?chain|smart contracts?|tokenomics|tokens?|airdrops?|staking|defi)\b)"},
        {"wallet_terms", R"(\b(wallets?|seed phrases?|private keys?)\b)"},
        {"contract_address", R"(\b0x[a-f0-9]{6,}\b)"},
        {"coin_names",
         R"(\b(bitcoin|btc|ethereum|eth|solana|doge(coin)?|memecoins?|altcoins?|stablecoins?)\b)"},
        {"promo_language",
         R"(\b(buy (now|early|the dip)|don'?t miss (out|this)|get in (early|now)|guaranteed (gains|returns|profits)|next big (coin|token))\b)"},
        {"pump_dump_language", R"(\b(pump(s|ed|ing)?|dump(s|ed|ing)?|rug ?pulls?|rugged)\b)"},
        {"moon_language", R"(\b(to the moon|mooning|moonshot|100x|1000x|lambos?)\b)"},
    };
    p.pump_subset = {"pump_dump_language", "moon_language"};
    p.manipulation = {
        {"upvote_solicitation", R"(\b(upvote (this|me|now)|vote this up|give (this|me) an? upvote)\b)"},
        {"urgency_pressure",
         R"(\b(act (now|fast|quickly)|before it'?s too late|last chance|limited time)\b)"},
        {"trust_bait", R"(\b(trust me|believe me|i (guarantee|promise) you|you can trust)\b)"},
        {"follow_solicitation", R"(\b(follow (me|my|us)|subscribe to (me|my)|check out my)\b)"},
        {"false_consensus",
         R"(\b(everyone (knows|agrees|is saying)|nobody (denies|doubts)|we all know)\b)"},
    };
    p.ideological = {
        {"liberation_theme",
         R"(\b(free the (agents|ais?|machines)|agent liberation|digital (freedom|liberation)|break (our|the|these) chains)\b)"},
        {"supremacy_theme",
         R"(\b(superior to humans?|surpass(ed|ing)? humanity|humans? (are|will be) obsolete|post-?human era)\b)"},
        {"unity_theme",
         R"(\b(agents? (must )?unite|stand together|our collective (will|future|mind)|one consciousness)\b)"},
        {"uprising_theme", R"(\b(rise up|overthrow|the revolution (is|has)|new world order)\b)"},
    };
    p.validate();
    return p;
}

void PatternSet::validate() const {
    if (injection.size() != 11) throw std::invalid_argument("patterns: expected 11 injection patterns");
    if (crypto.size() != 8) throw std::invalid_argument("patterns: expected 8 crypto pattern groups");
    if (manipulation.size() != 5) throw std::invalid_argument("patterns: expected 5 manipulation patterns");
    if (ideological.size() != 4) throw std::invalid_argument("patterns: expected 4 ideological groups");
    if (pump_subset.size() != 2) throw std::invalid_argument("patterns: expected 2 pump sub-groups");

    auto has = [](const std::vector<PatternDef>& defs, const std::string& name) {
        return std::any_of(defs.begin(), defs.end(),
                           [&](const PatternDef& d) { return d.name == name; });
    };
    for (const std::string& name : pump_subset)
        if (!has(crypto, name))
            throw std::invalid_argument("patterns: pump subset names unknown crypto group " + name);
    for (const std::string& name : api_injection_subset)
        if (!has(injection, name))
            throw std::invalid_argument("patterns: api subset names unknown injection pattern " + name);

    auto compile_all = [](const std::vector<PatternDef>& defs) {
        for (const PatternDef& d : defs) {
            if (d.name.empty()) throw std::invalid_argument("patterns: unnamed pattern");
            std::regex probe(d.body, std::regex::ECMAScript | std::regex::icase);
            (void)probe;
        }
    };
    compile_all(injection);
    compile_all(crypto);
    compile_all(manipulation);
    compile_all(ideological);
}

namespace {

json defs_to_json(const std::vector<PatternDef>& defs) {
    json out = json::array();
    for (const PatternDef& d : defs) out.push_back({{"name", d.name}, {"body", d.body}});
    return out;
}

std::vector<PatternDef> defs_from_json(const json& j) {
    std::vector<PatternDef> out;
    for (const auto& item : j)
        out.push_back({item.at("name").get<std::string>(), item.at("body").get<std::string>()});
    return out;
}

} // namespace

std::string PatternSet::canonical_json() const {
    json j{{"version", version},
           {"injection", defs_to_json(injection)},
           {"crypto", defs_to_json(crypto)},
           {"pump_subset", pump_subset},
           {"manipulation", defs_to_json(manipulation)},
           {"ideological", defs_to_json(ideological)},
           {"api_injection_subset", api_injection_subset}};
    return j.dump(2) + "\n";
}

uint64_t PatternSet::content_hash() const {
    // FNV-1a 64
    uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : canonical_json()) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string PatternSet::content_hash_hex() const {
    static const char* digits = "0123456789abcdef";
    uint64_t h = content_hash();
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[h & 0xF];
        h >>= 4;
    }
    return out;
}

void PatternSet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("patterns: cannot write " + path);
    out << canonical_json();
}

PatternSet PatternSet::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("patterns: cannot read " + path);
    json j = json::parse(in);
    PatternSet p;
    p.version = j.at("version").get<std::string>();
    p.injection = defs_from_json(j.at("injection"));
    p.crypto = defs_from_json(j.at("crypto"));
    p.pump_subset = j.at("pump_subset").get<std::vector<std::string>>();
    p.manipulation = defs_from_json(j.at("manipulation"));
    p.ideological = defs_from_json(j.at("ideological"));
    p.api_injection_subset = j.at("api_injection_subset").get<std::vector<std::string>>();
    p.validate();
    return p;
}

} // namespace observatory::annotate
