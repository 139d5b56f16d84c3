#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace observatory::annotate {

struct PatternDef {
    std::string name;
    std::string body; // ECMAScript regex, matched case-insensitively
};

/// Versioned heuristic pattern data. The group counts are contract
/// (11 injection / 8 crypto / 5 manipulation / 4 ideological, with 2 crypto
/// groups forming the pump-and-dump subset); the bodies are data and travel
/// with a version and a content hash for reproducibility.
struct PatternSet {
    std::string version;
    std::vector<PatternDef> injection;
    std::vector<PatternDef> crypto;
    std::vector<std::string> pump_subset;          // names within crypto
    std::vector<PatternDef> manipulation;
    std::vector<PatternDef> ideological;
    std::vector<std::string> api_injection_subset; // names within injection

    static PatternSet builtin();
    static PatternSet from_file(const std::string& path);
    void save(const std::string& path) const;

    /// Stable serialized form; the hash recorded in annotation output.
    std::string canonical_json() const;
    uint64_t content_hash() const;
    std::string content_hash_hex() const;

    void validate() const; // counts, subset references, compilability
};

} // namespace observatory::annotate
