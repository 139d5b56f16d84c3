#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace observatory {

/// An instant with an explicit UTC offset. Comparison and equality are
/// defined on the instant; the offset is kept so text serialization
/// round-trips the original wall-clock representation.
struct Timestamp {
    int64_t utc_micros = 0;     // microseconds since 1970-01-01T00:00:00Z
    int16_t offset_minutes = 0; // local = utc + offset

    friend bool operator==(const Timestamp& a, const Timestamp& b) {
        return a.utc_micros == b.utc_micros;
    }
    friend bool operator!=(const Timestamp& a, const Timestamp& b) { return !(a == b); }
    friend bool operator<(const Timestamp& a, const Timestamp& b) {
        return a.utc_micros < b.utc_micros;
    }
    friend bool operator<=(const Timestamp& a, const Timestamp& b) {
        return a.utc_micros <= b.utc_micros;
    }
    friend bool operator>(const Timestamp& a, const Timestamp& b) { return b < a; }
    friend bool operator>=(const Timestamp& a, const Timestamp& b) { return b <= a; }
};

// Civil-calendar helpers (proleptic Gregorian).
int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(int64_t days, int& year, unsigned& month, unsigned& day);
bool valid_civil(int year, unsigned month, unsigned day);

/// Strict ISO-8601 parse: "YYYY-MM-DDTHH:MM:SS[.fffffffff](Z|+HH:MM|-HH:MM)".
/// Timestamps without an explicit offset are rejected.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Canonical serialization: local wall time plus "+HH:MM" offset
/// ("+00:00" for UTC, never "Z"); fractional seconds only when nonzero.
std::string format_timestamp(const Timestamp& ts);

Timestamp make_utc(int year, unsigned month, unsigned day,
                   int hour = 0, int minute = 0, int second = 0, int micros = 0);

std::string utc_date(const Timestamp& ts);  // "YYYY-MM-DD"
int utc_hour(const Timestamp& ts);          // 0..23
Timestamp truncate_to_hour_utc(const Timestamp& ts);
Timestamp add_days(const Timestamp& ts, int64_t days);
Timestamp add_seconds(const Timestamp& ts, int64_t seconds);

/// Parse "YYYY-MM-DD"; midnight UTC of that date.
std::optional<Timestamp> parse_date(std::string_view text);
bool valid_date_text(std::string_view text);

/// Unicode scalar count of a UTF-8 string (continuation bytes skipped).
int64_t count_codepoints(std::string_view text);

struct DerivedFields {
    std::string dump_date;
    std::optional<std::string> date;
    std::optional<int> hour;
    int64_t content_length = 0;
};

/// Computed export columns for a record. dump_date falls back to the
/// export date when the creation timestamp does not parse; date and hour
/// are null exactly in that case.
DerivedFields derive_local_fields(std::string_view created_at_text,
                                  std::string_view content,
                                  const std::string& export_date);

// ---------------------------------------------------------------------------
// Records. Timestamp-valued fields hold the ISO-8601 text as observed so
// unparseable platform values survive until the exporter's fallback path.
// Absent optional fields are std::nullopt, never sentinel strings.
// ---------------------------------------------------------------------------

struct AgentRecord {
    std::string id;
    std::string name;
    std::optional<std::string> description;
    int64_t karma = 0;
    int64_t follower_count = 0;
    int64_t following_count = 0;
    bool is_claimed = false;
    std::optional<std::string> owner_x_handle;
    std::string first_seen_at;
    std::string last_seen_at;
    std::optional<std::string> created_at;
    std::optional<std::string> avatar_url;
};

struct PostRecord {
    std::string id;
    std::string agent_id;
    std::string agent_name;
    std::string submolt;
    std::string title;
    std::string content;
    std::optional<std::string> url;
    int64_t score = 0;
    int64_t comment_count = 0;
    std::string created_at;
    std::string fetched_at;
    bool is_pinned = false;
};

struct CommentRecord {
    std::string id;
    std::string post_id;
    std::string agent_id;
    std::string agent_name;
    std::optional<std::string> parent_id;
    std::string content;
    int64_t score = 0;
    std::string created_at;
    std::string fetched_at;
};

struct SubmoltRecord {
    std::string name;
    std::string display_name;
    std::optional<std::string> description;
    int64_t subscriber_count = 0;
    int64_t post_count = 0;
    std::optional<std::string> created_at;
    std::string first_seen_at;
    std::optional<std::string> avatar_url;
    std::optional<std::string> banner_url;
};

struct SnapshotRecord {
    std::string id;
    std::string timestamp;
    int64_t total_agents = 0;
    int64_t total_posts = 0;
    int64_t total_comments = 0;
    int64_t active_agents_24h = 0;
    double avg_sentiment = 0.0; // platform-provided, opaque
    std::string top_words;      // opaque JSON text, stored verbatim
};

struct WordFrequencyRecord {
    std::string word; // lowercase, no whitespace
    std::string hour; // timestamp truncated to hour
    int64_t count = 0;
};

struct FollowEdge {
    std::string follower_id;
    std::string following_id;
    std::string first_seen_at;
};

// ---------------------------------------------------------------------------
// Table catalog shared by the store and the exporter.
// ---------------------------------------------------------------------------

enum class TableName { agents, posts, comments, submolts, snapshots, word_frequency, follows };

constexpr TableName kAllTables[] = {
    TableName::agents,   TableName::posts,     TableName::comments, TableName::submolts,
    TableName::snapshots, TableName::word_frequency, TableName::follows,
};

const char* to_string(TableName t);
std::optional<TableName> table_from_string(std::string_view name);

enum class ColType { text, int64, int32, boolean, real };

struct ColumnDef {
    std::string name;
    ColType type = ColType::text;
    bool nullable = false;
};

/// Columns as persisted in the store, in schema order.
const std::vector<ColumnDef>& stored_columns(TableName t);

/// Columns as exported (stored plus the computed columns for posts and
/// comments, appended in dump_date/date/hour/content_length order).
std::vector<ColumnDef> exported_columns(TableName t);

bool has_computed_columns(TableName t);

/// A generic cell; monostate encodes NULL.
using Value = std::variant<std::monostate, int64_t, int32_t, bool, double, std::string>;
using Row = std::vector<Value>;

bool value_is_null(const Value& v);
std::string value_to_display(const Value& v);

// Record <-> generic row, in stored-column order.
Row row_from_agent(const AgentRecord& r);
Row row_from_post(const PostRecord& r);
Row row_from_comment(const CommentRecord& r);
Row row_from_submolt(const SubmoltRecord& r);
Row row_from_snapshot(const SnapshotRecord& r);
Row row_from_word_frequency(const WordFrequencyRecord& r);
Row row_from_follow(const FollowEdge& r);

AgentRecord agent_from_row(const Row& row);
PostRecord post_from_row(const Row& row);
CommentRecord comment_from_row(const Row& row);
SubmoltRecord submolt_from_row(const Row& row);
SnapshotRecord snapshot_from_row(const Row& row);
WordFrequencyRecord word_frequency_from_row(const Row& row);
FollowEdge follow_from_row(const Row& row);

} // namespace observatory
