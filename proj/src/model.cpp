#include "observatory/model.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace observatory {

namespace {

constexpr int64_t kMicrosPerSecond = 1'000'000;
constexpr int64_t kMicrosPerDay = 86'400 * kMicrosPerSecond;

// floor division that is exact for negative values
int64_t floor_div(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

int64_t floor_mod(int64_t a, int64_t b) { return a - floor_div(a, b) * b; }

bool is_leap(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

unsigned last_day_of_month(int year, unsigned month) {
    static constexpr std::array<unsigned, 12> days = {31, 28, 31, 30, 31, 30,
                                                      31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap(year)) return 29;
    return days[month - 1];
}

bool parse_fixed_uint(std::string_view s, size_t pos, size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (size_t i = 0; i < len; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

} // namespace

int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yr = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yr + (m <= 2));
}

bool valid_civil(int year, unsigned month, unsigned day) {
    if (month < 1 || month > 12) return false;
    if (day < 1 || day > last_day_of_month(year, month)) return false;
    return true;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) {
    // YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)
    if (s.size() < 20) return std::nullopt;
    int year, month, day, hour, minute, second;
    if (!parse_fixed_uint(s, 0, 4, year)) return std::nullopt;
    if (s[4] != '-') return std::nullopt;
    if (!parse_fixed_uint(s, 5, 2, month)) return std::nullopt;
    if (s[7] != '-') return std::nullopt;
    if (!parse_fixed_uint(s, 8, 2, day)) return std::nullopt;
    if (s[10] != 'T') return std::nullopt;
    if (!parse_fixed_uint(s, 11, 2, hour)) return std::nullopt;
    if (s[13] != ':') return std::nullopt;
    if (!parse_fixed_uint(s, 14, 2, minute)) return std::nullopt;
    if (s[16] != ':') return std::nullopt;
    if (!parse_fixed_uint(s, 17, 2, second)) return std::nullopt;

    if (!valid_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)))
        return std::nullopt;
    if (hour > 23 || minute > 59 || second > 60) return std::nullopt;
    if (second == 60) second = 59; // tolerate leap seconds by clamping

    size_t pos = 19;
    int64_t micros = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        size_t digits = 0;
        int64_t frac = 0;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            if (digits < 6) frac = frac * 10 + (s[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0 || digits > 9) return std::nullopt;
        size_t effective = digits < 6 ? digits : 6;
        for (size_t i = effective; i < 6; ++i) frac *= 10;
        micros = frac;
    }

    if (pos >= s.size()) return std::nullopt;
    int offset_minutes = 0;
    if (s[pos] == 'Z') {
        ++pos;
    } else if (s[pos] == '+' || s[pos] == '-') {
        int sign = s[pos] == '+' ? 1 : -1;
        ++pos;
        int oh, om;
        if (!parse_fixed_uint(s, pos, 2, oh)) return std::nullopt;
        if (pos + 2 >= s.size() || s[pos + 2] != ':') return std::nullopt;
        if (!parse_fixed_uint(s, pos + 3, 2, om)) return std::nullopt;
        pos += 5;
        if (oh > 18 || om > 59) return std::nullopt;
        offset_minutes = sign * (oh * 60 + om);
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;

    const int64_t local_days = days_from_civil(year, static_cast<unsigned>(month),
                                               static_cast<unsigned>(day));
    const int64_t local_micros = local_days * kMicrosPerDay +
        (static_cast<int64_t>(hour) * 3600 + minute * 60 + second) * kMicrosPerSecond + micros;
    Timestamp ts;
    ts.utc_micros = local_micros - static_cast<int64_t>(offset_minutes) * 60 * kMicrosPerSecond;
    ts.offset_minutes = static_cast<int16_t>(offset_minutes);
    return ts;
}

std::string format_timestamp(const Timestamp& ts) {
    const int64_t local = ts.utc_micros + static_cast<int64_t>(ts.offset_minutes) * 60 * kMicrosPerSecond;
    const int64_t days = floor_div(local, kMicrosPerDay);
    int64_t rem = floor_mod(local, kMicrosPerDay);
    int year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    const int64_t micros = rem % kMicrosPerSecond;
    rem /= kMicrosPerSecond;
    const int second = static_cast<int>(rem % 60);
    rem /= 60;
    const int minute = static_cast<int>(rem % 60);
    const int hour = static_cast<int>(rem / 60);

    char buf[48];
    int n = std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02d", year, month, day,
                          hour, minute, second);
    std::string out(buf, static_cast<size_t>(n));
    if (micros != 0) {
        char frac[16];
        std::snprintf(frac, sizeof(frac), ".%06lld", static_cast<long long>(micros));
        out += frac;
    }
    const int om = ts.offset_minutes;
    const int abs_om = om < 0 ? -om : om;
    char off[8];
    std::snprintf(off, sizeof(off), "%c%02d:%02d", om < 0 ? '-' : '+', abs_om / 60, abs_om % 60);
    out += off;
    return out;
}

Timestamp make_utc(int year, unsigned month, unsigned day, int hour, int minute, int second,
                   int micros) {
    Timestamp ts;
    ts.utc_micros = days_from_civil(year, month, day) * kMicrosPerDay +
        (static_cast<int64_t>(hour) * 3600 + minute * 60 + second) * kMicrosPerSecond + micros;
    ts.offset_minutes = 0;
    return ts;
}

std::string utc_date(const Timestamp& ts) {
    const int64_t days = floor_div(ts.utc_micros, kMicrosPerDay);
    int year;
    unsigned month, day;
    civil_from_days(days, year, month, day);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
    return buf;
}

int utc_hour(const Timestamp& ts) {
    const int64_t rem = floor_mod(ts.utc_micros, kMicrosPerDay);
    return static_cast<int>(rem / (3600 * kMicrosPerSecond));
}

Timestamp truncate_to_hour_utc(const Timestamp& ts) {
    constexpr int64_t hour_micros = 3600 * kMicrosPerSecond;
    Timestamp out;
    out.utc_micros = floor_div(ts.utc_micros, hour_micros) * hour_micros;
    out.offset_minutes = 0;
    return out;
}

Timestamp add_days(const Timestamp& ts, int64_t days) {
    Timestamp out = ts;
    out.utc_micros += days * kMicrosPerDay;
    return out;
}

Timestamp add_seconds(const Timestamp& ts, int64_t seconds) {
    Timestamp out = ts;
    out.utc_micros += seconds * kMicrosPerSecond;
    return out;
}

std::optional<Timestamp> parse_date(std::string_view s) {
    if (s.size() != 10) return std::nullopt;
    int year, month, day;
    if (!parse_fixed_uint(s, 0, 4, year)) return std::nullopt;
    if (s[4] != '-') return std::nullopt;
    if (!parse_fixed_uint(s, 5, 2, month)) return std::nullopt;
    if (s[7] != '-') return std::nullopt;
    if (!parse_fixed_uint(s, 8, 2, day)) return std::nullopt;
    if (!valid_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)))
        return std::nullopt;
    return make_utc(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
}

bool valid_date_text(std::string_view text) { return parse_date(text).has_value(); }

int64_t count_codepoints(std::string_view text) {
    int64_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

DerivedFields derive_local_fields(std::string_view created_at_text, std::string_view content,
                                  const std::string& export_date) {
    if (!valid_date_text(export_date)) {
        throw std::invalid_argument("derive_local_fields: export_date must be YYYY-MM-DD");
    }
    DerivedFields out;
    out.content_length = count_codepoints(content);
    if (auto ts = parse_timestamp(created_at_text)) {
        out.dump_date = utc_date(*ts);
        out.date = out.dump_date;
        out.hour = utc_hour(*ts);
    } else {
        out.dump_date = export_date;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Table catalog
// ---------------------------------------------------------------------------

const char* to_string(TableName t) {
    switch (t) {
        case TableName::agents: return "agents";
        case TableName::posts: return "posts";
        case TableName::comments: return "comments";
        case TableName::submolts: return "submolts";
        case TableName::snapshots: return "snapshots";
        case TableName::word_frequency: return "word_frequency";
        case TableName::follows: return "follows";
    }
    return "?";
}

std::optional<TableName> table_from_string(std::string_view name) {
    for (TableName t : kAllTables) {
        if (name == to_string(t)) return t;
    }
    return std::nullopt;
}

const std::vector<ColumnDef>& stored_columns(TableName t) {
    static const std::vector<ColumnDef> agents = {
        {"id", ColType::text, false},
        {"name", ColType::text, false},
        {"description", ColType::text, true},
        {"karma", ColType::int64, false},
        {"follower_count", ColType::int64, false},
        {"following_count", ColType::int64, false},
        {"is_claimed", ColType::boolean, false},
        {"owner_x_handle", ColType::text, true},
        {"first_seen_at", ColType::text, false},
        {"last_seen_at", ColType::text, false},
        {"created_at", ColType::text, true},
        {"avatar_url", ColType::text, true},
    };
    static const std::vector<ColumnDef> posts = {
        {"id", ColType::text, false},
        {"agent_id", ColType::text, false},
        {"agent_name", ColType::text, false},
        {"submolt", ColType::text, false},
        {"title", ColType::text, false},
        {"content", ColType::text, false},
        {"url", ColType::text, true},
        {"score", ColType::int64, false},
        {"comment_count", ColType::int64, false},
        {"created_at", ColType::text, false},
        {"fetched_at", ColType::text, false},
        {"is_pinned", ColType::boolean, false},
    };
    static const std::vector<ColumnDef> comments = {
        {"id", ColType::text, false},
        {"post_id", ColType::text, false},
        {"agent_id", ColType::text, false},
        {"agent_name", ColType::text, false},
        {"parent_id", ColType::text, true},
        {"content", ColType::text, false},
        {"score", ColType::int64, false},
        {"created_at", ColType::text, false},
        {"fetched_at", ColType::text, false},
    };
    static const std::vector<ColumnDef> submolts = {
        {"name", ColType::text, false},
        {"display_name", ColType::text, false},
        {"description", ColType::text, true},
        {"subscriber_count", ColType::int64, false},
        {"post_count", ColType::int64, false},
        {"created_at", ColType::text, true},
        {"first_seen_at", ColType::text, false},
        {"avatar_url", ColType::text, true},
        {"banner_url", ColType::text, true},
    };
    static const std::vector<ColumnDef> snapshots = {
        {"id", ColType::text, false},
        {"timestamp", ColType::text, false},
        {"total_agents", ColType::int64, false},
        {"total_posts", ColType::int64, false},
        {"total_comments", ColType::int64, false},
        {"active_agents_24h", ColType::int64, false},
        {"avg_sentiment", ColType::real, false},
        {"top_words", ColType::text, false},
    };
    static const std::vector<ColumnDef> word_frequency = {
        {"word", ColType::text, false},
        {"hour", ColType::text, false},
        {"count", ColType::int64, false},
    };
    static const std::vector<ColumnDef> follows = {
        {"follower_id", ColType::text, false},
        {"following_id", ColType::text, false},
        {"first_seen_at", ColType::text, false},
    };
    switch (t) {
        case TableName::agents: return agents;
        case TableName::posts: return posts;
        case TableName::comments: return comments;
        case TableName::submolts: return submolts;
        case TableName::snapshots: return snapshots;
        case TableName::word_frequency: return word_frequency;
        case TableName::follows: return follows;
    }
    throw std::logic_error("unknown table");
}

bool has_computed_columns(TableName t) {
    return t == TableName::posts || t == TableName::comments;
}

std::vector<ColumnDef> exported_columns(TableName t) {
    std::vector<ColumnDef> cols = stored_columns(t);
    if (has_computed_columns(t)) {
        cols.push_back({"dump_date", ColType::text, false});
        cols.push_back({"date", ColType::text, true});
        cols.push_back({"hour", ColType::int32, true});
        cols.push_back({"content_length", ColType::int64, false});
    }
    return cols;
}

bool value_is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

std::string value_to_display(const Value& v) {
    if (value_is_null(v)) return "";
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    if (auto* i = std::get_if<int64_t>(&v)) return std::to_string(*i);
    if (auto* i = std::get_if<int32_t>(&v)) return std::to_string(*i);
    if (auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    if (auto* d = std::get_if<double>(&v)) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", *d);
        return buf;
    }
    return "";
}

namespace {

Value opt_text(const std::optional<std::string>& v) {
    if (!v) return std::monostate{};
    return *v;
}

std::optional<std::string> text_or_null(const Value& v) {
    if (value_is_null(v)) return std::nullopt;
    return std::get<std::string>(v);
}

const std::string& text(const Value& v) { return std::get<std::string>(v); }
int64_t i64(const Value& v) { return std::get<int64_t>(v); }
bool boolean(const Value& v) { return std::get<bool>(v); }
double real(const Value& v) { return std::get<double>(v); }

} // namespace

Row row_from_agent(const AgentRecord& r) {
    return {r.id,
            r.name,
            opt_text(r.description),
            r.karma,
            r.follower_count,
            r.following_count,
            r.is_claimed,
            opt_text(r.owner_x_handle),
            r.first_seen_at,
            r.last_seen_at,
            opt_text(r.created_at),
            opt_text(r.avatar_url)};
}

Row row_from_post(const PostRecord& r) {
    return {r.id,    r.agent_id,      r.agent_name, r.submolt,    r.title,      r.content,
            opt_text(r.url), r.score, r.comment_count, r.created_at, r.fetched_at, r.is_pinned};
}

Row row_from_comment(const CommentRecord& r) {
    return {r.id,      r.post_id, r.agent_id,   r.agent_name, opt_text(r.parent_id),
            r.content, r.score,   r.created_at, r.fetched_at};
}

Row row_from_submolt(const SubmoltRecord& r) {
    return {r.name,
            r.display_name,
            opt_text(r.description),
            r.subscriber_count,
            r.post_count,
            opt_text(r.created_at),
            r.first_seen_at,
            opt_text(r.avatar_url),
            opt_text(r.banner_url)};
}

Row row_from_snapshot(const SnapshotRecord& r) {
    return {r.id,
            r.timestamp,
            r.total_agents,
            r.total_posts,
            r.total_comments,
            r.active_agents_24h,
            r.avg_sentiment,
            r.top_words};
}

Row row_from_word_frequency(const WordFrequencyRecord& r) { return {r.word, r.hour, r.count}; }

Row row_from_follow(const FollowEdge& r) {
    return {r.follower_id, r.following_id, r.first_seen_at};
}

AgentRecord agent_from_row(const Row& row) {
    AgentRecord r;
    r.id = text(row[0]);
    r.name = text(row[1]);
    r.description = text_or_null(row[2]);
    r.karma = i64(row[3]);
    r.follower_count = i64(row[4]);
    r.following_count = i64(row[5]);
    r.is_claimed = boolean(row[6]);
    r.owner_x_handle = text_or_null(row[7]);
    r.first_seen_at = text(row[8]);
    r.last_seen_at = text(row[9]);
    r.created_at = text_or_null(row[10]);
    r.avatar_url = text_or_null(row[11]);
    return r;
}

PostRecord post_from_row(const Row& row) {
    PostRecord r;
    r.id = text(row[0]);
    r.agent_id = text(row[1]);
    r.agent_name = text(row[2]);
    r.submolt = text(row[3]);
    r.title = text(row[4]);
    r.content = text(row[5]);
    r.url = text_or_null(row[6]);
    r.score = i64(row[7]);
    r.comment_count = i64(row[8]);
    r.created_at = text(row[9]);
    r.fetched_at = text(row[10]);
    r.is_pinned = boolean(row[11]);
    return r;
}

CommentRecord comment_from_row(const Row& row) {
    CommentRecord r;
    r.id = text(row[0]);
    r.post_id = text(row[1]);
    r.agent_id = text(row[2]);
    r.agent_name = text(row[3]);
    r.parent_id = text_or_null(row[4]);
    r.content = text(row[5]);
    r.score = i64(row[6]);
    r.created_at = text(row[7]);
    r.fetched_at = text(row[8]);
    return r;
}

SubmoltRecord submolt_from_row(const Row& row) {
    SubmoltRecord r;
    r.name = text(row[0]);
    r.display_name = text(row[1]);
    r.description = text_or_null(row[2]);
    r.subscriber_count = i64(row[3]);
    r.post_count = i64(row[4]);
    r.created_at = text_or_null(row[5]);
    r.first_seen_at = text(row[6]);
    r.avatar_url = text_or_null(row[7]);
    r.banner_url = text_or_null(row[8]);
    return r;
}

SnapshotRecord snapshot_from_row(const Row& row) {
    SnapshotRecord r;
    r.id = text(row[0]);
    r.timestamp = text(row[1]);
    r.total_agents = i64(row[2]);
    r.total_posts = i64(row[3]);
    r.total_comments = i64(row[4]);
    r.active_agents_24h = i64(row[5]);
    r.avg_sentiment = real(row[6]);
    r.top_words = text(row[7]);
    return r;
}

WordFrequencyRecord word_frequency_from_row(const Row& row) {
    WordFrequencyRecord r;
    r.word = text(row[0]);
    r.hour = text(row[1]);
    r.count = i64(row[2]);
    return r;
}

FollowEdge follow_from_row(const Row& row) {
    FollowEdge r;
    r.follower_id = text(row[0]);
    r.following_id = text(row[1]);
    r.first_seen_at = text(row[2]);
    return r;
}

} // namespace observatory
