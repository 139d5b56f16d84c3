#include "observatory/store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace observatory {

namespace {

const char* primary_key_clause(TableName t) {
    switch (t) {
        case TableName::agents:
        case TableName::posts:
        case TableName::comments:
        case TableName::snapshots: return "PRIMARY KEY (id)";
        case TableName::submolts: return "PRIMARY KEY (name)";
        case TableName::word_frequency: return "PRIMARY KEY (word, hour)";
        case TableName::follows: return "PRIMARY KEY (follower_id, following_id)";
    }
    return "";
}

std::string sql_type(ColType t) {
    switch (t) {
        case ColType::text: return "TEXT";
        case ColType::int64:
        case ColType::int32:
        case ColType::boolean: return "INTEGER";
        case ColType::real: return "REAL";
    }
    return "TEXT";
}

/// Rebase a parseable stamp to canonical UTC text so lexicographic MIN/MAX
/// in SQL agrees with instant order. Observatory-generated stamps
/// (first_seen_at, last_seen_at, fetched_at) go through this; platform
/// text such as created_at is stored verbatim.
std::string canonical_utc(const std::string& text) {
    if (auto ts = parse_timestamp(text)) {
        Timestamp utc{ts->utc_micros, 0};
        return format_timestamp(utc);
    }
    return text;
}

void check(int rc, sqlite3* db, const char* what) {
    if (rc != SQLITE_OK && rc != SQLITE_ROW && rc != SQLITE_DONE) {
        std::string msg = std::string(what) + ": " + (db ? sqlite3_errmsg(db) : "unknown");
        throw std::runtime_error(msg);
    }
}

bool value_matches(const Value& v, const ColumnDef& def) {
    if (value_is_null(v)) return def.nullable;
    switch (def.type) {
        case ColType::text: return std::holds_alternative<std::string>(v);
        case ColType::int64: return std::holds_alternative<int64_t>(v);
        case ColType::int32: return std::holds_alternative<int32_t>(v);
        case ColType::boolean: return std::holds_alternative<bool>(v);
        case ColType::real: return std::holds_alternative<double>(v);
    }
    return false;
}

} // namespace

/// RAII use of a cached prepared statement: resets and clears bindings on
/// scope exit so the statement can be reused.
class StoreStmt {
public:
    StoreStmt(sqlite3* db, sqlite3_stmt* stmt) : db_(db), stmt_(stmt) {}
    ~StoreStmt() {
        sqlite3_reset(stmt_);
        sqlite3_clear_bindings(stmt_);
    }
    StoreStmt(const StoreStmt&) = delete;

    void bind(int idx, const Value& v) {
        int rc;
        if (value_is_null(v))
            rc = sqlite3_bind_null(stmt_, idx);
        else if (auto* s = std::get_if<std::string>(&v))
            rc = sqlite3_bind_text(stmt_, idx, s->c_str(), static_cast<int>(s->size()),
                                   SQLITE_TRANSIENT);
        else if (auto* i = std::get_if<int64_t>(&v))
            rc = sqlite3_bind_int64(stmt_, idx, *i);
        else if (auto* i32 = std::get_if<int32_t>(&v))
            rc = sqlite3_bind_int64(stmt_, idx, *i32);
        else if (auto* b = std::get_if<bool>(&v))
            rc = sqlite3_bind_int64(stmt_, idx, *b ? 1 : 0);
        else
            rc = sqlite3_bind_double(stmt_, idx, std::get<double>(v));
        check(rc, db_, "bind");
    }

    void bind_all(const Row& row) {
        for (size_t i = 0; i < row.size(); ++i) bind(static_cast<int>(i + 1), row[i]);
    }

    bool step() {
        int rc = sqlite3_step(stmt_);
        check(rc, db_, "step");
        return rc == SQLITE_ROW;
    }

    Value column(int idx, ColType type) {
        if (sqlite3_column_type(stmt_, idx) == SQLITE_NULL) return std::monostate{};
        switch (type) {
            case ColType::text: {
                const unsigned char* p = sqlite3_column_text(stmt_, idx);
                int n = sqlite3_column_bytes(stmt_, idx);
                return std::string(reinterpret_cast<const char*>(p), static_cast<size_t>(n));
            }
            case ColType::int64: return static_cast<int64_t>(sqlite3_column_int64(stmt_, idx));
            case ColType::int32: return static_cast<int32_t>(sqlite3_column_int64(stmt_, idx));
            case ColType::boolean: return sqlite3_column_int64(stmt_, idx) != 0;
            case ColType::real: return sqlite3_column_double(stmt_, idx);
        }
        return std::monostate{};
    }

    std::string column_text(int idx) {
        const unsigned char* p = sqlite3_column_text(stmt_, idx);
        if (!p) return "";
        return reinterpret_cast<const char*>(p);
    }

    Row read_row(const std::vector<ColumnDef>& cols) {
        Row row;
        row.reserve(cols.size());
        for (size_t i = 0; i < cols.size(); ++i)
            row.push_back(column(static_cast<int>(i), cols[i].type));
        return row;
    }

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_;
};

struct Store::StmtCache {
    sqlite3* db = nullptr;
    std::unordered_map<std::string, sqlite3_stmt*> stmts;

    ~StmtCache() {
        for (auto& [_, stmt] : stmts) sqlite3_finalize(stmt);
    }

    StoreStmt get(const std::string& sql) {
        auto it = stmts.find(sql);
        if (it == stmts.end()) {
            sqlite3_stmt* stmt = nullptr;
            check(sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, nullptr), db, "prepare");
            it = stmts.emplace(sql, stmt).first;
        }
        return StoreStmt(db, it->second);
    }

    bool row_exists(const std::string& sql, std::initializer_list<const std::string*> keys) {
        StoreStmt stmt = get(sql);
        int idx = 1;
        for (const std::string* k : keys) stmt.bind(idx++, *k);
        return stmt.step();
    }
};

Store::Store(const std::string& path, bool read_only) {
    const int flags = read_only ? SQLITE_OPEN_READONLY
                                : (SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE);
    int rc = sqlite3_open_v2(path.c_str(), &db_, flags, nullptr);
    if (rc != SQLITE_OK) {
        std::string msg = "store: cannot open " + path + ": " + sqlite3_errmsg(db_);
        sqlite3_close(db_);
        db_ = nullptr;
        throw std::runtime_error(msg);
    }
    cache_ = std::make_unique<StmtCache>();
    cache_->db = db_;
    exec("PRAGMA journal_mode=WAL");
    exec("PRAGMA synchronous=NORMAL");
    if (read_only) return;
    for (TableName t : kAllTables) {
        std::ostringstream ddl;
        ddl << "CREATE TABLE IF NOT EXISTS " << to_string(t) << " (";
        for (const ColumnDef& col : stored_columns(t)) {
            ddl << col.name << " " << sql_type(col.type) << ", ";
        }
        ddl << primary_key_clause(t) << ")";
        exec(ddl.str());
    }
    exec("CREATE INDEX IF NOT EXISTS idx_posts_created ON posts(created_at)");
    exec("CREATE INDEX IF NOT EXISTS idx_posts_fetched ON posts(fetched_at)");
    exec("CREATE INDEX IF NOT EXISTS idx_comments_fetched ON comments(fetched_at)");
    exec("CREATE INDEX IF NOT EXISTS idx_agents_last_seen ON agents(last_seen_at)");
}

Store::~Store() {
    if (db_) {
        if (in_txn_) sqlite3_exec(db_, "COMMIT", nullptr, nullptr, nullptr);
        cache_.reset(); // finalize statements before closing
        sqlite3_close(db_);
    }
}

void Store::exec(const std::string& sql) {
    char* err = nullptr;
    int rc = sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err);
    if (rc != SQLITE_OK) {
        std::string msg = "store: " + sql.substr(0, 60) + ": " + (err ? err : "?");
        sqlite3_free(err);
        throw std::runtime_error(msg);
    }
}

void Store::begin() {
    if (!in_txn_) {
        exec("BEGIN");
        in_txn_ = true;
    }
}

void Store::commit() {
    if (in_txn_) {
        exec("COMMIT");
        in_txn_ = false;
    }
}

UpsertOutcome Store::upsert_row(TableName table, const Row& row) {
    const auto& cols = stored_columns(table);
    if (row.size() != cols.size()) {
        throw std::invalid_argument("store: " + std::string(to_string(table)) + " expects " +
                                    std::to_string(cols.size()) + " fields, got " +
                                    std::to_string(row.size()));
    }
    for (size_t i = 0; i < cols.size(); ++i) {
        if (!value_matches(row[i], cols[i])) {
            throw std::invalid_argument("store: field '" + cols[i].name + "' of " +
                                        to_string(table) + " has wrong type or illegal null");
        }
    }
    switch (table) {
        case TableName::agents: return upsert_agent(agent_from_row(row));
        case TableName::posts: return upsert_post(post_from_row(row));
        case TableName::comments: return upsert_comment(comment_from_row(row));
        case TableName::submolts: return upsert_submolt(submolt_from_row(row));
        case TableName::snapshots: return upsert_snapshot(snapshot_from_row(row));
        case TableName::word_frequency: return upsert_word_frequency(word_frequency_from_row(row));
        case TableName::follows: return upsert_follow(follow_from_row(row));
    }
    throw std::logic_error("unknown table");
}

UpsertOutcome Store::upsert_agent(const AgentRecord& r) {
    const bool present = cache_->row_exists("SELECT 1 FROM agents WHERE id = ?1", {&r.id});
    StoreStmt stmt = cache_->get("INSERT INTO agents VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9,?10,?11,?12) "
        "ON CONFLICT(id) DO UPDATE SET "
        "name=excluded.name, description=excluded.description, karma=excluded.karma, "
        "follower_count=excluded.follower_count, following_count=excluded.following_count, "
        "is_claimed=excluded.is_claimed, owner_x_handle=excluded.owner_x_handle, "
        "first_seen_at=MIN(first_seen_at, excluded.first_seen_at), "
        "last_seen_at=MAX(last_seen_at, excluded.last_seen_at), "
        "created_at=excluded.created_at, avatar_url=excluded.avatar_url");
    AgentRecord n = r;
    n.first_seen_at = canonical_utc(r.first_seen_at);
    n.last_seen_at = canonical_utc(r.last_seen_at);
    stmt.bind_all(row_from_agent(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_post(const PostRecord& r) {
    const bool present = cache_->row_exists("SELECT 1 FROM posts WHERE id = ?1", {&r.id});
    // created_at is pinned by the first observation; dump_date derives
    // from it, so later fetches must not move it.
    StoreStmt stmt = cache_->get("INSERT INTO posts VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9,?10,?11,?12) "
        "ON CONFLICT(id) DO UPDATE SET "
        "agent_id=excluded.agent_id, agent_name=excluded.agent_name, "
        "submolt=excluded.submolt, title=excluded.title, content=excluded.content, "
        "url=excluded.url, score=excluded.score, comment_count=excluded.comment_count, "
        "fetched_at=MAX(fetched_at, excluded.fetched_at), is_pinned=excluded.is_pinned");
    PostRecord n = r;
    n.fetched_at = canonical_utc(r.fetched_at);
    stmt.bind_all(row_from_post(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_comment(const CommentRecord& r) {
    const bool present = cache_->row_exists("SELECT 1 FROM comments WHERE id = ?1", {&r.id});
    StoreStmt stmt = cache_->get("INSERT INTO comments VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9) "
        "ON CONFLICT(id) DO UPDATE SET "
        "post_id=excluded.post_id, agent_id=excluded.agent_id, "
        "agent_name=excluded.agent_name, parent_id=excluded.parent_id, "
        "content=excluded.content, score=excluded.score, "
        "fetched_at=MAX(fetched_at, excluded.fetched_at)");
    CommentRecord n = r;
    n.fetched_at = canonical_utc(r.fetched_at);
    stmt.bind_all(row_from_comment(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_submolt(const SubmoltRecord& r) {
    const bool present = cache_->row_exists("SELECT 1 FROM submolts WHERE name = ?1", {&r.name});
    StoreStmt stmt = cache_->get("INSERT INTO submolts VALUES (?1,?2,?3,?4,?5,?6,?7,?8,?9) "
        "ON CONFLICT(name) DO UPDATE SET "
        "display_name=excluded.display_name, description=excluded.description, "
        "subscriber_count=excluded.subscriber_count, post_count=excluded.post_count, "
        "created_at=excluded.created_at, "
        "first_seen_at=MIN(first_seen_at, excluded.first_seen_at), "
        "avatar_url=excluded.avatar_url, banner_url=excluded.banner_url");
    SubmoltRecord n = r;
    n.first_seen_at = canonical_utc(r.first_seen_at);
    stmt.bind_all(row_from_submolt(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_snapshot(const SnapshotRecord& r) {
    const bool present = cache_->row_exists("SELECT 1 FROM snapshots WHERE id = ?1", {&r.id});
    StoreStmt stmt = cache_->get("INSERT OR REPLACE INTO snapshots VALUES (?1,?2,?3,?4,?5,?6,?7,?8)");
    stmt.bind_all(row_from_snapshot(r));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_word_frequency(const WordFrequencyRecord& r) {
    WordFrequencyRecord n = r;
    n.hour = canonical_utc(r.hour);
    const bool present = cache_->row_exists(
        "SELECT 1 FROM word_frequency WHERE word = ?1 AND hour = ?2", {&n.word, &n.hour});
    StoreStmt stmt = cache_->get("INSERT OR REPLACE INTO word_frequency VALUES (?1,?2,?3)");
    stmt.bind_all(row_from_word_frequency(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

UpsertOutcome Store::upsert_follow(const FollowEdge& r) {
    const bool present =
        cache_->row_exists("SELECT 1 FROM follows WHERE follower_id = ?1 AND following_id = ?2",
                   {&r.follower_id, &r.following_id});
    StoreStmt stmt = cache_->get("INSERT INTO follows VALUES (?1,?2,?3) "
                              "ON CONFLICT(follower_id, following_id) DO UPDATE SET "
                              "first_seen_at=MIN(first_seen_at, excluded.first_seen_at)");
    FollowEdge n = r;
    n.first_seen_at = canonical_utc(r.first_seen_at);
    stmt.bind_all(row_from_follow(n));
    stmt.step();
    return present ? UpsertOutcome::replaced : UpsertOutcome::inserted;
}

int64_t Store::count(TableName table) const {
    StoreStmt stmt = cache_->get(std::string("SELECT COUNT(*) FROM ") + to_string(table));
    stmt.step();
    return std::get<int64_t>(stmt.column(0, ColType::int64));
}

std::vector<Row> Store::scan(TableName table) const {
    const auto& cols = stored_columns(table);
    StoreStmt stmt =
        cache_->get(std::string("SELECT * FROM ") + to_string(table) + " ORDER BY rowid");
    std::vector<Row> rows;
    while (stmt.step()) rows.push_back(stmt.read_row(cols));
    return rows;
}

namespace {

int column_index(TableName table, const std::string& column) {
    const auto& cols = stored_columns(table);
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].name == column) {
            if (cols[i].type != ColType::text)
                throw std::invalid_argument("store: column '" + column + "' is not a timestamp");
            return static_cast<int>(i);
        }
    }
    throw std::invalid_argument("store: unknown column '" + column + "' on " + to_string(table));
}

} // namespace

std::vector<Row> Store::query_rows_since(TableName table, const std::string& column,
                                         const Timestamp& threshold) const {
    const int idx = column_index(table, column);
    const auto& cols = stored_columns(table);

    // Lexicographic prefilter on the 19-char local-time prefix, widened by
    // 26h to cover any legal offset. Disabled for pre-epoch thresholds so
    // a first full export also returns rows with unparseable stamps.
    std::string sql = std::string("SELECT * FROM ") + to_string(table);
    const bool prefilter = threshold.utc_micros > 0;
    if (prefilter) sql += " WHERE " + column + " >= ?1";
    StoreStmt stmt = cache_->get(sql);
    if (prefilter) {
        Timestamp widened{threshold.utc_micros - 26LL * 3600 * 1'000'000, 0};
        stmt.bind(1, format_timestamp(widened).substr(0, 19));
    }

    std::vector<std::pair<int64_t, Row>> keyed;
    while (stmt.step()) {
        Row row = stmt.read_row(cols);
        int64_t instant = 0; // unparseable stamps sort as epoch
        const Value& v = row[static_cast<size_t>(idx)];
        if (!value_is_null(v)) {
            if (auto ts = parse_timestamp(std::get<std::string>(v))) instant = ts->utc_micros;
        }
        if (instant > threshold.utc_micros) keyed.emplace_back(instant, std::move(row));
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Row> rows;
    rows.reserve(keyed.size());
    for (auto& [_, row] : keyed) rows.push_back(std::move(row));
    return rows;
}

std::vector<Row> Store::query_rows_between(TableName table, const std::string& column,
                                           const Timestamp& from, const Timestamp& to) const {
    const int idx = column_index(table, column);
    const auto& cols = stored_columns(table);

    std::string sql = std::string("SELECT * FROM ") + to_string(table) + " WHERE " + column +
        " >= ?1 AND " + column + " <= ?2";
    StoreStmt stmt = cache_->get(sql);
    Timestamp lo{from.utc_micros - 26LL * 3600 * 1'000'000, 0};
    Timestamp hi{to.utc_micros + 26LL * 3600 * 1'000'000, 0};
    stmt.bind(1, format_timestamp(lo).substr(0, 19));
    stmt.bind(2, format_timestamp(hi).substr(0, 19) + "\x7f");

    std::vector<std::pair<int64_t, Row>> keyed;
    while (stmt.step()) {
        Row row = stmt.read_row(cols);
        const Value& v = row[static_cast<size_t>(idx)];
        if (value_is_null(v)) continue;
        auto ts = parse_timestamp(std::get<std::string>(v));
        if (!ts) continue;
        if (ts->utc_micros >= from.utc_micros && ts->utc_micros <= to.utc_micros)
            keyed.emplace_back(ts->utc_micros, std::move(row));
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Row> rows;
    rows.reserve(keyed.size());
    for (auto& [_, row] : keyed) rows.push_back(std::move(row));
    return rows;
}

std::vector<std::string> Store::distinct_agent_ids() const {
    StoreStmt stmt = cache_->get("SELECT DISTINCT agent_id FROM posts "
                              "UNION SELECT DISTINCT agent_id FROM comments "
                              "UNION SELECT id FROM agents ORDER BY 1");
    std::vector<std::string> ids;
    while (stmt.step()) ids.push_back(stmt.column_text(0));
    return ids;
}

} // namespace observatory
