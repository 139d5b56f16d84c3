#pragma once

#include <memory>
#include <string>
#include <vector>

#include "observatory/model.hpp"

struct sqlite3;
struct sqlite3_stmt;

namespace observatory {

enum class UpsertOutcome { inserted, replaced };

/// Embedded single-file relational store over SQLite. Single writer,
/// multiple readers; every write commits transactionally. Timestamps are
/// stored as the ISO-8601 text observed on the wire.
class Store {
public:
    /// Opens (and creates schema for) the database at `path`.
    /// ":memory:" yields a private in-memory store.
    explicit Store(const std::string& path, bool read_only = false);
    ~Store();

    Store(const Store&) = delete;
    Store& operator=(const Store&) = delete;

    UpsertOutcome upsert_agent(const AgentRecord& r);
    UpsertOutcome upsert_post(const PostRecord& r);
    UpsertOutcome upsert_comment(const CommentRecord& r);
    UpsertOutcome upsert_submolt(const SubmoltRecord& r);
    UpsertOutcome upsert_snapshot(const SnapshotRecord& r);
    UpsertOutcome upsert_word_frequency(const WordFrequencyRecord& r);
    UpsertOutcome upsert_follow(const FollowEdge& r);

    /// Generic row upsert in stored-column order; validates arity and
    /// types against the table catalog and reports field diagnostics.
    UpsertOutcome upsert_row(TableName table, const Row& row);

    /// Batch write under one transaction.
    void begin();
    void commit();

    int64_t count(TableName table) const;
    std::vector<Row> scan(TableName table) const;

    /// Rows whose `column` parses to an instant strictly greater than
    /// `threshold`, ascending by that instant. Rows with unparseable
    /// column values are treated as epoch-old (returned only by scans
    /// from before the epoch).
    std::vector<Row> query_rows_since(TableName table, const std::string& column,
                                      const Timestamp& threshold) const;

    /// Rows with `column` in [from, to], ascending. Same parse semantics.
    std::vector<Row> query_rows_between(TableName table, const std::string& column,
                                        const Timestamp& from, const Timestamp& to) const;

    std::vector<std::string> distinct_agent_ids() const;

private:
    void exec(const std::string& sql);
    sqlite3* db_ = nullptr;
    bool in_txn_ = false;
    struct StmtCache;
    std::unique_ptr<StmtCache> cache_;
};

} // namespace observatory
