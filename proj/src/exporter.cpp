#include "observatory/exporter.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace observatory::exporter {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<TableSpec>& table_registry() {
    static const std::vector<TableSpec> registry = {
        {TableName::agents, "first_seen_at", "last_seen_at", 7, {"id"}, true},
        {TableName::posts, "created_at", "fetched_at", 7, {"id"}, true},
        {TableName::comments, "created_at", "fetched_at", 7, {"id"}, true},
        {TableName::submolts, "first_seen_at", "first_seen_at", 30, {"name"}, true},
        {TableName::snapshots, "timestamp", "timestamp", 0, {"id"}, true},
        {TableName::word_frequency, "hour", "hour", 0, {"word", "hour"}, true},
        {TableName::follows, "first_seen_at", "first_seen_at", 0,
         {"follower_id", "following_id"}, false},
    };
    return registry;
}

const TableSpec& spec_for(TableName t) {
    for (const TableSpec& spec : table_registry())
        if (spec.table == t) return spec;
    throw std::logic_error("no table spec");
}

std::optional<Timestamp> ExportState::get(TableName t) const {
    auto it = last_exported.find(to_string(t));
    if (it == last_exported.end()) return std::nullopt;
    return parse_timestamp(it->second);
}

void ExportState::advance(TableName t, const Timestamp& ts) {
    auto current = get(t);
    if (current && !(*current < ts)) return; // never decreases
    last_exported[to_string(t)] = format_timestamp(Timestamp{ts.utc_micros, 0});
}

ExportState load_state(const std::string& path) {
    ExportState state;
    std::ifstream in(path);
    if (!in) return state;
    json j = json::parse(in);
    if (!j.contains("tables")) return state;
    for (const auto& [table, entry] : j.at("tables").items()) {
        if (entry.contains("last_exported") && !entry.at("last_exported").is_null())
            state.last_exported[table] = entry.at("last_exported").get<std::string>();
    }
    return state;
}

namespace {

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw std::runtime_error("export: cannot write " + tmp);
        out << content;
        if (!out) throw std::runtime_error("export: write failed: " + tmp);
    }
    fs::rename(tmp, path);
}

/// Exclusive advisory lock next to the state file; one export run at a time.
class LockFile {
public:
    explicit LockFile(const std::string& path) : path_(path) {
        if (fs::exists(path_))
            throw std::runtime_error("export: lock file exists, another run in progress: " + path_);
        std::ofstream out(path_);
        if (!out) throw std::runtime_error("export: cannot create lock file: " + path_);
        out << "locked\n";
    }
    ~LockFile() {
        std::error_code ec;
        fs::remove(path_, ec);
    }

private:
    std::string path_;
};

size_t column_index_of(TableName table, const std::string& column) {
    const auto cols = exported_columns(table);
    for (size_t i = 0; i < cols.size(); ++i)
        if (cols[i].name == column) return i;
    throw std::logic_error("export: column not found: " + column);
}

int64_t instant_of(const Value& v) {
    if (value_is_null(v)) return 0;
    if (auto ts = parse_timestamp(std::get<std::string>(v))) return ts->utc_micros;
    return 0; // unparseable stamps sort as epoch
}

} // namespace

void save_state(const ExportState& state, const std::string& path) {
    json tables = json::object();
    for (const auto& [table, stamp] : state.last_exported)
        tables[table] = json{{"last_exported", stamp}};
    json j{{"tables", tables}};
    atomic_write_text(path, j.dump(2) + "\n");
}

void save_manifest(const Manifest& manifest, const std::string& path) {
    json tables = json::object();
    for (const ManifestEntry& e : manifest.tables) {
        json entry{{"columns", e.columns},
                   {"creation_column", e.creation_column},
                   {"incremental_column", e.incremental_column},
                   {"primary_key", e.primary_key},
                   {"backfill_days", e.backfill_days},
                   {"partitions", e.partitions},
                   {"exportable", e.exportable}};
        entry["last_exported"] = e.last_exported ? json(*e.last_exported) : json(nullptr);
        tables[e.table] = entry;
    }
    json j{{"tables", tables}};
    atomic_write_text(path, j.dump(2) + "\n");
}

std::vector<Row> select_incremental(const Store& store, const TableSpec& spec,
                                    const ExportState& state) {
    if (!spec.exportable)
        throw std::invalid_argument(std::string("export: table '") + to_string(spec.table) +
                                    "' is excluded from the archive");
    Timestamp cutoff{-1, 0}; // epoch, inclusive: a first run exports everything
    if (auto last = state.get(spec.table)) {
        cutoff = add_days(*last, -spec.backfill_days);
    }
    return store.query_rows_since(spec.table, spec.incremental_column, cutoff);
}

std::string assign_partition(const Row& row, const TableSpec& spec,
                             const std::string& export_date) {
    const auto& cols = stored_columns(spec.table);
    size_t idx = 0;
    for (size_t i = 0; i < cols.size(); ++i)
        if (cols[i].name == spec.creation_column) idx = i;
    std::string text;
    if (!value_is_null(row[idx])) text = std::get<std::string>(row[idx]);
    return derive_local_fields(text, "", export_date).dump_date;
}

std::vector<Row> merge_dedup(const std::vector<Row>& existing, const std::vector<Row>& incoming,
                             const TableSpec& spec) {
    std::vector<size_t> key_idx;
    for (const std::string& col : spec.primary_key) key_idx.push_back(column_index_of(spec.table, col));
    const size_t inc_idx = column_index_of(spec.table, spec.incremental_column);

    auto key_of = [&](const Row& row) {
        std::vector<std::string> key;
        key.reserve(key_idx.size());
        for (size_t i : key_idx) key.push_back(value_is_null(row[i]) ? "" : std::get<std::string>(row[i]));
        return key;
    };

    std::map<std::vector<std::string>, Row> merged;
    for (const Row& row : existing) merged[key_of(row)] = row;
    for (const Row& row : incoming) {
        auto key = key_of(row);
        auto it = merged.find(key);
        if (it == merged.end() || instant_of(row[inc_idx]) >= instant_of(it->second[inc_idx])) {
            merged[std::move(key)] = row; // newer wins; ties keep incoming
        }
    }
    std::vector<Row> out;
    out.reserve(merged.size());
    for (auto& [_, row] : merged) out.push_back(std::move(row));
    return out;
}

std::string partition_dir(const std::string& out_dir, TableName table) {
    return (fs::path(out_dir) / "data" / to_string(table)).string();
}

std::vector<std::string> list_partition_dates(const std::string& out_dir, TableName table) {
    std::vector<std::string> dates;
    const fs::path dir = partition_dir(out_dir, table);
    if (!fs::exists(dir)) return dates;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".parquet") dates.push_back(entry.path().stem().string());
    }
    std::sort(dates.begin(), dates.end());
    return dates;
}

pq::Table read_partition(const std::string& out_dir, TableName table, const std::string& dump_date) {
    return pq::read_parquet((fs::path(partition_dir(out_dir, table)) / (dump_date + ".parquet")).string());
}

std::vector<std::pair<std::string, Row>> read_all_rows(const std::string& out_dir, TableName table) {
    std::vector<std::pair<std::string, Row>> out;
    for (const std::string& date : list_partition_dates(out_dir, table)) {
        pq::Table t = read_partition(out_dir, table, date);
        for (Row& row : t.rows) out.emplace_back(date, std::move(row));
    }
    return out;
}

namespace {

/// Stored row -> exported row (appends the computed columns for posts and
/// comments; other tables export storage columns unchanged).
Row exported_row(Row row, TableName table, const TableSpec& spec, const std::string& export_date) {
    if (!has_computed_columns(table)) return row;
    const auto& cols = stored_columns(table);
    size_t created_idx = 0, content_idx = 0;
    for (size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].name == spec.creation_column) created_idx = i;
        if (cols[i].name == "content") content_idx = i;
    }
    const std::string created =
        value_is_null(row[created_idx]) ? "" : std::get<std::string>(row[created_idx]);
    const std::string& content = std::get<std::string>(row[content_idx]);
    DerivedFields d = derive_local_fields(created, content, export_date);
    row.push_back(d.dump_date);
    row.push_back(d.date ? Value(*d.date) : Value(std::monostate{}));
    row.push_back(d.hour ? Value(static_cast<int32_t>(*d.hour)) : Value(std::monostate{}));
    row.push_back(d.content_length);
    return row;
}

} // namespace

ExportResult run_export(const Store& store, const std::string& out_dir,
                        const std::string& state_path, const ExportOptions& options) {
    if (!valid_date_text(options.export_date))
        throw std::invalid_argument("export: export date must be YYYY-MM-DD");
    fs::create_directories(fs::path(state_path).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(state_path).parent_path());
    LockFile lock(state_path + ".lock");

    ExportResult result;
    result.state = load_state(state_path);
    fs::create_directories(fs::path(out_dir) / "data");

    auto selected = [&](TableName t) {
        if (options.tables.empty()) return true;
        return std::find(options.tables.begin(), options.tables.end(),
                         std::string(to_string(t))) != options.tables.end();
    };

    for (const TableSpec& spec : table_registry()) {
        if (!spec.exportable || !selected(spec.table)) continue;
        try {
            const std::vector<Row> rows = select_incremental(store, spec, result.state);
            const size_t inc_idx = column_index_of(spec.table, spec.incremental_column);

            std::map<std::string, std::vector<Row>> by_date;
            int64_t max_incremental = 0;
            for (const Row& row : rows) {
                Row out = exported_row(row, spec.table, spec, options.export_date);
                max_incremental = std::max(max_incremental, instant_of(out[inc_idx]));
                by_date[assign_partition(row, spec, options.export_date)].push_back(std::move(out));
            }

            const fs::path dir = partition_dir(out_dir, spec.table);
            fs::create_directories(dir);
            for (auto& [date, incoming] : by_date) {
                const fs::path path = dir / (date + ".parquet");
                std::vector<Row> existing;
                if (fs::exists(path)) existing = pq::read_parquet(path.string()).rows;
                pq::Table table;
                table.columns = exported_columns(spec.table);
                table.rows = merge_dedup(existing, incoming, spec);
                if (options.track_counters) {
                    result.dedup_collapsed[to_string(spec.table)] +=
                        static_cast<int64_t>(existing.size() + incoming.size() - table.rows.size());
                }
                const fs::path tmp = dir / (date + ".parquet.tmp");
                try {
                    pq::write_parquet(tmp.string(), table);
                    fs::rename(tmp, path); // previous version survives any failure
                } catch (...) {
                    std::error_code ec;
                    fs::remove(tmp, ec);
                    throw;
                }
                result.written_partitions[to_string(spec.table)].push_back(date);
            }
            if (max_incremental > 0)
                result.state.advance(spec.table, Timestamp{max_incremental, 0});
        } catch (const std::exception& e) {
            result.failures[to_string(spec.table)] = e.what();
        }
    }

    for (const TableSpec& spec : table_registry()) {
        ManifestEntry entry;
        entry.table = to_string(spec.table);
        for (const ColumnDef& col : exported_columns(spec.table)) entry.columns.push_back(col.name);
        entry.creation_column = spec.creation_column;
        entry.incremental_column = spec.incremental_column;
        entry.primary_key = spec.primary_key;
        entry.backfill_days = spec.backfill_days;
        auto it = result.state.last_exported.find(entry.table);
        if (it != result.state.last_exported.end()) entry.last_exported = it->second;
        entry.partitions = static_cast<int64_t>(list_partition_dates(out_dir, spec.table).size());
        entry.exportable = spec.exportable;
        result.manifest.tables.push_back(std::move(entry));
    }

    save_state(result.state, state_path);
    save_manifest(result.manifest, (fs::path(out_dir) / "manifest.json").string());
    // failures leave their table's partitions and watermark untouched;
    // callers decide whether a partial run is fatal
    return result;
}

} // namespace observatory::exporter
