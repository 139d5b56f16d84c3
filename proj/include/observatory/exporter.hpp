#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "observatory/model.hpp"
#include "observatory/parquet.hpp"
#include "observatory/store.hpp"

namespace observatory::exporter {

/// Per-table export configuration. The registry is fixed; it is the
/// contract between the store, the partition layout, and the manifest.
struct TableSpec {
    TableName table;
    std::string creation_column;
    std::string incremental_column;
    int backfill_days = 0;
    std::vector<std::string> primary_key;
    bool exportable = true;
};

const std::vector<TableSpec>& table_registry();
const TableSpec& spec_for(TableName t);

/// Per-table watermark of the most recent exported incremental timestamp,
/// canonical UTC text. Monotonically non-decreasing across runs.
struct ExportState {
    std::map<std::string, std::string> last_exported;

    std::optional<Timestamp> get(TableName t) const;
    void advance(TableName t, const Timestamp& ts); // keeps the max
};

ExportState load_state(const std::string& path); // missing file -> empty state
void save_state(const ExportState& state, const std::string& path);

struct ManifestEntry {
    std::string table;
    std::vector<std::string> columns;
    std::string creation_column;
    std::string incremental_column;
    std::vector<std::string> primary_key;
    int backfill_days = 0;
    std::optional<std::string> last_exported;
    int64_t partitions = 0;
    bool exportable = true;
};

struct Manifest {
    std::vector<ManifestEntry> tables;
};

void save_manifest(const Manifest& manifest, const std::string& path);

/// Rows whose incremental column is strictly newer than the cutoff
/// (watermark minus the rolling backfill window; epoch when no watermark
/// exists yet). Refuses non-exportable tables.
std::vector<Row> select_incremental(const Store& store, const TableSpec& spec,
                                    const ExportState& state);

/// UTC date of the creation column, falling back to the export date when
/// it cannot be parsed.
std::string assign_partition(const Row& row, const TableSpec& spec,
                             const std::string& export_date);

/// Union of two same-partition row sets keyed by primary key. Collisions
/// keep the row with the newer incremental value; exact ties keep the
/// incoming row. Output is ordered by primary key.
std::vector<Row> merge_dedup(const std::vector<Row>& existing, const std::vector<Row>& incoming,
                             const TableSpec& spec);

struct ExportResult {
    ExportState state;
    std::map<std::string, std::vector<std::string>> written_partitions; // table -> dump dates
    Manifest manifest;
    std::map<std::string, std::string> failures;        // table -> error
    std::map<std::string, int64_t> dedup_collapsed;     // filled when counters enabled
};

struct ExportOptions {
    std::string export_date;         // YYYY-MM-DD
    std::vector<std::string> tables; // empty = all exportable
    // Off by default: per-table count of merge collisions collapsed by
    // keep-most-recent dedup. The run itself never depends on it.
    bool track_counters = false;
};

/// One full incremental export run: per exportable table, select new rows,
/// derive computed columns, group by dump_date, merge with any existing
/// partition, and replace files atomically. Holds an exclusive lock file
/// next to the state file for the duration of the run.
ExportResult run_export(const Store& store, const std::string& out_dir,
                        const std::string& state_path, const ExportOptions& options);

// Partition access for downstream stages.
std::string partition_dir(const std::string& out_dir, TableName table);
std::vector<std::string> list_partition_dates(const std::string& out_dir, TableName table);
pq::Table read_partition(const std::string& out_dir, TableName table, const std::string& dump_date);
/// All rows of a table across partitions, with the partition date attached.
std::vector<std::pair<std::string, Row>> read_all_rows(const std::string& out_dir, TableName table);

} // namespace observatory::exporter
