#pragma once

#include <string>
#include <vector>

#include "observatory/model.hpp"

namespace observatory::pq {

/// In-memory columnar batch. Cells must match the declared column type or
/// be null (std::monostate).
struct Table {
    std::vector<ColumnDef> columns;
    std::vector<Row> rows;
};

/// Writes a Parquet file: single row group, one PLAIN-encoded uncompressed
/// data page per column, every column OPTIONAL. Output is a deterministic
/// function of the table contents.
void write_parquet(const std::string& path, const Table& table);

/// Reads files produced by write_parquet (uncompressed PLAIN v1 data pages).
Table read_parquet(const std::string& path);

} // namespace observatory::pq
