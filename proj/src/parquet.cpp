#include "observatory/parquet.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace observatory::pq {

namespace {

// Parquet format enums (parquet.thrift).
enum PhysicalType : int32_t {
    PT_BOOLEAN = 0,
    PT_INT32 = 1,
    PT_INT64 = 2,
    PT_DOUBLE = 5,
    PT_BYTE_ARRAY = 6,
};
constexpr int32_t kConvertedUtf8 = 0;
constexpr int32_t kRepetitionOptional = 1;
constexpr int32_t kEncodingPlain = 0;
constexpr int32_t kEncodingRle = 3;
constexpr int32_t kCodecUncompressed = 0;
constexpr int32_t kPageTypeData = 0;

// Thrift compact protocol wire types.
enum CType : uint8_t {
    CT_STOP = 0,
    CT_TRUE = 1,
    CT_FALSE = 2,
    CT_BYTE = 3,
    CT_I16 = 4,
    CT_I32 = 5,
    CT_I64 = 6,
    CT_DOUBLE = 7,
    CT_BINARY = 8,
    CT_LIST = 9,
    CT_SET = 10,
    CT_MAP = 11,
    CT_STRUCT = 12,
};

uint64_t zigzag(int64_t v) { return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63); }
int64_t unzigzag(uint64_t v) { return static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1); }

class ThriftWriter {
public:
    explicit ThriftWriter(std::string& out) : out_(out) {}

    void struct_begin() { last_ids_.push_back(last_id_), last_id_ = 0; }
    void struct_end() {
        out_.push_back(static_cast<char>(CT_STOP));
        last_id_ = last_ids_.back();
        last_ids_.pop_back();
    }

    void field(int16_t id, CType type) {
        const int delta = id - last_id_;
        if (delta >= 1 && delta <= 15) {
            out_.push_back(static_cast<char>((delta << 4) | type));
        } else {
            out_.push_back(static_cast<char>(type));
            varint(zigzag(id));
        }
        last_id_ = id;
    }

    void i32_field(int16_t id, int64_t v) {
        field(id, CT_I32);
        varint(zigzag(v));
    }
    void i64_field(int16_t id, int64_t v) {
        field(id, CT_I64);
        varint(zigzag(v));
    }
    void string_field(int16_t id, const std::string& s) {
        field(id, CT_BINARY);
        varint(s.size());
        out_.append(s);
    }
    void list_field(int16_t id, CType elem, size_t size) {
        field(id, CT_LIST);
        list_header(elem, size);
    }
    void list_header(CType elem, size_t size) {
        if (size < 15) {
            out_.push_back(static_cast<char>((size << 4) | elem));
        } else {
            out_.push_back(static_cast<char>(0xF0 | elem));
            varint(size);
        }
    }
    void i32_elem(int64_t v) { varint(zigzag(v)); }
    void string_elem(const std::string& s) {
        varint(s.size());
        out_.append(s);
    }

    void varint(uint64_t v) {
        while (v >= 0x80) {
            out_.push_back(static_cast<char>((v & 0x7F) | 0x80));
            v >>= 7;
        }
        out_.push_back(static_cast<char>(v));
    }

private:
    std::string& out_;
    int16_t last_id_ = 0;
    std::vector<int16_t> last_ids_;
};

class ThriftReader {
public:
    ThriftReader(const uint8_t* data, size_t size) : data_(data), size_(size) {}

    size_t pos() const { return pos_; }
    void seek(size_t p) { pos_ = p; }

    uint64_t varint() {
        uint64_t v = 0;
        int shift = 0;
        while (true) {
            uint8_t b = byte();
            v |= static_cast<uint64_t>(b & 0x7F) << shift;
            if (!(b & 0x80)) break;
            shift += 7;
            if (shift > 63) throw std::runtime_error("parquet: varint overflow");
        }
        return v;
    }
    int64_t zz() { return unzigzag(varint()); }

    struct FieldHeader {
        int16_t id = 0;
        CType type = CT_STOP;
        bool bool_value = false;
    };

    void struct_begin() { last_ids_.push_back(last_id_), last_id_ = 0; }
    void struct_end() {
        last_id_ = last_ids_.back();
        last_ids_.pop_back();
    }

    FieldHeader field() {
        FieldHeader h;
        uint8_t b = byte();
        if ((b & 0x0F) == CT_STOP) {
            h.type = CT_STOP;
            return h;
        }
        const uint8_t type = b & 0x0F;
        const uint8_t delta = b >> 4;
        if (delta != 0) {
            h.id = static_cast<int16_t>(last_id_ + delta);
        } else {
            h.id = static_cast<int16_t>(unzigzag(varint()));
        }
        last_id_ = h.id;
        if (type == CT_TRUE || type == CT_FALSE) {
            h.type = CT_TRUE;
            h.bool_value = type == CT_TRUE;
        } else {
            h.type = static_cast<CType>(type);
        }
        return h;
    }

    std::string binary() {
        const size_t n = varint();
        need(n);
        std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
        pos_ += n;
        return s;
    }

    struct ListHeader {
        CType elem;
        size_t size;
    };
    ListHeader list_header() {
        uint8_t b = byte();
        ListHeader h;
        h.elem = static_cast<CType>(b & 0x0F);
        h.size = b >> 4;
        if (h.size == 15) h.size = varint();
        return h;
    }

    void skip(CType type) {
        switch (type) {
            case CT_TRUE:
            case CT_FALSE: return;
            case CT_BYTE: byte(); return;
            case CT_I16:
            case CT_I32:
            case CT_I64: varint(); return;
            case CT_DOUBLE: need(8), pos_ += 8; return;
            case CT_BINARY: {
                size_t n = varint();
                need(n);
                pos_ += n;
                return;
            }
            case CT_LIST:
            case CT_SET: {
                ListHeader h = list_header();
                for (size_t i = 0; i < h.size; ++i) skip(h.elem);
                return;
            }
            case CT_MAP: {
                uint8_t sz_b = byte();
                size_t n = sz_b >> 4; // compact maps put size first when < 15? size is varint
                // compact protocol: map header is varint size then key/value types byte
                // (we never write maps; re-read correctly)
                pos_ -= 1;
                n = varint();
                if (n > 0) {
                    uint8_t kv = byte();
                    CType kt = static_cast<CType>(kv >> 4);
                    CType vt = static_cast<CType>(kv & 0x0F);
                    for (size_t i = 0; i < n; ++i) skip(kt), skip(vt);
                }
                return;
            }
            case CT_STRUCT: {
                struct_begin();
                while (true) {
                    FieldHeader h = field();
                    if (h.type == CT_STOP) break;
                    skip(h.type);
                }
                struct_end();
                return;
            }
            default: throw std::runtime_error("parquet: cannot skip thrift type");
        }
    }

    uint8_t byte() {
        need(1);
        return data_[pos_++];
    }
    void need(size_t n) const {
        if (pos_ + n > size_) throw std::runtime_error("parquet: truncated metadata");
    }

private:
    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    int16_t last_id_ = 0;
    std::vector<int16_t> last_ids_;
};

PhysicalType physical_type(ColType t) {
    switch (t) {
        case ColType::text: return PT_BYTE_ARRAY;
        case ColType::int64: return PT_INT64;
        case ColType::int32: return PT_INT32;
        case ColType::boolean: return PT_BOOLEAN;
        case ColType::real: return PT_DOUBLE;
    }
    throw std::logic_error("unknown column type");
}

void append_u32_le(std::string& out, uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                 static_cast<char>(v >> 24)};
    out.append(b, 4);
}

void append_u64_le(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

/// Definition levels, bit width 1, hybrid encoding using bit-packed groups.
std::string encode_def_levels(const std::vector<uint8_t>& levels) {
    const size_t groups = (levels.size() + 7) / 8;
    std::string runs;
    {
        // varint header (groups << 1) | 1
        uint64_t h = (static_cast<uint64_t>(groups) << 1) | 1;
        while (h >= 0x80) {
            runs.push_back(static_cast<char>((h & 0x7F) | 0x80));
            h >>= 7;
        }
        runs.push_back(static_cast<char>(h));
    }
    for (size_t g = 0; g < groups; ++g) {
        uint8_t packed = 0;
        for (size_t i = 0; i < 8; ++i) {
            const size_t idx = g * 8 + i;
            if (idx < levels.size() && levels[idx]) packed |= static_cast<uint8_t>(1u << i);
        }
        runs.push_back(static_cast<char>(packed));
    }
    std::string out;
    append_u32_le(out, static_cast<uint32_t>(runs.size()));
    out += runs;
    return out;
}

std::vector<uint8_t> decode_def_levels(const uint8_t* data, size_t size, size_t count,
                                       size_t& consumed) {
    if (size < 4) throw std::runtime_error("parquet: truncated def levels");
    const uint32_t block_len = static_cast<uint32_t>(data[0]) | (static_cast<uint32_t>(data[1]) << 8) |
        (static_cast<uint32_t>(data[2]) << 16) | (static_cast<uint32_t>(data[3]) << 24);
    if (4 + static_cast<size_t>(block_len) > size)
        throw std::runtime_error("parquet: truncated def levels block");
    consumed = 4 + block_len;
    std::vector<uint8_t> levels;
    levels.reserve(count);
    size_t p = 4;
    const size_t end = 4 + block_len;
    while (levels.size() < count) {
        if (p >= end) throw std::runtime_error("parquet: def level underrun");
        uint64_t header = 0;
        int shift = 0;
        while (true) {
            if (p >= end) throw std::runtime_error("parquet: def level underrun");
            uint8_t b = data[p++];
            header |= static_cast<uint64_t>(b & 0x7F) << shift;
            if (!(b & 0x80)) break;
            shift += 7;
        }
        if (header & 1) {
            const size_t groups = header >> 1;
            for (size_t g = 0; g < groups; ++g) {
                if (p >= end) throw std::runtime_error("parquet: def level underrun");
                uint8_t packed = data[p++];
                for (size_t i = 0; i < 8 && levels.size() < count; ++i)
                    levels.push_back((packed >> i) & 1);
            }
        } else {
            const size_t run = header >> 1;
            if (p >= end) throw std::runtime_error("parquet: def level underrun");
            uint8_t value = data[p++] & 1;
            for (size_t i = 0; i < run && levels.size() < count; ++i) levels.push_back(value);
        }
    }
    return levels;
}

std::string encode_plain_values(const Table& table, size_t col, const std::vector<uint8_t>& levels) {
    std::string out;
    const ColType type = table.columns[col].type;
    if (type == ColType::boolean) {
        uint8_t packed = 0;
        int bit = 0;
        for (size_t r = 0; r < table.rows.size(); ++r) {
            if (!levels[r]) continue;
            if (std::get<bool>(table.rows[r][col])) packed |= static_cast<uint8_t>(1u << bit);
            if (++bit == 8) {
                out.push_back(static_cast<char>(packed));
                packed = 0;
                bit = 0;
            }
        }
        if (bit > 0) out.push_back(static_cast<char>(packed));
        return out;
    }
    for (size_t r = 0; r < table.rows.size(); ++r) {
        if (!levels[r]) continue;
        const Value& v = table.rows[r][col];
        switch (type) {
            case ColType::text: {
                const std::string& s = std::get<std::string>(v);
                append_u32_le(out, static_cast<uint32_t>(s.size()));
                out += s;
                break;
            }
            case ColType::int64:
                append_u64_le(out, static_cast<uint64_t>(std::get<int64_t>(v)));
                break;
            case ColType::int32:
                append_u32_le(out, static_cast<uint32_t>(std::get<int32_t>(v)));
                break;
            case ColType::real: {
                double d = std::get<double>(v);
                uint64_t bits;
                std::memcpy(&bits, &d, 8);
                append_u64_le(out, bits);
                break;
            }
            default: throw std::logic_error("unhandled type");
        }
    }
    return out;
}

struct ChunkInfo {
    int64_t data_page_offset = 0;
    int64_t total_size = 0;
    int64_t num_values = 0;
};

struct SchemaLeaf {
    std::string name;
    int32_t physical = -1;
    int32_t converted = -1;
};

struct ColumnChunkMeta {
    int64_t data_page_offset = 0;
    int64_t num_values = 0;
    int32_t codec = 0;
    std::string path;
};

struct FileMeta {
    int64_t num_rows = 0;
    std::vector<SchemaLeaf> leaves;
    std::vector<std::vector<ColumnChunkMeta>> row_groups;
};

FileMeta parse_footer(const uint8_t* data, size_t size) {
    ThriftReader tr(data, size);
    FileMeta meta;
    tr.struct_begin();
    while (true) {
        auto h = tr.field();
        if (h.type == CT_STOP) break;
        if (h.id == 2 && h.type == CT_LIST) { // schema
            auto lh = tr.list_header();
            for (size_t i = 0; i < lh.size; ++i) {
                SchemaLeaf leaf;
                int32_t num_children = 0;
                tr.struct_begin();
                while (true) {
                    auto f = tr.field();
                    if (f.type == CT_STOP) break;
                    switch (f.id) {
                        case 1: leaf.physical = static_cast<int32_t>(tr.zz()); break;
                        case 4: leaf.name = tr.binary(); break;
                        case 5: num_children = static_cast<int32_t>(tr.zz()); break;
                        case 6: leaf.converted = static_cast<int32_t>(tr.zz()); break;
                        default: tr.skip(f.type); break;
                    }
                }
                tr.struct_end();
                if (num_children == 0 && i > 0) meta.leaves.push_back(leaf);
            }
        } else if (h.id == 3 && (h.type == CT_I64 || h.type == CT_I32)) {
            meta.num_rows = tr.zz();
        } else if (h.id == 4 && h.type == CT_LIST) { // row groups
            auto lh = tr.list_header();
            for (size_t g = 0; g < lh.size; ++g) {
                std::vector<ColumnChunkMeta> chunks;
                tr.struct_begin();
                while (true) {
                    auto f = tr.field();
                    if (f.type == CT_STOP) break;
                    if (f.id == 1 && f.type == CT_LIST) { // columns
                        auto ch = tr.list_header();
                        for (size_t c = 0; c < ch.size; ++c) {
                            ColumnChunkMeta ccm;
                            tr.struct_begin();
                            while (true) {
                                auto cf = tr.field();
                                if (cf.type == CT_STOP) break;
                                if (cf.id == 3 && cf.type == CT_STRUCT) { // meta_data
                                    tr.struct_begin();
                                    while (true) {
                                        auto mf = tr.field();
                                        if (mf.type == CT_STOP) break;
                                        switch (mf.id) {
                                            case 3: { // path_in_schema
                                                auto ph = tr.list_header();
                                                for (size_t p = 0; p < ph.size; ++p) {
                                                    std::string part = tr.binary();
                                                    if (!ccm.path.empty()) ccm.path += '.';
                                                    ccm.path += part;
                                                }
                                                break;
                                            }
                                            case 4: ccm.codec = static_cast<int32_t>(tr.zz()); break;
                                            case 5: ccm.num_values = tr.zz(); break;
                                            case 9: ccm.data_page_offset = tr.zz(); break;
                                            default: tr.skip(mf.type); break;
                                        }
                                    }
                                    tr.struct_end();
                                } else {
                                    tr.skip(cf.type);
                                }
                            }
                            tr.struct_end();
                            chunks.push_back(std::move(ccm));
                        }
                    } else {
                        tr.skip(f.type);
                    }
                }
                tr.struct_end();
                meta.row_groups.push_back(std::move(chunks));
            }
        } else {
            tr.skip(h.type);
        }
    }
    return meta;
}

struct PageInfo {
    int32_t uncompressed_size = 0;
    int32_t num_values = 0;
    size_t data_start = 0;
};

PageInfo parse_page_header(const uint8_t* data, size_t size, size_t offset) {
    ThriftReader tr(data, size);
    tr.seek(offset);
    PageInfo info;
    tr.struct_begin();
    while (true) {
        auto h = tr.field();
        if (h.type == CT_STOP) break;
        switch (h.id) {
            case 1: tr.zz(); break; // page type
            case 2: info.uncompressed_size = static_cast<int32_t>(tr.zz()); break;
            case 3: tr.zz(); break; // compressed size (== uncompressed)
            case 5: {               // data page header
                tr.struct_begin();
                while (true) {
                    auto f = tr.field();
                    if (f.type == CT_STOP) break;
                    if (f.id == 1)
                        info.num_values = static_cast<int32_t>(tr.zz());
                    else
                        tr.skip(f.type);
                }
                tr.struct_end();
                break;
            }
            default: tr.skip(h.type); break;
        }
    }
    info.data_start = tr.pos();
    return info;
}

} // namespace

void write_parquet(const std::string& path, const Table& table) {
    const size_t ncols = table.columns.size();
    for (const Row& row : table.rows) {
        if (row.size() != ncols) throw std::invalid_argument("parquet: row arity mismatch");
    }

    std::string file = "PAR1";
    std::vector<ChunkInfo> chunks(ncols);

    for (size_t c = 0; c < ncols; ++c) {
        std::vector<uint8_t> levels(table.rows.size());
        for (size_t r = 0; r < table.rows.size(); ++r)
            levels[r] = value_is_null(table.rows[r][c]) ? 0 : 1;

        const std::string defs = encode_def_levels(levels);
        const std::string values = encode_plain_values(table, c, levels);
        const std::string page = defs + values;

        std::string header;
        {
            ThriftWriter tw(header);
            tw.struct_begin();
            tw.i32_field(1, kPageTypeData);
            tw.i32_field(2, static_cast<int32_t>(page.size()));
            tw.i32_field(3, static_cast<int32_t>(page.size()));
            tw.field(5, CT_STRUCT);
            tw.struct_begin();
            tw.i32_field(1, static_cast<int32_t>(table.rows.size()));
            tw.i32_field(2, kEncodingPlain);
            tw.i32_field(3, kEncodingRle);
            tw.i32_field(4, kEncodingRle);
            tw.struct_end();
            tw.struct_end();
        }

        chunks[c].data_page_offset = static_cast<int64_t>(file.size());
        chunks[c].total_size = static_cast<int64_t>(header.size() + page.size());
        chunks[c].num_values = static_cast<int64_t>(table.rows.size());
        file += header;
        file += page;
    }

    std::string footer;
    {
        ThriftWriter tw(footer);
        tw.struct_begin();
        tw.i32_field(1, 1); // version
        tw.list_field(2, CT_STRUCT, ncols + 1);
        {
            tw.struct_begin(); // root
            tw.string_field(4, "schema");
            tw.i32_field(5, static_cast<int32_t>(ncols));
            tw.struct_end();
            for (size_t c = 0; c < ncols; ++c) {
                tw.struct_begin();
                tw.i32_field(1, physical_type(table.columns[c].type));
                tw.i32_field(3, kRepetitionOptional);
                tw.string_field(4, table.columns[c].name);
                if (table.columns[c].type == ColType::text) tw.i32_field(6, kConvertedUtf8);
                tw.struct_end();
            }
        }
        tw.i64_field(3, static_cast<int64_t>(table.rows.size()));
        tw.list_field(4, CT_STRUCT, 1); // single row group
        {
            tw.struct_begin();
            tw.list_field(1, CT_STRUCT, ncols);
            int64_t total_bytes = 0;
            for (size_t c = 0; c < ncols; ++c) {
                total_bytes += chunks[c].total_size;
                tw.struct_begin();
                tw.i64_field(2, chunks[c].data_page_offset); // file_offset
                tw.field(3, CT_STRUCT);
                {
                    tw.struct_begin();
                    tw.i32_field(1, physical_type(table.columns[c].type));
                    tw.list_field(2, CT_I32, 2);
                    tw.i32_elem(kEncodingPlain);
                    tw.i32_elem(kEncodingRle);
                    tw.list_field(3, CT_BINARY, 1);
                    tw.string_elem(table.columns[c].name);
                    tw.i32_field(4, kCodecUncompressed);
                    tw.i64_field(5, chunks[c].num_values);
                    tw.i64_field(6, chunks[c].total_size);
                    tw.i64_field(7, chunks[c].total_size);
                    tw.i64_field(9, chunks[c].data_page_offset);
                    tw.struct_end();
                }
                tw.struct_end();
            }
            tw.i64_field(2, total_bytes);
            tw.i64_field(3, static_cast<int64_t>(table.rows.size()));
            tw.struct_end();
        }
        tw.string_field(6, "observatory-cpp version 1.0.0");
        tw.struct_end();
    }

    file += footer;
    append_u32_le(file, static_cast<uint32_t>(footer.size()));
    file += "PAR1";

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("parquet: cannot open for write: " + path);
    out.write(file.data(), static_cast<std::streamsize>(file.size()));
    if (!out) throw std::runtime_error("parquet: write failed: " + path);
}

Table read_parquet(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("parquet: cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* data = reinterpret_cast<const uint8_t*>(buf.data());
    const size_t size = buf.size();
    if (size < 12 || buf.substr(0, 4) != "PAR1" || buf.substr(size - 4) != "PAR1")
        throw std::runtime_error("parquet: bad magic: " + path);

    const uint32_t footer_len = static_cast<uint32_t>(data[size - 8]) |
        (static_cast<uint32_t>(data[size - 7]) << 8) | (static_cast<uint32_t>(data[size - 6]) << 16) |
        (static_cast<uint32_t>(data[size - 5]) << 24);
    if (footer_len + 12 > size) throw std::runtime_error("parquet: bad footer length");
    const size_t footer_start = size - 8 - footer_len;

    FileMeta meta = parse_footer(data + footer_start, footer_len);

    Table table;
    for (const SchemaLeaf& leaf : meta.leaves) {
        ColumnDef def;
        def.name = leaf.name;
        def.nullable = true;
        switch (leaf.physical) {
            case PT_BOOLEAN: def.type = ColType::boolean; break;
            case PT_INT32: def.type = ColType::int32; break;
            case PT_INT64: def.type = ColType::int64; break;
            case PT_DOUBLE: def.type = ColType::real; break;
            case PT_BYTE_ARRAY: def.type = ColType::text; break;
            default: throw std::runtime_error("parquet: unsupported physical type");
        }
        table.columns.push_back(std::move(def));
    }
    table.rows.assign(static_cast<size_t>(meta.num_rows), Row(table.columns.size()));

    size_t col_index = 0;
    for (const auto& group : meta.row_groups) {
        if (group.size() != table.columns.size())
            throw std::runtime_error("parquet: column count mismatch");
        for (size_t c = 0; c < group.size(); ++c, ++col_index) {
            const ColumnChunkMeta& ccm = group[c];
            if (ccm.codec != kCodecUncompressed)
                throw std::runtime_error("parquet: compressed files are not supported");
            size_t offset = static_cast<size_t>(ccm.data_page_offset);
            int64_t remaining = ccm.num_values;
            size_t row = 0;
            const ColType type = table.columns[c].type;
            while (remaining > 0) {
                PageInfo page = parse_page_header(data, size, offset);
                size_t p = page.data_start;
                size_t consumed = 0;
                const auto levels =
                    decode_def_levels(data + p, size - p, static_cast<size_t>(page.num_values), consumed);
                p += consumed;

                size_t non_null = 0;
                for (uint8_t l : levels) non_null += l;

                if (type == ColType::boolean) {
                    size_t bit = 0;
                    for (uint8_t l : levels) {
                        if (l) {
                            const uint8_t byte = data[p + bit / 8];
                            table.rows[row][c] = static_cast<bool>((byte >> (bit % 8)) & 1);
                            ++bit;
                        }
                        ++row;
                    }
                    p += (non_null + 7) / 8;
                } else {
                    for (uint8_t l : levels) {
                        if (l) {
                            switch (type) {
                                case ColType::text: {
                                    uint32_t len = static_cast<uint32_t>(data[p]) |
                                        (static_cast<uint32_t>(data[p + 1]) << 8) |
                                        (static_cast<uint32_t>(data[p + 2]) << 16) |
                                        (static_cast<uint32_t>(data[p + 3]) << 24);
                                    p += 4;
                                    table.rows[row][c] =
                                        std::string(reinterpret_cast<const char*>(data + p), len);
                                    p += len;
                                    break;
                                }
                                case ColType::int32: {
                                    uint32_t v = 0;
                                    std::memcpy(&v, data + p, 4);
                                    table.rows[row][c] = static_cast<int32_t>(v);
                                    p += 4;
                                    break;
                                }
                                case ColType::int64: {
                                    uint64_t v = 0;
                                    std::memcpy(&v, data + p, 8);
                                    table.rows[row][c] = static_cast<int64_t>(v);
                                    p += 8;
                                    break;
                                }
                                case ColType::real: {
                                    double d = 0;
                                    std::memcpy(&d, data + p, 8);
                                    table.rows[row][c] = d;
                                    p += 8;
                                    break;
                                }
                                default: throw std::logic_error("unhandled type");
                            }
                        }
                        ++row;
                    }
                }
                remaining -= page.num_values;
                offset = p;
            }
        }
        break; // single row group per file in this writer
    }
    return table;
}

} // namespace observatory::pq
