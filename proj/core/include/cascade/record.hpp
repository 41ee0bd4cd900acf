#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/value.hpp"

namespace cascade {

// One entity to be classified: a stable identifier plus a flat map from
// annotation name to value. Nested structures are rejected at ingest.
struct Record {
    std::string id;
    std::map<std::string, Value> entries;

    // Total lookup: absent annotations read as Missing.
    const Value& get(std::string_view annotation) const;

    friend bool operator==(const Record&, const Record&) = default;
};

// Parses one newline-delimited JSON object. The reserved key `_id` (string,
// non-empty) names the record and is not stored as an entry; without it the
// record is named "line:<line_number>". Explicit null values are treated as
// Missing, i.e. the key is dropped. Throws MalformedRecord.
Record parse_record_line(std::string_view line, long line_number);

// One-line JSON rendering: `_id` first, then entries in sorted key order.
// parse_record_line(serialize_record(r)) == r for any valid record.
std::string serialize_record(const Record& record);

enum class IngestMode { Strict, Lenient };

// Streaming reader over newline-delimited records. Strict mode throws
// MalformedRecord on the first bad line; lenient mode skips bad lines and
// counts them. Blank lines are ignored in both modes.
class RecordReader {
public:
    explicit RecordReader(std::istream& in, IngestMode mode = IngestMode::Strict);

    // Next record, or nullopt at end of stream.
    std::optional<Record> next();

    long line_number() const { return line_; }
    long skipped() const { return skipped_; }

private:
    std::istream& in_;
    IngestMode mode_;
    long line_ = 0;
    long skipped_ = 0;
};

// Eager convenience wrapper around RecordReader, preserving input order.
std::vector<Record> load_records(std::istream& in, IngestMode mode = IngestMode::Strict,
                                 long* skipped = nullptr);

}  // namespace cascade
