#include "cascade/record.hpp"

#include <cmath>
#include <istream>
#include <limits>

#include "cascade/errors.hpp"
#include "json_util.hpp"

namespace cascade {

namespace {
const Value kMissing = Value::missing();
}

const Value& Record::get(std::string_view annotation) const {
    auto it = entries.find(std::string(annotation));
    return it == entries.end() ? kMissing : it->second;
}

Record parse_record_line(std::string_view line, long line_number) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw MalformedRecord(line_number, e.what());
    }
    if (!doc.is_object()) throw MalformedRecord(line_number, "top-level value must be an object");

    Record rec;
    rec.id = "line:" + std::to_string(line_number);
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& key = it.key();
        const auto& val = it.value();
        if (key == "_id") {
            if (!val.is_string()) throw MalformedRecord(line_number, "_id must be a string");
            if (val.get_ref<const std::string&>().empty())
                throw MalformedRecord(line_number, "_id must be non-empty");
            rec.id = val.get<std::string>();
            continue;
        }
        switch (val.type()) {
            case nlohmann::json::value_t::null:
                break;  // explicit null reads as Missing: drop the key
            case nlohmann::json::value_t::boolean:
                rec.entries.emplace(key, Value::boolean(val.get<bool>()));
                break;
            case nlohmann::json::value_t::number_integer:
                rec.entries.emplace(key, Value::integer(val.get<std::int64_t>()));
                break;
            case nlohmann::json::value_t::number_unsigned: {
                auto u = val.get<std::uint64_t>();
                if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
                    throw MalformedRecord(line_number, "integer value of " + key + " out of range");
                rec.entries.emplace(key, Value::integer(static_cast<std::int64_t>(u)));
                break;
            }
            case nlohmann::json::value_t::number_float: {
                double d = val.get<double>();
                if (!std::isfinite(d))
                    throw MalformedRecord(line_number, "non-finite real value of " + key);
                rec.entries.emplace(key, Value::real(d));
                break;
            }
            case nlohmann::json::value_t::string:
                rec.entries.emplace(key, Value::text(val.get<std::string>()));
                break;
            default:
                throw MalformedRecord(line_number,
                                      "value of " + key + " must be a scalar (records are flat)");
        }
    }
    return rec;
}

std::string serialize_record(const Record& record) {
    nlohmann::ordered_json doc;
    doc["_id"] = record.id;
    for (const auto& [key, value] : record.entries) {
        if (value.is_missing()) continue;
        doc[key] = detail::value_to_json(value);
    }
    return doc.dump();
}

RecordReader::RecordReader(std::istream& in, IngestMode mode) : in_(in), mode_(mode) {}

std::optional<Record> RecordReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++line_;
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
            return parse_record_line(line, line_);
        } catch (const MalformedRecord&) {
            if (mode_ == IngestMode::Strict) throw;
            ++skipped_;
        }
    }
    if (in_.bad()) throw Error("I/O failure while reading records near line " +
                               std::to_string(line_));
    return std::nullopt;
}

std::vector<Record> load_records(std::istream& in, IngestMode mode, long* skipped) {
    RecordReader reader(in, mode);
    std::vector<Record> records;
    while (auto rec = reader.next()) records.push_back(std::move(*rec));
    if (skipped) *skipped = reader.skipped();
    return records;
}

}  // namespace cascade
