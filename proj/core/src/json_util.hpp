#pragma once

// Internal bridge between Value and nlohmann::json. Not installed.

#include <json.hpp>

#include "cascade/value.hpp"

namespace cascade::detail {

// JSON rendering of a Value; Missing maps to null.
inline nlohmann::ordered_json value_to_json(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Boolean: return v.as_boolean();
        case Value::Kind::Integer: return v.as_integer();
        case Value::Kind::Real: return v.as_real();
        case Value::Kind::Text: return v.as_text();
        default: return nullptr;
    }
}

}  // namespace cascade::detail
