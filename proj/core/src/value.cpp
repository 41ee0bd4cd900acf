#include "cascade/value.hpp"

#include <charconv>
#include <cstdio>

namespace cascade {

const char* to_string(TriState v) {
    switch (v) {
        case TriState::True: return "True";
        case TriState::False: return "False";
        default: return "Unknown";
    }
}

const char* kind_name(Value::Kind k) {
    switch (k) {
        case Value::Kind::Missing: return "missing";
        case Value::Kind::Boolean: return "boolean";
        case Value::Kind::Integer: return "integer";
        case Value::Kind::Real: return "real";
        default: return "text";
    }
}

namespace {

int kind_rank(Value::Kind k) {
    switch (k) {
        case Value::Kind::Missing: return 0;
        case Value::Kind::Boolean: return 1;
        case Value::Kind::Integer: return 2;
        case Value::Kind::Real: return 3;
        default: return 4;
    }
}

std::string real_to_string(double d) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), d);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace

bool Value::canonical_less(const Value& a, const Value& b) {
    int ra = kind_rank(a.kind());
    int rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb;
    switch (a.kind()) {
        case Kind::Missing: return false;
        case Kind::Boolean: return a.as_boolean() < b.as_boolean();
        case Kind::Integer: return a.as_integer() < b.as_integer();
        case Kind::Real: return a.as_real() < b.as_real();
        default: return a.as_text() < b.as_text();
    }
}

std::string to_display(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Missing: return "<missing>";
        case Value::Kind::Boolean: return v.as_boolean() ? "True" : "False";
        case Value::Kind::Integer: return std::to_string(v.as_integer());
        case Value::Kind::Real: return real_to_string(v.as_real());
        default: return "\"" + v.as_text() + "\"";
    }
}

}  // namespace cascade
