#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace cascade {

// Three-valued logic used throughout predicate evaluation. Unknown marks the
// result of any atom that touched a Missing value (Kleene semantics).
enum class TriState { False, True, Unknown };

constexpr TriState tri_of(bool b) { return b ? TriState::True : TriState::False; }

constexpr TriState tri_not(TriState v) {
    switch (v) {
        case TriState::True: return TriState::False;
        case TriState::False: return TriState::True;
        default: return TriState::Unknown;
    }
}

constexpr TriState tri_and(TriState a, TriState b) {
    if (a == TriState::False || b == TriState::False) return TriState::False;
    if (a == TriState::Unknown || b == TriState::Unknown) return TriState::Unknown;
    return TriState::True;
}

constexpr TriState tri_or(TriState a, TriState b) {
    if (a == TriState::True || b == TriState::True) return TriState::True;
    if (a == TriState::Unknown || b == TriState::Unknown) return TriState::Unknown;
    return TriState::False;
}

const char* to_string(TriState v);

// A single annotation value. Missing is a first-class state: it marks an
// annotation that is absent from a record (or explicitly null on input).
class Value {
public:
    enum class Kind { Missing, Boolean, Integer, Real, Text };

    Value() = default;  // Missing

    static Value missing() { return Value(); }
    static Value boolean(bool b) { return Value(Storage(std::in_place_index<1>, b)); }
    static Value integer(std::int64_t i) { return Value(Storage(std::in_place_index<2>, i)); }
    static Value real(double d) { return Value(Storage(std::in_place_index<3>, d)); }
    static Value text(std::string s) { return Value(Storage(std::in_place_index<4>, std::move(s))); }

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    bool is_missing() const { return kind() == Kind::Missing; }
    bool is_boolean() const { return kind() == Kind::Boolean; }
    bool is_integer() const { return kind() == Kind::Integer; }
    bool is_real() const { return kind() == Kind::Real; }
    bool is_text() const { return kind() == Kind::Text; }
    bool is_numeric() const { return is_integer() || is_real(); }

    bool as_boolean() const { return std::get<1>(v_); }
    std::int64_t as_integer() const { return std::get<2>(v_); }
    double as_real() const { return std::get<3>(v_); }
    const std::string& as_text() const { return std::get<4>(v_); }

    // Exact numeric view. x86-64 long double carries a 64-bit mantissa, so
    // every int64 and every double convert without rounding; comparing the
    // promoted values is an exact rational comparison.
    long double as_long_double() const {
        return is_integer() ? static_cast<long double>(as_integer())
                            : static_cast<long double>(as_real());
    }

    // Structural equality: kind and payload (integer 1 != real 1.0 here;
    // numeric unification is evaluation semantics, not identity).
    friend bool operator==(const Value&, const Value&) = default;

    // Total order used for canonical set-literal rendering.
    static bool canonical_less(const Value& a, const Value& b);

private:
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string>;
    explicit Value(Storage v) : v_(std::move(v)) {}
    Storage v_;
};

const char* kind_name(Value::Kind k);

// Human-facing rendering used in messages and counterexample dumps.
std::string to_display(const Value& v);

}  // namespace cascade
