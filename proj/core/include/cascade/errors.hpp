#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

// Base class for every error raised by the toolchain.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

// A record line that cannot be ingested (bad JSON, nested value, non-finite
// real, bad `_id`, ...). Carries the 1-based line number of the offending line.
class MalformedRecord : public Error {
public:
    MalformedRecord(long line_number, const std::string& cause)
        : Error("record line " + std::to_string(line_number) + ": " + cause),
          line_number_(line_number),
          cause_(cause) {}

    long line_number() const { return line_number_; }
    const std::string& cause() const { return cause_; }

private:
    long line_number_;
    std::string cause_;
};

// Structurally invalid configuration input: unparseable YAML/JSON, unknown or
// missing fields, wrong node shapes.
class SchemaError : public Error {
public:
    using Error::Error;
};

enum class SyntaxErrorKind {
    Generic,
    MissingFinalAction,
    UnknownDirective,
    UndefinedSetRef,
    NestedConditional,
};

// Script text that does not conform to the cascade grammar.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& message,
                SyntaxErrorKind kind = SyntaxErrorKind::Generic)
        : Error("syntax error at line " + std::to_string(line) + ", column " +
                std::to_string(column) + ": " + message),
          line_(line),
          column_(column),
          kind_(kind) {}

    int line() const { return line_; }
    int column() const { return column_; }
    SyntaxErrorKind kind() const { return kind_; }

private:
    int line_;
    int column_;
    SyntaxErrorKind kind_;
};

// Comparison between values of incomparable kinds under strict evaluation.
class TypeMismatchError : public Error {
public:
    TypeMismatchError(std::string annotation, std::string expected, std::string found,
                      int statement_index)
        : Error(prefix(statement_index) + ": annotation " + annotation + " holds a " + found +
                " value but is compared against a " + expected + " operand"),
          annotation_(std::move(annotation)),
          expected_(std::move(expected)),
          found_(std::move(found)),
          statement_index_(statement_index) {}

    // Ordering applied to booleans, which only admit == and !=.
    static TypeMismatchError ordering(std::string annotation, int statement_index) {
        TypeMismatchError e(std::move(annotation), "ordered", "boolean", statement_index);
        e.message_override_ = prefix(statement_index) + ": annotation " + e.annotation_ +
                              " holds a boolean value, which admits only == and != comparisons";
        return e;
    }

    const char* what() const noexcept override {
        return message_override_.empty() ? Error::what() : message_override_.c_str();
    }

    const std::string& annotation() const { return annotation_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }
    int statement_index() const { return statement_index_; }

private:
    static std::string prefix(int statement_index) {
        return statement_index < 0
                   ? std::string("type mismatch")
                   : "type mismatch in statement " + std::to_string(statement_index);
    }

    std::string annotation_;
    std::string expected_;
    std::string found_;
    int statement_index_;
    std::string message_override_;
};

class RecordNotFound : public Error {
public:
    explicit RecordNotFound(const std::string& record_id)
        : Error("record not found: " + record_id), record_id_(record_id) {}

    const std::string& record_id() const { return record_id_; }

private:
    std::string record_id_;
};

// The Cartesian product of an input domain exceeds the enumeration cap.
class DomainTooLarge : public Error {
public:
    DomainTooLarge(unsigned long long size, unsigned long long cap)
        : Error("input domain holds " + std::to_string(size) +
                " points, exceeding the enumeration cap of " + std::to_string(cap)),
          size_(size),
          cap_(cap) {}

    unsigned long long size() const { return size_; }
    unsigned long long cap() const { return cap_; }

private:
    unsigned long long size_;
    unsigned long long cap_;
};

// An annotation used by an artifact has no entry in the supplied domain.
class IncompleteDomain : public Error {
public:
    explicit IncompleteDomain(const std::string& detail)
        : Error("incomplete input domain: " + detail) {}
};

// Internal guard: a simplification step produced a cascade that diverges from
// its input. Reaching this indicates a bug in the simplifier, never user error.
class SimplificationUnsound : public Error {
public:
    explicit SimplificationUnsound(const std::string& detail)
        : Error("simplification produced a non-equivalent cascade: " + detail) {}
};

}  // namespace cascade
