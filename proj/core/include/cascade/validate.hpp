#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cascade/ast.hpp"
#include "cascade/dictionary.hpp"

namespace cascade {

enum class Severity { Error, Warning };

enum class DiagnosticKind {
    UnsatisfiedMetaPredicate,
    UnclassifiedAnnotation,
    EmptyValidationBlock,
};

// Display-form classification of one variable, as listed under
// "Variables found:" in reports.
struct VariableInfo {
    std::string name;
    std::string purpose;
    std::string knowledge_domain;
    std::string scale;
    std::optional<std::string> method;
};

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagnosticKind kind = DiagnosticKind::UnsatisfiedMetaPredicate;
    int statement_index = 0;
    int line = 0;
    std::string message;
    std::optional<Dimension> dimension;  // UnsatisfiedMetaPredicate only
    std::optional<std::string> value;    // normalized meta value / annotation name
    std::vector<VariableInfo> variables_found;
};

struct ValidationOptions {
    // Downgrades UnclassifiedAnnotation to Warning for exploratory use.
    bool unclassified_is_warning = false;
};

struct ValidationReport {
    std::string script_hash;
    std::vector<Diagnostic> diagnostics;
    bool valid = true;
    int errors = 0;
    int warnings = 0;
};

// Checks one statement: a meta-predicate is satisfied when at least one
// variable of the predicate classifies to its value on its dimension.
// Unsatisfied meta-predicates report in source order, then unclassified
// annotations alphabetically; a statement without a validation block earns an
// EmptyValidationBlock warning.
std::vector<Diagnostic> validate_statement(const Statement& statement,
                                           const ClassificationDictionary& dict,
                                           const ValidationOptions& options = {});

// Statement checks concatenated in statement order. valid == no Error.
ValidationReport validate_script(const Script& script, const ClassificationDictionary& dict,
                                 const ValidationOptions& options = {});

enum class ReportFormat { Human, Structured };

std::string render_report(const ValidationReport& report, ReportFormat format);

}  // namespace cascade
