#include "cascade/validate.hpp"

#include <algorithm>

#include "json.hpp"

namespace cascade {

namespace {

std::string_view kind_key(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::UnsatisfiedMetaPredicate: return "unsatisfied_meta_predicate";
        case DiagnosticKind::UnclassifiedAnnotation: return "unclassified_annotation";
        default: return "empty_validation_block";
    }
}

std::vector<VariableInfo> classified_variables(const std::set<std::string>& vars,
                                               const ClassificationDictionary& dict) {
    std::vector<VariableInfo> infos;
    for (const std::string& name : vars) {
        const ClassificationEntry* entry = dict.find(name);
        if (!entry) continue;
        infos.push_back({name, entry->purpose, entry->knowledge_domain, entry->scale,
                         entry->method});
    }
    return infos;
}

}  // namespace

std::vector<Diagnostic> validate_statement(const Statement& statement,
                                           const ClassificationDictionary& dict,
                                           const ValidationOptions& options) {
    std::vector<Diagnostic> out;
    const std::set<std::string> vars = extract_variables(statement.predicate);
    const std::vector<VariableInfo> infos = classified_variables(vars, dict);

    for (const MetaPredicate& meta : statement.meta_predicates) {
        bool satisfied = false;
        for (const std::string& var : vars) {
            if (dict.classify(var, meta.dimension) == meta.value) {
                satisfied = true;
                break;
            }
        }
        if (satisfied) continue;
        Diagnostic d;
        d.severity = Severity::Error;
        d.kind = DiagnosticKind::UnsatisfiedMetaPredicate;
        d.statement_index = statement.index;
        d.line = meta.line;
        d.message = "No variable satisfies " + meta.directive_text();
        d.dimension = meta.dimension;
        d.value = meta.value;
        d.variables_found = infos;
        out.push_back(std::move(d));
    }

    for (const std::string& var : vars) {
        if (dict.find(var)) continue;
        Diagnostic d;
        d.severity = options.unclassified_is_warning ? Severity::Warning : Severity::Error;
        d.kind = DiagnosticKind::UnclassifiedAnnotation;
        d.statement_index = statement.index;
        d.line = statement.line_if;
        d.message = "Annotation " + var + " has no classification";
        d.value = var;
        out.push_back(std::move(d));
    }

    if (statement.meta_predicates.empty()) {
        Diagnostic d;
        d.severity = Severity::Warning;
        d.kind = DiagnosticKind::EmptyValidationBlock;
        d.statement_index = statement.index;
        d.line = statement.line_if;
        d.message = "Statement has no validation block";
        out.push_back(std::move(d));
    }
    return out;
}

ValidationReport validate_script(const Script& script, const ClassificationDictionary& dict,
                                 const ValidationOptions& options) {
    ValidationReport report;
    report.script_hash = script.source_hash;
    for (const Statement& stmt : script.statements) {
        std::vector<Diagnostic> part = validate_statement(stmt, dict, options);
        for (Diagnostic& d : part) report.diagnostics.push_back(std::move(d));
    }
    for (const Diagnostic& d : report.diagnostics)
        (d.severity == Severity::Error ? report.errors : report.warnings) += 1;
    report.valid = report.errors == 0;
    return report;
}

namespace {

std::string plural(int n, const char* noun) {
    std::string out = std::to_string(n) + " " + noun;
    if (n != 1) out.push_back('s');
    return out;
}

std::string variables_line(const std::vector<VariableInfo>& infos) {
    if (infos.empty()) return "Variables found: (none)";
    std::string out = "Variables found: ";
    for (std::size_t i = 0; i < infos.size(); ++i) {
        if (i) out += ", ";
        out += infos[i].name + " (" + infos[i].knowledge_domain + ", " + infos[i].scale + ")";
    }
    return out;
}

std::string render_human(const ValidationReport& report) {
    std::string out = report.valid ? "OK: " : "FAILED: ";
    out += plural(report.errors, "error") + ", " + plural(report.warnings, "warning") + "\n";

    // One block per (statement, severity) run, errors before warnings.
    std::size_t i = 0;
    while (i < report.diagnostics.size()) {
        const Diagnostic& head = report.diagnostics[i];
        std::size_t j = i;
        while (j < report.diagnostics.size() &&
               report.diagnostics[j].statement_index == head.statement_index &&
               report.diagnostics[j].severity == head.severity)
            ++j;

        out += "\n";
        out += head.severity == Severity::Error ? "ValidationError" : "Warning";
        out += " in statement at line " + std::to_string(head.line) + ":\n";
        const std::vector<VariableInfo>* vars = nullptr;
        for (std::size_t k = i; k < j; ++k) {
            out += "- " + report.diagnostics[k].message + "\n";
            if (report.diagnostics[k].kind == DiagnosticKind::UnsatisfiedMetaPredicate)
                vars = &report.diagnostics[k].variables_found;
        }
        if (vars) out += variables_line(*vars) + "\n";
        i = j;
    }
    return out;
}

std::string render_structured(const ValidationReport& report) {
    nlohmann::ordered_json doc;
    doc["diagnostics"] = nlohmann::ordered_json::array();
    for (const Diagnostic& d : report.diagnostics) {
        nlohmann::ordered_json item;
        item["severity"] = d.severity == Severity::Error ? "error" : "warning";
        item["kind"] = kind_key(d.kind);
        item["statement_index"] = d.statement_index;
        item["line"] = d.line;
        item["message"] = d.message;
        if (d.dimension) item["dimension"] = std::string(dimension_name(*d.dimension));
        if (d.value) item["value"] = *d.value;
        if (d.kind == DiagnosticKind::UnsatisfiedMetaPredicate) {
            auto vars = nlohmann::ordered_json::array();
            for (const VariableInfo& info : d.variables_found) {
                nlohmann::ordered_json v;
                v["name"] = info.name;
                v["purpose"] = info.purpose;
                v["knowledge_domain"] = info.knowledge_domain;
                v["scale"] = info.scale;
                if (info.method) v["method"] = *info.method;
                vars.push_back(std::move(v));
            }
            item["variables_found"] = std::move(vars);
        }
        doc["diagnostics"].push_back(std::move(item));
    }
    doc["summary"] = {{"script_hash", report.script_hash},
                      {"errors", report.errors},
                      {"warnings", report.warnings},
                      {"valid", report.valid}};
    return doc.dump(2) + "\n";
}

}  // namespace

std::string render_report(const ValidationReport& report, ReportFormat format) {
    return format == ReportFormat::Human ? render_human(report) : render_structured(report);
}

}  // namespace cascade
