#include "cascade/engine.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <thread>

#include "cascade/errors.hpp"
#include "cascade/render.hpp"
#include "json_util.hpp"
#include "json.hpp"

namespace cascade {

namespace {

// Evaluation context for one (predicate, record) pair.
struct Evaluator {
    const Record& record;
    const Script* constants;
    EvalMode mode;
    long* mismatches;
    int statement_index;

    TriState eval(const Expr& e) const {
        return std::visit(
            [&](const auto& node) -> TriState {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, Expr::Or>) {
                    TriState acc = TriState::False;
                    for (const ExprPtr& child : node.children) {
                        acc = tri_or(acc, eval(*child));
                        if (acc == TriState::True) return acc;  // short-circuit
                    }
                    return acc;
                } else if constexpr (std::is_same_v<T, Expr::And>) {
                    TriState acc = TriState::True;
                    for (const ExprPtr& child : node.children) {
                        acc = tri_and(acc, eval(*child));
                        if (acc == TriState::False) return acc;
                    }
                    return acc;
                } else if constexpr (std::is_same_v<T, Expr::Not>) {
                    return tri_not(eval(*node.child));
                } else if constexpr (std::is_same_v<T, Expr::Compare>) {
                    return eval_compare(node);
                } else if constexpr (std::is_same_v<T, Expr::Membership>) {
                    return eval_membership(node);
                } else {
                    throw Error("expression is not a predicate");
                }
            },
            e.node);
    }

    const Value& operand_value(const Expr& e, const std::string** var_name) const {
        if (const auto* v = std::get_if<Expr::Var>(&e.node)) {
            *var_name = &v->name;
            return record.get(v->name);
        }
        if (const auto* c = std::get_if<Expr::Const>(&e.node)) {
            *var_name = nullptr;
            return c->value;
        }
        throw Error("comparison operands must be variables or constants");
    }

    TriState mismatch(const std::string* a_name, const Value& a, const std::string* b_name,
                      const Value& b) const {
        if (mode == EvalMode::Lenient) {
            if (mismatches) ++*mismatches;
            return TriState::Unknown;
        }
        if (a_name)
            throw TypeMismatchError(*a_name, kind_name(b.kind()), kind_name(a.kind()),
                                    statement_index);
        if (b_name)
            throw TypeMismatchError(*b_name, kind_name(a.kind()), kind_name(b.kind()),
                                    statement_index);
        throw TypeMismatchError("<literal>", kind_name(b.kind()), kind_name(a.kind()),
                                statement_index);
    }

    TriState compare_pair(CompareOp op, const std::string* a_name, const Value& a,
                          const std::string* b_name, const Value& b) const {
        if (a.is_missing() || b.is_missing()) return TriState::Unknown;

        if (a.is_numeric() && b.is_numeric()) {
            long double x = a.as_long_double();
            long double y = b.as_long_double();
            switch (op) {
                case CompareOp::Less: return tri_of(x < y);
                case CompareOp::LessEq: return tri_of(x <= y);
                case CompareOp::Greater: return tri_of(x > y);
                case CompareOp::GreaterEq: return tri_of(x >= y);
                case CompareOp::Eq: return tri_of(x == y);
                default: return tri_of(x != y);
            }
        }
        if (a.is_text() && b.is_text()) {
            int c = a.as_text().compare(b.as_text());
            switch (op) {
                case CompareOp::Less: return tri_of(c < 0);
                case CompareOp::LessEq: return tri_of(c <= 0);
                case CompareOp::Greater: return tri_of(c > 0);
                case CompareOp::GreaterEq: return tri_of(c >= 0);
                case CompareOp::Eq: return tri_of(c == 0);
                default: return tri_of(c != 0);
            }
        }
        if (a.is_boolean() && b.is_boolean()) {
            if (op == CompareOp::Eq) return tri_of(a.as_boolean() == b.as_boolean());
            if (op == CompareOp::Ne) return tri_of(a.as_boolean() != b.as_boolean());
            if (mode == EvalMode::Lenient) {
                if (mismatches) ++*mismatches;
                return TriState::Unknown;
            }
            throw TypeMismatchError::ordering(a_name ? *a_name : (b_name ? *b_name : "<literal>"),
                                              statement_index);
        }
        return mismatch(a_name, a, b_name, b);
    }

    TriState eval_compare(const Expr::Compare& node) const {
        TriState acc = TriState::True;
        for (std::size_t i = 0; i < node.ops.size(); ++i) {
            const std::string* a_name = nullptr;
            const std::string* b_name = nullptr;
            const Value& a = operand_value(*node.operands[i], &a_name);
            const Value& b = operand_value(*node.operands[i + 1], &b_name);
            acc = tri_and(acc, compare_pair(node.ops[i], a_name, a, b_name, b));
            if (acc == TriState::False) return acc;
        }
        return acc;
    }

    const std::vector<Value>& resolve_set(const Expr& set) const {
        if (const auto* lit = std::get_if<Expr::SetLiteral>(&set.node)) return lit->elements;
        if (const auto* ref = std::get_if<Expr::SetRef>(&set.node)) {
            const Expr::SetLiteral* lit =
                constants ? constants->find_constant(ref->name) : nullptr;
            if (!lit) throw Error("unresolved set constant " + ref->name);
            return lit->elements;
        }
        throw Error("membership target is not a set");
    }

    TriState eval_membership(const Expr::Membership& node) const {
        const std::string* name = nullptr;
        const Value& v = operand_value(*node.operand, &name);
        if (v.is_missing()) return TriState::Unknown;

        bool found = false;
        for (const Value& element : resolve_set(*node.set)) {
            if (element.is_numeric() && v.is_numeric()) {
                if (element.as_long_double() == v.as_long_double()) {
                    found = true;
                    break;
                }
            } else if (element == v) {  // same kind, same payload
                found = true;
                break;
            }
            // cross-kind elements simply do not match
        }
        TriState result = tri_of(found);
        return node.negated ? tri_not(result) : result;
    }
};

std::string step_display_label(const Statement& stmt) {
    return stmt.label.empty() ? render_predicate(stmt.predicate) : stmt.label;
}

std::string sanitize_cell(std::string text) {
    for (char& c : text)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return text;
}

std::string meta_directives_normalized(const std::vector<MetaPredicate>& metas,
                                       const char* separator) {
    std::string out;
    for (std::size_t i = 0; i < metas.size(); ++i) {
        if (i) out += separator;
        out += "@";
        out += dimension_name(metas[i].dimension);
        out += "(";
        out += metas[i].value;
        out += ")";
    }
    return out;
}

}  // namespace

TriState eval_predicate(const ExprPtr& predicate, const Record& record,
                        const Script* constants_source, EvalMode mode, long* mismatches,
                        int statement_index) {
    Evaluator ev{record, constants_source, mode, mismatches, statement_index};
    return ev.eval(*predicate);
}

Runner::Runner(const Script& script) : script_(&script) {
    step_vars_.reserve(script.statements.size());
    for (const Statement& stmt : script.statements) {
        std::set<std::string> vars = extract_variables(stmt.predicate);
        step_vars_.emplace_back(vars.begin(), vars.end());
    }
}

Trace Runner::run(const Record& record, EvalMode mode, long* mismatches) const {
    Trace trace;
    trace.record_id = record.id;
    for (std::size_t i = 0; i < script_->statements.size(); ++i) {
        const Statement& stmt = script_->statements[i];
        StepTrace step;
        step.step_index = stmt.index;
        step.label = stmt.label;
        step.meta_predicates = stmt.meta_predicates;
        step.action_if_fired = stmt.action;
        for (const std::string& name : step_vars_[i]) step.variables.emplace(name, record.get(name));
        step.result = eval_predicate(stmt.predicate, record, script_, mode, mismatches, stmt.index);
        step.fired = step.result == TriState::True;
        bool fired = step.fired;
        trace.steps.push_back(std::move(step));
        if (fired) {
            trace.outcome = stmt.action;
            trace.decided_by = stmt.index;
            return trace;
        }
    }
    trace.outcome = script_->final_action;
    trace.decided_by = std::nullopt;
    return trace;
}

bool Runner::outcome(const Record& record, EvalMode mode, long* mismatches) const {
    for (const Statement& stmt : script_->statements) {
        TriState result =
            eval_predicate(stmt.predicate, record, script_, mode, mismatches, stmt.index);
        if (result == TriState::True) return stmt.action;
    }
    return script_->final_action;
}

Trace run_record(const Script& script, const Record& record, EvalMode mode) {
    return Runner(script).run(record, mode);
}

WaterfallStats WaterfallStats::for_script(const Script& script) {
    WaterfallStats stats;
    stats.steps.reserve(script.statements.size());
    for (const Statement& stmt : script.statements)
        stats.steps.push_back({step_display_label(stmt), 0, 0, 0, 0});
    return stats;
}

void WaterfallStats::add(const Trace& trace) {
    ++total;
    for (const StepTrace& step : trace.steps) {
        Step& s = steps[static_cast<std::size_t>(step.step_index)];
        ++s.evaluated;
        if (step.fired)
            ++s.matched;
        else if (step.result == TriState::False)
            ++s.passed;
        else
            ++s.unknown;
    }
    if (!trace.decided_by) ++default_count;
    (trace.outcome ? accepted_total : rejected_total) += 1;
}

void WaterfallStats::merge(const WaterfallStats& other) {
    for (std::size_t i = 0; i < steps.size(); ++i) {
        steps[i].evaluated += other.steps[i].evaluated;
        steps[i].matched += other.steps[i].matched;
        steps[i].passed += other.steps[i].passed;
        steps[i].unknown += other.steps[i].unknown;
    }
    total += other.total;
    default_count += other.default_count;
    accepted_total += other.accepted_total;
    rejected_total += other.rejected_total;
    type_mismatches += other.type_mismatches;
    skipped_records += other.skipped_records;
}

BatchResult run_batch(const Script& script, const std::vector<Record>& records,
                      const BatchOptions& options) {
    Runner runner(script);
    BatchResult result;
    result.stats = WaterfallStats::for_script(script);

    int jobs = std::max(1, options.jobs);
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), records.size());

    if (workers <= 1) {
        long mismatches = 0;
        result.outcomes.reserve(records.size());
        for (const Record& record : records) {
            Trace trace = runner.run(record, options.mode, &mismatches);
            result.stats.add(trace);
            result.outcomes.push_back({trace.record_id, trace.outcome, trace.decided_by});
        }
        result.stats.type_mismatches = mismatches;
        return result;
    }

    struct Shard {
        std::vector<RecordOutcome> outcomes;
        WaterfallStats stats;
        long mismatches = 0;
        std::exception_ptr error;
    };
    std::vector<Shard> shards(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);

    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = records.size() * w / workers;
        std::size_t end = records.size() * (w + 1) / workers;
        shards[w].stats = WaterfallStats::for_script(script);
        threads.emplace_back([&, w, begin, end] {
            Shard& shard = shards[w];
            try {
                shard.outcomes.reserve(end - begin);
                for (std::size_t i = begin; i < end; ++i) {
                    Trace trace = runner.run(records[i], options.mode, &shard.mismatches);
                    shard.stats.add(trace);
                    shard.outcomes.push_back({trace.record_id, trace.outcome, trace.decided_by});
                }
            } catch (...) {
                shard.error = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads) t.join();

    for (Shard& shard : shards)
        if (shard.error) std::rethrow_exception(shard.error);

    result.outcomes.reserve(records.size());
    for (Shard& shard : shards) {
        result.stats.merge(shard.stats);
        result.stats.type_mismatches += shard.mismatches;
        for (RecordOutcome& o : shard.outcomes) result.outcomes.push_back(std::move(o));
    }
    return result;
}

Trace trace_query(const Script& script, const std::vector<Record>& records,
                  std::string_view record_id, EvalMode mode) {
    for (const Record& record : records)
        if (record.id == record_id) return run_record(script, record, mode);
    throw RecordNotFound(std::string(record_id));
}

std::string render_trace_json(const Trace& trace) {
    nlohmann::ordered_json doc;
    doc["record_id"] = trace.record_id;
    doc["outcome"] = trace.outcome;
    if (trace.decided_by)
        doc["decided_by"] = *trace.decided_by;
    else
        doc["decided_by"] = "default";
    doc["steps"] = nlohmann::ordered_json::array();
    for (const StepTrace& step : trace.steps) {
        nlohmann::ordered_json s;
        s["step"] = step.step_index;
        s["label"] = step.label;
        auto metas = nlohmann::ordered_json::array();
        for (const MetaPredicate& meta : step.meta_predicates)
            metas.push_back("@" + std::string(dimension_name(meta.dimension)) + "(" + meta.value +
                            ")");
        s["meta_predicates"] = std::move(metas);
        s["result"] = to_string(step.result);
        s["fired"] = step.fired;
        s["action_if_fired"] = step.action_if_fired ? "select" : "reject";
        nlohmann::ordered_json vars;
        for (const auto& [name, value] : step.variables) vars[name] = detail::value_to_json(value);
        s["variables"] = std::move(vars);
        doc["steps"].push_back(std::move(s));
    }
    return doc.dump();
}

std::string render_trace_table(const Trace& trace, const Script& script) {
    std::vector<std::array<std::string, 5>> rows;
    rows.push_back({"Step", "Test", "Meta-predicates", "Action", "Evaluated to"});

    for (const StepTrace& step : trace.steps) {
        const Statement& stmt = script.statements[static_cast<std::size_t>(step.step_index)];
        std::string evaluated;
        switch (step.result) {
            case TriState::True:
                evaluated = step.action_if_fired ? "True -> Selected" : "True -> Rejected";
                break;
            case TriState::False: evaluated = "False -> Skip"; break;
            default: evaluated = "Unknown -> Skip"; break;
        }
        rows.push_back({std::to_string(step.step_index + 1),
                        sanitize_cell(step_display_label(stmt)),
                        meta_directives_normalized(step.meta_predicates, ", "),
                        step.action_if_fired ? "Select" : "Reject", std::move(evaluated)});
    }
    if (!trace.decided_by) {
        rows.push_back({"-", "DEFAULT", "", script.final_action ? "Select" : "Reject",
                        script.final_action ? "Default -> Selected" : "Default -> Rejected"});
    }

    std::array<std::size_t, 5> widths{};
    for (const auto& row : rows)
        for (std::size_t c = 0; c < 5; ++c) widths[c] = std::max(widths[c], row[c].size());

    std::string out = "Record: " + trace.record_id + "\n";
    out += "Outcome: ";
    out += trace.outcome ? "Selected" : "Rejected";
    if (trace.decided_by)
        out += " (statement " + std::to_string(*trace.decided_by + 1) + ")";
    else
        out += " (default)";
    out += "\n\n";

    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 5; ++c) {
            if (c) out += " | ";
            out += row[c];
            if (c + 1 < 5) out += std::string(widths[c] - row[c].size(), ' ');
        }
        out += "\n";
    }
    return out;
}

std::string render_stats_tsv(const WaterfallStats& stats, bool lenient) {
    std::string out = "step_index\tlabel\tevaluated\tmatched\tpassed\tunknown\n";
    for (std::size_t i = 0; i < stats.steps.size(); ++i) {
        const WaterfallStats::Step& s = stats.steps[i];
        out += std::to_string(i) + "\t" + sanitize_cell(s.label) + "\t" +
               std::to_string(s.evaluated) + "\t" + std::to_string(s.matched) + "\t" +
               std::to_string(s.passed) + "\t" + std::to_string(s.unknown) + "\n";
    }
    auto tail = [&out](const char* tag, long n) {
        out += std::string(tag) + "\t\t" + std::to_string(n) + "\t\t\t\n";
    };
    tail("DEFAULT", stats.default_count);
    tail("ACCEPTED", stats.accepted_total);
    tail("REJECTED", stats.rejected_total);
    if (lenient) {
        tail("MISMATCHES", stats.type_mismatches);
        tail("SKIPPED", stats.skipped_records);
    }
    return out;
}

std::string render_outcome_json(const RecordOutcome& outcome) {
    nlohmann::ordered_json doc;
    doc["_id"] = outcome.record_id;
    doc["outcome"] = outcome.outcome;
    if (outcome.decided_by)
        doc["decided_by"] = *outcome.decided_by;
    else
        doc["decided_by"] = "default";
    return doc.dump();
}

}  // namespace cascade
