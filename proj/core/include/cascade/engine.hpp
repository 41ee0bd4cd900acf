#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cascade/ast.hpp"
#include "cascade/record.hpp"

namespace cascade {

enum class EvalMode { Strict, Lenient };

// Kleene evaluation of one predicate against one record. Comparisons between
// two numerics are exact (integer/real unified); text compares with text;
// booleans only with == and !=. Incomparable kinds raise TypeMismatchError in
// strict mode; in lenient mode they yield Unknown and bump *mismatches.
// Logical operators short-circuit left to right.
TriState eval_predicate(const ExprPtr& predicate, const Record& record,
                        const Script* constants_source, EvalMode mode = EvalMode::Strict,
                        long* mismatches = nullptr, int statement_index = -1);

struct StepTrace {
    int step_index = 0;  // 0-based pipeline position
    std::string label;
    std::vector<MetaPredicate> meta_predicates;
    TriState result = TriState::Unknown;
    bool fired = false;
    // Value of every variable the step's predicate references (Missing kept).
    std::map<std::string, Value> variables;
    bool action_if_fired = false;
};

struct Trace {
    std::string record_id;
    std::vector<StepTrace> steps;  // stops at the first fired statement
    bool outcome = false;
    std::optional<int> decided_by;  // statement index; nullopt = default
};

struct RecordOutcome {
    std::string record_id;
    bool outcome = false;
    std::optional<int> decided_by;
};

// Per-step waterfall: evaluated(0) == total, evaluated(i+1) == passed(i) +
// unknown(i), and accepted_total + rejected_total == total.
struct WaterfallStats {
    struct Step {
        std::string label;
        long evaluated = 0;
        long matched = 0;
        long passed = 0;  // definite False
        long unknown = 0;
    };
    std::vector<Step> steps;
    long total = 0;
    long default_count = 0;
    long accepted_total = 0;
    long rejected_total = 0;
    long type_mismatches = 0;  // lenient mode only
    long skipped_records = 0;  // malformed lines skipped by a lenient reader

    static WaterfallStats for_script(const Script& script);
    void add(const Trace& trace);
    void merge(const WaterfallStats& other);
};

struct BatchResult {
    std::vector<RecordOutcome> outcomes;  // input order
    WaterfallStats stats;
};

// Compiled evaluation plan for one script: per-statement variable lists are
// precomputed once. Immutable; one Runner may serve many threads. The script
// must outlive the Runner.
class Runner {
public:
    explicit Runner(const Script& script);

    Trace run(const Record& record, EvalMode mode = EvalMode::Strict,
              long* mismatches = nullptr) const;

    // Outcome without trace assembly; same first-match semantics as run().
    bool outcome(const Record& record, EvalMode mode = EvalMode::Strict,
                 long* mismatches = nullptr) const;

    const Script& script() const { return *script_; }
    const std::vector<std::string>& step_variables(int index) const {
        return step_vars_[static_cast<std::size_t>(index)];
    }

private:
    const Script* script_;
    std::vector<std::vector<std::string>> step_vars_;
};

Trace run_record(const Script& script, const Record& record, EvalMode mode = EvalMode::Strict);

struct BatchOptions {
    EvalMode mode = EvalMode::Strict;
    int jobs = 1;
};

// Evaluates a batch with first-match semantics. jobs > 1 splits the batch
// across threads; outcomes and statistics are bit-identical to jobs == 1.
BatchResult run_batch(const Script& script, const std::vector<Record>& records,
                      const BatchOptions& options = {});

// Full audit trace of the first record carrying the id. Throws RecordNotFound.
Trace trace_query(const Script& script, const std::vector<Record>& records,
                  std::string_view record_id, EvalMode mode = EvalMode::Strict);

// One-line JSON object mirroring Trace/StepTrace field for field.
std::string render_trace_json(const Trace& trace);

// Human audit table: Step | Test | Meta-predicates | Action | Evaluated to,
// one row per evaluated step, final row DEFAULT when no statement fired.
std::string render_trace_table(const Trace& trace, const Script& script);

// Tab-separated waterfall: step_index, label, evaluated, matched, passed,
// unknown; final rows DEFAULT, ACCEPTED, REJECTED (+ MISMATCHES and SKIPPED
// under lenient mode).
std::string render_stats_tsv(const WaterfallStats& stats, bool lenient);

std::string render_outcome_json(const RecordOutcome& outcome);

}  // namespace cascade
