#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "cascade/engine.hpp"
#include "cascade/errors.hpp"
#include "cascade/parser.hpp"
#include "cascade/record.hpp"

#include "helpers.hpp"

using namespace cascade;

namespace {

Record record_of(const std::string& json_line) { return parse_record_line(json_line, 1); }

TriState eval_text(const char* predicate, const std::string& record_json,
                   EvalMode mode = EvalMode::Strict, long* mismatches = nullptr) {
    ExprPtr expr = parse_predicate(predicate);
    Record rec = record_of(record_json);
    return eval_predicate(expr, rec, nullptr, mode, mismatches);
}

Script demo_script() {
    return parse_script(testutil::read_file(testutil::data_path("bgm_demo.cascade")));
}

std::vector<Record> demo_records() {
    std::ifstream in(testutil::data_path("demo_records.ndjson"));
    return load_records(in, IngestMode::Strict);
}

}  // namespace

TEST_CASE("three-valued connectives follow Kleene truth tables") {
    // A is True, B is False, M is absent.
    const std::string rec = R"({"_id":"r","A":1,"B":0})";
    auto is_true = [&](const char* p) { return eval_text(p, rec) == TriState::True; };
    auto is_false = [&](const char* p) { return eval_text(p, rec) == TriState::False; };
    auto is_unknown = [&](const char* p) { return eval_text(p, rec) == TriState::Unknown; };

    CHECK(is_true("A == 1"));
    CHECK(is_false("B == 1"));
    CHECK(is_unknown("M == 1"));

    // and
    CHECK(is_true("A == 1 and A > 0"));
    CHECK(is_false("A == 1 and B == 1"));
    CHECK(is_false("B == 1 and M == 1"));  // False dominates Unknown
    CHECK(is_unknown("A == 1 and M == 1"));

    // or
    CHECK(is_true("B == 1 or A == 1"));
    CHECK(is_true("M == 1 or A == 1"));  // True dominates Unknown
    CHECK(is_false("B == 1 or B > 0"));
    CHECK(is_unknown("B == 1 or M == 1"));

    // not
    CHECK(is_false("not (A == 1)"));
    CHECK(is_true("not (B == 1)"));
    CHECK(is_unknown("not (M == 1)"));

    // Comparisons against a missing operand are Unknown, including chains.
    CHECK(is_unknown("0 < M < 4"));
    CHECK(is_unknown("M in {1, 2}"));
    CHECK(is_unknown("M not in {1, 2}"));
}

TEST_CASE("chained comparisons are conjunctive") {
    const std::string rec = R"({"_id":"r","QD":2})";
    CHECK(eval_text("0 < QD < 4", rec) == TriState::True);
    CHECK(eval_text("0 < QD < 2", rec) == TriState::False);
    CHECK(eval_text("2 <= QD <= 2", rec) == TriState::True);
    CHECK(eval_text("3 <= QD <= 9", rec) == TriState::False);
}

TEST_CASE("short-circuit evaluation skips operands past the decision point") {
    // B holds text; comparing it with a number is a strict type mismatch,
    // but or stops at the first True and never evaluates it.
    const std::string rec = R"({"_id":"r","A":1,"B":"oops"})";
    CHECK(eval_text("A > 0 or B > 0", rec) == TriState::True);
    CHECK_THROWS_AS(eval_text("B > 0 or A > 0", rec), TypeMismatchError);

    // and stops at the first False.
    CHECK(eval_text("A < 0 and B > 0", rec) == TriState::False);
    CHECK_THROWS_AS(eval_text("B > 0 and A < 0", rec), TypeMismatchError);
}

TEST_CASE("numeric comparison is exact across integer and real") {
    CHECK(eval_text("A == 1.0", R"({"_id":"r","A":1})") == TriState::True);
    CHECK(eval_text("A == 1", R"({"_id":"r","A":1.0})") == TriState::True);
    CHECK(eval_text("A < 1.5", R"({"_id":"r","A":1})") == TriState::True);
    // 2^53 + 1 is not representable as a double; exact comparison still
    // distinguishes it from 2^53.
    CHECK(eval_text("A == 9007199254740992.0", R"({"_id":"r","A":9007199254740993})") ==
          TriState::False);
    CHECK(eval_text("A > 9007199254740992.0", R"({"_id":"r","A":9007199254740993})") ==
          TriState::True);
}

TEST_CASE("booleans admit only equality comparisons") {
    const std::string rec = R"({"_id":"r","Flag":true})";
    CHECK(eval_text("Flag == True", rec) == TriState::True);
    CHECK(eval_text("Flag != False", rec) == TriState::True);
    try {
        eval_text("Flag > False", rec);
        FAIL("expected TypeMismatchError");
    } catch (const TypeMismatchError& e) {
        CHECK(testutil::contains(e.what(), "admits only == and != comparisons"));
        CHECK(e.annotation() == "Flag");
    }
}

TEST_CASE("strict mode raises on cross-kind comparison, lenient counts it") {
    const std::string rec = R"({"_id":"r","A":"text"})";
    try {
        eval_text("A > 1", rec);
        FAIL("expected TypeMismatchError");
    } catch (const TypeMismatchError& e) {
        CHECK(e.annotation() == "A");
        CHECK(e.found() == "text");
    }

    long mismatches = 0;
    CHECK(eval_text("A > 1", rec, EvalMode::Lenient, &mismatches) == TriState::Unknown);
    CHECK(mismatches == 1);

    // Membership ignores set elements of other kinds silently.
    CHECK(eval_text("A in {1, \"text\"}", rec) == TriState::True);
    CHECK(eval_text("A in {1, 2}", rec) == TriState::False);
}

TEST_CASE("statements fire on definite True only; Unknown falls through") {
    Script script = parse_script(
        "if M > 1:\n"
        "    return True\n"
        "if A > 1:\n"
        "    return True\n"
        "return False\n");

    Trace hit = run_record(script, record_of(R"({"_id":"x","A":5})"));
    CHECK(hit.outcome == true);
    REQUIRE(hit.decided_by.has_value());
    CHECK(*hit.decided_by == 1);
    REQUIRE(hit.steps.size() == 2);
    CHECK(hit.steps[0].result == TriState::Unknown);
    CHECK_FALSE(hit.steps[0].fired);
    CHECK(hit.steps[1].result == TriState::True);
    CHECK(hit.steps[1].fired);

    Trace fallthrough = run_record(script, record_of(R"({"_id":"y","A":0})"));
    CHECK(fallthrough.outcome == false);
    CHECK_FALSE(fallthrough.decided_by.has_value());
    CHECK(fallthrough.steps.size() == 2);
}

TEST_CASE("traces capture referenced variables including missing ones") {
    Script script = parse_script(
        "if Depth > 10 and Quality > 30:\n"
        "    return True\n"
        "return False\n");
    Trace trace = run_record(script, record_of(R"({"_id":"t1","Depth":50})"));
    REQUIRE(trace.steps.size() == 1);
    const StepTrace& step = trace.steps[0];
    REQUIRE(step.variables.size() == 2);
    CHECK(step.variables.at("Depth") == Value::integer(50));
    CHECK(step.variables.at("Quality").kind() == Value::Kind::Missing);
    CHECK(step.action_if_fired == true);
    CHECK(step.result == TriState::Unknown);
}

TEST_CASE("the demo cascade walks the compound-het record to statement 13") {
    Script script = demo_script();
    std::vector<Record> records = demo_records();

    Trace trace = trace_query(script, records, "chr1:228287879 C>T");
    CHECK(trace.record_id == "chr1:228287879 C>T");
    REQUIRE(trace.steps.size() == 14);
    for (int i = 0; i < 13; ++i) {
        CAPTURE(i);
        CHECK(trace.steps[static_cast<std::size_t>(i)].result == TriState::False);
        CHECK_FALSE(trace.steps[static_cast<std::size_t>(i)].fired);
    }
    CHECK(trace.steps[13].result == TriState::True);
    CHECK(trace.steps[13].fired);
    CHECK(trace.outcome == true);
    REQUIRE(trace.decided_by.has_value());
    CHECK(*trace.decided_by == 13);

    CHECK_THROWS_AS(trace_query(script, records, "no-such-record"), RecordNotFound);
}

TEST_CASE("batch outcomes follow first-match semantics over the demo corpus") {
    Script script = demo_script();
    std::vector<Record> records = demo_records();
    REQUIRE(records.size() == 5);

    BatchResult result = run_batch(script, records);
    REQUIRE(result.outcomes.size() == 5);

    auto find = [&](const std::string& id) -> const RecordOutcome& {
        for (const RecordOutcome& o : result.outcomes)
            if (o.record_id == id) return o;
        throw std::runtime_error("missing outcome for " + id);
    };

    CHECK(find("chr1:228287879 C>T").outcome == true);
    CHECK(*find("chr1:228287879 C>T").decided_by == 13);
    CHECK(find("chr7:117559590 G>A").outcome == true);
    CHECK(*find("chr7:117559590 G>A").decided_by == 8);
    CHECK(find("chr11:5226774 T>C").outcome == false);
    CHECK(*find("chr11:5226774 T>C").decided_by == 2);
    CHECK(find("chr2:47403221 A>AT").outcome == false);
    CHECK(*find("chr2:47403221 A>AT").decided_by == 0);
    CHECK(find("chrX:153764217 C>G").outcome == true);
    CHECK(*find("chrX:153764217 C>G").decided_by == 12);
}

TEST_CASE("waterfall statistics satisfy their flow invariants") {
    Script script = demo_script();
    std::vector<Record> records = demo_records();
    BatchResult result = run_batch(script, records);
    const WaterfallStats& stats = result.stats;

    REQUIRE(stats.steps.size() == script.statements.size());
    CHECK(stats.total == 5);
    CHECK(stats.steps[0].evaluated == stats.total);
    for (std::size_t i = 0; i + 1 < stats.steps.size(); ++i) {
        CAPTURE(i);
        CHECK(stats.steps[i + 1].evaluated == stats.steps[i].passed + stats.steps[i].unknown);
    }
    long matched_sum = 0;
    for (const auto& step : stats.steps) matched_sum += step.matched;
    CHECK(matched_sum + stats.default_count == stats.total);
    CHECK(stats.accepted_total + stats.rejected_total == stats.total);
    CHECK(stats.accepted_total == 3);
    CHECK(stats.rejected_total == 2);
    CHECK(stats.default_count == 0);
}

TEST_CASE("multi-threaded batches are bit-identical to sequential ones") {
    Script script = demo_script();

    // A larger synthetic batch exercises the chunking.
    std::vector<Record> records;
    for (int i = 0; i < 257; ++i) {
        std::string id = "syn" + std::to_string(i);
        std::string line = "{\"_id\":\"" + id + "\",\"Proband_GQ\":" + std::to_string(i % 60) +
                           ",\"gnomAD_AF\":0." + std::to_string(i % 10) + "}";
        records.push_back(parse_record_line(line, i + 1));
    }

    BatchOptions seq;
    seq.mode = EvalMode::Lenient;
    BatchOptions par = seq;
    par.jobs = 4;

    BatchResult a = run_batch(script, records, seq);
    BatchResult b = run_batch(script, records, par);

    REQUIRE(a.outcomes.size() == b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        CHECK(a.outcomes[i].record_id == b.outcomes[i].record_id);
        CHECK(a.outcomes[i].outcome == b.outcomes[i].outcome);
        CHECK(a.outcomes[i].decided_by == b.outcomes[i].decided_by);
    }
    CHECK(a.stats.total == b.stats.total);
    CHECK(a.stats.accepted_total == b.stats.accepted_total);
    CHECK(a.stats.rejected_total == b.stats.rejected_total);
    CHECK(a.stats.default_count == b.stats.default_count);
    CHECK(a.stats.type_mismatches == b.stats.type_mismatches);
    REQUIRE(a.stats.steps.size() == b.stats.steps.size());
    for (std::size_t i = 0; i < a.stats.steps.size(); ++i) {
        CHECK(a.stats.steps[i].evaluated == b.stats.steps[i].evaluated);
        CHECK(a.stats.steps[i].matched == b.stats.steps[i].matched);
        CHECK(a.stats.steps[i].passed == b.stats.steps[i].passed);
        CHECK(a.stats.steps[i].unknown == b.stats.steps[i].unknown);
    }
    CHECK(render_stats_tsv(a.stats, true) == render_stats_tsv(b.stats, true));
}

TEST_CASE("outcome JSON renders one compact object per record") {
    RecordOutcome fired{"rec-1", true, 3};
    nlohmann::json doc = nlohmann::json::parse(render_outcome_json(fired));
    CHECK(doc["_id"] == "rec-1");
    CHECK(doc["outcome"] == true);
    CHECK(doc["decided_by"] == 3);

    RecordOutcome defaulted{"rec-2", false, std::nullopt};
    nlohmann::json doc2 = nlohmann::json::parse(render_outcome_json(defaulted));
    CHECK(doc2["_id"] == "rec-2");
    CHECK(doc2["outcome"] == false);
    CHECK(doc2["decided_by"] == "default");
}

TEST_CASE("trace JSON mirrors the trace structure") {
    Script script = parse_script("if A > 1:\n    return True\nreturn False\n");
    Trace trace = run_record(script, record_of(R"({"_id":"q","A":7})"));
    nlohmann::json doc = nlohmann::json::parse(render_trace_json(trace));
    CHECK(doc["record_id"] == "q");
    CHECK(doc["outcome"] == true);
    CHECK(doc["decided_by"] == 0);
    REQUIRE(doc["steps"].size() == 1);
    CHECK(doc["steps"][0]["result"] == "True");
    CHECK(doc["steps"][0]["fired"] == true);
    CHECK(doc["steps"][0]["variables"]["A"] == 7);
}

TEST_CASE("trace tables label the default row DEFAULT") {
    Script script = parse_script(
        "if QD > 100:\n"
        "    return True\n"
        "return False\n");
    Trace trace = run_record(script, record_of(R"({"_id":"d","QD":5})"));
    std::string table = render_trace_table(trace, script);
    CHECK(testutil::contains(table, "Step"));
    CHECK(testutil::contains(table, "Test"));
    CHECK(testutil::contains(table, "Meta-predicates"));
    CHECK(testutil::contains(table, "Action"));
    CHECK(testutil::contains(table, "Evaluated to"));
    CHECK(testutil::contains(table, "DEFAULT"));
    CHECK(testutil::contains(table, "QD > 100"));

    // A fired trace has no DEFAULT row.
    Trace fired = run_record(script, record_of(R"({"_id":"e","QD":500})"));
    std::string fired_table = render_trace_table(fired, script);
    CHECK_FALSE(testutil::contains(fired_table, "DEFAULT"));
}

TEST_CASE("stats TSV carries the tagged summary rows") {
    Script script = demo_script();
    std::vector<Record> records = demo_records();
    BatchResult result = run_batch(script, records);

    std::string strict_tsv = render_stats_tsv(result.stats, false);
    CHECK(testutil::contains(strict_tsv, "step_index\tlabel\tevaluated\tmatched\tpassed\tunknown"));
    CHECK(testutil::contains(strict_tsv, "DEFAULT\t\t0"));
    CHECK(testutil::contains(strict_tsv, "ACCEPTED\t\t3"));
    CHECK(testutil::contains(strict_tsv, "REJECTED\t\t2"));
    CHECK_FALSE(testutil::contains(strict_tsv, "MISMATCHES"));
    CHECK_FALSE(testutil::contains(strict_tsv, "SKIPPED"));

    std::string lenient_tsv = render_stats_tsv(result.stats, true);
    CHECK(testutil::contains(lenient_tsv, "MISMATCHES\t\t0"));
    CHECK(testutil::contains(lenient_tsv, "SKIPPED\t\t0"));
}

TEST_CASE("evaluation consults script constants through references") {
    Script script = parse_script(
        "LOF = {\"stop_gained\", \"frameshift_variant\"}\n"
        "if Csq in LOF:\n"
        "    return True\n"
        "return False\n");
    CHECK(run_record(script, record_of(R"({"_id":"a","Csq":"stop_gained"})")).outcome == true);
    CHECK(run_record(script, record_of(R"({"_id":"b","Csq":"missense_variant"})")).outcome ==
          false);
}
