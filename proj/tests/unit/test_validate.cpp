#include <string>

#include "doctest.h"
#include "json.hpp"

#include "cascade/dictionary.hpp"
#include "cascade/parser.hpp"
#include "cascade/validate.hpp"

#include "helpers.hpp"

using namespace cascade;

namespace {

const ClassificationDictionary& sample_dict() {
    static ClassificationDictionary dict =
        load_dictionary(testutil::read_file(testutil::data_path("sample_dictionary.yaml")));
    return dict;
}

ValidationReport validate_fixture(const char* rel, const ValidationOptions& options = {}) {
    Script script = parse_script(testutil::read_file(testutil::data_path(rel)));
    return validate_script(script, sample_dict(), options);
}

}  // namespace

TEST_CASE("the expression site filter satisfies all four meta-predicates") {
    ValidationReport report = validate_fixture("examples/expression_site_filter.cascade");
    CHECK(report.valid);
    CHECK(report.errors == 0);
    CHECK(report.warnings == 0);
    CHECK(report.diagnostics.empty());
    std::string human = render_report(report, ReportFormat::Human);
    CHECK(human == "OK: 0 errors, 0 warnings\n");
}

TEST_CASE("a gene-scale annotation cannot satisfy variant-scale claims") {
    ValidationReport report = validate_fixture("examples/pli_scale_mismatch.cascade");
    CHECK_FALSE(report.valid);
    CHECK(report.errors == 2);
    CHECK(report.warnings == 0);

    // Unsatisfied meta-predicates report in source order.
    REQUIRE(report.diagnostics.size() == 2);
    const Diagnostic& kd = report.diagnostics[0];
    CHECK(kd.kind == DiagnosticKind::UnsatisfiedMetaPredicate);
    CHECK(kd.dimension == Dimension::KnowledgeDomain);
    CHECK(kd.value == "human genetics");
    CHECK(kd.line == 3);
    const Diagnostic& scale = report.diagnostics[1];
    CHECK(scale.dimension == Dimension::Scale);
    CHECK(scale.value == "variant");
    CHECK(scale.line == 4);

    // The variable listing uses display spellings from the dictionary.
    REQUIRE(kd.variables_found.size() == 1);
    CHECK(kd.variables_found[0].name == "pLI");
    CHECK(kd.variables_found[0].knowledge_domain == "Population Genetics");
    CHECK(kd.variables_found[0].scale == "gene");

    std::string human = render_report(report, ReportFormat::Human);
    CHECK(human ==
          "FAILED: 2 errors, 0 warnings\n"
          "\n"
          "ValidationError in statement at line 3:\n"
          "- No variable satisfies @knowledge_domain(\"Human Genetics\")\n"
          "- No variable satisfies @scale(variant)\n"
          "Variables found: pLI (Population Genetics, gene)\n");
}

TEST_CASE("swapping the variable breaks meta-predicates dimension by dimension") {
    SUBCASE("clinical inclusion by HGMD tag validates") {
        ValidationReport report = validate_fixture("examples/hgmd_clinical_inclusion.cascade");
        CHECK(report.valid);
        CHECK(report.errors == 0);
    }
    SUBCASE("the PolyPhen swap misses all three dimensions") {
        ValidationReport report = validate_fixture("examples/hgmd_swap_polyphen.cascade");
        CHECK(report.errors == 3);
        REQUIRE(report.diagnostics.size() == 3);
        CHECK(report.diagnostics[0].dimension == Dimension::KnowledgeDomain);
        CHECK(report.diagnostics[1].dimension == Dimension::Scale);
        CHECK(report.diagnostics[2].dimension == Dimension::Method);
        for (const Diagnostic& d : report.diagnostics) {
            CHECK(d.kind == DiagnosticKind::UnsatisfiedMetaPredicate);
            CHECK(d.statement_index == 0);
        }
        CHECK(report.diagnostics[0].line == 3);
    }
    SUBCASE("LOF inclusion over transcript consequences validates") {
        ValidationReport report = validate_fixture("examples/lof_transcript_inclusion.cascade");
        CHECK(report.valid);
    }
    SUBCASE("the canonical-annotation swap misses only the scale") {
        ValidationReport report = validate_fixture("examples/lof_swap_canonical.cascade");
        CHECK(report.errors == 1);
        REQUIRE(report.diagnostics.size() == 1);
        CHECK(report.diagnostics[0].dimension == Dimension::Scale);
        CHECK(report.diagnostics[0].value == "variant in transcript");
        CHECK(report.diagnostics[0].line == 5);
        CHECK(testutil::contains(report.diagnostics[0].message,
                                 "@scale(\"Variant in Transcript\")"));
    }
}

TEST_CASE("meta-predicates are satisfied per meta, not per variable") {
    // QD alone satisfies @purpose(provenance); Mostly_Expressed_In alone
    // satisfies the epigenetics and gene claims. No single variable
    // satisfies everything, and that is fine.
    Script script = parse_script(
        "\"\"\"\n"
        "@purpose(provenance)\n"
        "@knowledge_domain(Epigenetics)\n"
        "@scale(gene)\n"
        "\"\"\"\n"
        "if QD < 4 and Mostly_Expressed_In in {\"brain\"}:\n"
        "    return False\n"
        "return True\n");
    ValidationReport report = validate_script(script, sample_dict());
    CHECK(report.valid);
}

TEST_CASE("unclassified annotations are errors, or warnings when downgraded") {
    Script script = parse_script(
        "\"\"\"\n"
        "@purpose(provenance)\n"
        "\"\"\"\n"
        "if QD < 4 and Totally_Unknown_Annotation > 1:\n"
        "    return False\n"
        "return True\n");

    ValidationReport strict = validate_script(script, sample_dict());
    CHECK_FALSE(strict.valid);
    CHECK(strict.errors == 1);
    REQUIRE(strict.diagnostics.size() == 1);
    CHECK(strict.diagnostics[0].kind == DiagnosticKind::UnclassifiedAnnotation);
    CHECK(strict.diagnostics[0].value == "Totally_Unknown_Annotation");
    CHECK(testutil::contains(strict.diagnostics[0].message, "has no classification"));

    ValidationOptions lenient;
    lenient.unclassified_is_warning = true;
    ValidationReport relaxed = validate_script(script, sample_dict(), lenient);
    CHECK(relaxed.valid);
    CHECK(relaxed.errors == 0);
    CHECK(relaxed.warnings == 1);
    std::string human = render_report(relaxed, ReportFormat::Human);
    CHECK(testutil::contains(human, "OK: 0 errors, 1 warning\n"));
    CHECK(testutil::contains(human, "Warning in statement at line"));
}

TEST_CASE("statements without a validation block earn a warning") {
    Script script = parse_script("if QD < 4:\n    return False\nreturn True\n");
    ValidationReport report = validate_script(script, sample_dict());
    CHECK(report.valid);
    CHECK(report.warnings == 1);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].kind == DiagnosticKind::EmptyValidationBlock);
    CHECK(report.diagnostics[0].severity == Severity::Warning);
}

TEST_CASE("an unsatisfied meta with no classified variables lists (none)") {
    Script script = parse_script(
        "\"\"\"\n"
        "@scale(gene)\n"
        "\"\"\"\n"
        "if Mystery > 1:\n"
        "    return False\n"
        "return True\n");
    ValidationReport report = validate_script(script, sample_dict());
    CHECK(report.errors == 2);  // unsatisfied meta + unclassified annotation
    std::string human = render_report(report, ReportFormat::Human);
    CHECK(testutil::contains(human, "Variables found: (none)"));
}

TEST_CASE("structured reports carry the same content as human ones") {
    ValidationReport report = validate_fixture("examples/pli_scale_mismatch.cascade");
    std::string text = render_report(report, ReportFormat::Structured);
    nlohmann::json doc = nlohmann::json::parse(text);

    REQUIRE(doc.contains("diagnostics"));
    REQUIRE(doc.contains("summary"));
    CHECK(doc["summary"]["errors"] == 2);
    CHECK(doc["summary"]["warnings"] == 0);
    CHECK(doc["summary"]["valid"] == false);
    CHECK(doc["summary"]["script_hash"].get<std::string>().size() == 16);
    CHECK(doc["summary"]["script_hash"] == report.script_hash);

    REQUIRE(doc["diagnostics"].size() == 2);
    const auto& first = doc["diagnostics"][0];
    CHECK(first["severity"] == "error");
    CHECK(first["kind"] == "unsatisfied_meta_predicate");
    CHECK(first["statement_index"] == 0);
    CHECK(first["line"] == 3);
    CHECK(first["dimension"] == "knowledge_domain");
    CHECK(first["value"] == "human genetics");
    REQUIRE(first["variables_found"].size() == 1);
    CHECK(first["variables_found"][0]["name"] == "pLI");
    CHECK(first["variables_found"][0]["purpose"] == "Evidence");
    CHECK(first["variables_found"][0]["knowledge_domain"] == "Population Genetics");
    CHECK(first["variables_found"][0]["scale"] == "gene");
    CHECK(first["variables_found"][0]["method"] == "Bioinformatics Inference");
}

TEST_CASE("a full-script report interleaves statements in order") {
    Script script = parse_script(
        "if QD < 4:\n"
        "    return False\n"
        "\"\"\"\n"
        "@scale(window)\n"
        "\"\"\"\n"
        "if gnomAD_AF > 0.05:\n"
        "    return False\n"
        "return True\n");
    ValidationReport report = validate_script(script, sample_dict());
    CHECK(report.errors == 1);    // @scale(window) unsatisfied by gnomAD_AF
    CHECK(report.warnings == 1);  // first statement has no validation block
    REQUIRE(report.diagnostics.size() == 2);
    CHECK(report.diagnostics[0].statement_index == 0);
    CHECK(report.diagnostics[0].kind == DiagnosticKind::EmptyValidationBlock);
    CHECK(report.diagnostics[1].statement_index == 1);
    CHECK(report.diagnostics[1].kind == DiagnosticKind::UnsatisfiedMetaPredicate);
}
