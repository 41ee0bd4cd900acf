#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cascade/cascade.hpp"

namespace {

using namespace cascade;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw Error("cannot read " + path);
    return buffer.str();
}

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) {
            out_ = &std::cout;
            return;
        }
        file_.open(path, std::ios::binary);
        if (!file_) throw Error("cannot open " + path + " for writing");
        out_ = &file_;
    }

    std::ostream& stream() { return *out_; }

    void finish() {
        out_->flush();
        if (file_.is_open() && !file_) throw Error("write failed");
    }

private:
    std::ofstream file_;
    std::ostream* out_ = nullptr;
};

ReportFormat parse_format(const std::string& name) {
    return name == "structured" ? ReportFormat::Structured : ReportFormat::Human;
}

struct CommonArgs {
    std::string script_path;
    std::string dict_path;
    std::string records_path;
    std::string out_path;
    std::string stats_path;
    std::string format = "human";
    bool lenient = false;
    bool no_validate = false;
    bool trace_all = false;
    int jobs = 1;
};

// Parses and (unless skipped) validates the script; on validation failure the
// report goes to stderr. Returns nullopt when the caller should exit 1.
std::optional<Script> prepare_script(const CommonArgs& args, bool dict_required) {
    Script script = parse_script(read_file(args.script_path));
    if (args.no_validate) return script;
    if (args.dict_path.empty()) {
        if (!dict_required) return script;
        throw Error("a classification dictionary is required (--dict), or pass --no-validate");
    }
    ClassificationDictionary dict = load_dictionary(read_file(args.dict_path));
    ValidationReport report = validate_script(script, dict);
    if (!report.valid) {
        std::cerr << render_report(report, parse_format(args.format));
        return std::nullopt;
    }
    return script;
}

int cmd_validate(const CommonArgs& args) {
    Script script = parse_script(read_file(args.script_path));
    ClassificationDictionary dict = load_dictionary(read_file(args.dict_path));
    ValidationOptions options;
    options.unclassified_is_warning = args.lenient;
    ValidationReport report = validate_script(script, dict, options);
    std::cout << render_report(report, parse_format(args.format));
    return report.valid ? 0 : 1;
}

int cmd_run(const CommonArgs& args) {
    if (args.trace_all && args.out_path.empty())
        throw Error("--trace-all streams one trace per record and requires --out");

    std::optional<Script> script = prepare_script(args, /*dict_required=*/true);
    if (!script) return 1;

    std::ifstream records_in(args.records_path, std::ios::binary);
    if (!records_in) throw Error("cannot open " + args.records_path);
    RecordReader reader(records_in, args.lenient ? IngestMode::Lenient : IngestMode::Strict);
    const EvalMode mode = args.lenient ? EvalMode::Lenient : EvalMode::Strict;

    Runner runner(*script);
    WaterfallStats stats = WaterfallStats::for_script(*script);
    std::optional<Sink> out;
    if (!args.out_path.empty()) out.emplace(args.out_path);

    if (args.trace_all) {
        long mismatches = 0;
        while (std::optional<Record> record = reader.next()) {
            Trace trace = runner.run(*record, mode, &mismatches);
            stats.add(trace);
            out->stream() << render_trace_json(trace) << "\n";
        }
        stats.type_mismatches = mismatches;
    } else {
        constexpr std::size_t kBlock = 8192;
        std::vector<Record> block;
        block.reserve(kBlock);
        BatchOptions batch_options{mode, args.jobs};
        auto flush = [&] {
            if (block.empty()) return;
            BatchResult result = run_batch(*script, block, batch_options);
            stats.merge(result.stats);
            if (out)
                for (const RecordOutcome& outcome : result.outcomes)
                    out->stream() << render_outcome_json(outcome) << "\n";
            block.clear();
        };
        while (std::optional<Record> record = reader.next()) {
            block.push_back(std::move(*record));
            if (block.size() == kBlock) flush();
        }
        flush();
    }
    stats.skipped_records = reader.skipped();
    if (out) out->finish();

    Sink stats_out(args.stats_path);
    stats_out.stream() << render_stats_tsv(stats, args.lenient);
    stats_out.finish();
    return 0;
}

int cmd_trace(const CommonArgs& args, const std::string& record_id) {
    std::optional<Script> script = prepare_script(args, /*dict_required=*/false);
    if (!script) return 1;

    std::ifstream records_in(args.records_path, std::ios::binary);
    if (!records_in) throw Error("cannot open " + args.records_path);
    RecordReader reader(records_in, args.lenient ? IngestMode::Lenient : IngestMode::Strict);

    std::optional<Record> match;
    while (std::optional<Record> record = reader.next()) {
        if (record->id == record_id) {
            match = std::move(record);
            break;
        }
    }
    if (!match) throw RecordNotFound(record_id);

    Trace trace =
        run_record(*script, *match, args.lenient ? EvalMode::Lenient : EvalMode::Strict);
    if (parse_format(args.format) == ReportFormat::Human)
        std::cout << render_trace_table(trace, *script);
    else
        std::cout << render_trace_json(trace) << "\n";
    return 0;
}

int cmd_transform(const std::string& tree_path, bool simplify, bool check,
                  const std::string& out_path) {
    TreePtr tree = load_tree(read_file(tree_path));
    Script script = tree_to_cascade(*tree);
    if (simplify) script = simplify_cascade(script);

    int status = 0;
    if (check) {
        DomainSpec domain = derive_domain({&script}, {tree.get()});
        OracleOutcome outcome = equivalence_oracle(*tree, script, domain);
        if (outcome.equal) {
            std::cerr << "check: equivalent over " << outcome.points << " domain points\n";
        } else {
            std::cerr << "check: divergence on " << serialize_record(*outcome.counterexample)
                      << " (tree " << (outcome.outcome_a ? "selects" : "rejects") << ", cascade "
                      << (outcome.outcome_b ? "selects" : "rejects") << ")\n";
            status = 1;
        }
        DecisionListCheck dl = check_one_decision_list(script);
        if (dl.is_one_decision_list) {
            std::cerr << "check: cascade is a 1-decision list\n";
        } else {
            std::cerr << "check: cascade has conjunction rules in statement";
            if (dl.offending.size() > 1) std::cerr << 's';
            for (std::size_t i = 0; i < dl.offending.size(); ++i)
                std::cerr << (i ? ", " : " ") << dl.offending[i] + 1;
            std::cerr << "\n";
        }
    }

    Sink out(out_path);
    out.stream() << render_script(script);
    out.finish();
    return status;
}

int cmd_check_dict(const std::string& dict_path) {
    DictionaryLoadResult result = parse_dictionary(read_file(dict_path));
    for (const DictIssue& issue : result.issues) std::cout << issue.message << "\n";
    if (!result.issues.empty()) return 1;
    std::cout << "dictionary OK: " << result.dictionary.size() << " annotations\n";
    return 0;
}

// ---------------------------------------------------------------------------
// gen: synthetic record batches from a dictionary
// ---------------------------------------------------------------------------

bool name_contains(const std::string& name, const char* needle) {
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    return lower(name).find(lower(needle)) != std::string::npos;
}

// Deterministic per-annotation value model: named families first, then a
// fallback keyed on the classification itself. Families are resolved once per
// dictionary, not per record.
enum class GenFamily {
    Consequence,
    Biotype,
    Tissue,
    BenignFlag,
    Stars,
    Tags,
    Polyphen,
    ClinvarStatus,
    Inheritance,
    Affected,
    Frequency,
    AlleleNumber,
    SmallCount,
    QualityByDepth,
    Flag,
    Caller,
    Compound,
    PipelineInt,
    UnitScore,
};

GenFamily classify_family(const ClassificationEntry& entry) {
    const std::string& name = entry.annotation;
    if (name_contains(name, "consequence") || name_contains(name, "annotation"))
        return GenFamily::Consequence;
    if (name_contains(name, "biotype")) return GenFamily::Biotype;
    if (name_contains(name, "expressed_in")) return GenFamily::Tissue;
    if (name_contains(name, "benign")) return GenFamily::BenignFlag;
    if (name_contains(name, "stars")) return GenFamily::Stars;
    if (name_contains(name, "tags")) return GenFamily::Tags;
    if (name_contains(name, "polyphen")) return GenFamily::Polyphen;
    if (name_contains(name, "clinvar")) return GenFamily::ClinvarStatus;
    if (name_contains(name, "inheritance")) return GenFamily::Inheritance;
    if (name_contains(name, "affected")) return GenFamily::Affected;
    if (name_contains(name, "_af") || name_contains(name, "frequency"))
        return GenFamily::Frequency;
    if (name_contains(name, "_an")) return GenFamily::AlleleNumber;
    if (name_contains(name, "gq") || name_contains(name, "hom") || name_contains(name, "hem"))
        return GenFamily::SmallCount;
    if (name_contains(name, "qd")) return GenFamily::QualityByDepth;
    if (name_contains(name, "is_") || name_contains(name, "masked") ||
        name_contains(name, "region"))
        return GenFamily::Flag;
    if (name_contains(name, "caller")) return GenFamily::Caller;
    if (name_contains(name, "compound")) return GenFamily::Compound;
    if (entry.knowledge_domain_key == "call annotations") return GenFamily::PipelineInt;
    if (entry.purpose_key == "phenotype") return GenFamily::Affected;
    return GenFamily::UnitScore;
}

Value pick_text(std::mt19937_64& rng, const std::vector<std::string>& choices) {
    std::uniform_int_distribution<std::size_t> d(0, choices.size() - 1);
    return Value::text(choices[d(rng)]);
}

Value gen_value(GenFamily family, std::mt19937_64& rng) {
    static const std::vector<std::string> consequences = {
        "stop_gained",          "frameshift_variant", "missense_variant",
        "splice_donor_variant", "synonymous_variant", "intron_variant"};
    static const std::vector<std::string> biotypes = {
        "protein_coding", "processed_transcript", "lncRNA", "nonsense_mediated_decay"};
    static const std::vector<std::string> tissues = {"brain", "liver", "heart", "muscle",
                                                     "kidney"};
    static const std::vector<std::string> stars = {"0", "1", "2", "3", "4"};
    static const std::vector<std::string> tags = {"DM", "DM?", "DFP", "DP", "none"};
    static const std::vector<std::string> polyphen = {"P", "D", "B"};
    static const std::vector<std::string> clinvar = {"Pathogenic", "Likely Pathogenic",
                                                     "Uncertain Significance", "Benign"};
    static const std::vector<std::string> inheritance = {
        "Homozygous Recessive", "X-linked", "Autosomal Dominant", "Compound Heterozygous"};
    static const std::vector<std::string> affected = {"affected", "unaffected", "unknown"};
    static const std::vector<std::string> callers = {"de_novo", "inherited", "cnv", "none"};
    static const std::vector<std::string> compound = {"Proband", "Sibling", "Unrelated"};

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (family) {
        case GenFamily::Consequence: return pick_text(rng, consequences);
        case GenFamily::Biotype: return pick_text(rng, biotypes);
        case GenFamily::Tissue: return pick_text(rng, tissues);
        case GenFamily::BenignFlag: return Value::boolean(unit(rng) < 0.2);
        case GenFamily::Stars: return pick_text(rng, stars);
        case GenFamily::Tags: return pick_text(rng, tags);
        case GenFamily::Polyphen: return pick_text(rng, polyphen);
        case GenFamily::ClinvarStatus: return pick_text(rng, clinvar);
        case GenFamily::Inheritance: return pick_text(rng, inheritance);
        case GenFamily::Affected: return pick_text(rng, affected);
        case GenFamily::Frequency: {
            double x = unit(rng);
            return Value::real(x * x * x);  // skew towards rare
        }
        case GenFamily::AlleleNumber: {
            std::uniform_int_distribution<std::int64_t> d(0, 20000);
            return Value::integer(d(rng));
        }
        case GenFamily::SmallCount: {
            std::uniform_int_distribution<std::int64_t> d(0, 99);
            return Value::integer(d(rng));
        }
        case GenFamily::QualityByDepth: return Value::real(unit(rng) * 40.0);
        case GenFamily::Flag: return Value::boolean(unit(rng) < 0.5);
        case GenFamily::Caller: return pick_text(rng, callers);
        case GenFamily::Compound: return pick_text(rng, compound);
        case GenFamily::PipelineInt: {
            std::uniform_int_distribution<std::int64_t> d(0, 100);
            return Value::integer(d(rng));
        }
        case GenFamily::UnitScore: break;
    }
    return Value::real(unit(rng));
}

void append_json_text(std::string& line, const std::string& text) {
    line.push_back('"');
    for (char c : text) {
        switch (c) {
            case '"': line += "\\\""; break;
            case '\\': line += "\\\\"; break;
            case '\n': line += "\\n"; break;
            case '\t': line += "\\t"; break;
            case '\r': line += "\\r"; break;
            default: line.push_back(c);
        }
    }
    line.push_back('"');
}

void append_json_value(std::string& line, const Value& v) {
    char buf[64];
    switch (v.kind()) {
        case Value::Kind::Boolean:
            line += v.as_boolean() ? "true" : "false";
            break;
        case Value::Kind::Integer: {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.as_integer());
            line.append(buf, end);
            break;
        }
        case Value::Kind::Real: {
            auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.as_real());
            line.append(buf, end);
            break;
        }
        case Value::Kind::Text:
            append_json_text(line, v.as_text());
            break;
        case Value::Kind::Missing:
            line += "null";
            break;
    }
}

int cmd_gen(const std::string& dict_path, long count, std::uint64_t seed,
            const std::string& out_path) {
    ClassificationDictionary dict = load_dictionary(read_file(dict_path));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Field plan (name prefix + family) resolved once; the per-record loop
    // only draws values and appends text. Record volume makes anything
    // heavier the bottleneck.
    std::vector<std::pair<std::string, GenFamily>> plan;
    for (const auto& [name, entry] : dict.entries()) {
        std::string prefix = ",";
        append_json_text(prefix, name);
        prefix.push_back(':');
        plan.emplace_back(std::move(prefix), classify_family(entry));
    }

    Sink out(out_path);
    std::string line;
    for (long i = 0; i < count; ++i) {
        line.clear();
        line += "{\"_id\":\"r";
        line += std::to_string(i);
        line += '"';
        for (const auto& [prefix, family] : plan) {
            Value v = gen_value(family, rng);
            if (unit(rng) < 0.02) continue;  // 2% missing per annotation
            line += prefix;
            append_json_value(line, v);
        }
        line += "}\n";
        out.stream() << line;
    }
    out.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cascade-verify: validated decision cascades over record batches"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string record_id;
    std::string tree_path;
    std::string dict_path;
    bool simplify = false;
    bool check = false;
    long count = 100;
    std::uint64_t seed = 42;

    CLI::App* validate = app.add_subcommand(
        "validate", "Check every statement's meta-predicates against a dictionary");
    validate->add_option("script", args.script_path, "Cascade script (.cascade)")->required();
    validate->add_option("--dict", args.dict_path, "Classification dictionary (YAML)")
        ->required();
    validate->add_option("--format", args.format, "Report format: human or structured")
        ->check(CLI::IsMember({"human", "structured"}));
    validate->add_flag("--lenient", args.lenient,
                       "Report unclassified annotations as warnings, not errors");

    CLI::App* run = app.add_subcommand("run", "Evaluate a cascade over a record batch");
    run->add_option("script", args.script_path, "Cascade script (.cascade)")->required();
    run->add_option("--dict", args.dict_path, "Classification dictionary (YAML)");
    run->add_option("--records", args.records_path, "Newline-delimited JSON records")
        ->required();
    run->add_option("--out", args.out_path, "Write per-record outcomes (NDJSON) here");
    run->add_option("--stats", args.stats_path,
                    "Write the waterfall table here instead of stdout");
    run->add_option("--format", args.format, "Validation report format on failure")
        ->check(CLI::IsMember({"human", "structured"}));
    run->add_flag("--lenient", args.lenient,
                  "Skip malformed records and treat type mismatches as unknown");
    run->add_flag("--trace-all", args.trace_all,
                  "Stream a full audit trace per record to --out");
    run->add_flag("--no-validate", args.no_validate, "Skip meta-predicate validation");
    run->add_option("--jobs", args.jobs, "Worker threads for evaluation")
        ->check(CLI::Range(1, 256));

    CLI::App* trace = app.add_subcommand("trace", "Explain one record's path through a cascade");
    trace->add_option("script", args.script_path, "Cascade script (.cascade)")->required();
    trace->add_option("record_id", record_id, "Record identifier (_id)")->required();
    trace->add_option("--records", args.records_path, "Newline-delimited JSON records")
        ->required();
    trace->add_option("--dict", args.dict_path,
                      "Classification dictionary; validates before tracing");
    trace->add_option("--format", args.format, "human table or structured JSON")
        ->check(CLI::IsMember({"human", "structured"}));
    trace->add_flag("--lenient", args.lenient, "Lenient ingest and evaluation");
    trace->add_flag("--no-validate", args.no_validate, "Skip meta-predicate validation");

    CLI::App* transform =
        app.add_subcommand("transform", "Compile a decision tree into an equivalent cascade");
    transform->add_option("tree", tree_path, "Decision tree (JSON)")->required();
    transform->add_flag("--simplify", simplify,
                        "Drop statements and conjuncts that first-match order makes redundant");
    transform->add_flag("--check", check,
                        "Prove tree/cascade agreement over the derived input domain");
    transform->add_option("--out", args.out_path, "Write the cascade here instead of stdout");

    CLI::App* check_dict =
        app.add_subcommand("check-dict", "Audit a dictionary for internal consistency");
    check_dict->add_option("dict", dict_path, "Classification dictionary (YAML)")->required();

    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic record batch");
    gen->add_option("--dict", dict_path, "Classification dictionary (YAML)")->required();
    gen->add_option("--count", count, "Number of records")->check(CLI::Range(0L, 100000000L));
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--out", args.out_path, "Write records here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate->parsed()) return cmd_validate(args);
        if (run->parsed()) return cmd_run(args);
        if (trace->parsed()) return cmd_trace(args, record_id);
        if (transform->parsed())
            return cmd_transform(tree_path, simplify, check, args.out_path);
        if (check_dict->parsed()) return cmd_check_dict(dict_path);
        if (gen->parsed()) return cmd_gen(dict_path, count, seed, args.out_path);
    } catch (const TypeMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
