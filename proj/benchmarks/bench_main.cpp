#include <benchmark/benchmark.h>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/cascade.hpp"

namespace {

const char* kScript = R"(LOF_SET = {"transcript_ablation", "splice_acceptor_variant", "splice_donor_variant", "stop_gained", "frameshift_variant", "stop_lost", "start_lost"}

# High population frequency
if gnomAD_AF > 0.01:
    return False

# Constrained gene, loss of function
if Most_Severe_Consequence in LOF_SET and pLI > 0.9:
    return True

# Known pathogenic
if Most_Severe_Consequence in LOF_SET and ClinVar_Status == "Pathogenic":
    return True

# Missense supported by ensemble score
if Most_Severe_Consequence not in LOF_SET and REVEL_score > 0.7:
    return True

return False
)";

std::vector<std::string> make_lines(std::size_t n) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> af(0.0, 0.02);
    std::uniform_real_distribution<double> revel(0.0, 1.0);
    const char* csq[] = {"stop_gained", "missense_variant", "frameshift_variant",
                         "synonymous_variant"};
    std::vector<std::string> lines;
    lines.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::ostringstream os;
        os << "{\"_id\":\"r" << i << "\",\"gnomAD_AF\":" << af(rng)
           << ",\"pLI\":" << revel(rng) << ",\"REVEL_score\":" << revel(rng)
           << ",\"Most_Severe_Consequence\":\"" << csq[i % 4] << "\"";
        if (i % 3 == 0) os << ",\"ClinVar_Status\":\"Pathogenic\"";
        os << "}";
        lines.push_back(os.str());
    }
    return lines;
}

std::vector<cascade::Record> make_records(std::size_t n) {
    std::vector<cascade::Record> records;
    records.reserve(n);
    long line_number = 0;
    for (const std::string& line : make_lines(n))
        records.push_back(cascade::parse_record_line(line, ++line_number));
    return records;
}

void BM_ParseRecord(benchmark::State& state) {
    const std::vector<std::string> lines = make_lines(512);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cascade::parse_record_line(lines[i % lines.size()], 1));
        ++i;
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_ParseRecord);

void BM_EvalRecord(benchmark::State& state) {
    const cascade::Script script = cascade::parse_script(kScript);
    const cascade::Runner runner(script);
    const std::vector<cascade::Record> records = make_records(512);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(runner.outcome(records[i % records.size()]));
        ++i;
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()));
}
BENCHMARK(BM_EvalRecord);

void BM_RunBatch(benchmark::State& state) {
    const cascade::Script script = cascade::parse_script(kScript);
    const std::vector<cascade::Record> records = make_records(
        static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cascade::run_batch(script, records));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunBatch)->Arg(10000);

void BM_ValidateScript(benchmark::State& state) {
    const cascade::Script script = cascade::parse_script(kScript);
    cascade::ClassificationDictionary dict;
    dict.add_entry(cascade::ClassificationEntry::make("gnomAD_AF", "Evidence",
                                                      "Population Genetics", "Variant"));
    dict.add_entry(cascade::ClassificationEntry::make("pLI", "Evidence", "Population Genetics",
                                                      "Gene"));
    dict.add_entry(cascade::ClassificationEntry::make("Most_Severe_Consequence", "Evidence",
                                                      "Functional Genetics",
                                                      "Variant in Transcript"));
    dict.add_entry(cascade::ClassificationEntry::make("ClinVar_Status", "Evidence",
                                                      "Human Genetics", "Variant"));
    dict.add_entry(cascade::ClassificationEntry::make("REVEL_score", "Evidence",
                                                      "Functional Genetics", "Variant"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cascade::validate_script(script, dict));
    }
}
BENCHMARK(BM_ValidateScript);

}  // namespace

BENCHMARK_MAIN();
