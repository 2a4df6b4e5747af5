#include <benchmark/benchmark.h>

#include <sstream>
#include <string>

#include "s4cast/ingest.hpp"
#include "s4cast/pipeline.hpp"
#include "s4cast/synth.hpp"

namespace {

s4cast::SynthOutput make_corpus(std::size_t n) {
    s4cast::SynthSpec spec;
    spec.n_rows = n;
    spec.separation = 1.0;
    spec.seed = 34;
    return s4cast::generate(spec);
}

void BM_parse_ismr(benchmark::State& state) {
    const s4cast::SynthOutput corpus = make_corpus(static_cast<std::size_t>(state.range(0)));
    std::ostringstream csv;
    s4cast::write_records_csv(csv, corpus.records);
    const std::string text = csv.str();
    const s4cast::IsmrFormat format = s4cast::normalized_records_format();
    for (auto _ : state) {
        std::istringstream in(text);
        s4cast::IsmrParseResult parsed = s4cast::parse_ismr(in, format);
        benchmark::DoNotOptimize(parsed);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_parse_ismr)->Arg(5000);

void BM_run_pipeline(benchmark::State& state) {
    const s4cast::SynthOutput corpus = make_corpus(static_cast<std::size_t>(state.range(0)));
    const s4cast::PipelineOptions opt;
    for (auto _ : state) {
        s4cast::StageCounts counts;
        s4cast::Dataset ds = s4cast::run_pipeline(corpus.records, corpus.solar, opt, &counts);
        benchmark::DoNotOptimize(ds);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_run_pipeline)->Arg(2000)->Arg(10000);

void BM_balance(benchmark::State& state) {
    s4cast::SynthSpec spec;
    spec.n_rows = 8000;
    spec.class_proportions = {0.7, 0.2, 0.1};
    spec.seed = 56;
    const s4cast::SynthOutput corpus = s4cast::generate(spec);
    for (auto _ : state) {
        s4cast::Dataset balanced = s4cast::balance(corpus.dataset, 3);
        benchmark::DoNotOptimize(balanced);
    }
}
BENCHMARK(BM_balance);

}  // namespace
