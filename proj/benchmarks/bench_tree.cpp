#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "s4cast/bagging.hpp"
#include "s4cast/dataset.hpp"
#include "s4cast/synth.hpp"
#include "s4cast/tree.hpp"

namespace {

s4cast::FeatureMatrix make_features(std::size_t n, std::vector<int>& labels) {
    s4cast::SynthSpec spec;
    spec.n_rows = n;
    spec.separation = 1.5;
    spec.seed = 12;
    const s4cast::SynthOutput out = s4cast::generate(spec);
    labels = s4cast::to_label_indices(out.dataset);
    return s4cast::to_matrix(out.dataset);
}

void BM_tree_fit(benchmark::State& state) {
    std::vector<int> y;
    const s4cast::FeatureMatrix x = make_features(static_cast<std::size_t>(state.range(0)), y);
    for (auto _ : state) {
        s4cast::Tree tree = s4cast::Tree::fit(x, y, s4cast::TreeOptions{100});
        benchmark::DoNotOptimize(tree);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_tree_fit)->Arg(1000)->Arg(4000);

void BM_bagged_fit(benchmark::State& state) {
    std::vector<int> y;
    const s4cast::FeatureMatrix x = make_features(1000, y);
    s4cast::BagOptions opt;
    opt.n_learners = static_cast<int>(state.range(0));
    for (auto _ : state) {
        s4cast::BaggedTrees bag = s4cast::BaggedTrees::fit(x, y, opt);
        benchmark::DoNotOptimize(bag);
    }
}
BENCHMARK(BM_bagged_fit)->Arg(10)->Arg(30);

void BM_bagged_predict(benchmark::State& state) {
    std::vector<int> y;
    const s4cast::FeatureMatrix x = make_features(2000, y);
    s4cast::BagOptions opt;
    const s4cast::BaggedTrees bag = s4cast::BaggedTrees::fit(x, y, opt);
    std::size_t r = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bag.predict_index(x.row(r)));
        r = (r + 1) % x.n_rows;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_bagged_predict);

}  // namespace
