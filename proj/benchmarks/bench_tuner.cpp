#include <benchmark/benchmark.h>

#include <cmath>
#include <span>
#include <vector>

#include "s4cast/rng.hpp"
#include "s4cast/tuner.hpp"

namespace {

s4cast::SearchSpace two_dim_space() {
    s4cast::SearchSpace space;
    space.dims = {{"splits", 1, 500, true}, {"learners", 1, 100, false}};
    return space;
}

std::vector<s4cast::TrialRecord> make_trials(int n) {
    const s4cast::SearchSpace space = two_dim_space();
    s4cast::Rng rng(77);
    std::vector<s4cast::TrialRecord> trials;
    for (int i = 0; i < n; ++i) {
        s4cast::TrialRecord t;
        for (const s4cast::SearchDim& dim : space.dims) {
            t.params.push_back(static_cast<int>(rng.uniform_int(dim.lo, dim.hi)));
        }
        t.objective = 0.5 + 0.4 * std::sin(static_cast<double>(t.params[0]) / 50.0) *
                                std::cos(static_cast<double>(t.params[1]) / 20.0);
        trials.push_back(std::move(t));
    }
    return trials;
}

void BM_gp_fit(benchmark::State& state) {
    const s4cast::SearchSpace space = two_dim_space();
    const std::vector<s4cast::TrialRecord> trials = make_trials(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        s4cast::GpSurrogate gp = s4cast::GpSurrogate::fit(space, trials);
        benchmark::DoNotOptimize(gp);
    }
}
BENCHMARK(BM_gp_fit)->Arg(20)->Arg(50);

void BM_gp_predict(benchmark::State& state) {
    const s4cast::SearchSpace space = two_dim_space();
    const std::vector<s4cast::TrialRecord> trials = make_trials(50);
    const s4cast::GpSurrogate gp = s4cast::GpSurrogate::fit(space, trials);
    const std::vector<int> point{120, 40};
    for (auto _ : state) {
        benchmark::DoNotOptimize(gp.predict(point));
    }
}
BENCHMARK(BM_gp_predict);

void BM_expected_improvement(benchmark::State& state) {
    double mean = 0.61;
    for (auto _ : state) {
        benchmark::DoNotOptimize(s4cast::expected_improvement(mean, 0.07, 0.6));
        mean += 1e-9;  // defeat constant folding without branching
    }
}
BENCHMARK(BM_expected_improvement);

void BM_tune_cheap_objective(benchmark::State& state) {
    const s4cast::SearchSpace space = two_dim_space();
    const auto objective = [](std::span<const int> p) {
        const double a = static_cast<double>(p[0]);
        const double b = static_cast<double>(p[1]);
        return std::exp(-((a - 60.0) * (a - 60.0) / 5000.0 + (b - 30.0) * (b - 30.0) / 500.0));
    };
    s4cast::TuneOptions opt;
    opt.n_iterations = 25;
    opt.n_initial = 8;
    opt.seed = 3;
    for (auto _ : state) {
        s4cast::TuneResult result = s4cast::tune(objective, space, opt);
        benchmark::DoNotOptimize(result);
    }
}
BENCHMARK(BM_tune_cheap_objective);

}  // namespace
