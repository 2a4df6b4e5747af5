#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "s4cast/errors.hpp"
#include "s4cast/tuner.hpp"

using namespace s4cast;

namespace {

SearchSpace two_dim_space(int lo, int hi) {
    SearchSpace space;
    space.dims.push_back({"splits", lo, hi, true});
    space.dims.push_back({"learners", lo, hi, false});
    return space;
}

}  // namespace

TEST_CASE("expected improvement matches frozen reference values") {
    // At mean == best the closed form reduces to stdev * phi(0).
    CHECK(expected_improvement(0.5, 1.0, 0.5) ==
          doctest::Approx(0.3989422804014326779).epsilon(1e-14));
    CHECK(expected_improvement(0.6, 0.5, 0.5) ==
          doctest::Approx(0.2534473179316382413).epsilon(1e-14));
    CHECK(expected_improvement(0.3, 0.2, 0.5) ==
          doctest::Approx(0.0166630941175372597).epsilon(1e-13));
    CHECK(expected_improvement(0.9, 0.05, 0.6) ==
          doctest::Approx(0.3000000000078178490).epsilon(1e-14));
}

TEST_CASE("expected improvement degenerates cleanly at zero spread") {
    // The degenerate branch is exactly max(mean - best, 0), so compare
    // against the same floating-point expression, not a decimal literal.
    CHECK(expected_improvement(0.8, 0.0, 0.5) == 0.8 - 0.5);
    CHECK(expected_improvement(0.4, 0.0, 0.5) == 0.0);
    CHECK(expected_improvement(0.8, -1.0, 0.5) == 0.8 - 0.5);  // negative spread, same path
}

TEST_CASE("expected improvement dominates the plain improvement") {
    for (const double mean : {0.2, 0.5, 0.7, 0.95}) {
        for (const double stdev : {0.01, 0.1, 0.5}) {
            const double ei = expected_improvement(mean, stdev, 0.5);
            CHECK(ei >= 0.0);
            CHECK(ei > std::max(mean - 0.5, 0.0) - 1e-15);
            // More spread means more optimism at or below the incumbent.
            if (mean <= 0.5) {
                CHECK(expected_improvement(mean, stdev * 2.0, 0.5) > ei);
            }
        }
    }
}

TEST_CASE("the surrogate interpolates its training trials") {
    SearchSpace space;
    space.dims.push_back({"x", 1, 100, false});
    std::vector<TrialRecord> trials{
        {{10}, 0.2, 0.0}, {{30}, 0.55, 0.0}, {{50}, 0.9, 0.0},
        {{70}, 0.6, 0.0}, {{90}, 0.4, 0.0},
    };
    const GpSurrogate gp = GpSurrogate::fit(space, trials);

    for (const TrialRecord& t : trials) {
        const auto post = gp.predict(t.params);
        CHECK(post.mean == doctest::Approx(t.objective).epsilon(0.05));
        CHECK(post.stdev < 0.05);
    }
    // Uncertainty grows away from the data.
    const auto at_train = gp.predict(std::vector<int>{50});
    const auto between = gp.predict(std::vector<int>{60});
    CHECK(between.stdev > at_train.stdev);

    // The selected length scale comes from the fixed grid.
    const std::set<double> grid{0.05, 0.1, 0.15, 0.25, 0.4, 0.6, 1.0, 1.5};
    CHECK(grid.contains(gp.length_scale()));
}

TEST_CASE("the surrogate is deterministic and validates its inputs") {
    SearchSpace space = two_dim_space(1, 50);
    std::vector<TrialRecord> trials{{{2, 3}, 0.3, 0.0}, {{40, 10}, 0.7, 0.0},
                                    {{9, 30}, 0.5, 0.0}};
    const GpSurrogate a = GpSurrogate::fit(space, trials);
    const GpSurrogate b = GpSurrogate::fit(space, trials);
    CHECK(a.length_scale() == b.length_scale());
    const std::vector<int> probe{20, 20};
    CHECK(a.predict(probe).mean == b.predict(probe).mean);
    CHECK(a.predict(probe).stdev == b.predict(probe).stdev);

    CHECK_THROWS_WITH_AS(GpSurrogate::fit(space, std::vector<TrialRecord>{{{2, 3}, 0.3, 0.0}}),
                         doctest::Contains("at least 2"), DataError);
    std::vector<TrialRecord> ragged{{{2}, 0.3, 0.0}, {{4}, 0.6, 0.0}};
    CHECK_THROWS_AS(GpSurrogate::fit(space, ragged), DataError);
    CHECK_THROWS_AS(a.predict(std::vector<int>{7}), DataError);
}

TEST_CASE("search space validation rejects malformed boxes") {
    CHECK_THROWS_WITH_AS(SearchSpace{}.validate(), doctest::Contains("at least one"),
                         ConfigError);
    SearchSpace unnamed;
    unnamed.dims.push_back({"", 1, 5, false});
    CHECK_THROWS_WITH_AS(unnamed.validate(), doctest::Contains("named"), ConfigError);
    SearchSpace dup;
    dup.dims.push_back({"a", 1, 5, false});
    dup.dims.push_back({"a", 1, 9, false});
    CHECK_THROWS_WITH_AS(dup.validate(), doctest::Contains("duplicate"), ConfigError);
    SearchSpace low;
    low.dims.push_back({"a", 0, 5, false});
    CHECK_THROWS_WITH_AS(low.validate(), doctest::Contains(">= 1"), ConfigError);
    SearchSpace inverted;
    inverted.dims.push_back({"a", 6, 5, false});
    CHECK_THROWS_WITH_AS(inverted.validate(), doctest::Contains("inverted"), ConfigError);
    two_dim_space(1, 500).validate();  // well-formed box passes
}

TEST_CASE("tune options validation enforces the trial budget shape") {
    TuneOptions opt;
    opt.validate();
    TuneOptions no_initial;
    no_initial.n_initial = 0;
    CHECK_THROWS_AS(no_initial.validate(), ConfigError);
    TuneOptions inverted;
    inverted.n_initial = 10;
    inverted.n_iterations = 5;
    CHECK_THROWS_AS(inverted.validate(), ConfigError);
    TuneOptions no_candidates;
    no_candidates.n_candidates = 0;
    CHECK_THROWS_AS(no_candidates.validate(), ConfigError);
}

TEST_CASE("tuning finds a smooth single peak and stays deterministic") {
    SearchSpace space = two_dim_space(1, 15);
    const auto objective = [](std::span<const int> p) {
        const double da = static_cast<double>(p[0]) - 10.0;
        const double db = static_cast<double>(p[1]) - 5.0;
        return std::exp(-(da * da + db * db) / 40.0);
    };
    double grid_best = 0.0;
    for (int a = 1; a <= 15; ++a)
        for (int b = 1; b <= 15; ++b)
            grid_best = std::max(grid_best, objective(std::vector<int>{a, b}));

    TuneOptions opt;
    opt.n_iterations = 30;
    opt.n_initial = 8;
    opt.n_candidates = 64;
    opt.seed = 42;
    const TuneResult result = tune(objective, space, opt);

    CHECK(result.failures.empty());
    CHECK(result.history.size() == 30);
    CHECK(result.best.objective >= 0.95 * grid_best);
    CHECK(result.best.objective ==
          objective(result.best.params));  // best fields are consistent

    // No point is evaluated twice on a space much larger than the budget.
    std::set<std::vector<int>> seen;
    for (const TrialRecord& t : result.history) seen.insert(t.params);
    CHECK(seen.size() == result.history.size());

    const TuneResult again = tune(objective, space, opt);
    REQUIRE(again.history.size() == result.history.size());
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        CHECK(again.history[i].params == result.history[i].params);
        CHECK(again.history[i].objective == result.history[i].objective);
    }
    CHECK(again.best.params == result.best.params);
}

TEST_CASE("trials that throw or return out-of-range values become failures") {
    SearchSpace space;
    space.dims.push_back({"x", 1, 10, false});
    const auto objective = [](std::span<const int> p) -> double {
        if (p[0] > 7) throw std::runtime_error("region is off limits");
        if (p[0] == 1) return 1.5;  // out of [0, 1], rejected by the tuner
        return static_cast<double>(p[0]) / 10.0;
    };
    TuneOptions opt;
    opt.n_iterations = 10;
    opt.n_initial = 10;  // the whole 10-point space gets probed
    opt.seed = 7;
    const TuneResult result = tune(objective, space, opt);

    CHECK(result.history.size() + result.failures.size() == 10);
    CHECK(!result.failures.empty());
    for (const TrialFailure& f : result.failures) {
        const bool thrown = f.params[0] > 7;
        const bool out_of_range = f.params[0] == 1;
        CHECK((thrown || out_of_range));
        if (thrown) CHECK(f.message == "region is off limits");
        if (out_of_range) CHECK(f.message.find("outside [0, 1]") != std::string::npos);
    }
    for (const TrialRecord& t : result.history) {
        CHECK(t.params[0] > 1);
        CHECK(t.params[0] <= 7);
    }
    CHECK(result.best.params == std::vector<int>{7});
}

TEST_CASE("tuning throws once every trial has failed") {
    SearchSpace space;
    space.dims.push_back({"x", 1, 4, false});
    const auto objective = [](std::span<const int>) -> double {
        throw std::runtime_error("always broken");
    };
    TuneOptions opt;
    opt.n_iterations = 3;
    opt.n_initial = 3;
    CHECK_THROWS_WITH_AS(tune(objective, space, opt), doctest::Contains("all tuning trials"),
                         DataError);
}

TEST_CASE("a single-point space is probed repeatedly without diverging") {
    SearchSpace space;
    space.dims.push_back({"x", 5, 5, false});
    const auto objective = [](std::span<const int> p) {
        return static_cast<double>(p[0]) / 10.0;
    };
    TuneOptions opt;
    opt.n_iterations = 2;
    opt.n_initial = 1;
    const TuneResult result = tune(objective, space, opt);
    REQUIRE(result.history.size() == 2);
    for (const TrialRecord& t : result.history) CHECK(t.params == std::vector<int>{5});
    CHECK(result.best.objective == 0.5);
}

TEST_CASE("history CSV and best JSON render the stored trials") {
    SearchSpace space = two_dim_space(1, 500);
    TuneResult result;
    result.history.push_back({{3, 5}, 0.25, 0.0});
    result.history.push_back({{10, 2}, 0.5, 0.0});
    result.best = result.history.back();
    result.failures.push_back({{499, 1}, "boom"});

    std::ostringstream out;
    write_history_csv(out, space, result);
    CHECK(out.str() ==
          "trial,splits,learners,objective,wall_time_s\n"
          "1,3,5,0.25,0\n"
          "2,10,2,0.5,0\n");

    const nlohmann::json j = nlohmann::json::parse(best_to_json_string(space, result));
    CHECK(j.at("format") == "s4cast-tune-best");
    CHECK(j.at("version") == 1);
    CHECK(j.at("params").at("splits") == 10);
    CHECK(j.at("params").at("learners") == 2);
    CHECK(j.at("objective") == 0.5);
    CHECK(j.at("trials") == 2);
    CHECK(j.at("failures") == 1);
}
