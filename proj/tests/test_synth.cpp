#include <doctest.h>

#include <cmath>
#include <vector>

#include "s4cast/calendar.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/pipeline.hpp"
#include "s4cast/synth.hpp"

using namespace s4cast;

TEST_CASE("apportionment hits the published 1/1000-scale counts") {
    // Proportions taken from a (3788881, 157163, 22959) class census scaled
    // down to 3969 rows.
    const std::array<double, kNumClasses> proportions{
        3788881.0 / 3969003.0, 157163.0 / 3969003.0, 22959.0 / 3969003.0};
    const auto counts = apportion_counts(3969, proportions);
    CHECK(counts[0] == 3789);
    CHECK(counts[1] == 157);
    CHECK(counts[2] == 23);
}

TEST_CASE("largest-remainder apportionment is exact and deterministic") {
    SUBCASE("even thirds give the leftover row to the lowest class") {
        const auto counts = apportion_counts(10, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        CHECK(counts == std::array<std::size_t, 3>{4, 3, 3});
    }
    SUBCASE("the largest fractional part wins the leftover") {
        const auto counts = apportion_counts(7, {0.5, 0.3, 0.2});
        CHECK(counts == std::array<std::size_t, 3>{4, 2, 1});
    }
    SUBCASE("a degenerate single-class split is allowed") {
        const auto counts = apportion_counts(9, {0.0, 1.0, 0.0});
        CHECK(counts == std::array<std::size_t, 3>{0, 9, 0});
    }
    SUBCASE("counts always sum to the requested rows") {
        const std::array<std::array<double, 3>, 4> cases{{
            {0.2, 0.5, 0.3},
            {0.999, 0.0005, 0.0005},
            {1.0 / 3, 1.0 / 3, 1.0 / 3},
            {0.07, 0.31, 0.62},
        }};
        for (const auto& p : cases) {
            for (const std::size_t n : {1UL, 2UL, 17UL, 100UL, 3969UL}) {
                const auto counts = apportion_counts(n, p);
                CHECK(counts[0] + counts[1] + counts[2] == n);
            }
        }
    }
}

TEST_CASE("spec validation rejects malformed recipes") {
    SynthSpec ok;
    ok.validate();

    SynthSpec empty;
    empty.n_rows = 0;
    CHECK_THROWS_AS(empty.validate(), ConfigError);

    SynthSpec negative;
    negative.class_proportions = {0.5, 0.7, -0.2};
    CHECK_THROWS_AS(negative.validate(), ConfigError);

    SynthSpec off_sum;
    off_sum.class_proportions = {0.5, 0.3, 0.1};
    CHECK_THROWS_WITH_AS(off_sum.validate(), doctest::Contains("sum to 1"), ConfigError);

    SynthSpec bad_sep;
    bad_sep.separation = -1.0;
    CHECK_THROWS_AS(bad_sep.validate(), ConfigError);

    SynthSpec bad_noise;
    bad_noise.noise_scale = -0.5;
    CHECK_THROWS_AS(bad_noise.validate(), ConfigError);
}

TEST_CASE("generation is deterministic in the seed") {
    SynthSpec spec;
    spec.n_rows = 400;
    spec.seed = 77;
    const SynthOutput a = generate(spec);
    const SynthOutput b = generate(spec);
    CHECK(a.dataset.fingerprint() == b.dataset.fingerprint());
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.records[123].s4 == b.records[123].s4);
    CHECK(a.solar[17].f107 == b.solar[17].f107);

    SynthSpec other = spec;
    other.seed = 78;
    CHECK(generate(other).dataset.fingerprint() != a.dataset.fingerprint());
}

TEST_CASE("class counts match the apportionment exactly") {
    SynthSpec spec;
    spec.n_rows = 300;
    spec.class_proportions = {0.5, 0.3, 0.2};
    spec.seed = 5;
    const SynthOutput out = generate(spec);
    CHECK(out.dataset.size() == 300);
    CHECK(out.dataset.class_counts() ==
          apportion_counts(300, spec.class_proportions));
}

TEST_CASE("records stay strictly inside their class S4 bins") {
    SynthSpec spec;
    spec.n_rows = 500;
    spec.seed = 11;
    const SynthOutput out = generate(spec);
    REQUIRE(out.records.size() == out.dataset.size());
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        const double s4 = out.records[i].s4;
        CHECK(s4 >= 0.05);          // never triggers the floor
        CHECK(s4 < 1.0);
        // Labels agree with the classifier by construction, away from the
        // bin edges.
        CHECK(classify_s4(s4) == out.dataset[i].y);
        CHECK(out.records[i].elevation_deg >= 20.0);  // never triggers the cutoff
    }
}

TEST_CASE("records are time-ordered and span sixty solar days") {
    SynthSpec spec;
    spec.n_rows = 350;
    spec.seed = 3;
    const SynthOutput out = generate(spec);

    for (std::size_t i = 1; i < out.records.size(); ++i) {
        CHECK(out.records[i - 1].timestamp <= out.records[i].timestamp);
    }

    REQUIRE(out.solar.size() == 60);
    CHECK(out.solar.front().date == parse_utc_date("2014-03-01"));
    CHECK(out.solar.back().date == parse_utc_date("2014-04-29"));
    for (std::size_t d = 0; d < out.solar.size(); ++d) {
        const SolarDay& sd = out.solar[d];
        if (d > 0) {
            using namespace std::chrono;
            CHECK(sys_days{sd.date} - sys_days{out.solar[d - 1].date} == days{1});
        }
        CHECK(!sd.f107_missing);
        CHECK(sd.kp >= 0.0);
        CHECK(sd.kp <= 9.0);
        CHECK(sd.ssn == std::round(sd.ssn));  // whole-number sunspot counts
        CHECK(sd.f107 >= 65.0);
        CHECK(sd.f107 <= 300.0);
    }
}

TEST_CASE("the dataset survives the pipeline without losing a row") {
    SynthSpec spec;
    spec.n_rows = 800;
    spec.separation = 1.5;
    spec.seed = 21;
    const SynthOutput out = generate(spec);

    StageCounts counts;
    const Dataset processed =
        run_pipeline(out.records, out.solar, PipelineOptions{}, &counts);

    CHECK(counts.input_rows == 800);
    CHECK(counts.after_elevation_filter == 800);
    CHECK(counts.after_s4_floor == 800);
    CHECK(counts.excluded_no_solar_day == 0);
    CHECK(counts.excluded_f107_missing == 0);
    CHECK(counts.excluded_unmappable == 0);
    CHECK(counts.joined == 800);
    CHECK(counts.class_counts == out.dataset.class_counts());

    // Bit-exact reproduction, raw-record longitudes included.
    CHECK(processed.fingerprint() == out.dataset.fingerprint());
}

TEST_CASE("feature values remain inside their documented ranges") {
    SynthSpec spec;
    spec.n_rows = 600;
    spec.noise_scale = 2.0;
    spec.seed = 9;
    const SynthOutput out = generate(spec);
    for (const Dataset::Row& row : out.dataset.rows()) {
        CHECK(row.x.doy >= 60);   // 2014-03-01
        CHECK(row.x.doy <= 119);  // 2014-04-29
        CHECK(row.x.hod >= 0);
        CHECK(row.x.hod <= 23);
        CHECK(row.x.ipp_lat_deg >= -89.0);
        CHECK(row.x.ipp_lat_deg <= 89.0);
        CHECK(row.x.ipp_lon_deg >= 0.0);
        CHECK(row.x.ipp_lon_deg < 360.0);
    }
}

TEST_CASE("separation widens the gap between class feature means") {
    auto lat_gap = [](double separation) {
        SynthSpec spec;
        spec.n_rows = 900;
        spec.separation = separation;
        spec.seed = 31;
        const SynthOutput out = generate(spec);
        std::array<double, kNumClasses> mean{};
        std::array<std::size_t, kNumClasses> n{};
        for (const Dataset::Row& row : out.dataset.rows()) {
            const auto c = static_cast<std::size_t>(severity_index(row.y));
            mean[c] += row.x.ipp_lat_deg;
            n[c]++;
        }
        for (std::size_t c = 0; c < kNumClasses; ++c) mean[c] /= static_cast<double>(n[c]);
        return mean[2] - mean[0];
    };
    CHECK(std::abs(lat_gap(0.0)) < 0.5);
    CHECK(lat_gap(2.0) > 8.0);  // 3 degrees of latitude per unit separation per class step
}
