#include <doctest.h>

#include <cmath>

#include "s4cast/errors.hpp"
#include "s4cast/standardize.hpp"

using namespace s4cast;

TEST_CASE("fit computes population moments per column") {
    const auto x = FeatureMatrix::from_rows({{1.0, 10.0}, {3.0, 10.0}, {5.0, 10.0}});
    const Scaler s = Scaler::fit(x);
    REQUIRE(s.n_features() == 2);
    CHECK(s.mean()[0] == 3.0);
    CHECK(s.mean()[1] == 10.0);
    CHECK(s.stddev()[0] == doctest::Approx(std::sqrt(8.0 / 3.0)).epsilon(1e-15));
    CHECK(s.stddev()[1] == 1.0);  // zero spread pins the divisor to 1
}

TEST_CASE("apply centers and scales; constant columns go to zero") {
    const auto x = FeatureMatrix::from_rows({{1.0, 10.0}, {3.0, 10.0}, {5.0, 10.0}});
    const Scaler s = Scaler::fit(x);
    const FeatureMatrix z = s.apply(x);
    CHECK(z.at(0, 0) == doctest::Approx(-2.0 / std::sqrt(8.0 / 3.0)).epsilon(1e-15));
    CHECK(z.at(1, 0) == 0.0);
    for (std::size_t r = 0; r < 3; ++r) CHECK(z.at(r, 1) == 0.0);

    // Standardized columns have zero mean and unit population variance.
    double mean = 0.0, var = 0.0;
    for (std::size_t r = 0; r < 3; ++r) mean += z.at(r, 0);
    mean /= 3.0;
    for (std::size_t r = 0; r < 3; ++r) var += (z.at(r, 0) - mean) * (z.at(r, 0) - mean);
    var /= 3.0;
    CHECK(mean == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("apply_row matches apply on the matrix") {
    const auto x = FeatureMatrix::from_rows({{2.0, -1.0}, {4.0, 5.0}, {9.0, 2.0}});
    const Scaler s = Scaler::fit(x);
    const FeatureMatrix z = s.apply(x);
    for (std::size_t r = 0; r < x.n_rows; ++r) {
        const auto row = s.apply_row(x.row_span(r));
        REQUIRE(row.size() == 2);
        CHECK(row[0] == z.at(r, 0));
        CHECK(row[1] == z.at(r, 1));
    }
}

TEST_CASE("apply_in_place rejects column mismatches") {
    const auto x = FeatureMatrix::from_rows({{1.0, 2.0}});
    const Scaler s = Scaler::fit(x);
    auto wrong = FeatureMatrix::from_rows({{1.0, 2.0, 3.0}});
    CHECK_THROWS_AS(s.apply_in_place(wrong), DataError);
}

TEST_CASE("fit rejects an empty matrix") {
    FeatureMatrix empty;
    CHECK_THROWS_AS(Scaler::fit(empty), DataError);
}

TEST_CASE("from_constants validates its inputs") {
    CHECK_NOTHROW(Scaler::from_constants({0.0, 1.0}, {1.0, 2.0}));
    CHECK_THROWS_AS(Scaler::from_constants({0.0}, {1.0, 2.0}), DataError);
    CHECK_THROWS_AS(Scaler::from_constants({0.0}, {0.0}), DataError);
    CHECK_THROWS_AS(Scaler::from_constants({0.0}, {-1.0}), DataError);

    const Scaler s = Scaler::from_constants({10.0}, {2.0});
    const auto row = s.apply_row(std::vector<double>{14.0});
    CHECK(row[0] == 2.0);
}
