#include "s4cast/naive_bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "s4cast/errors.hpp"
#include "s4cast/tree.hpp"

namespace s4cast {

namespace {
constexpr double kVarianceFloorScale = 1e-9;
constexpr double kVarianceFloorAbs = 1e-12;
}  // namespace

GaussianNb GaussianNb::fit(const FeatureMatrix& x, std::span<const int> y) {
    if (x.n_rows == 0) throw DataError("cannot train naive Bayes on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");

    std::array<std::size_t, kNumClasses> n_per_class{};
    for (int label : y) n_per_class[static_cast<std::size_t>(label)]++;
    for (int c = 0; c < kNumClasses; ++c) {
        if (n_per_class[static_cast<std::size_t>(c)] == 1)
            throw DataError("class " + std::to_string(c + 1) +
                            " has a single row; variance is undefined");
    }

    // Global per-feature variance sets the clamp for degenerate class spreads.
    std::vector<double> global_var(x.n_cols, 0.0);
    for (std::size_t j = 0; j < x.n_cols; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.n_rows; ++i) sum += x.at(i, j);
        double mu = sum / static_cast<double>(x.n_rows);
        double ss = 0.0;
        for (std::size_t i = 0; i < x.n_rows; ++i) {
            double d = x.at(i, j) - mu;
            ss += d * d;
        }
        global_var[j] = x.n_rows > 1 ? ss / static_cast<double>(x.n_rows - 1) : 0.0;
    }

    GaussianNb nb;
    for (int c = 0; c < kNumClasses; ++c) {
        std::size_t n = n_per_class[static_cast<std::size_t>(c)];
        ClassStats& st = nb.stats_[static_cast<std::size_t>(c)];
        if (n == 0) continue;
        st.present = true;
        st.log_prior =
            std::log(static_cast<double>(n) / static_cast<double>(x.n_rows));
        st.mean.assign(x.n_cols, 0.0);
        st.variance.assign(x.n_cols, 0.0);
        for (std::size_t i = 0; i < x.n_rows; ++i) {
            if (y[i] != c) continue;
            for (std::size_t j = 0; j < x.n_cols; ++j) st.mean[j] += x.at(i, j);
        }
        for (std::size_t j = 0; j < x.n_cols; ++j) st.mean[j] /= static_cast<double>(n);
        for (std::size_t i = 0; i < x.n_rows; ++i) {
            if (y[i] != c) continue;
            for (std::size_t j = 0; j < x.n_cols; ++j) {
                double d = x.at(i, j) - st.mean[j];
                st.variance[j] += d * d;
            }
        }
        for (std::size_t j = 0; j < x.n_cols; ++j) {
            double var = st.variance[j] / static_cast<double>(n - 1);
            double floor = kVarianceFloorScale * global_var[j];
            if (!(floor > 0.0)) floor = kVarianceFloorAbs;
            st.variance[j] = var > floor ? var : floor;
        }
    }
    return nb;
}

GaussianNb GaussianNb::from_state(std::array<ClassStats, kNumClasses> stats) {
    std::size_t n_features = 0;
    bool any_present = false;
    for (const ClassStats& st : stats) {
        if (!st.present) continue;
        if (st.mean.size() != st.variance.size())
            throw DataError("naive Bayes mean/variance size mismatch");
        if (any_present && st.mean.size() != n_features)
            throw DataError("naive Bayes classes disagree on feature count");
        for (double v : st.variance)
            if (!(v > 0.0)) throw DataError("naive Bayes variances must be positive");
        n_features = st.mean.size();
        any_present = true;
    }
    if (!any_present) throw DataError("naive Bayes state has no classes");
    GaussianNb nb;
    nb.stats_ = std::move(stats);
    return nb;
}

std::array<double, kNumClasses> GaussianNb::log_posterior(std::span<const double> row) const {
    std::array<double, kNumClasses> lp{};
    for (int c = 0; c < kNumClasses; ++c) {
        const ClassStats& st = stats_[static_cast<std::size_t>(c)];
        if (!st.present) {
            lp[static_cast<std::size_t>(c)] = -std::numeric_limits<double>::infinity();
            continue;
        }
        if (row.size() != st.mean.size())
            throw DataError("query has " + std::to_string(row.size()) +
                            " features, model expects " + std::to_string(st.mean.size()));
        double acc = st.log_prior;
        for (std::size_t j = 0; j < row.size(); ++j) {
            double d = row[j] - st.mean[j];
            acc += -0.5 * std::log(2.0 * std::numbers::pi * st.variance[j]) -
                   d * d / (2.0 * st.variance[j]);
        }
        lp[static_cast<std::size_t>(c)] = acc;
    }
    return lp;
}

int GaussianNb::predict_index(std::span<const double> row) const {
    return argmax_index(log_posterior(row));
}

}  // namespace s4cast
