#include "s4cast/standardize.hpp"

#include <cmath>
#include <string>

#include "s4cast/errors.hpp"

namespace s4cast {

Scaler Scaler::fit(const FeatureMatrix& x) {
    if (x.n_rows == 0) throw DataError("cannot fit scaler on empty matrix");
    Scaler s;
    s.mean_.resize(x.n_cols);
    s.stddev_.resize(x.n_cols);
    const auto n = static_cast<double>(x.n_rows);
    for (std::size_t j = 0; j < x.n_cols; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < x.n_rows; ++i) sum += x.at(i, j);
        double mu = sum / n;
        double ss = 0.0;
        for (std::size_t i = 0; i < x.n_rows; ++i) {
            double d = x.at(i, j) - mu;
            ss += d * d;
        }
        double sd = std::sqrt(ss / n);
        s.mean_[j] = mu;
        s.stddev_[j] = sd > 0.0 ? sd : 1.0;
    }
    return s;
}

Scaler Scaler::from_constants(std::vector<double> mean, std::vector<double> stddev) {
    if (mean.size() != stddev.size())
        throw DataError("scaler mean/stddev size mismatch: " + std::to_string(mean.size()) +
                        " vs " + std::to_string(stddev.size()));
    for (double sd : stddev)
        if (!(sd > 0.0)) throw DataError("scaler stddev entries must be positive");
    Scaler s;
    s.mean_ = std::move(mean);
    s.stddev_ = std::move(stddev);
    return s;
}

void Scaler::apply_in_place(FeatureMatrix& x) const {
    if (x.n_cols != mean_.size())
        throw DataError("scaler fitted on " + std::to_string(mean_.size()) +
                        " features, matrix has " + std::to_string(x.n_cols));
    for (std::size_t i = 0; i < x.n_rows; ++i) {
        double* row = x.row(i);
        for (std::size_t j = 0; j < x.n_cols; ++j) {
            row[j] = (row[j] - mean_[j]) / stddev_[j];
        }
    }
}

FeatureMatrix Scaler::apply(const FeatureMatrix& x) const {
    FeatureMatrix out = x;
    apply_in_place(out);
    return out;
}

std::vector<double> Scaler::apply_row(std::span<const double> row) const {
    if (row.size() != mean_.size())
        throw DataError("scaler fitted on " + std::to_string(mean_.size()) +
                        " features, row has " + std::to_string(row.size()));
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] = (row[j] - mean_[j]) / stddev_[j];
    }
    return out;
}

}  // namespace s4cast
