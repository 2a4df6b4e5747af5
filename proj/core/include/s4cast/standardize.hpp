#pragma once

#include <span>
#include <vector>

#include "s4cast/dataset.hpp"

namespace s4cast {

/// Per-feature z-score scaler fitted on training data only.
///
/// Features with zero spread are mapped to 0 by pinning the divisor to 1,
/// so constant columns survive scaling without producing NaN.
class Scaler {
public:
    static Scaler fit(const FeatureMatrix& x);

    /// Rebuild from serialized constants; sizes must match and divisors
    /// must be positive.
    static Scaler from_constants(std::vector<double> mean, std::vector<double> stddev);

    void apply_in_place(FeatureMatrix& x) const;
    FeatureMatrix apply(const FeatureMatrix& x) const;
    std::vector<double> apply_row(std::span<const double> row) const;

    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& stddev() const { return stddev_; }
    std::size_t n_features() const { return mean_.size(); }

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
};

}  // namespace s4cast
