#pragma once

#include <array>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"

namespace s4cast {

/// Gaussian naive Bayes: per class and feature, a normal class-conditional
/// likelihood with empirical mean and unbiased (n-1) variance. Variances are
/// clamped below at 1e-9 times the global feature variance so constant
/// columns stay finite. Classes absent from training keep a zero prior and
/// are never predicted; classes present with a single row are rejected
/// because their variance is undefined.
class GaussianNb {
public:
    struct ClassStats {
        bool present = false;
        double log_prior = 0.0;
        std::vector<double> mean;
        std::vector<double> variance;
    };

    static GaussianNb fit(const FeatureMatrix& x, std::span<const int> y);
    static GaussianNb from_state(std::array<ClassStats, kNumClasses> stats);

    /// Log prior plus summed log Gaussian densities; -inf for absent classes.
    std::array<double, kNumClasses> log_posterior(std::span<const double> row) const;
    int predict_index(std::span<const double> row) const;

    const std::array<ClassStats, kNumClasses>& class_stats() const { return stats_; }

private:
    std::array<ClassStats, kNumClasses> stats_{};
};

}  // namespace s4cast
