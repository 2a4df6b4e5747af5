#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/standardize.hpp"

namespace s4cast {

struct SvmOptions {
    double kernel_scale = 0.66;
    double box_constraint = 1.0;
    double tolerance = 1e-3;
    /// Bound on full SMO sweeps per binary machine before giving up.
    int max_sweeps = 1000;
    std::uint64_t seed = 0;
};

/// One binary soft-margin machine of the one-vs-one ensemble. Support
/// vectors live in standardized feature space; dual coefficients are
/// alpha_i * y_i with y = +1 for the lower class index of the pair.
struct BinarySvm {
    int positive_class = 0;
    int negative_class = 1;
    FeatureMatrix support_vectors;
    std::vector<double> dual_coef;
    double bias = 0.0;

    double decision(std::span<const double> standardized_row, double kernel_scale) const;
};

/// Gaussian-kernel SVM trained by simplified SMO, multiclass via one-vs-one
/// majority vote. A vote tie falls back to the larger summed decision
/// magnitude, then the lowest class index. SMO terminates once a full sweep
/// finds no KKT violator it can still improve; exceeding the sweep bound
/// raises NumericError carrying the sweep count.
class SvmOvo {
public:
    static SvmOvo fit(const FeatureMatrix& x, std::span<const int> y, const SvmOptions& opt);

    static SvmOvo from_state(Scaler scaler, std::vector<BinarySvm> machines,
                             SvmOptions options);

    /// Vote totals per class (each machine contributes one vote).
    std::array<double, kNumClasses> predict_scores(std::span<const double> raw_row) const;
    int predict_index(std::span<const double> raw_row) const;

    const Scaler& scaler() const { return scaler_; }
    const std::vector<BinarySvm>& machines() const { return machines_; }
    const SvmOptions& options() const { return options_; }

private:
    Scaler scaler_;
    std::vector<BinarySvm> machines_;
    SvmOptions options_;
};

}  // namespace s4cast
