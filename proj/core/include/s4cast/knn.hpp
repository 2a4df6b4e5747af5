#pragma once

#include <array>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/standardize.hpp"

namespace s4cast {

struct KnnOptions {
    int k = 10;
};

/// Lazy k-nearest-neighbour classifier over standardized exemplars.
/// Class score is the squared-inverse-distance sum over the k nearest
/// neighbours; an exact-distance-zero neighbour wins outright (its class
/// score becomes +inf). Neighbour ranking ties resolve to the lower
/// exemplar index, so predictions are fully deterministic.
class Knn {
public:
    static Knn fit(const FeatureMatrix& x, std::span<const int> y, const KnnOptions& opt);

    /// Rebuild from serialized state; exemplars are already standardized.
    static Knn from_state(Scaler scaler, FeatureMatrix exemplars, std::vector<int> labels,
                          int k);

    std::array<double, kNumClasses> predict_scores(std::span<const double> raw_row) const;
    int predict_index(std::span<const double> raw_row) const;

    const Scaler& scaler() const { return scaler_; }
    const FeatureMatrix& exemplars() const { return exemplars_; }
    const std::vector<int>& labels() const { return labels_; }
    int k() const { return k_; }

private:
    Scaler scaler_;
    FeatureMatrix exemplars_;
    std::vector<int> labels_;
    int k_ = 10;
};

}  // namespace s4cast
