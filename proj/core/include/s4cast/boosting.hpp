#pragma once

#include <array>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/tree.hpp"

namespace s4cast {

struct BoostOptions {
    int n_learners = 30;
    int max_splits = 20;
    double learning_rate = 0.1;
};

/// Per-round diagnostics captured during training for verification.
struct BoostTrace {
    std::vector<double> errors;
    std::vector<double> alphas;
    std::vector<std::vector<double>> weights_after;
};

/// Multiclass SAMME boosting of depth-limited trees (K = 3).
///
/// Round t trains a weighted tree, measures weighted error err_t, and sets
/// alpha_t = learning_rate * (ln((1-err_t)/err_t) + ln(K-1)). Misclassified
/// sample weights are multiplied by exp(alpha_t) and the vector renormalized.
/// Stop rules: err_t = 0 keeps the perfect tree (alpha computed with err
/// clamped to 1e-12) and ends boosting; err_t >= 1 - 1/K discards that round
/// and ends boosting. Prediction is argmax of alpha-weighted votes; when all
/// votes are zero (empty ensemble or learning_rate = 0) the class-prior
/// argmax is used.
class AdaBoost {
public:
    static AdaBoost fit(const FeatureMatrix& x, std::span<const int> y, const BoostOptions& opt,
                        BoostTrace* trace = nullptr);

    static AdaBoost from_state(std::vector<Tree> trees, std::vector<double> alphas,
                               std::array<double, kNumClasses> class_priors, BoostOptions opt);

    std::array<double, kNumClasses> predict_scores(const double* row) const;
    int predict_index(const double* row) const;

    const std::vector<Tree>& trees() const { return trees_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::array<double, kNumClasses>& class_priors() const { return class_priors_; }
    const BoostOptions& options() const { return options_; }

private:
    std::vector<Tree> trees_;
    std::vector<double> alphas_;
    std::array<double, kNumClasses> class_priors_{};
    BoostOptions options_;
};

}  // namespace s4cast
