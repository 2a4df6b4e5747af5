#include "s4cast/boosting.hpp"

#include <cmath>

#include "s4cast/errors.hpp"

namespace s4cast {

namespace {
constexpr double kErrFloor = 1e-12;
}

AdaBoost AdaBoost::fit(const FeatureMatrix& x, std::span<const int> y, const BoostOptions& opt,
                       BoostTrace* trace) {
    if (x.n_rows == 0) throw DataError("cannot train AdaBoost on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");
    if (opt.n_learners < 1) throw ConfigError("n_learners must be at least 1");
    if (opt.learning_rate < 0.0) throw ConfigError("learning_rate must be non-negative");

    const std::size_t n = x.n_rows;
    const double stop_err = 1.0 - 1.0 / static_cast<double>(kNumClasses);

    AdaBoost model;
    model.options_ = opt;
    for (int label : y)
        model.class_priors_[static_cast<std::size_t>(label)] += 1.0 / static_cast<double>(n);

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<int> predicted(n);
    TreeOptions tree_opt{opt.max_splits};

    for (int t = 0; t < opt.n_learners; ++t) {
        Tree tree = Tree::fit_weighted(x, y, w, tree_opt);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            predicted[i] = tree.predict_index(x.row(i));
            if (predicted[i] != y[i]) err += w[i];
        }
        if (err >= stop_err) break;

        double err_for_alpha = err > kErrFloor ? err : kErrFloor;
        double alpha = opt.learning_rate *
                       (std::log((1.0 - err_for_alpha) / err_for_alpha) +
                        std::log(static_cast<double>(kNumClasses - 1)));
        model.trees_.push_back(std::move(tree));
        model.alphas_.push_back(alpha);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (predicted[i] != y[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (double& wi : w) wi /= total;

        if (trace != nullptr) {
            trace->errors.push_back(err);
            trace->alphas.push_back(alpha);
            trace->weights_after.push_back(w);
        }
        if (err == 0.0) break;
    }
    return model;
}

AdaBoost AdaBoost::from_state(std::vector<Tree> trees, std::vector<double> alphas,
                              std::array<double, kNumClasses> class_priors, BoostOptions opt) {
    if (trees.size() != alphas.size())
        throw DataError("AdaBoost tree count does not match alpha count");
    double prior_sum = 0.0;
    for (double p : class_priors) {
        if (p < 0.0) throw DataError("AdaBoost class priors must be non-negative");
        prior_sum += p;
    }
    if (std::abs(prior_sum - 1.0) > 1e-9)
        throw DataError("AdaBoost class priors must sum to 1");
    AdaBoost model;
    model.trees_ = std::move(trees);
    model.alphas_ = std::move(alphas);
    model.class_priors_ = class_priors;
    model.options_ = opt;
    return model;
}

std::array<double, kNumClasses> AdaBoost::predict_scores(const double* row) const {
    std::array<double, kNumClasses> scores{};
    for (std::size_t t = 0; t < trees_.size(); ++t) {
        scores[static_cast<std::size_t>(trees_[t].predict_index(row))] += alphas_[t];
    }
    return scores;
}

int AdaBoost::predict_index(const double* row) const {
    std::array<double, kNumClasses> scores = predict_scores(row);
    bool all_zero = true;
    for (double s : scores)
        if (s != 0.0) all_zero = false;
    if (all_zero) return argmax_index(class_priors_);
    return argmax_index(scores);
}

}  // namespace s4cast
