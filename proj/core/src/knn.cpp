#include "s4cast/knn.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "s4cast/errors.hpp"
#include "s4cast/tree.hpp"

namespace s4cast {

Knn Knn::fit(const FeatureMatrix& x, std::span<const int> y, const KnnOptions& opt) {
    if (opt.k < 1) throw ConfigError("k must be at least 1");
    if (x.n_rows == 0) throw DataError("cannot train KNN on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");
    if (static_cast<std::size_t>(opt.k) > x.n_rows)
        throw DataError("k = " + std::to_string(opt.k) + " exceeds training size " +
                        std::to_string(x.n_rows));
    Knn knn;
    knn.scaler_ = Scaler::fit(x);
    knn.exemplars_ = knn.scaler_.apply(x);
    knn.labels_.assign(y.begin(), y.end());
    knn.k_ = opt.k;
    return knn;
}

Knn Knn::from_state(Scaler scaler, FeatureMatrix exemplars, std::vector<int> labels, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > exemplars.n_rows)
        throw DataError("stored k is inconsistent with exemplar count");
    if (labels.size() != exemplars.n_rows)
        throw DataError("label count does not match exemplar count");
    Knn knn;
    knn.scaler_ = std::move(scaler);
    knn.exemplars_ = std::move(exemplars);
    knn.labels_ = std::move(labels);
    knn.k_ = k;
    return knn;
}

std::array<double, kNumClasses> Knn::predict_scores(std::span<const double> raw_row) const {
    std::vector<double> q = scaler_.apply_row(raw_row);
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(exemplars_.n_rows);
    for (std::size_t i = 0; i < exemplars_.n_rows; ++i) {
        const double* e = exemplars_.row(i);
        double d2 = 0.0;
        for (std::size_t j = 0; j < exemplars_.n_cols; ++j) {
            double d = q[j] - e[j];
            d2 += d * d;
        }
        dist.emplace_back(d2, i);
    }
    auto kth = dist.begin() + k_;
    std::partial_sort(dist.begin(), kth, dist.end());

    std::array<double, kNumClasses> scores{};
    if (dist.front().first == 0.0) {
        scores[static_cast<std::size_t>(labels_[dist.front().second])] =
            std::numeric_limits<double>::infinity();
        return scores;
    }
    for (auto it = dist.begin(); it != kth; ++it) {
        scores[static_cast<std::size_t>(labels_[it->second])] += 1.0 / it->first;
    }
    return scores;
}

int Knn::predict_index(std::span<const double> raw_row) const {
    return argmax_index(predict_scores(raw_row));
}

}  // namespace s4cast
