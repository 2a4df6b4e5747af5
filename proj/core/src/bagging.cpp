#include "s4cast/bagging.hpp"

#include <algorithm>

#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast {

BaggedTrees BaggedTrees::fit(const FeatureMatrix& x, std::span<const int> y,
                             const BagOptions& opt, BagTrace* trace) {
    if (x.n_rows == 0) throw DataError("cannot train bagged trees on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");
    if (opt.n_learners < 1) throw ConfigError("n_learners must be at least 1");

    const std::size_t n = x.n_rows;
    BaggedTrees model;
    model.options_ = opt;
    TreeOptions tree_opt{opt.max_splits};

    FeatureMatrix sample;
    sample.n_rows = n;
    sample.n_cols = x.n_cols;
    sample.data.resize(n * x.n_cols);
    std::vector<int> sample_y(n);
    std::vector<std::size_t> indices(n);

    for (int t = 0; t < opt.n_learners; ++t) {
        if (opt.bootstrap) {
            Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(t)));
            for (std::size_t i = 0; i < n; ++i) indices[i] = rng.uniform_index(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double* src = x.row(indices[i]);
                std::copy(src, src + x.n_cols, sample.row(i));
                sample_y[i] = y[indices[i]];
            }
            if (trace != nullptr) trace->bootstrap_indices.push_back(indices);
            model.trees_.push_back(Tree::fit(sample, sample_y, tree_opt));
        } else {
            model.trees_.push_back(Tree::fit(x, y, tree_opt));
        }
    }
    return model;
}

BaggedTrees BaggedTrees::from_state(std::vector<Tree> trees, BagOptions opt) {
    if (trees.empty()) throw DataError("bagged-tree state has no members");
    BaggedTrees model;
    model.trees_ = std::move(trees);
    model.options_ = opt;
    return model;
}

std::array<double, kNumClasses> BaggedTrees::predict_scores(const double* row) const {
    std::array<double, kNumClasses> mean{};
    for (const Tree& tree : trees_) {
        const auto& d = tree.predict_distribution(row);
        for (int c = 0; c < kNumClasses; ++c) mean[static_cast<std::size_t>(c)] += d[c];
    }
    for (double& m : mean) m /= static_cast<double>(trees_.size());
    return mean;
}

int BaggedTrees::predict_index(const double* row) const {
    return argmax_index(predict_scores(row));
}

}  // namespace s4cast
