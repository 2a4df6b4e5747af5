#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"

namespace s4cast {

/// Gini diversity index 1 - sum(p_i^2); range [0, 2/3] for three classes.
/// Throws DataError when all counts are zero.
double gini_impurity(const std::array<std::uint64_t, kNumClasses>& counts);

/// Flat tree node. feature == -1 marks a leaf; internal nodes always have
/// both children set. Every node carries the empirical class distribution
/// of the training rows that reached it.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::array<double, kNumClasses> distribution{};
};

struct TreeOptions {
    /// Global budget of internal nodes across the whole tree.
    int max_splits = 100;
};

/// CART-style classification tree grown best-first: each step expands the
/// frontier leaf whose best (feature, threshold) gives the largest weighted
/// impurity decrease. Growth stops at the split budget, on pure nodes, or
/// when no candidate reduces impurity. Thresholds are midpoints between
/// consecutive distinct feature values; routing sends value < threshold left.
class Tree {
public:
    /// Uniform-weight training. y holds 0-based class indices.
    static Tree fit(const FeatureMatrix& x, std::span<const int> y, const TreeOptions& opt);

    /// Weighted training used by boosting. Weights must be non-negative with
    /// positive total; an empty span means uniform.
    static Tree fit_weighted(const FeatureMatrix& x, std::span<const int> y,
                             std::span<const double> weights, const TreeOptions& opt);

    /// Rebuild from serialized nodes; validates structural invariants.
    static Tree from_nodes(std::vector<TreeNode> nodes);

    const std::array<double, kNumClasses>& predict_distribution(const double* row) const;
    int predict_index(const double* row) const;

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    int n_internal() const;
    int n_leaves() const;

private:
    std::vector<TreeNode> nodes_;
};

/// Argmax over a score triple with ties broken to the lowest class index.
int argmax_index(const std::array<double, kNumClasses>& scores);

}  // namespace s4cast
