#include "s4cast/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "s4cast/errors.hpp"

namespace s4cast {

double gini_impurity(const std::array<std::uint64_t, kNumClasses>& counts) {
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    if (total == 0) throw DataError("gini impurity undefined for all-zero counts");
    double sum_sq = 0.0;
    for (std::uint64_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

int argmax_index(const std::array<double, kNumClasses>& scores) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return best;
}

namespace {

// Weighted-purity score sum(w_c^2)/W. The impurity decrease of a split equals
// score(left) + score(right) - score(parent), which avoids cancellation from
// forming the three Gini values separately.
double purity_score(const std::array<double, kNumClasses>& wcounts, double total) {
    double s = 0.0;
    for (double w : wcounts) s += w * w;
    return s / total;
}

struct Frontier {
    int node_id = -1;
    std::vector<std::size_t> rows;
    std::array<double, kNumClasses> wcounts{};
    double weight = 0.0;
    double score = 0.0;
    bool has_split = false;
    int split_feature = -1;
    double split_threshold = 0.0;
    double gain = 0.0;
};

// Scans every feature for the midpoint threshold with the largest impurity
// decrease. Within one leaf, ties resolve to the lowest feature index and
// then the lowest threshold (strict > comparisons preserve the first best).
void find_best_split(const FeatureMatrix& x, std::span<const int> y, std::span<const double> w,
                     Frontier& leaf, std::vector<std::pair<double, std::size_t>>& scratch) {
    leaf.has_split = false;
    leaf.gain = 0.0;
    int live_classes = 0;
    for (double wc : leaf.wcounts)
        if (wc > 0.0) ++live_classes;
    if (live_classes < 2) return;

    for (std::size_t j = 0; j < x.n_cols; ++j) {
        scratch.clear();
        for (std::size_t r : leaf.rows) scratch.emplace_back(x.at(r, j), r);
        std::sort(scratch.begin(), scratch.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::array<double, kNumClasses> left{};
        double left_weight = 0.0;
        for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
            std::size_t r = scratch[i].second;
            double wr = w.empty() ? 1.0 : w[r];
            left[y[r]] += wr;
            left_weight += wr;
            double lo = scratch[i].first;
            double hi = scratch[i + 1].first;
            if (!(lo < hi)) continue;
            double thr = lo + (hi - lo) / 2.0;
            // Degenerate midpoints (adjacent doubles) would break the
            // value < threshold routing contract; skip them.
            if (!(lo < thr) || !(thr <= hi)) continue;
            double right_weight = leaf.weight - left_weight;
            if (!(left_weight > 0.0) || !(right_weight > 0.0)) continue;
            std::array<double, kNumClasses> right{};
            for (int c = 0; c < kNumClasses; ++c) right[c] = leaf.wcounts[c] - left[c];
            double gain =
                purity_score(left, left_weight) + purity_score(right, right_weight) - leaf.score;
            if (gain > leaf.gain) {
                leaf.gain = gain;
                leaf.has_split = true;
                leaf.split_feature = static_cast<int>(j);
                leaf.split_threshold = thr;
            }
        }
    }
}

std::array<double, kNumClasses> normalize(const std::array<double, kNumClasses>& wcounts,
                                          double total) {
    std::array<double, kNumClasses> d{};
    for (int c = 0; c < kNumClasses; ++c) d[c] = wcounts[c] / total;
    return d;
}

}  // namespace

Tree Tree::fit(const FeatureMatrix& x, std::span<const int> y, const TreeOptions& opt) {
    return fit_weighted(x, y, {}, opt);
}

Tree Tree::fit_weighted(const FeatureMatrix& x, std::span<const int> y,
                        std::span<const double> weights, const TreeOptions& opt) {
    if (x.n_rows == 0) throw DataError("cannot train a tree on an empty dataset");
    if (y.size() != x.n_rows) throw DataError("label count does not match row count");
    if (!weights.empty() && weights.size() != x.n_rows)
        throw DataError("weight count does not match row count");
    if (opt.max_splits < 0) throw ConfigError("max_splits must be non-negative");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= kNumClasses)
            throw DataError("class index out of range at row " + std::to_string(i));
    }

    Tree tree;
    std::vector<Frontier> frontier;
    std::vector<std::pair<double, std::size_t>> scratch;
    scratch.reserve(x.n_rows);

    Frontier root;
    root.node_id = 0;
    root.rows.resize(x.n_rows);
    for (std::size_t i = 0; i < x.n_rows; ++i) root.rows[i] = i;
    for (std::size_t i = 0; i < x.n_rows; ++i) {
        double wr = weights.empty() ? 1.0 : weights[i];
        if (wr < 0.0) throw DataError("sample weights must be non-negative");
        root.wcounts[y[i]] += wr;
        root.weight += wr;
    }
    if (!(root.weight > 0.0)) throw DataError("total sample weight must be positive");
    root.score = purity_score(root.wcounts, root.weight);
    tree.nodes_.push_back(TreeNode{-1, 0.0, -1, -1, normalize(root.wcounts, root.weight)});
    find_best_split(x, y, weights, root, scratch);
    frontier.push_back(std::move(root));

    int splits_done = 0;
    while (splits_done < opt.max_splits) {
        // Best frontier leaf; equal gains resolve to the earliest-created
        // node so growth order is fully deterministic.
        std::size_t best = frontier.size();
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            if (!frontier[i].has_split) continue;
            if (best == frontier.size() || frontier[i].gain > frontier[best].gain ||
                (frontier[i].gain == frontier[best].gain &&
                 frontier[i].node_id < frontier[best].node_id)) {
                best = i;
            }
        }
        if (best == frontier.size()) break;

        Frontier parent = std::move(frontier[best]);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(best));

        Frontier left, right;
        for (std::size_t r : parent.rows) {
            double wr = weights.empty() ? 1.0 : weights[r];
            if (x.at(r, static_cast<std::size_t>(parent.split_feature)) <
                parent.split_threshold) {
                left.rows.push_back(r);
                left.wcounts[y[r]] += wr;
                left.weight += wr;
            } else {
                right.rows.push_back(r);
                right.wcounts[y[r]] += wr;
                right.weight += wr;
            }
        }
        left.node_id = static_cast<int>(tree.nodes_.size());
        right.node_id = left.node_id + 1;
        left.score = purity_score(left.wcounts, left.weight);
        right.score = purity_score(right.wcounts, right.weight);

        TreeNode& pnode = tree.nodes_[static_cast<std::size_t>(parent.node_id)];
        pnode.feature = parent.split_feature;
        pnode.threshold = parent.split_threshold;
        pnode.left = left.node_id;
        pnode.right = right.node_id;
        tree.nodes_.push_back(TreeNode{-1, 0.0, -1, -1, normalize(left.wcounts, left.weight)});
        tree.nodes_.push_back(TreeNode{-1, 0.0, -1, -1, normalize(right.wcounts, right.weight)});

        find_best_split(x, y, weights, left, scratch);
        find_best_split(x, y, weights, right, scratch);
        frontier.push_back(std::move(left));
        frontier.push_back(std::move(right));
        ++splits_done;
    }
    return tree;
}

Tree Tree::from_nodes(std::vector<TreeNode> nodes) {
    if (nodes.empty()) throw DataError("tree must have at least one node");
    int n = static_cast<int>(nodes.size());
    for (int i = 0; i < n; ++i) {
        const TreeNode& node = nodes[static_cast<std::size_t>(i)];
        bool leaf = node.feature < 0;
        if (leaf) {
            if (node.left != -1 || node.right != -1)
                throw DataError("leaf node " + std::to_string(i) + " has children");
        } else {
            if (node.feature >= static_cast<int>(FeatureVector::kNumFeatures))
                throw DataError("node " + std::to_string(i) + " references invalid feature");
            if (node.left <= i || node.left >= n || node.right <= i || node.right >= n)
                throw DataError("node " + std::to_string(i) + " has invalid child references");
        }
        double sum = 0.0;
        for (double d : node.distribution) {
            if (d < 0.0) throw DataError("node " + std::to_string(i) + " distribution negative");
            sum += d;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw DataError("node " + std::to_string(i) + " distribution does not sum to 1");
    }
    Tree tree;
    tree.nodes_ = std::move(nodes);
    return tree;
}

const std::array<double, kNumClasses>& Tree::predict_distribution(const double* row) const {
    std::size_t cur = 0;
    while (nodes_[cur].feature >= 0) {
        const TreeNode& node = nodes_[cur];
        cur = static_cast<std::size_t>(row[node.feature] < node.threshold ? node.left
                                                                          : node.right);
    }
    return nodes_[cur].distribution;
}

int Tree::predict_index(const double* row) const {
    return argmax_index(predict_distribution(row));
}

int Tree::n_internal() const {
    int n = 0;
    for (const TreeNode& node : nodes_)
        if (node.feature >= 0) ++n;
    return n;
}

int Tree::n_leaves() const { return static_cast<int>(nodes_.size()) - n_internal(); }

}  // namespace s4cast
