#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/tree.hpp"

namespace s4cast {

struct BagOptions {
    int n_learners = 30;
    int max_splits = 100;
    std::uint64_t seed = 0;
    /// Test hook: false trains every member on the full sample, so a single
    /// member reproduces a plain tree exactly.
    bool bootstrap = true;
};

/// Per-member bootstrap draws captured during training for verification.
struct BagTrace {
    std::vector<std::vector<std::size_t>> bootstrap_indices;
};

/// Bagged classification trees. Each member trains on N draws with
/// replacement (seed derived per member index); prediction averages the
/// members' leaf distributions and takes the argmax, ties to the lowest
/// class index.
class BaggedTrees {
public:
    static BaggedTrees fit(const FeatureMatrix& x, std::span<const int> y,
                           const BagOptions& opt, BagTrace* trace = nullptr);

    static BaggedTrees from_state(std::vector<Tree> trees, BagOptions opt);

    std::array<double, kNumClasses> predict_scores(const double* row) const;
    int predict_index(const double* row) const;

    const std::vector<Tree>& trees() const { return trees_; }
    const BagOptions& options() const { return options_; }

private:
    std::vector<Tree> trees_;
    BagOptions options_;
};

}  // namespace s4cast
