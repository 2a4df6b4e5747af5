#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "s4cast/bagging.hpp"
#include "s4cast/boosting.hpp"
#include "s4cast/dataset.hpp"
#include "s4cast/knn.hpp"
#include "s4cast/naive_bayes.hpp"
#include "s4cast/svm.hpp"
#include "s4cast/tree.hpp"

namespace s4cast {

enum class ModelKind { tree, naive_bayes, svm, knn, boosted, bagged };

std::string model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

/// Hyperparameters for all six model kinds in one structure; kinds read only
/// the fields they use. Defaults follow the baseline configuration table.
struct ModelParams {
    ModelKind kind = ModelKind::tree;
    int max_splits = 100;
    int n_learners = 30;
    double learning_rate = 0.1;
    int k_neighbors = 10;
    double kernel_scale = 0.66;
    double box_constraint = 1.0;
    double svm_tolerance = 1e-3;
    int svm_max_sweeps = 1000;
    std::uint64_t seed = 0;
    /// Fixed algorithm selectors; alternates are rejected by validate so a
    /// config naming an unsupported variant fails loudly.
    std::string split_criterion = "gini";
    std::string distance_weighting = "squared_inverse";
    std::string nb_likelihood = "gaussian";

    void validate() const;

    /// Baseline defaults per kind (bagged trees use the large published
    /// split budget, effectively unbounded depth).
    static ModelParams defaults_for(ModelKind kind);
};

/// Uniform train/predict facade over the six classifiers, with versioned
/// JSON persistence. Round-tripping a model through its file form yields
/// identical predictions.
class TrainedModel {
public:
    static TrainedModel train(const Dataset& ds, const ModelParams& params);

    Severity predict(const FeatureVector& x) const;
    std::vector<Severity> predict_many(const Dataset& ds) const;

    /// Non-negative per-class scores; semantics depend on the kind (leaf or
    /// mean distribution, posterior probability, vote count, weighted vote,
    /// inverse-square distance mass).
    std::array<double, kNumClasses> predict_scores(const FeatureVector& x) const;

    const ModelParams& params() const { return params_; }
    const std::string& dataset_fingerprint() const { return dataset_fingerprint_; }

    std::string to_json_string() const;
    static TrainedModel from_json_string(const std::string& text);
    void save(const std::filesystem::path& path) const;
    static TrainedModel load(const std::filesystem::path& path);

    const Tree* as_tree() const { return std::get_if<Tree>(&impl_); }
    const GaussianNb* as_naive_bayes() const { return std::get_if<GaussianNb>(&impl_); }
    const SvmOvo* as_svm() const { return std::get_if<SvmOvo>(&impl_); }
    const Knn* as_knn() const { return std::get_if<Knn>(&impl_); }
    const AdaBoost* as_boosted() const { return std::get_if<AdaBoost>(&impl_); }
    const BaggedTrees* as_bagged() const { return std::get_if<BaggedTrees>(&impl_); }

private:
    using Impl = std::variant<Tree, GaussianNb, SvmOvo, Knn, AdaBoost, BaggedTrees>;

    TrainedModel(ModelParams params, std::string fingerprint, Impl impl);

    ModelParams params_;
    std::string dataset_fingerprint_;
    Impl impl_;
};

}  // namespace s4cast
