#include "s4cast/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"

namespace s4cast {

namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json scaler_to_json(const Scaler& s) {
    return json{{"mean", s.mean()}, {"stddev", s.stddev()}};
}

Scaler scaler_from_json(const json& j) {
    return Scaler::from_constants(j.at("mean").get<std::vector<double>>(),
                                  j.at("stddev").get<std::vector<double>>());
}

json tree_to_json(const Tree& tree) {
    json nodes = json::array();
    for (const TreeNode& n : tree.nodes()) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"distribution", n.distribution}});
    }
    return json{{"nodes", nodes}};
}

Tree tree_from_json(const json& j) {
    std::vector<TreeNode> nodes;
    for (const json& n : j.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature").get<int>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<int>();
        node.right = n.at("right").get<int>();
        node.distribution = n.at("distribution").get<std::array<double, kNumClasses>>();
        nodes.push_back(node);
    }
    return Tree::from_nodes(std::move(nodes));
}

json matrix_to_json(const FeatureMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.n_rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.n_cols; ++j) row.push_back(m.at(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

FeatureMatrix matrix_from_json(const json& j) {
    FeatureMatrix m;
    for (const json& row : j) {
        if (m.n_rows == 0) {
            m.n_cols = row.size();
        } else if (row.size() != m.n_cols) {
            throw DataError("matrix rows disagree on column count");
        }
        for (const json& v : row) m.data.push_back(v.get<double>());
        m.n_rows++;
    }
    return m;
}

json state_to_json(const Tree& m) { return tree_to_json(m); }

json state_to_json(const GaussianNb& m) {
    json classes = json::array();
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& st = m.class_stats()[static_cast<std::size_t>(c)];
        json entry{{"class", c + 1}, {"present", st.present}};
        if (st.present) {
            entry["log_prior"] = st.log_prior;
            entry["mean"] = st.mean;
            entry["variance"] = st.variance;
        }
        classes.push_back(std::move(entry));
    }
    return json{{"classes", classes}};
}

json state_to_json(const SvmOvo& m) {
    json machines = json::array();
    for (const BinarySvm& bm : m.machines()) {
        machines.push_back({{"positive_class", bm.positive_class + 1},
                            {"negative_class", bm.negative_class + 1},
                            {"bias", bm.bias},
                            {"dual_coef", bm.dual_coef},
                            {"support_vectors", matrix_to_json(bm.support_vectors)}});
    }
    return json{{"scaler", scaler_to_json(m.scaler())}, {"machines", machines}};
}

json state_to_json(const Knn& m) {
    std::vector<int> class_values;
    class_values.reserve(m.labels().size());
    for (int idx : m.labels()) class_values.push_back(idx + 1);
    return json{{"scaler", scaler_to_json(m.scaler())},
                {"k", m.k()},
                {"labels", class_values},
                {"exemplars", matrix_to_json(m.exemplars())}};
}

json state_to_json(const AdaBoost& m) {
    json trees = json::array();
    for (const Tree& t : m.trees()) trees.push_back(tree_to_json(t));
    return json{{"trees", trees},
                {"alphas", m.alphas()},
                {"class_priors", m.class_priors()}};
}

json state_to_json(const BaggedTrees& m) {
    json trees = json::array();
    for (const Tree& t : m.trees()) trees.push_back(tree_to_json(t));
    return json{{"trees", trees}};
}

}  // namespace

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::tree: return "tree";
        case ModelKind::naive_bayes: return "naive_bayes";
        case ModelKind::svm: return "svm";
        case ModelKind::knn: return "knn";
        case ModelKind::boosted: return "boosted";
        case ModelKind::bagged: return "bagged";
    }
    throw ConfigError("invalid model kind enumerator");
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "tree") return ModelKind::tree;
    if (name == "naive_bayes") return ModelKind::naive_bayes;
    if (name == "svm") return ModelKind::svm;
    if (name == "knn") return ModelKind::knn;
    if (name == "boosted") return ModelKind::boosted;
    if (name == "bagged") return ModelKind::bagged;
    throw ConfigError("unknown model kind '" + name +
                      "' (expected tree, naive_bayes, svm, knn, boosted, or bagged)");
}

void ModelParams::validate() const {
    if (max_splits < 0) throw ConfigError("max_splits must be non-negative");
    if (n_learners < 1) throw ConfigError("n_learners must be at least 1");
    if (learning_rate < 0.0 || learning_rate > 1.0)
        throw ConfigError("learning_rate must lie in [0, 1]");
    if (k_neighbors < 1) throw ConfigError("k_neighbors must be at least 1");
    if (!(kernel_scale > 0.0)) throw ConfigError("kernel_scale must be positive");
    if (!(box_constraint > 0.0)) throw ConfigError("box_constraint must be positive");
    if (!(svm_tolerance > 0.0)) throw ConfigError("svm_tolerance must be positive");
    if (svm_max_sweeps < 1) throw ConfigError("svm_max_sweeps must be at least 1");
    if (split_criterion != "gini")
        throw ConfigError("only split_criterion 'gini' is supported");
    if (distance_weighting != "squared_inverse")
        throw ConfigError("only distance_weighting 'squared_inverse' is supported");
    if (nb_likelihood != "gaussian")
        throw ConfigError("only nb_likelihood 'gaussian' is supported");
}

ModelParams ModelParams::defaults_for(ModelKind model_kind) {
    ModelParams p;
    p.kind = model_kind;
    if (model_kind == ModelKind::boosted) p.max_splits = 20;
    if (model_kind == ModelKind::bagged) p.max_splits = 68880;
    return p;
}

TrainedModel::TrainedModel(ModelParams params, std::string fingerprint, Impl impl)
    : params_(std::move(params)),
      dataset_fingerprint_(std::move(fingerprint)),
      impl_(std::move(impl)) {}

TrainedModel TrainedModel::train(const Dataset& ds, const ModelParams& params) {
    params.validate();
    if (ds.empty()) throw DataError("cannot train on an empty dataset");
    FeatureMatrix x = to_matrix(ds);
    std::vector<int> y = to_label_indices(ds);
    std::string fingerprint = format_hex64(ds.fingerprint());

    switch (params.kind) {
        case ModelKind::tree:
            return TrainedModel(params, fingerprint,
                                Tree::fit(x, y, TreeOptions{params.max_splits}));
        case ModelKind::naive_bayes:
            return TrainedModel(params, fingerprint, GaussianNb::fit(x, y));
        case ModelKind::svm: {
            SvmOptions opt;
            opt.kernel_scale = params.kernel_scale;
            opt.box_constraint = params.box_constraint;
            opt.tolerance = params.svm_tolerance;
            opt.max_sweeps = params.svm_max_sweeps;
            opt.seed = params.seed;
            return TrainedModel(params, fingerprint, SvmOvo::fit(x, y, opt));
        }
        case ModelKind::knn:
            return TrainedModel(params, fingerprint,
                                Knn::fit(x, y, KnnOptions{params.k_neighbors}));
        case ModelKind::boosted:
            return TrainedModel(
                params, fingerprint,
                AdaBoost::fit(x, y,
                              BoostOptions{params.n_learners, params.max_splits,
                                           params.learning_rate}));
        case ModelKind::bagged:
            return TrainedModel(
                params, fingerprint,
                BaggedTrees::fit(x, y,
                                 BagOptions{params.n_learners, params.max_splits,
                                            params.seed, true}));
    }
    throw ConfigError("invalid model kind enumerator");
}

Severity TrainedModel::predict(const FeatureVector& x) const {
    const std::array<double, FeatureVector::kNumFeatures> v = x.values();
    int idx = std::visit(
        Overloaded{
            [&](const Tree& m) { return m.predict_index(v.data()); },
            [&](const GaussianNb& m) { return m.predict_index(v); },
            [&](const SvmOvo& m) { return m.predict_index(v); },
            [&](const Knn& m) { return m.predict_index(v); },
            [&](const AdaBoost& m) { return m.predict_index(v.data()); },
            [&](const BaggedTrees& m) { return m.predict_index(v.data()); },
        },
        impl_);
    return severity_from_index(idx);
}

std::vector<Severity> TrainedModel::predict_many(const Dataset& ds) const {
    std::vector<Severity> out;
    out.reserve(ds.size());
    for (const Dataset::Row& row : ds.rows()) out.push_back(predict(row.x));
    return out;
}

std::array<double, kNumClasses> TrainedModel::predict_scores(const FeatureVector& x) const {
    const std::array<double, FeatureVector::kNumFeatures> v = x.values();
    using Scores = std::array<double, kNumClasses>;
    return std::visit(
        Overloaded{
            [&](const Tree& m) -> Scores { return m.predict_distribution(v.data()); },
            [&](const GaussianNb& m) -> Scores {
                // Softmax over log posteriors; absent classes get probability 0.
                std::array<double, kNumClasses> lp = m.log_posterior(v);
                double peak = lp[0];
                for (double l : lp) peak = std::max(peak, l);
                std::array<double, kNumClasses> p{};
                double total = 0.0;
                for (int c = 0; c < kNumClasses; ++c) {
                    p[c] = std::exp(lp[c] - peak);
                    total += p[c];
                }
                for (double& pc : p) pc /= total;
                return p;
            },
            [&](const SvmOvo& m) -> Scores { return m.predict_scores(v); },
            [&](const Knn& m) -> Scores { return m.predict_scores(v); },
            [&](const AdaBoost& m) -> Scores { return m.predict_scores(v.data()); },
            [&](const BaggedTrees& m) -> Scores { return m.predict_scores(v.data()); },
        },
        impl_);
}

std::string TrainedModel::to_json_string() const {
    json j;
    j["format"] = "s4cast-model";
    j["version"] = 1;
    j["params"] = {{"kind", model_kind_name(params_.kind)},
                   {"max_splits", params_.max_splits},
                   {"n_learners", params_.n_learners},
                   {"learning_rate", params_.learning_rate},
                   {"k_neighbors", params_.k_neighbors},
                   {"kernel_scale", params_.kernel_scale},
                   {"box_constraint", params_.box_constraint},
                   {"svm_tolerance", params_.svm_tolerance},
                   {"svm_max_sweeps", params_.svm_max_sweeps},
                   {"seed", params_.seed},
                   {"split_criterion", params_.split_criterion},
                   {"distance_weighting", params_.distance_weighting},
                   {"nb_likelihood", params_.nb_likelihood}};
    j["dataset_fingerprint"] = dataset_fingerprint_;
    j["state"] = std::visit([](const auto& m) { return state_to_json(m); }, impl_);
    return j.dump(2) + "\n";
}

TrainedModel TrainedModel::from_json_string(const std::string& text) {
    try {
        json j = json::parse(text);
        if (j.at("format").get<std::string>() != "s4cast-model")
            throw DataError("not a model file (format tag mismatch)");
        if (j.at("version").get<int>() != 1)
            throw DataError("unsupported model file version " +
                            j.at("version").dump());

        const json& pj = j.at("params");
        ModelParams params;
        params.kind = model_kind_from_name(pj.at("kind").get<std::string>());
        params.max_splits = pj.at("max_splits").get<int>();
        params.n_learners = pj.at("n_learners").get<int>();
        params.learning_rate = pj.at("learning_rate").get<double>();
        params.k_neighbors = pj.at("k_neighbors").get<int>();
        params.kernel_scale = pj.at("kernel_scale").get<double>();
        params.box_constraint = pj.at("box_constraint").get<double>();
        params.svm_tolerance = pj.at("svm_tolerance").get<double>();
        params.svm_max_sweeps = pj.at("svm_max_sweeps").get<int>();
        params.seed = pj.at("seed").get<std::uint64_t>();
        params.split_criterion = pj.at("split_criterion").get<std::string>();
        params.distance_weighting = pj.at("distance_weighting").get<std::string>();
        params.nb_likelihood = pj.at("nb_likelihood").get<std::string>();
        params.validate();

        std::string fingerprint = j.at("dataset_fingerprint").get<std::string>();
        const json& st = j.at("state");

        switch (params.kind) {
            case ModelKind::tree:
                return TrainedModel(params, fingerprint, tree_from_json(st));
            case ModelKind::naive_bayes: {
                std::array<GaussianNb::ClassStats, kNumClasses> stats;
                for (const json& entry : st.at("classes")) {
                    int value = entry.at("class").get<int>();
                    if (value < 1 || value > kNumClasses)
                        throw DataError("naive Bayes state has invalid class value");
                    auto& cs = stats[static_cast<std::size_t>(value - 1)];
                    cs.present = entry.at("present").get<bool>();
                    if (cs.present) {
                        cs.log_prior = entry.at("log_prior").get<double>();
                        cs.mean = entry.at("mean").get<std::vector<double>>();
                        cs.variance = entry.at("variance").get<std::vector<double>>();
                    }
                }
                return TrainedModel(params, fingerprint,
                                    GaussianNb::from_state(std::move(stats)));
            }
            case ModelKind::svm: {
                Scaler scaler = scaler_from_json(st.at("scaler"));
                std::vector<BinarySvm> machines;
                for (const json& mj : st.at("machines")) {
                    BinarySvm m;
                    m.positive_class = mj.at("positive_class").get<int>() - 1;
                    m.negative_class = mj.at("negative_class").get<int>() - 1;
                    if (m.positive_class < 0 || m.positive_class >= kNumClasses ||
                        m.negative_class < 0 || m.negative_class >= kNumClasses)
                        throw DataError("SVM state has invalid class value");
                    m.bias = mj.at("bias").get<double>();
                    m.dual_coef = mj.at("dual_coef").get<std::vector<double>>();
                    m.support_vectors = matrix_from_json(mj.at("support_vectors"));
                    if (m.support_vectors.n_rows == 0)
                        m.support_vectors.n_cols = scaler.n_features();
                    machines.push_back(std::move(m));
                }
                SvmOptions opt;
                opt.kernel_scale = params.kernel_scale;
                opt.box_constraint = params.box_constraint;
                opt.tolerance = params.svm_tolerance;
                opt.max_sweeps = params.svm_max_sweeps;
                opt.seed = params.seed;
                return TrainedModel(
                    params, fingerprint,
                    SvmOvo::from_state(std::move(scaler), std::move(machines), opt));
            }
            case ModelKind::knn: {
                Scaler scaler = scaler_from_json(st.at("scaler"));
                FeatureMatrix exemplars = matrix_from_json(st.at("exemplars"));
                std::vector<int> labels;
                for (const json& v : st.at("labels")) {
                    int value = v.get<int>();
                    if (value < 1 || value > kNumClasses)
                        throw DataError("KNN state has invalid class value");
                    labels.push_back(value - 1);
                }
                return TrainedModel(params, fingerprint,
                                    Knn::from_state(std::move(scaler), std::move(exemplars),
                                                    std::move(labels), st.at("k").get<int>()));
            }
            case ModelKind::boosted: {
                std::vector<Tree> trees;
                for (const json& tj : st.at("trees")) trees.push_back(tree_from_json(tj));
                auto alphas = st.at("alphas").get<std::vector<double>>();
                auto priors = st.at("class_priors").get<std::array<double, kNumClasses>>();
                BoostOptions opt{params.n_learners, params.max_splits, params.learning_rate};
                return TrainedModel(params, fingerprint,
                                    AdaBoost::from_state(std::move(trees), std::move(alphas),
                                                         priors, opt));
            }
            case ModelKind::bagged: {
                std::vector<Tree> trees;
                for (const json& tj : st.at("trees")) trees.push_back(tree_from_json(tj));
                BagOptions opt{params.n_learners, params.max_splits, params.seed, true};
                return TrainedModel(params, fingerprint,
                                    BaggedTrees::from_state(std::move(trees), opt));
            }
        }
        throw DataError("invalid model kind in file");
    } catch (const json::exception& e) {
        throw DataError(std::string("model JSON malformed: ") + e.what());
    }
}

void TrainedModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open model file for writing: " + path.string());
    out << to_json_string();
    if (!out) throw DataError("failed while writing model file: " + path.string());
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

}  // namespace s4cast
