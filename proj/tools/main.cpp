#include <array>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "run_config.hpp"
#include "s4cast/errors.hpp"

namespace {

using s4cast::cli::RunConfig;

/// Everything a flag can override. Options bind to optionals so only flags
/// the user actually passed are applied on top of the config file.
struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;

    std::optional<std::string> ismr, solar, records, data, model_file, predictions;

    std::optional<double> cutoff, floor;
    std::optional<std::string> ipp_mode;
    std::optional<double> receiver_lat, receiver_lon;
    bool balance_on = false;
    bool balance_off = false;

    std::optional<std::string> model_kind;
    std::optional<int> max_splits, n_learners, k_neighbors, svm_max_sweeps;
    std::optional<double> learning_rate, kernel_scale, box_constraint, svm_tolerance;

    std::optional<std::string> split_kind;
    std::optional<int> folds;
    std::optional<double> train_fraction;

    std::optional<int> iterations, initial, candidates;
    std::optional<std::string> bounds;

    std::optional<std::uint64_t> rows;
    std::optional<std::string> proportions;
    std::optional<double> separation, noise_scale;
};

std::array<double, 3> parse_proportions(const std::string& text) {
    std::array<double, 3> p{};
    std::stringstream stream(text);
    std::string field;
    int i = 0;
    while (std::getline(stream, field, ',')) {
        if (i >= 3) throw s4cast::ConfigError("--proportions takes exactly three values");
        try {
            std::size_t used = 0;
            p[i] = std::stod(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw s4cast::ConfigError("--proportions value \"" + field + "\" is not a number");
        }
        ++i;
    }
    if (i != 3) throw s4cast::ConfigError("--proportions takes exactly three values");
    return p;
}

RunConfig build_config(const Overrides& o) {
    RunConfig cfg = o.config_path ? RunConfig::load(*o.config_path) : RunConfig{};
    if (o.seed) cfg.seed = *o.seed;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.ismr) cfg.ismr_path = *o.ismr;
    if (o.solar) cfg.solar_path = *o.solar;
    if (o.records) cfg.records_path = *o.records;
    if (o.data) cfg.data_path = *o.data;
    if (o.model_file) cfg.model_file = *o.model_file;
    if (o.predictions) cfg.predictions_path = *o.predictions;

    if (o.cutoff) cfg.elevation_cutoff_deg = *o.cutoff;
    if (o.floor) cfg.s4_floor = *o.floor;
    if (o.ipp_mode) cfg.ipp_mode = *o.ipp_mode;
    if (o.receiver_lat) cfg.receiver_lat_deg = *o.receiver_lat;
    if (o.receiver_lon) cfg.receiver_lon_deg = *o.receiver_lon;
    if (o.balance_on) cfg.balance = true;
    if (o.balance_off) cfg.balance = false;

    // --model resets the whole model block to that kind's baseline defaults;
    // hyperparameter flags then override individual fields.
    if (o.model_kind)
        cfg.model = s4cast::ModelParams::defaults_for(s4cast::model_kind_from_name(*o.model_kind));
    if (o.max_splits) cfg.model.max_splits = *o.max_splits;
    if (o.n_learners) cfg.model.n_learners = *o.n_learners;
    if (o.k_neighbors) cfg.model.k_neighbors = *o.k_neighbors;
    if (o.learning_rate) cfg.model.learning_rate = *o.learning_rate;
    if (o.kernel_scale) cfg.model.kernel_scale = *o.kernel_scale;
    if (o.box_constraint) cfg.model.box_constraint = *o.box_constraint;
    if (o.svm_tolerance) cfg.model.svm_tolerance = *o.svm_tolerance;
    if (o.svm_max_sweeps) cfg.model.svm_max_sweeps = *o.svm_max_sweeps;

    if (o.split_kind) cfg.split_kind = *o.split_kind;
    if (o.folds) cfg.folds = *o.folds;
    if (o.train_fraction) cfg.train_fraction = *o.train_fraction;

    if (o.iterations) cfg.tune.n_iterations = *o.iterations;
    if (o.initial) cfg.tune.n_initial = *o.initial;
    if (o.candidates) cfg.tune.n_candidates = *o.candidates;
    if (o.bounds) s4cast::cli::apply_bounds_flag(cfg, *o.bounds);

    if (o.rows) cfg.synth.n_rows = static_cast<std::size_t>(*o.rows);
    if (o.proportions) cfg.synth.class_proportions = parse_proportions(*o.proportions);
    if (o.separation) cfg.synth.separation = *o.separation;
    if (o.noise_scale) cfg.synth.noise_scale = *o.noise_scale;
    return cfg;
}

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON config file; flags override its values");
    cmd->add_option("--seed", o.seed, "master seed; component seeds derive from it");
    cmd->add_option("--out", o.out_dir, "output directory (created, then locked for the run)");
}

void add_model_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--model", o.model_kind,
                    "model kind: tree, naive_bayes, svm, knn, boosted, bagged");
    cmd->add_option("--max-splits", o.max_splits, "decision-tree split budget");
    cmd->add_option("--learners", o.n_learners, "ensemble size");
    cmd->add_option("--learning-rate", o.learning_rate, "boosting learning rate");
    cmd->add_option("--k", o.k_neighbors, "KNN neighbour count");
    cmd->add_option("--kernel-scale", o.kernel_scale, "SVM Gaussian kernel scale");
    cmd->add_option("--box-constraint", o.box_constraint, "SVM box constraint C");
    cmd->add_option("--svm-tolerance", o.svm_tolerance, "SMO KKT tolerance");
    cmd->add_option("--svm-max-sweeps", o.svm_max_sweeps, "SMO sweep budget");
}

void add_split_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--split", o.split_kind, "evaluation protocol: kfold or holdout");
    cmd->add_option("--folds", o.folds, "fold count for kfold");
    cmd->add_option("--train-fraction", o.train_fraction, "train share for holdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"s4cast: GNSS amplitude-scintillation severity classification toolkit"};
    app.require_subcommand(1);

    Overrides o;
    s4cast::cli::ReportRequest report;

    CLI::App* ingest = app.add_subcommand("ingest", "parse raw ISMR/solar files into normalized CSV");
    add_common(ingest, o);
    ingest->add_option("--ismr", o.ismr, "raw ISMR-style observation file");
    ingest->add_option("--solar", o.solar, "daily solar-index file");

    CLI::App* preprocess =
        app.add_subcommand("preprocess", "run the cleaning/join/label pipeline to a dataset CSV");
    add_common(preprocess, o);
    preprocess->add_option("--records", o.records, "normalized records.csv from ingest");
    preprocess->add_option("--solar", o.solar, "solar.csv from ingest");
    preprocess->add_option("--cutoff", o.cutoff, "elevation cutoff in degrees");
    preprocess->add_option("--floor", o.floor, "S4 floor; smaller values are dropped");
    preprocess->add_option("--ipp", o.ipp_mode, "IPP source: recorded or computed");
    preprocess->add_option("--receiver-lat", o.receiver_lat, "receiver latitude (computed IPP)");
    preprocess->add_option("--receiver-lon", o.receiver_lon, "receiver longitude (computed IPP)");
    preprocess->add_flag("--balance", o.balance_on, "balance classes to 3x the smallest");
    preprocess->add_flag("--no-balance", o.balance_off, "keep the imbalanced dataset");

    CLI::App* synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    add_common(synth, o);
    synth->add_option("--rows", o.rows, "number of rows");
    synth->add_option("--proportions", o.proportions, "class shares, e.g. 0.5,0.3,0.2");
    synth->add_option("--separation", o.separation, "inter-class mean separation scale");
    synth->add_option("--noise", o.noise_scale, "feature noise scale");

    CLI::App* train = app.add_subcommand("train", "fit a model on a dataset CSV and save it");
    add_common(train, o);
    train->add_option("--data", o.data, "dataset CSV");
    add_model_flags(train, o);

    CLI::App* tune = app.add_subcommand("tune", "Bayesian search over splits/learners bounds");
    add_common(tune, o);
    tune->add_option("--data", o.data, "dataset CSV");
    add_model_flags(tune, o);
    add_split_flags(tune, o);
    tune->add_option("--iterations", o.iterations, "total trials");
    tune->add_option("--initial", o.initial, "Latin-hypercube warmup trials");
    tune->add_option("--candidates", o.candidates, "EI candidate pool per step");
    tune->add_option("--bounds", o.bounds, "search box, e.g. splits=8:512,learners=1:64");

    CLI::App* eval = app.add_subcommand(
        "eval", "evaluate via per-fold retraining, a stored model, or stored predictions");
    add_common(eval, o);
    eval->add_option("--data", o.data, "dataset CSV");
    add_model_flags(eval, o);
    add_split_flags(eval, o);
    eval->add_option("--model-file", o.model_file, "stored model.json to evaluate as-is");
    eval->add_option("--predictions", o.predictions, "predicted,truth CSV to score");

    CLI::App* predict = app.add_subcommand("predict", "apply a stored model to a dataset CSV");
    add_common(predict, o);
    predict->add_option("--model-file", o.model_file, "stored model.json");
    predict->add_option("--data", o.data, "dataset CSV");

    CLI::App* rep = app.add_subcommand("report", "re-render stored metrics/confusion JSON");
    rep->add_option("path", report.path, "metrics.json or confusion.json")->required();
    rep->add_option("--format", report.format, "text, json, or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        using namespace s4cast::cli;
        if (app.got_subcommand(rep)) return cmd_report(report);
        const RunConfig cfg = build_config(o);
        if (app.got_subcommand(ingest)) return cmd_ingest(cfg);
        if (app.got_subcommand(preprocess)) return cmd_preprocess(cfg);
        if (app.got_subcommand(synth)) return cmd_synth(cfg);
        if (app.got_subcommand(train)) return cmd_train(cfg);
        if (app.got_subcommand(tune)) return cmd_tune(cfg);
        if (app.got_subcommand(eval)) return cmd_eval(cfg);
        if (app.got_subcommand(predict)) return cmd_predict(cfg);
        return 1;
    } catch (const s4cast::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const s4cast::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const s4cast::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
