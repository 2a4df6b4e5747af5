#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "artifacts.hpp"
#include "s4cast/calendar.hpp"
#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/metrics.hpp"
#include "s4cast/synth.hpp"

namespace s4cast::cli {

namespace {

/// Layout written by write_solar_csv; what preprocess reads back by default.
SolarFormat canonical_solar_format() {
    SolarFormat f;
    f.date_style = SolarFormat::DateStyle::iso;
    f.has_header = true;
    return f;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    return in;
}

void require_path(const std::string& value, const char* flag, const char* subcommand) {
    if (value.empty()) {
        throw ConfigError(std::string(subcommand) + " needs " + flag +
                          " (flag or config file entry)");
    }
}

nlohmann::json diagnostics_json(const std::vector<RowDiagnostic>& diagnostics) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : diagnostics) {
        arr.push_back({{"line", d.line_number}, {"message", d.message}});
    }
    return arr;
}

nlohmann::json stage_counts_json(const StageCounts& counts, const std::string& provenance) {
    return nlohmann::json{
        {"format", "s4cast-stage-counts"},
        {"version", 1},
        {"input_rows", counts.input_rows},
        {"after_elevation_filter", counts.after_elevation_filter},
        {"after_s4_floor", counts.after_s4_floor},
        {"excluded_no_solar_day", counts.excluded_no_solar_day},
        {"excluded_f107_missing", counts.excluded_f107_missing},
        {"excluded_unmappable", counts.excluded_unmappable},
        {"joined", counts.joined},
        {"class_counts", counts.class_counts},
        {"balanced_rows", counts.balanced_rows},
        {"provenance", provenance},
    };
}

Dataset read_dataset_file(const std::string& path) {
    auto in = open_input(path);
    return read_dataset_csv(in, path);
}

/// CV or holdout evaluation that retrains per fold, pooling fold matrices.
EvalSummary evaluate_by_retraining(const Dataset& ds, const ModelParams& params,
                                   const SplitPlan& plan) {
    const auto splits = make_splits(ds.size(), plan);
    std::vector<ConfusionMatrix> folds;
    folds.reserve(splits.size());
    for (std::size_t f = 0; f < splits.size(); ++f) {
        const Dataset train_set =
            ds.subset(splits[f].train, "fold " + std::to_string(f + 1) + " train");
        const TrainedModel model = TrainedModel::train(train_set, params);
        ConfusionMatrix cm;
        for (const std::size_t row : splits[f].validation) {
            cm.add(model.predict(ds[row].x), ds[row].y);
        }
        folds.push_back(cm);
    }
    return aggregate_cv(folds);
}

std::string split_note_for(const RunConfig& cfg) {
    const SplitPlan plan = cfg.split_plan();
    std::ostringstream note;
    if (plan.kind == SplitPlan::Kind::kfold) {
        note << "kfold(k=" << plan.k << ", seed=" << plan.seed << ")";
    } else {
        note << "holdout(train_fraction=" << format_double(plan.holdout_train_fraction)
             << ", seed=" << plan.seed << ")";
    }
    return note.str();
}

void write_eval_artifacts(const std::filesystem::path& out_dir, const EvalSummary& summary,
                          const std::string& split_note) {
    write_text_file(out_dir / "confusion.json", confusion_to_json_string(summary.pooled));
    write_text_file(out_dir / "confusion.csv", to_csv(summary.pooled));
    write_text_file(out_dir / "metrics.json", to_json_string(summary, split_note));
}

}  // namespace

int cmd_ingest(const RunConfig& cfg) {
    require_path(cfg.ismr_path, "--ismr", "ingest");
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    std::vector<ManifestInput> inputs{fingerprint_file(cfg.ismr_path)};
    std::vector<std::string> outputs;

    auto ismr_in = open_input(cfg.ismr_path);
    const IsmrParseResult ismr = parse_ismr(ismr_in, cfg.ismr_format);
    {
        std::ostringstream records_csv;
        write_records_csv(records_csv, ismr.records);
        write_text_file(out_dir / "records.csv", records_csv.str());
        outputs.push_back("records.csv");
    }

    nlohmann::json report{
        {"format", "s4cast-ingest-report"},
        {"version", 1},
        {"ismr",
         {{"path", cfg.ismr_path},
          {"input_rows", ismr.input_rows},
          {"parsed", ismr.records.size()},
          {"quarantined", diagnostics_json(ismr.diagnostics)}}},
    };

    if (!cfg.solar_path.empty()) {
        inputs.push_back(fingerprint_file(cfg.solar_path));
        auto solar_in = open_input(cfg.solar_path);
        const SolarParseResult solar = parse_solar(solar_in, cfg.solar_format);
        std::ostringstream solar_csv;
        write_solar_csv(solar_csv, solar.days);
        write_text_file(out_dir / "solar.csv", solar_csv.str());
        outputs.push_back("solar.csv");
        report["solar"] = {{"path", cfg.solar_path},
                           {"input_rows", solar.input_rows},
                           {"parsed", solar.days.size()},
                           {"quarantined", diagnostics_json(solar.diagnostics)}};
        std::cout << "solar: parsed " << solar.days.size() << " of " << solar.input_rows
                  << " rows (" << solar.diagnostics.size() << " quarantined)\n";
    }

    write_text_file(out_dir / "ingest_report.json", report.dump(2) + "\n");
    outputs.push_back("ingest_report.json");
    write_manifest(out_dir, "ingest", cfg.to_json(), inputs, outputs);

    std::cout << "ismr: parsed " << ismr.records.size() << " of " << ismr.input_rows << " rows ("
              << ismr.diagnostics.size() << " quarantined)\n"
              << "wrote " << (out_dir / "records.csv").string() << "\n";
    return 0;
}

int cmd_preprocess(const RunConfig& cfg) {
    require_path(cfg.records_path, "--records", "preprocess");
    require_path(cfg.solar_path, "--solar", "preprocess");
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    auto records_in = open_input(cfg.records_path);
    const IsmrParseResult parsed = parse_ismr(records_in, normalized_records_format());
    if (!parsed.diagnostics.empty()) {
        throw DataError(cfg.records_path + " is not a clean normalized records file (row " +
                        std::to_string(parsed.diagnostics.front().line_number) + ": " +
                        parsed.diagnostics.front().message + ")");
    }

    auto solar_in = open_input(cfg.solar_path);
    const SolarParseResult solar = parse_solar(solar_in, canonical_solar_format());
    if (!solar.diagnostics.empty()) {
        throw DataError(cfg.solar_path + " is not a clean solar file (row " +
                        std::to_string(solar.diagnostics.front().line_number) + ": " +
                        solar.diagnostics.front().message + ")");
    }

    StageCounts counts;
    const Dataset ds = run_pipeline(parsed.records, solar.days, cfg.pipeline_options(), &counts);

    {
        std::ostringstream csv;
        write_dataset_csv(csv, ds);
        write_text_file(out_dir / "dataset.csv", csv.str());
    }
    write_text_file(out_dir / "stage_counts.json",
                    stage_counts_json(counts, ds.provenance()).dump(2) + "\n");
    write_manifest(out_dir, "preprocess", cfg.to_json(),
                   {fingerprint_file(cfg.records_path), fingerprint_file(cfg.solar_path)},
                   {"dataset.csv", "stage_counts.json"});

    std::cout << "input rows            " << counts.input_rows << "\n"
              << "after elevation/S4>=0 " << counts.after_elevation_filter << "\n"
              << "after S4 floor        " << counts.after_s4_floor << "\n"
              << "no solar day          " << counts.excluded_no_solar_day << "\n"
              << "F10.7 missing         " << counts.excluded_f107_missing << "\n"
              << "unmappable IPP        " << counts.excluded_unmappable << "\n"
              << "joined                " << counts.joined << "\n"
              << "class counts          " << counts.class_counts[0] << "/"
              << counts.class_counts[1] << "/" << counts.class_counts[2] << "\n";
    if (counts.balanced_rows != 0) std::cout << "balanced rows         " << counts.balanced_rows << "\n";
    std::cout << "wrote " << (out_dir / "dataset.csv").string() << " (" << ds.size() << " rows)\n";
    return 0;
}

int cmd_synth(const RunConfig& cfg) {
    const SynthSpec spec = cfg.effective_synth();
    spec.validate();
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    const SynthOutput out = generate(spec);
    {
        std::ostringstream csv;
        write_records_csv(csv, out.records);
        write_text_file(out_dir / "records.csv", csv.str());
    }
    {
        std::ostringstream csv;
        write_solar_csv(csv, out.solar);
        write_text_file(out_dir / "solar.csv", csv.str());
    }
    {
        std::ostringstream csv;
        write_dataset_csv(csv, out.dataset);
        write_text_file(out_dir / "dataset.csv", csv.str());
    }
    write_manifest(out_dir, "synth", cfg.to_json(), {},
                   {"records.csv", "solar.csv", "dataset.csv"});

    const auto counts = out.dataset.class_counts();
    std::cout << "generated " << out.dataset.size() << " rows (classes " << counts[0] << "/"
              << counts[1] << "/" << counts[2] << ", seed " << spec.seed << ")\n"
              << "wrote " << (out_dir / "dataset.csv").string() << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    require_path(cfg.data_path, "--data", "train");
    const ModelParams params = cfg.effective_model();
    params.validate();
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    const Dataset ds = read_dataset_file(cfg.data_path);
    const TrainedModel model = TrainedModel::train(ds, params);
    model.save(out_dir / "model.json");
    write_manifest(out_dir, "train", cfg.to_json(), {fingerprint_file(cfg.data_path)},
                   {"model.json"});

    std::cout << "trained " << model_kind_name(params.kind) << " on " << ds.size()
              << " rows (data fingerprint " << model.dataset_fingerprint() << ")\n"
              << "wrote " << (out_dir / "model.json").string() << "\n";
    return 0;
}

int cmd_tune(const RunConfig& cfg) {
    require_path(cfg.data_path, "--data", "tune");
    const SearchSpace space = cfg.search_space();
    const TuneOptions topt = cfg.effective_tune();
    topt.validate();
    const SplitPlan plan = cfg.split_plan();
    plan.validate();
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    const Dataset ds = read_dataset_file(cfg.data_path);
    const ModelParams base = cfg.effective_model();
    // One fixed split set for every trial keeps the objective deterministic
    // and comparable across parameter points.
    const auto splits = make_splits(ds.size(), plan);

    const TuneObjective objective = [&](std::span<const int> point) {
        ModelParams params = base;
        for (std::size_t d = 0; d < space.dims.size(); ++d) {
            if (space.dims[d].name == "splits") params.max_splits = point[d];
            if (space.dims[d].name == "learners") params.n_learners = point[d];
        }
        ConfusionMatrix pooled;
        for (const SplitIndices& split : splits) {
            const Dataset train_set = ds.subset(split.train, "tune fold");
            const TrainedModel model = TrainedModel::train(train_set, params);
            for (const std::size_t row : split.validation) {
                pooled.add(model.predict(ds[row].x), ds[row].y);
            }
        }
        return pooled.accuracy();
    };

    const TuneResult result = tune(objective, space, topt);
    {
        std::ostringstream csv;
        write_history_csv(csv, space, result);
        write_text_file(out_dir / "history.csv", csv.str());
    }
    write_text_file(out_dir / "best.json", best_to_json_string(space, result));
    write_manifest(out_dir, "tune", cfg.to_json(), {fingerprint_file(cfg.data_path)},
                   {"history.csv", "best.json"});

    std::cout << "best:";
    for (std::size_t d = 0; d < space.dims.size(); ++d) {
        std::cout << ' ' << space.dims[d].name << '=' << result.best.params[d];
    }
    char acc[32];
    std::snprintf(acc, sizeof acc, "%.4f", result.best.objective);
    std::cout << " objective=" << acc << " (" << result.history.size() << " trials, "
              << result.failures.size() << " failures)\n"
              << "wrote " << (out_dir / "history.csv").string() << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg) {
    if (!cfg.predictions_path.empty() && !cfg.model_file.empty()) {
        throw ConfigError("eval takes --predictions or --model-file, not both");
    }
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    EvalSummary summary;
    std::string split_note;
    std::vector<ManifestInput> inputs;

    if (!cfg.predictions_path.empty()) {
        auto in = open_input(cfg.predictions_path);
        const auto lines = read_lines(in);
        if (lines.empty() || lines.front() != "predicted,truth") {
            throw DataError(cfg.predictions_path +
                            ": expected a predictions CSV with header \"predicted,truth\"");
        }
        std::vector<Severity> predicted;
        std::vector<Severity> truth;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            if (is_blank_or_comment(lines[i])) continue;
            const auto fields = split_fields(lines[i], ',');
            std::optional<std::int64_t> p;
            std::optional<std::int64_t> t;
            if (fields.size() == 2) {
                p = parse_int64(fields[0]);
                t = parse_int64(fields[1]);
            }
            if (!p || !t) {
                throw DataError(cfg.predictions_path + " line " + std::to_string(i + 1) +
                                ": expected two integer class values");
            }
            predicted.push_back(severity_from_value(static_cast<int>(*p)));
            truth.push_back(severity_from_value(static_cast<int>(*t)));
        }
        summary = summarize(ConfusionMatrix::from_pairs(predicted, truth));
        split_note = "stored-predictions";
        inputs.push_back(fingerprint_file(cfg.predictions_path));
    } else if (!cfg.model_file.empty()) {
        require_path(cfg.data_path, "--data", "eval");
        const TrainedModel model = TrainedModel::load(cfg.model_file);
        const Dataset ds = read_dataset_file(cfg.data_path);
        ConfusionMatrix cm;
        for (const Dataset::Row& row : ds.rows()) {
            cm.add(model.predict(row.x), row.y);
        }
        summary = summarize(cm);
        split_note = "stored-model";
        inputs.push_back(fingerprint_file(cfg.model_file));
        inputs.push_back(fingerprint_file(cfg.data_path));
    } else {
        require_path(cfg.data_path, "--data", "eval");
        const ModelParams params = cfg.effective_model();
        params.validate();
        const SplitPlan plan = cfg.split_plan();
        plan.validate();
        const Dataset ds = read_dataset_file(cfg.data_path);
        summary = evaluate_by_retraining(ds, params, plan);
        split_note = split_note_for(cfg);
        inputs.push_back(fingerprint_file(cfg.data_path));
    }

    write_eval_artifacts(out_dir, summary, split_note);
    write_manifest(out_dir, "eval", cfg.to_json(), inputs,
                   {"confusion.json", "confusion.csv", "metrics.json"});

    std::cout << to_text(summary);
    std::cout << "wrote " << (out_dir / "metrics.json").string() << "\n";
    return 0;
}

int cmd_predict(const RunConfig& cfg) {
    require_path(cfg.model_file, "--model-file", "predict");
    require_path(cfg.data_path, "--data", "predict");
    const std::filesystem::path out_dir = cfg.out_dir;
    const OutputLock lock = prepare_output_dir(out_dir);

    const TrainedModel model = TrainedModel::load(cfg.model_file);
    const Dataset ds = read_dataset_file(cfg.data_path);
    const std::vector<Severity> predicted = model.predict_many(ds);

    std::ostringstream csv;
    csv << "predicted,truth\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        csv << severity_value(predicted[i]) << ',' << severity_value(ds[i].y) << '\n';
    }
    write_text_file(out_dir / "predictions.csv", csv.str());
    write_manifest(out_dir, "predict", cfg.to_json(),
                   {fingerprint_file(cfg.model_file), fingerprint_file(cfg.data_path)},
                   {"predictions.csv"});

    std::cout << "wrote " << ds.size() << " predictions to "
              << (out_dir / "predictions.csv").string() << "\n";
    return 0;
}

int cmd_report(const ReportRequest& req) {
    if (req.path.empty()) throw ConfigError("report needs a metrics.json or confusion.json path");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(req.path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(req.path + " is not valid JSON: " + e.what());
    }

    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};
    try {
        const std::string format = j.at("format").get<std::string>();
        if (format != "s4cast-metrics" && format != "s4cast-confusion") {
            throw DataError(req.path + ": unsupported format tag \"" + format + "\"");
        }
        const auto& rows = j.at("counts");
        for (int i = 0; i < kNumClasses; ++i)
            for (int c = 0; c < kNumClasses; ++c)
                counts[i][c] = rows.at(i).at(c).get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(req.path + ": not a metrics/confusion document: " + e.what());
    }

    const EvalSummary summary = summarize(ConfusionMatrix::from_counts(counts));
    const std::string split_note = j.value("split", std::string{});
    if (req.format == "text") {
        std::cout << to_text(summary);
    } else if (req.format == "json") {
        std::cout << to_json_string(summary, split_note);
    } else if (req.format == "csv") {
        std::cout << to_csv(summary.pooled);
    } else {
        throw ConfigError("report format must be text, json, or csv, got \"" + req.format + "\"");
    }
    return 0;
}

}  // namespace s4cast::cli
