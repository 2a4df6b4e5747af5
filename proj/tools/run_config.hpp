#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "s4cast/ingest.hpp"
#include "s4cast/model.hpp"
#include "s4cast/pipeline.hpp"
#include "s4cast/synth.hpp"
#include "s4cast/tuner.hpp"

namespace s4cast::cli {

/// One configuration bag for every subcommand. A JSON config file (--config)
/// fills it first; individual flags override fields afterwards. Only the
/// master seed is stored: per-component seeds are derived from it by name, so
/// a config file pins the entire run without listing one seed per consumer.
struct RunConfig {
    std::uint64_t seed = 0;
    std::string out_dir = "out";

    // Input paths. `solar` is shared by ingest (parse) and preprocess (join).
    std::string ismr_path;
    std::string solar_path;
    std::string records_path;
    std::string data_path;
    std::string model_file;
    std::string predictions_path;

    IsmrFormat ismr_format = normalized_records_format();
    SolarFormat solar_format;

    double elevation_cutoff_deg = 20.0;
    double s4_floor = 0.05;
    std::string ipp_mode = "recorded";  ///< "recorded" | "computed"
    std::optional<double> receiver_lat_deg;
    std::optional<double> receiver_lon_deg;
    bool balance = false;

    ModelParams model = ModelParams::defaults_for(ModelKind::bagged);

    std::string split_kind = "kfold";  ///< "kfold" | "holdout"
    int folds = 10;
    double train_fraction = 0.9;

    TuneOptions tune;
    int splits_lo = 1;
    int splits_hi = 500;
    int learners_lo = 1;
    int learners_hi = 100;

    SynthSpec synth;

    /// Seed handed to a component, derived from the master seed by role name
    /// ("model", "synth", "tune", "split", "balance").
    std::uint64_t seed_for(std::string_view role) const;

    /// Assembled component option structs with their derived seeds filled in.
    ModelParams effective_model() const;
    SynthSpec effective_synth() const;
    TuneOptions effective_tune() const;
    SplitPlan split_plan() const;             ///< throws ConfigError on bad kind
    PipelineOptions pipeline_options() const; ///< throws ConfigError on bad ipp mode
    SearchSpace search_space() const;

    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);  ///< throws ConfigError

    void save(const std::filesystem::path& path) const;
    static RunConfig load(const std::filesystem::path& path);
};

/// Parse "splits=8:512,learners=1:64" into bound fields. Unknown dimension
/// names or malformed ranges throw ConfigError.
void apply_bounds_flag(RunConfig& cfg, const std::string& bounds);

}  // namespace s4cast::cli
