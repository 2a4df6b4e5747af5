#include "run_config.hpp"

#include <fstream>
#include <sstream>
#include <variant>

#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast::cli {

namespace {

nlohmann::json column_ref_json(const ColumnRef& ref) {
    if (const int* idx = std::get_if<int>(&ref)) return *idx;
    return std::get<std::string>(ref);
}

ColumnRef column_ref_from(const nlohmann::json& j, const std::string& key) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_string()) return j.get<std::string>();
    throw ConfigError("config: " + key + " must be a column index or header name");
}

std::string delimiter_json(char delimiter) {
    return delimiter == 0 ? std::string{} : std::string(1, delimiter);
}

char delimiter_from(const nlohmann::json& j, const std::string& key) {
    const auto text = j.get<std::string>();
    if (text.empty()) return 0;
    if (text.size() == 1) return text[0];
    throw ConfigError("config: " + key + " must be empty (auto) or a single character");
}

nlohmann::json ismr_format_json(const IsmrFormat& f) {
    nlohmann::json j{
        {"time", column_ref_json(f.time)},         {"sat", column_ref_json(f.sat)},
        {"elevation", column_ref_json(f.elevation)}, {"azimuth", column_ref_json(f.azimuth)},
        {"s4", column_ref_json(f.s4)},             {"delimiter", delimiter_json(f.delimiter)},
        {"has_header", f.has_header},
    };
    j["ipp_lat"] = f.ipp_lat ? column_ref_json(*f.ipp_lat) : nlohmann::json();
    j["ipp_lon"] = f.ipp_lon ? column_ref_json(*f.ipp_lon) : nlohmann::json();
    return j;
}

void ismr_format_from(const nlohmann::json& j, IsmrFormat& f) {
    if (j.contains("time")) f.time = column_ref_from(j.at("time"), "ismr_format.time");
    if (j.contains("sat")) f.sat = column_ref_from(j.at("sat"), "ismr_format.sat");
    if (j.contains("elevation"))
        f.elevation = column_ref_from(j.at("elevation"), "ismr_format.elevation");
    if (j.contains("azimuth")) f.azimuth = column_ref_from(j.at("azimuth"), "ismr_format.azimuth");
    if (j.contains("s4")) f.s4 = column_ref_from(j.at("s4"), "ismr_format.s4");
    if (j.contains("ipp_lat")) {
        const auto& v = j.at("ipp_lat");
        f.ipp_lat = v.is_null() ? std::optional<ColumnRef>{}
                                : column_ref_from(v, "ismr_format.ipp_lat");
    }
    if (j.contains("ipp_lon")) {
        const auto& v = j.at("ipp_lon");
        f.ipp_lon = v.is_null() ? std::optional<ColumnRef>{}
                                : column_ref_from(v, "ismr_format.ipp_lon");
    }
    if (j.contains("delimiter")) f.delimiter = delimiter_from(j.at("delimiter"), "ismr_format.delimiter");
    if (j.contains("has_header")) f.has_header = j.at("has_header").get<bool>();
}

nlohmann::json solar_format_json(const SolarFormat& f) {
    return {
        {"date_style", f.date_style == SolarFormat::DateStyle::iso ? "iso" : "year_doy"},
        {"delimiter", delimiter_json(f.delimiter)},
        {"has_header", f.has_header},
    };
}

void solar_format_from(const nlohmann::json& j, SolarFormat& f) {
    if (j.contains("date_style")) {
        const auto style = j.at("date_style").get<std::string>();
        if (style == "iso") {
            f.date_style = SolarFormat::DateStyle::iso;
        } else if (style == "year_doy") {
            f.date_style = SolarFormat::DateStyle::year_doy;
        } else {
            throw ConfigError("config: solar_format.date_style must be \"iso\" or \"year_doy\"");
        }
    }
    if (j.contains("delimiter"))
        f.delimiter = delimiter_from(j.at("delimiter"), "solar_format.delimiter");
    if (j.contains("has_header")) f.has_header = j.at("has_header").get<bool>();
}

nlohmann::json model_json(const ModelParams& m) {
    return {
        {"kind", model_kind_name(m.kind)},
        {"max_splits", m.max_splits},
        {"n_learners", m.n_learners},
        {"learning_rate", m.learning_rate},
        {"k_neighbors", m.k_neighbors},
        {"kernel_scale", m.kernel_scale},
        {"box_constraint", m.box_constraint},
        {"svm_tolerance", m.svm_tolerance},
        {"svm_max_sweeps", m.svm_max_sweeps},
        {"split_criterion", m.split_criterion},
        {"distance_weighting", m.distance_weighting},
        {"nb_likelihood", m.nb_likelihood},
    };
}

void model_from(const nlohmann::json& j, ModelParams& m) {
    if (j.contains("kind")) m.kind = model_kind_from_name(j.at("kind").get<std::string>());
    if (j.contains("max_splits")) m.max_splits = j.at("max_splits").get<int>();
    if (j.contains("n_learners")) m.n_learners = j.at("n_learners").get<int>();
    if (j.contains("learning_rate")) m.learning_rate = j.at("learning_rate").get<double>();
    if (j.contains("k_neighbors")) m.k_neighbors = j.at("k_neighbors").get<int>();
    if (j.contains("kernel_scale")) m.kernel_scale = j.at("kernel_scale").get<double>();
    if (j.contains("box_constraint")) m.box_constraint = j.at("box_constraint").get<double>();
    if (j.contains("svm_tolerance")) m.svm_tolerance = j.at("svm_tolerance").get<double>();
    if (j.contains("svm_max_sweeps")) m.svm_max_sweeps = j.at("svm_max_sweeps").get<int>();
    if (j.contains("split_criterion")) m.split_criterion = j.at("split_criterion").get<std::string>();
    if (j.contains("distance_weighting"))
        m.distance_weighting = j.at("distance_weighting").get<std::string>();
    if (j.contains("nb_likelihood")) m.nb_likelihood = j.at("nb_likelihood").get<std::string>();
}

std::array<int, 2> bounds_pair(const nlohmann::json& j, const std::string& key) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config: tune.bounds." + key + " must be [lo, hi]");
    return {j.at(0).get<int>(), j.at(1).get<int>()};
}

}  // namespace

std::uint64_t RunConfig::seed_for(std::string_view role) const {
    return derive_seed(seed, role);
}

ModelParams RunConfig::effective_model() const {
    ModelParams m = model;
    m.seed = seed_for("model");
    return m;
}

SynthSpec RunConfig::effective_synth() const {
    SynthSpec s = synth;
    s.seed = seed_for("synth");
    return s;
}

TuneOptions RunConfig::effective_tune() const {
    TuneOptions t = tune;
    t.seed = seed_for("tune");
    return t;
}

SplitPlan RunConfig::split_plan() const {
    if (split_kind == "kfold") return SplitPlan::kfold(folds, seed_for("split"));
    if (split_kind == "holdout") return SplitPlan::holdout(train_fraction, seed_for("split"));
    throw ConfigError("split kind must be \"kfold\" or \"holdout\", got \"" + split_kind + "\"");
}

PipelineOptions RunConfig::pipeline_options() const {
    PipelineOptions opt;
    opt.elevation_cutoff_deg = elevation_cutoff_deg;
    opt.s4_floor = s4_floor;
    if (ipp_mode == "recorded") {
        opt.ipp_mode = IppMode::recorded;
    } else if (ipp_mode == "computed") {
        opt.ipp_mode = IppMode::computed;
    } else {
        throw ConfigError("ipp mode must be \"recorded\" or \"computed\", got \"" + ipp_mode + "\"");
    }
    opt.receiver_lat_deg = receiver_lat_deg;
    opt.receiver_lon_deg = receiver_lon_deg;
    opt.balance = balance;
    opt.seed = seed_for("balance");
    return opt;
}

SearchSpace RunConfig::search_space() const {
    SearchSpace space;
    space.dims.push_back({"splits", splits_lo, splits_hi, true});
    space.dims.push_back({"learners", learners_lo, learners_hi, false});
    space.validate();
    return space;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["out"] = out_dir;
    j["ismr"] = ismr_path;
    j["solar"] = solar_path;
    j["records"] = records_path;
    j["data"] = data_path;
    j["model_file"] = model_file;
    j["predictions"] = predictions_path;
    j["ismr_format"] = ismr_format_json(ismr_format);
    j["solar_format"] = solar_format_json(solar_format);
    j["preprocess"] = {
        {"cutoff", elevation_cutoff_deg},
        {"floor", s4_floor},
        {"ipp", ipp_mode},
        {"receiver_lat", receiver_lat_deg ? nlohmann::json(*receiver_lat_deg) : nlohmann::json()},
        {"receiver_lon", receiver_lon_deg ? nlohmann::json(*receiver_lon_deg) : nlohmann::json()},
        {"balance", balance},
    };
    j["model"] = model_json(model);
    j["split"] = {
        {"kind", split_kind},
        {"k", folds},
        {"train_fraction", train_fraction},
    };
    j["tune"] = {
        {"iterations", tune.n_iterations},
        {"initial", tune.n_initial},
        {"candidates", tune.n_candidates},
        {"bounds",
         {{"splits", {splits_lo, splits_hi}}, {"learners", {learners_lo, learners_hi}}}},
    };
    j["synth"] = {
        {"rows", synth.n_rows},
        {"proportions", synth.class_proportions},
        {"separation", synth.separation},
        {"noise_scale", synth.noise_scale},
    };
    return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    try {
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
        if (j.contains("ismr")) cfg.ismr_path = j.at("ismr").get<std::string>();
        if (j.contains("solar")) cfg.solar_path = j.at("solar").get<std::string>();
        if (j.contains("records")) cfg.records_path = j.at("records").get<std::string>();
        if (j.contains("data")) cfg.data_path = j.at("data").get<std::string>();
        if (j.contains("model_file")) cfg.model_file = j.at("model_file").get<std::string>();
        if (j.contains("predictions")) cfg.predictions_path = j.at("predictions").get<std::string>();
        if (j.contains("ismr_format")) ismr_format_from(j.at("ismr_format"), cfg.ismr_format);
        if (j.contains("solar_format")) solar_format_from(j.at("solar_format"), cfg.solar_format);
        if (j.contains("preprocess")) {
            const auto& p = j.at("preprocess");
            if (p.contains("cutoff")) cfg.elevation_cutoff_deg = p.at("cutoff").get<double>();
            if (p.contains("floor")) cfg.s4_floor = p.at("floor").get<double>();
            if (p.contains("ipp")) cfg.ipp_mode = p.at("ipp").get<std::string>();
            if (p.contains("receiver_lat") && !p.at("receiver_lat").is_null())
                cfg.receiver_lat_deg = p.at("receiver_lat").get<double>();
            if (p.contains("receiver_lon") && !p.at("receiver_lon").is_null())
                cfg.receiver_lon_deg = p.at("receiver_lon").get<double>();
            if (p.contains("balance")) cfg.balance = p.at("balance").get<bool>();
        }
        if (j.contains("model")) model_from(j.at("model"), cfg.model);
        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (s.contains("kind")) cfg.split_kind = s.at("kind").get<std::string>();
            if (s.contains("k")) cfg.folds = s.at("k").get<int>();
            if (s.contains("train_fraction"))
                cfg.train_fraction = s.at("train_fraction").get<double>();
        }
        if (j.contains("tune")) {
            const auto& t = j.at("tune");
            if (t.contains("iterations")) cfg.tune.n_iterations = t.at("iterations").get<int>();
            if (t.contains("initial")) cfg.tune.n_initial = t.at("initial").get<int>();
            if (t.contains("candidates")) cfg.tune.n_candidates = t.at("candidates").get<int>();
            if (t.contains("bounds")) {
                const auto& b = t.at("bounds");
                if (b.contains("splits")) {
                    const auto lohi = bounds_pair(b.at("splits"), "splits");
                    cfg.splits_lo = lohi[0];
                    cfg.splits_hi = lohi[1];
                }
                if (b.contains("learners")) {
                    const auto lohi = bounds_pair(b.at("learners"), "learners");
                    cfg.learners_lo = lohi[0];
                    cfg.learners_hi = lohi[1];
                }
            }
        }
        if (j.contains("synth")) {
            const auto& s = j.at("synth");
            if (s.contains("rows")) cfg.synth.n_rows = s.at("rows").get<std::size_t>();
            if (s.contains("proportions")) {
                const auto& p = s.at("proportions");
                if (!p.is_array() || p.size() != kNumClasses)
                    throw ConfigError("config: synth.proportions must list 3 values");
                for (int c = 0; c < kNumClasses; ++c)
                    cfg.synth.class_proportions[c] = p.at(c).get<double>();
            }
            if (s.contains("separation")) cfg.synth.separation = s.at("separation").get<double>();
            if (s.contains("noise_scale"))
                cfg.synth.noise_scale = s.at("noise_scale").get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

void RunConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file " + path.string());
    out << to_json().dump(2) << '\n';
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return from_json(j);
}

void apply_bounds_flag(RunConfig& cfg, const std::string& bounds) {
    std::stringstream stream(bounds);
    std::string entry;
    while (std::getline(stream, entry, ',')) {
        const auto eq = entry.find('=');
        const auto colon = entry.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos)
            throw ConfigError("--bounds entries must look like name=lo:hi, got \"" + entry + "\"");
        const std::string name = entry.substr(0, eq);
        int lo = 0;
        int hi = 0;
        try {
            lo = std::stoi(entry.substr(eq + 1, colon - eq - 1));
            hi = std::stoi(entry.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("--bounds range in \"" + entry + "\" is not numeric");
        }
        if (name == "splits") {
            cfg.splits_lo = lo;
            cfg.splits_hi = hi;
        } else if (name == "learners") {
            cfg.learners_lo = lo;
            cfg.learners_hi = hi;
        } else {
            throw ConfigError("--bounds dimension must be splits or learners, got \"" + name +
                              "\"");
        }
    }
}

}  // namespace s4cast::cli
