#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/geo.hpp"
#include "s4cast/ingest.hpp"

namespace s4cast {

// The preprocessing stages, in order:
//   1. elevation cutoff (retain >= cutoff) and removal of negative S4
//   2. longitude unwrap (negative values + 360)
//   3. S4 floor (retain >= floor; values below it are "no scintillation")
//   4. join with daily solar indices, discarding missing-index days
//   5. S4 class binning
//   6. assembled (imbalanced) dataset
//   7. optional balancing to 3x the smallest class

/// Steps 1: retain records with elevation >= cutoff and s4 >= 0.
std::vector<ScintRecord> apply_elevation_cutoff(std::vector<ScintRecord> records,
                                                double cutoff_deg = 20.0);

/// Step 2. Input in [-180, 360): negative values gain 360, others unchanged.
double unwrap_longitude(double lon_deg);

/// Step 3: retain records with s4 >= floor.
std::vector<ScintRecord> apply_s4_floor(std::vector<ScintRecord> records, double floor = 0.05);

/// Step 5 class bins: s4 < 0.2 -> weak; 0.2 <= s4 < 0.3 -> moderate;
/// s4 >= 0.3 -> severe. Total and monotone in s4.
Severity classify_s4(double s4);

/// Step 7: uniform sampling without replacement of min-class-count rows from
/// each class. Output size is exactly 3x the smallest class count and the
/// selection is deterministic for a fixed seed.
/// Throws DataError naming the class when one is absent.
Dataset balance(const Dataset& ds, std::uint64_t seed);

/// Train/validation splitting protocol.
struct SplitPlan {
    enum class Kind { holdout, kfold };
    Kind kind = Kind::kfold;
    double holdout_train_fraction = 0.9;  ///< in (0, 1)
    int k = 10;                           ///< >= 2
    std::uint64_t seed = 0;

    static SplitPlan holdout(double train_fraction, std::uint64_t seed);
    static SplitPlan kfold(int k, std::uint64_t seed);
    void validate() const;  ///< throws ConfigError on out-of-range fields
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
};

/// Seeded shuffled splits over [0, n_rows). Holdout yields one pair with
/// |train| = round(fraction * n); k-fold yields k pairs whose validation sets
/// partition the index range, remainder rows going round-robin to the first
/// folds. Throws DataError when n_rows == 0 or k > n_rows.
std::vector<SplitIndices> make_splits(std::size_t n_rows, const SplitPlan& plan);

/// Assemble the seven model inputs from a joined observation.
FeatureVector extract_features(const ScintRecord& record, const SolarDay& solar,
                               const IppCoordinate& ipp);

/// Where the IPP coordinates come from.
enum class IppMode {
    recorded,  ///< use lat/lon carried in the ISMR records
    computed,  ///< map via the thin-shell model from receiver coordinates
};

struct PipelineOptions {
    double elevation_cutoff_deg = 20.0;
    double s4_floor = 0.05;
    IppMode ipp_mode = IppMode::recorded;
    ShellModel shell{};
    std::optional<double> receiver_lat_deg;  ///< required for IppMode::computed
    std::optional<double> receiver_lon_deg;
    bool balance = false;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Retained/excluded row counts at every stage; serialized into the
/// provenance sidecar so a run can be audited against expectations.
struct StageCounts {
    std::size_t input_rows = 0;
    std::size_t after_elevation_filter = 0;  ///< after step 1 (cutoff + s4 >= 0)
    std::size_t after_s4_floor = 0;
    std::size_t excluded_no_solar_day = 0;
    std::size_t excluded_f107_missing = 0;
    std::size_t excluded_unmappable = 0;  ///< no usable IPP coordinates
    std::size_t joined = 0;
    std::array<std::size_t, kNumClasses> class_counts{};
    std::size_t balanced_rows = 0;  ///< 0 when balancing was not requested
};

/// Run steps 1-7 end to end.
Dataset run_pipeline(std::vector<ScintRecord> records, const std::vector<SolarDay>& solar,
                     const PipelineOptions& options, StageCounts* counts = nullptr);

}  // namespace s4cast
