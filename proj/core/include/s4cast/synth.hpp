#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "s4cast/dataset.hpp"
#include "s4cast/ingest.hpp"

namespace s4cast {

/// Recipe for a seeded synthetic corpus. Class proportions are resolved to
/// exact integer counts by largest remainder; separation scales the
/// inter-class mean distance of the spatial/temporal features (lat, lon,
/// hour of day); solar indices vary only by day and carry no class signal.
struct SynthSpec {
    std::size_t n_rows = 1000;
    std::array<double, kNumClasses> class_proportions{1.0 / 3, 1.0 / 3, 1.0 / 3};
    double separation = 1.0;
    double noise_scale = 1.0;
    std::uint64_t seed = 0;

    void validate() const;  ///< proportions non-negative, sum 1 within 1e-9
};

/// Integer class counts from fractional proportions: floor everything, then
/// hand leftover rows to the largest fractional parts (ties to the lowest
/// class index).
std::array<std::size_t, kNumClasses> apportion_counts(
    std::size_t n_rows, const std::array<double, kNumClasses>& proportions);

struct SynthOutput {
    Dataset dataset;                  ///< features + labels, pipeline-equivalent
    std::vector<ScintRecord> records; ///< raw form; runs the pipeline cleanly
    std::vector<SolarDay> solar;      ///< one entry per day the records span
};

/// Deterministic generation; records are time-ordered and survive the full
/// pipeline with zero excluded rows, reproducing dataset exactly. S4 values
/// are drawn strictly inside their class bins so classification is exact by
/// construction.
SynthOutput generate(const SynthSpec& spec);

}  // namespace s4cast
