#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "s4cast/dataset.hpp"

namespace s4cast {

/// 3x3 prediction-by-ground-truth count matrix. Rows are the predicted class,
/// columns the true class, so printed tables compare cell-for-cell with the
/// usual confusion-matrix layout (recall along columns, precision along rows).
class ConfusionMatrix {
public:
    void add(Severity predicted, Severity truth, std::uint64_t count = 1);

    /// Throws DataError when the sequences differ in length.
    static ConfusionMatrix from_pairs(std::span<const Severity> predicted,
                                      std::span<const Severity> truth);
    static ConfusionMatrix from_counts(
        const std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses>& counts);

    std::uint64_t at(int predicted_index, int truth_index) const {
        return counts_[predicted_index][truth_index];
    }
    std::uint64_t total() const;
    std::uint64_t row_sum(int predicted_index) const;     ///< predictions of this class
    std::uint64_t column_sum(int truth_index) const;      ///< ground-truth occurrences
    std::uint64_t diagonal_sum() const;

    /// Correct predictions over total. Throws DataError on an empty matrix.
    double accuracy() const;

    /// One-vs-rest rates; nullopt when the denominator is zero (an undefined
    /// rate is reported as such, never as 0).
    std::optional<double> precision(Severity c) const;
    std::optional<double> recall(Severity c) const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);

private:
    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts_{};
};

ConfusionMatrix operator+(ConfusionMatrix a, const ConfusionMatrix& b);

struct EvalSummary {
    ConfusionMatrix pooled;
    double accuracy = 0.0;
    std::array<std::optional<double>, kNumClasses> precision;
    std::array<std::optional<double>, kNumClasses> recall;
};

EvalSummary summarize(const ConfusionMatrix& cm);

/// Element-wise sum of per-fold matrices plus pooled rates.
/// Throws DataError when no folds are given.
EvalSummary aggregate_cv(std::span<const ConfusionMatrix> folds);

// Report emitters. Rates are rendered as percentages with 2 decimals; the
// underlying values keep full precision.
std::string to_text(const EvalSummary& summary);
std::string to_csv(const ConfusionMatrix& cm);
std::string to_json_string(const EvalSummary& summary, const std::string& split_note = {});
std::string confusion_to_json_string(const ConfusionMatrix& cm);

}  // namespace s4cast
