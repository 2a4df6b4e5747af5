#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace s4cast {

/// Amplitude-scintillation severity class. The numeric values 1..3 match the
/// S4 class bins (weak / moderate / severe).
enum class Severity : int {
    weak = 1,
    moderate = 2,
    severe = 3,
};

inline constexpr int kNumClasses = 3;

constexpr int severity_value(Severity s) { return static_cast<int>(s); }
constexpr int severity_index(Severity s) { return static_cast<int>(s) - 1; }
Severity severity_from_value(int value);        ///< throws DataError outside {1,2,3}
Severity severity_from_index(int index);        ///< 0-based
std::string_view severity_name(Severity s);

/// The seven model inputs.
struct FeatureVector {
    int doy = 1;               ///< day of year, 1..366
    int hod = 0;               ///< hour of day, 0..23
    double ipp_lat_deg = 0.0;
    double ipp_lon_deg = 0.0;  ///< [0, 360) after longitude unwrap
    double kp = 0.0;
    double ssn = 0.0;
    double f107 = 0.0;

    static constexpr std::size_t kNumFeatures = 7;

    std::array<double, kNumFeatures> values() const;
    static FeatureVector from_values(const std::array<double, kNumFeatures>& v);
    static const std::array<std::string_view, kNumFeatures>& feature_names();
};

bool operator==(const FeatureVector& a, const FeatureVector& b);

/// Ordered, immutable collection of labelled feature vectors with free-text
/// lineage describing how it was produced.
class Dataset {
public:
    struct Row {
        FeatureVector x;
        Severity y = Severity::weak;
    };

    Dataset() = default;
    explicit Dataset(std::vector<Row> rows, std::string provenance = {});

    const std::vector<Row>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }
    bool empty() const { return rows_.empty(); }
    const Row& operator[](std::size_t i) const { return rows_[i]; }

    std::array<std::size_t, kNumClasses> class_counts() const;
    const std::string& provenance() const { return provenance_; }

    /// New dataset holding the given rows of this one (order preserved),
    /// with a lineage note appended.
    Dataset subset(std::span<const std::size_t> indices, std::string_view note) const;

    /// FNV-1a over the canonical CSV form; stable across runs.
    std::uint64_t fingerprint() const;

private:
    std::vector<Row> rows_;
    std::string provenance_;
};

/// Row-major feature matrix view used by the learners. Learners are written
/// against this instead of Dataset so test fixtures can use fewer columns.
struct FeatureMatrix {
    std::vector<double> data;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    double* row(std::size_t r) { return data.data() + r * n_cols; }
    const double* row(std::size_t r) const { return data.data() + r * n_cols; }
    std::span<const double> row_span(std::size_t r) const {
        return {data.data() + r * n_cols, n_cols};
    }
    double at(std::size_t r, std::size_t c) const { return data[r * n_cols + c]; }

    static FeatureMatrix from_rows(const std::vector<std::vector<double>>& rows);
};

FeatureMatrix to_matrix(const Dataset& ds);
std::vector<int> to_label_indices(const Dataset& ds);  ///< 0-based class indices

/// CSV with header doy,hod,ipp_lat_deg,ipp_lon_deg,kp,ssn,f107,class.
void write_dataset_csv(std::ostream& out, const Dataset& ds);
Dataset read_dataset_csv(std::istream& in, std::string provenance = {});

}  // namespace s4cast
