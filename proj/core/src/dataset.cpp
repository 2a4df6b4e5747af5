#include "s4cast/dataset.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"

namespace s4cast {

Severity severity_from_value(int value) {
    if (value < 1 || value > 3) {
        throw DataError("severity class " + std::to_string(value) + " outside {1, 2, 3}");
    }
    return static_cast<Severity>(value);
}

Severity severity_from_index(int index) { return severity_from_value(index + 1); }

std::string_view severity_name(Severity s) {
    switch (s) {
        case Severity::weak: return "weak";
        case Severity::moderate: return "moderate";
        case Severity::severe: return "severe";
    }
    return "?";
}

std::array<double, FeatureVector::kNumFeatures> FeatureVector::values() const {
    return {static_cast<double>(doy), static_cast<double>(hod),
            ipp_lat_deg, ipp_lon_deg, kp, ssn, f107};
}

FeatureVector FeatureVector::from_values(const std::array<double, kNumFeatures>& v) {
    FeatureVector f;
    f.doy = static_cast<int>(std::lround(v[0]));
    f.hod = static_cast<int>(std::lround(v[1]));
    f.ipp_lat_deg = v[2];
    f.ipp_lon_deg = v[3];
    f.kp = v[4];
    f.ssn = v[5];
    f.f107 = v[6];
    return f;
}

const std::array<std::string_view, FeatureVector::kNumFeatures>& FeatureVector::feature_names() {
    static const std::array<std::string_view, kNumFeatures> names = {
        "doy", "hod", "ipp_lat_deg", "ipp_lon_deg", "kp", "ssn", "f107"};
    return names;
}

bool operator==(const FeatureVector& a, const FeatureVector& b) {
    return a.values() == b.values();
}

Dataset::Dataset(std::vector<Row> rows, std::string provenance)
    : rows_(std::move(rows)), provenance_(std::move(provenance)) {}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const Row& r : rows_) ++counts[severity_index(r.y)];
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices, std::string_view note) const {
    std::vector<Row> rows;
    rows.reserve(indices.size());
    for (std::size_t i : indices) rows.push_back(rows_[i]);
    std::string prov = provenance_;
    if (!prov.empty()) prov += "; ";
    prov += note;
    return Dataset(std::move(rows), std::move(prov));
}

std::uint64_t Dataset::fingerprint() const {
    std::ostringstream os;
    write_dataset_csv(os, *this);
    return fnv1a64_bytes(os.str());
}

FeatureMatrix FeatureMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix m;
    m.n_rows = rows.size();
    m.n_cols = rows.empty() ? 0 : rows.front().size();
    m.data.reserve(m.n_rows * m.n_cols);
    for (const auto& r : rows) {
        if (r.size() != m.n_cols) throw DataError("ragged feature rows");
        m.data.insert(m.data.end(), r.begin(), r.end());
    }
    return m;
}

FeatureMatrix to_matrix(const Dataset& ds) {
    FeatureMatrix m;
    m.n_rows = ds.size();
    m.n_cols = FeatureVector::kNumFeatures;
    m.data.reserve(m.n_rows * m.n_cols);
    for (const Dataset::Row& r : ds.rows()) {
        auto v = r.x.values();
        m.data.insert(m.data.end(), v.begin(), v.end());
    }
    return m;
}

std::vector<int> to_label_indices(const Dataset& ds) {
    std::vector<int> y;
    y.reserve(ds.size());
    for (const Dataset::Row& r : ds.rows()) y.push_back(severity_index(r.y));
    return y;
}

void write_dataset_csv(std::ostream& out, const Dataset& ds) {
    const auto& names = FeatureVector::feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << ',';
    out << "class\n";
    for (const Dataset::Row& r : ds.rows()) {
        out << r.x.doy << ',' << r.x.hod << ',' << format_double(r.x.ipp_lat_deg) << ','
            << format_double(r.x.ipp_lon_deg) << ',' << format_double(r.x.kp) << ','
            << format_double(r.x.ssn) << ',' << format_double(r.x.f107) << ','
            << severity_value(r.y) << '\n';
    }
}

Dataset read_dataset_csv(std::istream& in, std::string provenance) {
    std::vector<std::string> lines = read_lines(in);
    std::vector<Dataset::Row> rows;
    bool header_seen = false;
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (is_blank_or_comment(line)) continue;
        if (!header_seen) {
            header_seen = true;  // header is required and fixed
            if (line.find("doy") == std::string::npos) {
                throw DataError("dataset CSV missing header row");
            }
            continue;
        }
        auto fields = split_fields(line, ',');
        if (fields.size() != FeatureVector::kNumFeatures + 1) {
            throw DataError("dataset CSV line " + std::to_string(li + 1) + " has " +
                            std::to_string(fields.size()) + " fields, expected 8");
        }
        std::array<double, FeatureVector::kNumFeatures> v{};
        for (std::size_t c = 0; c < v.size(); ++c) {
            auto d = parse_double(fields[c]);
            if (!d) {
                throw DataError("dataset CSV line " + std::to_string(li + 1) +
                                ": bad value '" + std::string(fields[c]) + "'");
            }
            v[c] = *d;
        }
        auto cls = parse_int64(fields.back());
        if (!cls) {
            throw DataError("dataset CSV line " + std::to_string(li + 1) + ": bad class");
        }
        rows.push_back({FeatureVector::from_values(v), severity_from_value(static_cast<int>(*cls))});
    }
    if (!header_seen) throw DataError("dataset CSV is empty");
    return Dataset(std::move(rows), std::move(provenance));
}

}  // namespace s4cast
