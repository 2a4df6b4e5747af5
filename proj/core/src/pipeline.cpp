#include "s4cast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast {

std::vector<ScintRecord> apply_elevation_cutoff(std::vector<ScintRecord> records,
                                                double cutoff_deg) {
    std::erase_if(records, [cutoff_deg](const ScintRecord& r) {
        return r.elevation_deg < cutoff_deg || r.s4 < 0.0;
    });
    return records;
}

double unwrap_longitude(double lon_deg) {
    return lon_deg < 0.0 ? lon_deg + 360.0 : lon_deg;
}

std::vector<ScintRecord> apply_s4_floor(std::vector<ScintRecord> records, double floor) {
    std::erase_if(records, [floor](const ScintRecord& r) { return r.s4 < floor; });
    return records;
}

Severity classify_s4(double s4) {
    if (s4 < 0.2) return Severity::weak;
    if (s4 < 0.3) return Severity::moderate;
    return Severity::severe;
}

Dataset balance(const Dataset& ds, std::uint64_t seed) {
    auto counts = ds.class_counts();
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[c] == 0) {
            throw DataError("cannot balance: class " + std::to_string(c + 1) + " (" +
                            std::string(severity_name(severity_from_index(c))) + ") is absent");
        }
    }
    std::size_t target = *std::min_element(counts.begin(), counts.end());

    // Per-class uniform sampling without replacement, then restore row order.
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        by_class[severity_index(ds[i].y)].push_back(i);
    }
    std::vector<std::size_t> selected;
    selected.reserve(target * kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) {
        Rng rng(derive_seed(seed, "balance.class" + std::to_string(c + 1)));
        std::vector<std::size_t>& pool = by_class[c];
        // Partial Fisher-Yates: the first `target` entries are the sample.
        for (std::size_t i = 0; i < target; ++i) {
            std::size_t j = i + rng.uniform_index(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        selected.insert(selected.end(), pool.begin(), pool.begin() + target);
    }
    std::sort(selected.begin(), selected.end());
    return ds.subset(selected, "balanced to " + std::to_string(target) +
                                   " rows/class (seed " + std::to_string(seed) + ")");
}

SplitPlan SplitPlan::holdout(double train_fraction, std::uint64_t seed) {
    SplitPlan p;
    p.kind = Kind::holdout;
    p.holdout_train_fraction = train_fraction;
    p.seed = seed;
    p.validate();
    return p;
}

SplitPlan SplitPlan::kfold(int k, std::uint64_t seed) {
    SplitPlan p;
    p.kind = Kind::kfold;
    p.k = k;
    p.seed = seed;
    p.validate();
    return p;
}

void SplitPlan::validate() const {
    if (kind == Kind::holdout) {
        if (!(holdout_train_fraction > 0.0 && holdout_train_fraction < 1.0)) {
            throw ConfigError("holdout train fraction must be in (0, 1)");
        }
    } else {
        if (k < 2) throw ConfigError("fold count must be >= 2");
    }
}

std::vector<SplitIndices> make_splits(std::size_t n_rows, const SplitPlan& plan) {
    plan.validate();
    if (n_rows == 0) throw DataError("cannot split an empty dataset");

    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(plan.seed, "split.shuffle"));
    rng.shuffle(order);

    std::vector<SplitIndices> splits;
    if (plan.kind == SplitPlan::Kind::holdout) {
        auto n_train = static_cast<std::size_t>(
            std::lround(plan.holdout_train_fraction * static_cast<double>(n_rows)));
        n_train = std::min(n_train, n_rows);
        SplitIndices s;
        s.train.assign(order.begin(), order.begin() + n_train);
        s.validation.assign(order.begin() + n_train, order.end());
        splits.push_back(std::move(s));
        return splits;
    }

    auto k = static_cast<std::size_t>(plan.k);
    if (k > n_rows) {
        throw DataError("fold count " + std::to_string(k) + " exceeds dataset size " +
                        std::to_string(n_rows));
    }
    // Deal shuffled indices round-robin: fold j receives positions j, j+k, ...
    // so remainder rows land in the first (n mod k) folds.
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t i = 0; i < n_rows; ++i) {
        folds[i % k].push_back(order[i]);
    }
    splits.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        splits[j].validation = folds[j];
        for (std::size_t m = 0; m < k; ++m) {
            if (m == j) continue;
            splits[j].train.insert(splits[j].train.end(), folds[m].begin(), folds[m].end());
        }
    }
    return splits;
}

FeatureVector extract_features(const ScintRecord& record, const SolarDay& solar,
                               const IppCoordinate& ipp) {
    FeatureVector f;
    UtcDate date = date_of(record.timestamp);
    f.doy = day_of_year(date);
    f.hod = hour_of_day(record.timestamp);
    f.ipp_lat_deg = ipp.lat_deg;
    f.ipp_lon_deg = unwrap_longitude(ipp.lon_deg);
    f.kp = solar.kp;
    f.ssn = solar.ssn;
    f.f107 = solar.f107;
    return f;
}

void PipelineOptions::validate() const {
    if (elevation_cutoff_deg < 0.0 || elevation_cutoff_deg > 90.0) {
        throw ConfigError("elevation cutoff must be in [0, 90]");
    }
    if (s4_floor < 0.0) throw ConfigError("s4 floor must be >= 0");
    if (ipp_mode == IppMode::computed && (!receiver_lat_deg || !receiver_lon_deg)) {
        throw ConfigError("computed IPP mode requires receiver latitude and longitude");
    }
}

Dataset run_pipeline(std::vector<ScintRecord> records, const std::vector<SolarDay>& solar,
                     const PipelineOptions& options, StageCounts* counts) {
    options.validate();
    StageCounts c;
    c.input_rows = records.size();

    records = apply_elevation_cutoff(std::move(records), options.elevation_cutoff_deg);
    c.after_elevation_filter = records.size();

    records = apply_s4_floor(std::move(records), options.s4_floor);
    c.after_s4_floor = records.size();

    JoinCounts jc;
    std::vector<JoinedRecord> joined = join_by_day(records, solar, &jc);
    c.excluded_no_solar_day = jc.excluded_no_solar_day;
    c.excluded_f107_missing = jc.excluded_f107_missing;

    std::vector<Dataset::Row> rows;
    rows.reserve(joined.size());
    for (const JoinedRecord& j : joined) {
        IppCoordinate ipp;
        if (options.ipp_mode == IppMode::recorded) {
            if (!j.record.ipp_lat_deg || !j.record.ipp_lon_deg) {
                ++c.excluded_unmappable;
                continue;
            }
            ipp = {*j.record.ipp_lat_deg, *j.record.ipp_lon_deg};
        } else {
            if (j.record.elevation_deg <= 0.0) {
                ++c.excluded_unmappable;
                continue;
            }
            ipp = compute_ipp(*options.receiver_lat_deg, *options.receiver_lon_deg,
                              j.record.elevation_deg, j.record.azimuth_deg, options.shell);
        }
        rows.push_back({extract_features(j.record, j.solar, ipp), classify_s4(j.record.s4)});
    }
    c.joined = rows.size();

    std::string provenance =
        "pipeline(cutoff=" + format_double(options.elevation_cutoff_deg) +
        ", floor=" + format_double(options.s4_floor) +
        ", ipp=" + (options.ipp_mode == IppMode::recorded ? "recorded" : "computed") + ")";
    Dataset ds(std::move(rows), provenance);
    c.class_counts = ds.class_counts();

    if (options.balance) {
        ds = balance(ds, options.seed);
        c.balanced_rows = ds.size();
    }
    if (counts) *counts = c;
    return ds;
}

}  // namespace s4cast
