#include "s4cast/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "s4cast/calendar.hpp"
#include "s4cast/errors.hpp"
#include "s4cast/rng.hpp"

namespace s4cast {

namespace {

constexpr int kNumDays = 60;

double wrap_longitude(double lon) {
    lon = std::fmod(lon, 360.0);
    if (lon < 0.0) lon += 360.0;
    return lon;
}

}  // namespace

void SynthSpec::validate() const {
    if (n_rows == 0) throw ConfigError("n_rows must be positive");
    double sum = 0.0;
    for (double p : class_proportions) {
        if (p < 0.0) throw ConfigError("class proportions must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("class proportions must sum to 1");
    if (separation < 0.0) throw ConfigError("separation must be non-negative");
    if (noise_scale < 0.0) throw ConfigError("noise_scale must be non-negative");
}

std::array<std::size_t, kNumClasses> apportion_counts(
    std::size_t n_rows, const std::array<double, kNumClasses>& proportions) {
    std::array<std::size_t, kNumClasses> base{};
    std::array<double, kNumClasses> frac{};
    std::size_t assigned = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        double exact = static_cast<double>(n_rows) * proportions[c];
        base[c] = static_cast<std::size_t>(std::floor(exact));
        frac[c] = exact - std::floor(exact);
        assigned += base[c];
    }
    std::array<int, kNumClasses> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (frac[a] != frac[b]) return frac[a] > frac[b];
        return a < b;
    });
    for (std::size_t i = 0; assigned < n_rows; ++i, ++assigned)
        base[static_cast<std::size_t>(order[i % kNumClasses])]++;
    return base;
}

SynthOutput generate(const SynthSpec& spec) {
    spec.validate();
    using namespace std::chrono;
    const auto counts = apportion_counts(spec.n_rows, spec.class_proportions);
    const sys_days base_date{year{2014} / March / day{1}};

    std::vector<int> labels;
    labels.reserve(spec.n_rows);
    for (int c = 0; c < kNumClasses; ++c)
        labels.insert(labels.end(), counts[static_cast<std::size_t>(c)], c);
    Rng order_rng(derive_seed(spec.seed, "synth.order"));
    order_rng.shuffle(labels);

    SynthOutput out;
    Rng solar_rng(derive_seed(spec.seed, "synth.solar"));
    for (int d = 0; d < kNumDays; ++d) {
        SolarDay sd;
        sd.date = UtcDate{base_date + days{d}};
        sd.kp = std::clamp(solar_rng.normal(3.0, 1.0), 0.0, 9.0);
        sd.ssn = std::round(std::clamp(solar_rng.normal(80.0, 30.0), 0.0, 400.0));
        sd.f107 = std::clamp(solar_rng.normal(120.0, 25.0), 65.0, 300.0);
        sd.f107_missing = false;
        out.solar.push_back(sd);
    }

    struct Pending {
        ScintRecord rec;
        Dataset::Row row;
    };
    std::vector<Pending> pending;
    pending.reserve(spec.n_rows);

    Rng rng(derive_seed(spec.seed, "synth.rows"));
    for (std::size_t i = 0; i < spec.n_rows; ++i) {
        int c = labels[i];
        double offset = spec.separation * static_cast<double>(c - 1);
        std::size_t day_idx = rng.uniform_index(kNumDays);
        const SolarDay& sd = out.solar[day_idx];

        int hod = std::clamp(
            static_cast<int>(std::llround(rng.normal(12.0 + 2.0 * offset,
                                                     1.5 * spec.noise_scale))),
            0, 23);
        double lat = std::clamp(rng.normal(-70.0 + 3.0 * offset, 2.0 * spec.noise_scale),
                                -89.0, 89.0);
        double lon = wrap_longitude(rng.normal(180.0 + 15.0 * offset, 6.0 * spec.noise_scale));
        double elevation = rng.uniform(25.0, 85.0);
        double azimuth = rng.uniform(0.0, 360.0);
        double s4 = c == 0   ? rng.uniform(0.06, 0.19)
                    : c == 1 ? rng.uniform(0.21, 0.29)
                             : rng.uniform(0.31, 0.90);

        Pending p;
        p.rec.timestamp = sys_days{sd.date} + hours{hod} + minutes{i % 60} +
                          seconds{(i / 60) % 60};
        char sat[8];
        std::snprintf(sat, sizeof(sat), "G%02d", static_cast<int>(i % 32) + 1);
        p.rec.sat_id = sat;
        p.rec.elevation_deg = elevation;
        p.rec.azimuth_deg = azimuth;
        p.rec.s4 = s4;
        p.rec.ipp_lat_deg = lat;
        // Raw longitude convention: stored in [-180, 180) so the pipeline's
        // unwrap step restores the canonical value bit-exactly.
        p.rec.ipp_lon_deg = lon > 180.0 ? lon - 360.0 : lon;

        p.row.x.doy = day_of_year(sd.date);
        p.row.x.hod = hod;
        p.row.x.ipp_lat_deg = lat;
        p.row.x.ipp_lon_deg = lon;
        p.row.x.kp = sd.kp;
        p.row.x.ssn = sd.ssn;
        p.row.x.f107 = sd.f107;
        p.row.y = severity_from_index(c);
        pending.push_back(std::move(p));
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        return a.rec.timestamp < b.rec.timestamp;
    });

    std::vector<Dataset::Row> rows;
    rows.reserve(spec.n_rows);
    for (Pending& p : pending) {
        out.records.push_back(std::move(p.rec));
        rows.push_back(p.row);
    }
    char note[96];
    std::snprintf(note, sizeof(note), "synth(seed=%llu, rows=%zu, separation=%g)",
                  static_cast<unsigned long long>(spec.seed), spec.n_rows, spec.separation);
    out.dataset = Dataset(std::move(rows), note);
    return out;
}

}  // namespace s4cast
