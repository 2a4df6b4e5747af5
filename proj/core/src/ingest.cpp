#include "s4cast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include "s4cast/csv.hpp"
#include "s4cast/errors.hpp"

namespace s4cast {

namespace {

bool uses_names(const IsmrFormat& f) {
    auto named = [](const ColumnRef& r) { return std::holds_alternative<std::string>(r); };
    return named(f.time) || named(f.sat) || named(f.elevation) || named(f.azimuth) ||
           named(f.s4) || (f.ipp_lat && named(*f.ipp_lat)) || (f.ipp_lon && named(*f.ipp_lon));
}

int resolve_column(const ColumnRef& ref, const std::vector<std::string_view>& header,
                   const char* field_name) {
    if (const int* idx = std::get_if<int>(&ref)) {
        if (*idx < 0) throw ConfigError(std::string("negative column index for ") + field_name);
        return *idx;
    }
    const std::string& name = std::get<std::string>(ref);
    auto it = std::find(header.begin(), header.end(), std::string_view(name));
    if (it == header.end()) {
        throw DataError("ISMR header is missing column '" + name + "' (" + field_name + ")");
    }
    return static_cast<int>(it - header.begin());
}

std::optional<double> field_double(const std::vector<std::string_view>& fields, int idx) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= fields.size()) return std::nullopt;
    return parse_double(fields[idx]);
}

// Azimuths are accepted in [-360, 360) and folded into [0, 360).
std::optional<double> normalize_azimuth(double az) {
    if (az < -360.0 || az >= 360.0) return std::nullopt;
    if (az < 0.0) az += 360.0;
    return az;
}

}  // namespace

IsmrParseResult parse_ismr(std::istream& source, const IsmrFormat& format) {
    if (!source) throw DataError("cannot read ISMR stream");
    IsmrParseResult result;

    std::vector<std::string> lines = read_lines(source);
    if (source.bad()) throw DataError("I/O failure while reading ISMR stream");

    bool need_header = format.has_header || uses_names(format);
    char delimiter = format.delimiter;

    // Resolved 0-based indices.
    int c_time = -1, c_sat = -1, c_elev = -1, c_az = -1, c_s4 = -1, c_lat = -1, c_lon = -1;
    bool resolved = false;

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (is_blank_or_comment(line)) continue;
        if (delimiter == 0 && format.delimiter == 0) delimiter = detect_delimiter(line);

        std::vector<std::string_view> fields = split_fields(line, delimiter);

        if (!resolved) {
            std::vector<std::string_view> header;
            if (need_header) {
                header = fields;
            }
            c_time = resolve_column(format.time, header, "time");
            c_sat = resolve_column(format.sat, header, "sat");
            c_elev = resolve_column(format.elevation, header, "elevation");
            c_az = resolve_column(format.azimuth, header, "azimuth");
            c_s4 = resolve_column(format.s4, header, "s4");
            if (format.ipp_lat) c_lat = resolve_column(*format.ipp_lat, header, "ipp_lat");
            if (format.ipp_lon) c_lon = resolve_column(*format.ipp_lon, header, "ipp_lon");
            resolved = true;
            if (need_header) continue;  // header row consumed
        }

        ++result.input_rows;
        std::size_t line_no = li + 1;
        auto reject = [&](std::string msg) {
            result.diagnostics.push_back({line_no, std::move(msg)});
        };

        int max_col = std::max({c_time, c_sat, c_elev, c_az, c_s4, c_lat, c_lon});
        if (static_cast<std::size_t>(max_col) >= fields.size()) {
            reject("row has " + std::to_string(fields.size()) + " fields, need " +
                   std::to_string(max_col + 1));
            continue;
        }

        auto ts = parse_utc_time(fields[c_time]);
        if (!ts) {
            reject("unparseable timestamp '" + std::string(fields[c_time]) + "'");
            continue;
        }
        auto elev = field_double(fields, c_elev);
        if (!elev) {
            reject("non-numeric elevation '" + std::string(fields[c_elev]) + "'");
            continue;
        }
        if (*elev < 0.0 || *elev > 90.0) {
            reject("elevation " + format_double(*elev) + " outside [0, 90]");
            continue;
        }
        auto az_raw = field_double(fields, c_az);
        if (!az_raw) {
            reject("non-numeric azimuth '" + std::string(fields[c_az]) + "'");
            continue;
        }
        auto az = normalize_azimuth(*az_raw);
        if (!az) {
            reject("azimuth " + format_double(*az_raw) + " outside [-360, 360)");
            continue;
        }
        auto s4 = field_double(fields, c_s4);
        if (!s4) {
            reject("non-numeric S4 '" + std::string(fields[c_s4]) + "'");
            continue;
        }

        ScintRecord rec;
        rec.timestamp = *ts;
        rec.sat_id = std::string(fields[c_sat]);
        rec.elevation_deg = *elev;
        rec.azimuth_deg = *az;
        rec.s4 = *s4;
        if (c_lat >= 0 && !fields[c_lat].empty()) {
            auto lat = field_double(fields, c_lat);
            if (!lat || *lat < -90.0 || *lat > 90.0) {
                reject("bad IPP latitude '" + std::string(fields[c_lat]) + "'");
                continue;
            }
            rec.ipp_lat_deg = lat;
        }
        if (c_lon >= 0 && !fields[c_lon].empty()) {
            auto lon = field_double(fields, c_lon);
            if (!lon) {
                reject("bad IPP longitude '" + std::string(fields[c_lon]) + "'");
                continue;
            }
            rec.ipp_lon_deg = lon;
        }
        result.records.push_back(std::move(rec));
    }

    if (!resolved && need_header) {
        throw DataError("ISMR stream has no header row to resolve named columns against");
    }
    return result;
}

SolarParseResult parse_solar(std::istream& source, const SolarFormat& format) {
    if (!source) throw DataError("cannot read solar-index stream");
    SolarParseResult result;

    std::vector<std::string> lines = read_lines(source);
    if (source.bad()) throw DataError("I/O failure while reading solar-index stream");

    char delimiter = format.delimiter;
    bool header_pending = format.has_header;
    std::map<std::chrono::sys_days, std::size_t> seen;  // date -> line number

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        if (is_blank_or_comment(line)) continue;
        if (delimiter == 0 && format.delimiter == 0) delimiter = detect_delimiter(line);
        if (header_pending) {
            header_pending = false;
            continue;
        }

        ++result.input_rows;
        std::size_t line_no = li + 1;
        auto reject = [&](std::string msg) {
            result.diagnostics.push_back({line_no, std::move(msg)});
        };

        std::vector<std::string_view> fields = split_fields(line, delimiter);
        std::size_t date_width = format.date_style == SolarFormat::DateStyle::iso ? 1 : 2;
        if (fields.size() < date_width + 3) {
            reject("row has " + std::to_string(fields.size()) + " fields, need " +
                   std::to_string(date_width + 3));
            continue;
        }

        std::optional<UtcDate> date;
        if (format.date_style == SolarFormat::DateStyle::iso) {
            date = parse_utc_date(fields[0]);
        } else {
            auto year = parse_int64(fields[0]);
            auto doy = parse_int64(fields[1]);
            if (year && doy) {
                date = date_from_year_doy(static_cast<int>(*year), static_cast<int>(*doy));
            }
        }
        if (!date) {
            reject("unparseable date '" + std::string(fields[0]) + "'");
            continue;
        }

        auto kp = parse_double(fields[date_width]);
        auto ssn = parse_double(fields[date_width + 1]);
        auto f107 = parse_double(fields[date_width + 2]);
        if (!kp || !ssn || !f107) {
            reject("non-numeric index value");
            continue;
        }

        std::chrono::sys_days key{*date};
        auto [it, inserted] = seen.emplace(key, line_no);
        if (!inserted) {
            throw DataError("duplicate solar date " + format_utc_date(*date) + " at line " +
                            std::to_string(line_no) + " (first at line " +
                            std::to_string(it->second) + ")");
        }

        SolarDay day;
        day.date = *date;
        day.kp = *kp;
        day.ssn = *ssn;
        day.f107 = *f107;
        day.f107_missing = (*f107 == kF107MissingSentinel);
        result.days.push_back(day);
    }
    return result;
}

std::vector<JoinedRecord> join_by_day(const std::vector<ScintRecord>& records,
                                      const std::vector<SolarDay>& solar,
                                      JoinCounts* counts) {
    std::map<std::chrono::sys_days, const SolarDay*> by_date;
    for (const SolarDay& d : solar) {
        by_date[std::chrono::sys_days{d.date}] = &d;
    }

    JoinCounts local;
    std::vector<JoinedRecord> out;
    out.reserve(records.size());
    for (const ScintRecord& rec : records) {
        auto day = std::chrono::floor<std::chrono::days>(rec.timestamp);
        auto it = by_date.find(day);
        if (it == by_date.end()) {
            ++local.excluded_no_solar_day;
            continue;
        }
        if (it->second->f107_missing) {
            ++local.excluded_f107_missing;
            continue;
        }
        ++local.matched;
        out.push_back({rec, *it->second});
    }
    if (counts) *counts = local;
    return out;
}

void write_records_csv(std::ostream& out, const std::vector<ScintRecord>& records) {
    out << "timestamp,sat_id,elevation_deg,azimuth_deg,s4,ipp_lat_deg,ipp_lon_deg\n";
    for (const ScintRecord& r : records) {
        out << format_utc_time(r.timestamp) << ',' << r.sat_id << ','
            << format_double(r.elevation_deg) << ',' << format_double(r.azimuth_deg) << ','
            << format_double(r.s4) << ',';
        if (r.ipp_lat_deg) out << format_double(*r.ipp_lat_deg);
        out << ',';
        if (r.ipp_lon_deg) out << format_double(*r.ipp_lon_deg);
        out << '\n';
    }
}

IsmrFormat normalized_records_format() {
    IsmrFormat f;
    f.time = std::string("timestamp");
    f.sat = std::string("sat_id");
    f.elevation = std::string("elevation_deg");
    f.azimuth = std::string("azimuth_deg");
    f.s4 = std::string("s4");
    f.ipp_lat = ColumnRef{std::string("ipp_lat_deg")};
    f.ipp_lon = ColumnRef{std::string("ipp_lon_deg")};
    f.delimiter = ',';
    f.has_header = true;
    return f;
}

void write_solar_csv(std::ostream& out, const std::vector<SolarDay>& days) {
    out << "date,kp,ssn,f107\n";
    for (const SolarDay& d : days) {
        out << format_utc_date(d.date) << ',' << format_double(d.kp) << ','
            << format_double(d.ssn) << ',' << format_double(d.f107) << '\n';
    }
}

}  // namespace s4cast
