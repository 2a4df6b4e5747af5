#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "s4cast/calendar.hpp"

namespace s4cast {

/// One 1-minute scintillation observation as read from an ISMR-style file.
/// S4 is kept as-is (raw files may carry negative values); IPP coordinates are
/// present only when the receiver file provides them, in the raw convention
/// (longitude may be negative).
struct ScintRecord {
    UtcTime timestamp{};
    std::string sat_id;
    double elevation_deg = 0.0;
    double azimuth_deg = 0.0;
    double s4 = 0.0;
    std::optional<double> ipp_lat_deg;
    std::optional<double> ipp_lon_deg;
};

/// Daily averaged solar-activity indices. f107_missing is true exactly when
/// the raw F10.7 value equals the 999 sentinel.
struct SolarDay {
    UtcDate date{};
    double kp = 0.0;
    double ssn = 0.0;
    double f107 = 0.0;
    bool f107_missing = false;
};

inline constexpr double kF107MissingSentinel = 999.0;

/// Column selector: 0-based index into the row, or a header name (the file
/// must then start with a header row containing that name).
using ColumnRef = std::variant<int, std::string>;

/// Maps ISMR file columns to record fields. Receiver vendors disagree on
/// layout, so this lives in the tool's config file rather than in code.
struct IsmrFormat {
    ColumnRef time{0};
    ColumnRef sat{1};
    ColumnRef elevation{2};
    ColumnRef azimuth{3};
    ColumnRef s4{4};
    std::optional<ColumnRef> ipp_lat;
    std::optional<ColumnRef> ipp_lon;
    char delimiter = 0;       ///< 0 = auto-detect (comma if present, else whitespace)
    bool has_header = false;  ///< forced true when any ColumnRef holds a name
};

/// Solar daily-listing layout: a date followed by KP, SSN, F10.7. The date is
/// either ISO "YYYY-MM-DD" in one column or a (year, day-of-year) pair.
struct SolarFormat {
    enum class DateStyle { iso, year_doy };
    DateStyle date_style = DateStyle::iso;
    char delimiter = 0;
    bool has_header = false;
};

struct RowDiagnostic {
    std::size_t line_number = 0;  ///< 1-based
    std::string message;
};

struct IsmrParseResult {
    std::vector<ScintRecord> records;
    std::vector<RowDiagnostic> diagnostics;
    std::size_t input_rows = 0;  ///< data rows seen (excludes header/blank/comment)
};

struct SolarParseResult {
    std::vector<SolarDay> days;
    std::vector<RowDiagnostic> diagnostics;
    std::size_t input_rows = 0;
};

/// Parse an ISMR-style delimited stream. Malformed rows (bad numbers,
/// unparseable timestamps, elevation outside [0, 90]) are quarantined with
/// their line numbers, never silently dropped.
/// Throws DataError when the stream is unreadable or a named column is
/// missing from the header.
IsmrParseResult parse_ismr(std::istream& source, const IsmrFormat& format);

/// Parse a solar daily-index stream; one SolarDay per row.
/// Throws DataError on a duplicate date.
SolarParseResult parse_solar(std::istream& source, const SolarFormat& format = {});

struct JoinedRecord {
    ScintRecord record;
    SolarDay solar;
};

struct JoinCounts {
    std::size_t matched = 0;
    std::size_t excluded_no_solar_day = 0;
    std::size_t excluded_f107_missing = 0;
};

/// Pair each record with the SolarDay of its UTC calendar date. Records on
/// dates with no solar entry or with the F10.7 sentinel are excluded and
/// counted, mirroring how missing-index observations are discarded upstream.
std::vector<JoinedRecord> join_by_day(const std::vector<ScintRecord>& records,
                                      const std::vector<SolarDay>& solar,
                                      JoinCounts* counts = nullptr);

/// Canonical normalized CSV (timestamp, sat_id, elevation_deg, azimuth_deg,
/// s4, ipp_lat_deg, ipp_lon_deg). Numbers are written in shortest round-trip
/// form so a parse/serialize cycle is bit-exact.
void write_records_csv(std::ostream& out, const std::vector<ScintRecord>& records);
IsmrFormat normalized_records_format();

void write_solar_csv(std::ostream& out, const std::vector<SolarDay>& days);

}  // namespace s4cast
