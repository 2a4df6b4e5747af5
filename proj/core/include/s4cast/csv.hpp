#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace s4cast {

// Minimal delimited-text helpers shared by the ingest and dataset readers.
// Fields never contain quoted delimiters in the supported formats, so no
// quoting layer is implemented.

/// Split one line on the delimiter. delimiter == 0 means "any run of
/// whitespace"; otherwise empty fields between delimiters are preserved.
std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

/// Detect the delimiter of a line: ',' if a comma is present, else whitespace.
char detect_delimiter(std::string_view line);

/// Strict full-consume numeric parsing; rejects trailing garbage and
/// non-finite values.
std::optional<double> parse_double(std::string_view field);
std::optional<std::int64_t> parse_int64(std::string_view field);

/// Shortest round-trip decimal form (std::to_chars).
std::string format_double(double value);

/// Read all lines of a stream, stripping trailing '\r'.
std::vector<std::string> read_lines(std::istream& in);

/// True if the line is blank or starts with '#' after leading whitespace.
bool is_blank_or_comment(std::string_view line);

/// FNV-1a 64 over a byte range; used for file and dataset fingerprints.
std::uint64_t fnv1a64_bytes(std::string_view bytes);

/// 16-digit lowercase hex form used wherever fingerprints are printed.
std::string format_hex64(std::uint64_t value);

}  // namespace s4cast
