#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace railload::csv {

/// Shortest decimal text that parses back to exactly `v`.
std::string format(double v);

/// Parses a complete field as a double; throws FormatError naming `line`.
double parse_double(std::string_view field, std::size_t line);

/// Splits one CSV line on commas (no quoting; trailing CR stripped).
std::vector<std::string_view> split(std::string_view line);

/// Writes a header line and rows of equal-length numeric columns.
void write_columns(std::ostream& os, std::span<const std::string> header,
                   std::span<const std::vector<double>> columns);

/// Reads a numeric CSV whose header must equal `expected_header`.
std::vector<std::vector<double>> read_columns(std::istream& is,
                                              std::span<const std::string> expected_header);

}  // namespace railload::csv
