#include "railload/csv.hpp"

#include "railload/errors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

namespace railload::csv {

std::string format(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) throw Error("csv: cannot format value");
    return std::string(buf, end);
}

double parse_double(std::string_view field, std::size_t line) {
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw FormatError("malformed number '" + std::string(field) + "'", line);
    if (!std::isfinite(v)) throw FormatError("non-finite value", line);
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

void write_columns(std::ostream& os, std::span<const std::string> header,
                   std::span<const std::vector<double>> columns) {
    if (header.size() != columns.size()) throw Error("csv: header/column count mismatch");
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns)
        if (col.size() != rows) throw Error("csv: ragged columns");
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << format(columns[c][r]);
        os << '\n';
    }
}

std::vector<std::vector<double>> read_columns(std::istream& is,
                                              std::span<const std::string> expected_header) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("missing header", 1);
    const auto fields = split(line);
    bool ok = fields.size() == expected_header.size();
    for (std::size_t i = 0; ok && i < fields.size(); ++i) ok = fields[i] == expected_header[i];
    if (!ok) throw FormatError("unexpected header '" + line + "'", 1);

    std::vector<std::vector<double>> cols(expected_header.size());
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto row = split(line);
        if (row.size() != cols.size())
            throw FormatError("expected " + std::to_string(cols.size()) + " fields, got " +
                                  std::to_string(row.size()),
                              lineno);
        for (std::size_t c = 0; c < row.size(); ++c) cols[c].push_back(parse_double(row[c], lineno));
    }
    return cols;
}

}  // namespace railload::csv
