#include "railload/accel_log.hpp"

#include "railload/csv.hpp"
#include "railload/errors.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace railload::signal {

std::vector<AccelLogRecord> parse_log(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("missing header", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (line != log_header) throw FormatError("unexpected header '" + line + "'", 1);

    std::vector<AccelLogRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 13)
            throw FormatError("expected 13 fields, got " + std::to_string(f.size()), lineno);
        AccelLogRecord r;
        r.timestamp = csv::parse_double(f[0], lineno);
        for (int k = 0; k < 3; ++k) {
            r.accel[k] = csv::parse_double(f[1 + k], lineno);
            r.gyro[k] = csv::parse_double(f[4 + k], lineno);
            r.mag[k] = csv::parse_double(f[7 + k], lineno);
            r.orientation[k] = csv::parse_double(f[10 + k], lineno);
        }
        if (!out.empty() && !(r.timestamp > out.back().timestamp))
            throw FormatError("timestamp does not increase", lineno);
        out.push_back(r);
    }
    return out;
}

void write_log(std::ostream& os, std::span<const AccelLogRecord> records) {
    os << log_header << '\n';
    for (const auto& r : records) {
        os << csv::format(r.timestamp);
        for (const auto* group : {&r.accel, &r.gyro, &r.mag, &r.orientation})
            for (double v : *group) os << ',' << csv::format(v);
        os << '\n';
    }
}

double estimate_sample_rate(std::span<const AccelLogRecord> records) {
    if (records.size() < 2) throw InputError("sample rate needs at least two records");
    const double span = records.back().timestamp - records.front().timestamp;
    return static_cast<double>(records.size() - 1) / span;
}

int vertical_axis(std::span<const AccelLogRecord> records) {
    if (records.empty()) throw InputError("vertical_axis: empty log");
    int best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (const auto& r : records) sum += r.accel[k];
        const double gap = std::abs(std::abs(sum / static_cast<double>(records.size())) - 9.80665);
        if (gap < best_gap) {
            best_gap = gap;
            best = k;
        }
    }
    return best;
}

std::vector<double> accel_channel(std::span<const AccelLogRecord> records, int axis) {
    if (axis < 0 || axis > 2) throw InputError("accel axis must be 0, 1 or 2");
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.accel[axis]);
    return out;
}

}  // namespace railload::signal
