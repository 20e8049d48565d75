#pragma once

// Accelerometer log files.
//
// UTF-8 CSV with the exact header
//   t,ax,ay,az,gx,gy,gz,mx,my,mz,roll,pitch,yaw
// one record per line: time [s] since session start, acceleration [m/s²],
// angular rate [rad/s], magnetic field [µT], roll/pitch/yaw [rad].

#include <array>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace railload::signal {

inline constexpr std::string_view log_header = "t,ax,ay,az,gx,gy,gz,mx,my,mz,roll,pitch,yaw";

struct AccelLogRecord {
    double timestamp = 0.0;
    std::array<double, 3> accel{};
    std::array<double, 3> gyro{};
    std::array<double, 3> mag{};
    std::array<double, 3> orientation{};

    bool operator==(const AccelLogRecord&) const = default;
};

/// Throws FormatError (with the 1-based line number) on a bad header, a
/// malformed or non-finite field, or a timestamp that does not increase.
std::vector<AccelLogRecord> parse_log(std::istream& is);

/// Writes values in shortest round-trip form, so parse_log(write_log(r)) == r.
void write_log(std::ostream& os, std::span<const AccelLogRecord> records);

/// Mean sample spacing converted to Hz; needs at least two records.
double estimate_sample_rate(std::span<const AccelLogRecord> records);

/// Accelerometer axis whose mean magnitude is closest to standard gravity.
int vertical_axis(std::span<const AccelLogRecord> records);

std::vector<double> accel_channel(std::span<const AccelLogRecord> records, int axis);

}  // namespace railload::signal
