#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace railload::signal {

struct SegmentationConfig {
    double window_s = 2.0;
    double rms_threshold = 0.02;  ///< [m/s²]
    double min_duration_s = 20.0;
    double hysteresis = 0.8;      ///< exit threshold = hysteresis * rms_threshold

    void validate() const;
    bool operator==(const SegmentationConfig&) const = default;
};

/// Samples [start_idx, end_idx) of one motion interval.
struct TripSegment {
    std::size_t start_idx = 0;
    std::size_t end_idx = 0;
    std::optional<int> label;
    std::optional<std::string> station_pair;

    std::size_t length() const { return end_idx - start_idx; }
    bool operator==(const TripSegment&) const = default;
};

/// Centered sliding-window RMS with the window mean removed (gravity and
/// drift drop out). Windows are clipped at neither edge: samples closer than
/// half a window to an edge reuse the nearest full window's value.
std::vector<double> sliding_rms(std::span<const double> series, std::size_t window);

/// Maximal runs where the sliding RMS rises above the threshold and stays
/// above hysteresis * threshold; runs shorter than min_duration_s are dropped.
std::vector<TripSegment> detect_motion_segments(std::span<const double> series,
                                                double sample_rate,
                                                const SegmentationConfig& cfg = {});

}  // namespace railload::signal
