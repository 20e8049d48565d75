#include "railload/segmentation.hpp"

#include "railload/errors.hpp"

#include <algorithm>
#include <cmath>

namespace railload::signal {

void SegmentationConfig::validate() const {
    if (!(window_s > 0.0)) throw InputError("segmentation.window_s must be > 0");
    if (!(rms_threshold > 0.0)) throw InputError("segmentation.rms_threshold must be > 0");
    if (!(min_duration_s >= 0.0)) throw InputError("segmentation.min_duration_s must be >= 0");
    if (!(hysteresis > 0.0 && hysteresis <= 1.0))
        throw InputError("segmentation.hysteresis must be in (0, 1]");
}

std::vector<double> sliding_rms(std::span<const double> series, std::size_t window) {
    if (window == 0) throw InputError("sliding_rms: window must be >= 1");
    if (series.size() < window) throw InputError("sliding_rms: series shorter than window");
    const std::size_t n = series.size();
    const std::size_t windows = n - window + 1;

    // Windowed variance from running sums of the offset data; offsetting by
    // the first sample keeps the sums small for gravity-biased channels.
    const double offset = series.front();
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = series[i] - offset;
        s1[i + 1] = s1[i] + v;
        s2[i + 1] = s2[i] + v * v;
    }
    const double w = static_cast<double>(window);
    std::vector<double> full(windows);
    for (std::size_t k = 0; k < windows; ++k) {
        const double sum = s1[k + window] - s1[k];
        const double sq = s2[k + window] - s2[k];
        full[k] = std::sqrt(std::max(0.0, sq / w - (sum / w) * (sum / w)));
    }

    // Sample i is centred in the window starting at i - window/2.
    std::vector<double> out(n);
    const std::size_t half = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t start = i < half ? 0 : std::min(i - half, windows - 1);
        out[i] = full[start];
    }
    return out;
}

std::vector<TripSegment> detect_motion_segments(std::span<const double> series,
                                                double sample_rate,
                                                const SegmentationConfig& cfg) {
    cfg.validate();
    if (series.empty()) throw InputError("detect_motion_segments: empty series");
    if (!(sample_rate > 0.0)) throw InputError("detect_motion_segments: sample_rate must be > 0");
    const auto window = static_cast<std::size_t>(std::max(1.0, std::round(cfg.window_s * sample_rate)));
    if (series.size() < window)
        throw InputError("detect_motion_segments: series shorter than one window");

    const auto rms = sliding_rms(series, window);
    const double enter = cfg.rms_threshold;
    const double exit = cfg.hysteresis * cfg.rms_threshold;
    const auto min_len = static_cast<std::size_t>(std::ceil(cfg.min_duration_s * sample_rate - 1e-9));

    std::vector<TripSegment> out;
    auto close = [&](std::size_t start, std::size_t end) {
        if (end - start >= std::max<std::size_t>(min_len, 1)) out.push_back({start, end, {}, {}});
    };
    bool moving = false;
    std::size_t start = 0;
    for (std::size_t i = 0; i < rms.size(); ++i) {
        if (!moving && rms[i] > enter) {
            moving = true;
            start = i;
        } else if (moving && rms[i] < exit) {
            moving = false;
            close(start, i);
        }
    }
    if (moving) close(start, rms.size());
    return out;
}

}  // namespace railload::signal
