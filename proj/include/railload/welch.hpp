#pragma once

#include "railload/spectrum.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace railload::signal {

enum class WindowKind { hann, tukey, rectangular };
enum class Detrend { none, mean };

WindowKind parse_window_kind(std::string_view name);
std::string_view to_string(WindowKind kind);

struct WelchConfig {
    std::size_t segment_length = 2048;
    double overlap_fraction = 0.5;
    WindowKind window = WindowKind::hann;
    Detrend detrend = Detrend::mean;

    void validate() const;
    bool operator==(const WelchConfig&) const = default;
};

std::vector<double> make_window(WindowKind kind, std::size_t length);

/// Averaged modified periodogram, one-sided, returned per rad/s on the
/// ω_k = 2π k fs / N grid (k = 0 .. N/2). Its integral over ω equals the
/// variance of a stationary input.
Psd welch_psd(std::span<const double> series, double sample_rate, const WelchConfig& cfg = {});

}  // namespace railload::signal
