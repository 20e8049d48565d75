#pragma once

#include "railload/spectrum.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace railload::signal {

struct FeatureConfig {
    std::pair<double, double> rigid_band{0.5, 3.0};     ///< [Hz]
    std::pair<double, double> flexible_band{5.0, 15.0}; ///< [Hz]
    std::pair<double, double> power_band{1.0, 5.0};     ///< [Hz]
    std::vector<double> fixed_freqs{1.0, 2.0, 3.0, 5.0}; ///< [Hz]

    void validate() const;
    bool operator==(const FeatureConfig&) const = default;
};

/// Spectral summary of one motion segment. Densities are per Hz.
struct FeatureVector {
    double rigid_peak_freq = 0.0;     ///< [Hz]
    double flexible_peak_freq = 0.0;  ///< [Hz]
    double band_power_1_5Hz = 0.0;    ///< [(m/s²)²]
    std::map<double, double> psd_at_fixed_freqs;  ///< Hz -> (m/s²)²/Hz
    double total_rms = 0.0;           ///< [m/s²]

    /// Scalar lookup by key: "rigid_peak_freq", "flexible_peak_freq",
    /// "band_power_1_5Hz", "total_rms" or "psd_at_<f>Hz" (e.g. "psd_at_3Hz").
    std::optional<double> value(std::string_view key) const;

    bool operator==(const FeatureVector&) const = default;
};

/// Key under which psd_at_fixed_freqs[f] is exposed by FeatureVector::value.
std::string fixed_freq_key(double f_hz);

/// Throws InputError if any band or fixed frequency lies outside the PSD grid.
FeatureVector extract_features(const Psd& psd, const FeatureConfig& cfg = {});

}  // namespace railload::signal
