#pragma once

// Stochastic vertical track irregularity: analytic PSD and seeded
// time-series realizations.

#include "railload/spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace railload::track {

/// How the two cut-off parameters are read. The default takes the values
/// literally; `radians_per_metre` multiplies them by 2π before use.
enum class CutoffUnits { cycles_per_metre, radians_per_metre };

struct TrackSpectrumParams {
    double intensity = 1.080e-6;  ///< track excitation intensity
    double upper_cutoff = 0.8246; ///< Ω_c
    double lower_cutoff = 0.0206; ///< Ω_r
    double speed = 13.89;         ///< train speed [m/s]
    CutoffUnits cutoff_units = CutoffUnits::cycles_per_metre;

    /// Grade-2 track at 50 km/h.
    static TrackSpectrumParams defaults() { return {}; }

    /// Throws InputError unless intensity > 0, Ω_c > Ω_r > 0, speed > 0.
    void validate() const;

    bool operator==(const TrackSpectrumParams&) const = default;
};

/// S(ω) = A Ω_c² V³ / (ω⁴ + (Ω_c² + Ω_r²) V² ω² + Ω_r² Ω_c² V⁴), one-sided per rad/s.
double track_psd(const TrackSpectrumParams& params, double omega);
Psd track_psd(const TrackSpectrumParams& params, std::span<const double> omega);

struct TrackProfile {
    double sample_rate = 0.0;     ///< [Hz]
    std::vector<double> samples;  ///< vertical displacement [m]
    std::uint64_t seed = 0;

    double duration() const { return sample_rate > 0 ? samples.size() / sample_rate : 0.0; }
};

/// Gaussian-like profile whose spectrum follows track_psd: every DFT line
/// gets amplitude sqrt(2 S(ω_k) Δω) and an independent uniform phase, then
/// one inverse FFT. The record has round(duration * sample_rate) samples,
/// zero mean, and is bitwise reproducible for a given seed.
TrackProfile synthesize_profile(const TrackSpectrumParams& params, double duration,
                                double sample_rate, std::uint64_t seed);

/// `time_s,displacement_m`
void write_profile_csv(std::ostream& os, const TrackProfile& profile);
/// Sample rate is recovered from the time column; seed is not stored and reads back as 0.
TrackProfile read_profile_csv(std::istream& is);

/// `omega_rad_s,psd`
void write_psd_csv(std::ostream& os, const Psd& psd);

}  // namespace railload::track
