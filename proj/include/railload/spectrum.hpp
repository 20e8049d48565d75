#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace railload {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double hz_to_rad(double f) { return two_pi * f; }
inline constexpr double rad_to_hz(double w) { return w / two_pi; }

/// One-sided power spectral density sampled on a grid of circular
/// frequencies. Densities are per rad/s, so the variance of the underlying
/// process is the integral of `density()` over `omega()`.
class Psd {
public:
    Psd() = default;
    /// Throws InputError unless both vectors have equal length, omega is
    /// strictly increasing and every density is finite and nonnegative.
    Psd(std::vector<double> omega, std::vector<double> density);

    const std::vector<double>& omega() const noexcept { return omega_; }
    const std::vector<double>& density() const noexcept { return density_; }
    std::size_t size() const noexcept { return omega_.size(); }
    bool empty() const noexcept { return omega_.empty(); }

    double hz(std::size_t i) const { return rad_to_hz(omega_[i]); }
    /// Density per Hz at bin i.
    double per_hz(std::size_t i) const { return two_pi * density_[i]; }

    std::vector<double> frequencies_hz() const;
    std::vector<double> density_per_hz() const;

private:
    std::vector<double> omega_;
    std::vector<double> density_;
};

/// Complex response samples on an increasing circular-frequency grid.
struct FrequencyResponse {
    std::vector<double> omega;
    std::vector<std::complex<double>> values;
};

enum class GridSpacing { linear, log };

/// `points` frequencies in Hz between f_min and f_max inclusive.
std::vector<double> frequency_grid_hz(double f_min, double f_max, std::size_t points,
                                      GridSpacing spacing = GridSpacing::linear);

std::vector<double> to_omega(std::span<const double> hz);

}  // namespace railload
