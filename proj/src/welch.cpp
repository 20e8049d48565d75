#include "railload/welch.hpp"

#include "railload/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace railload::signal {

WindowKind parse_window_kind(std::string_view name) {
    if (name == "hann") return WindowKind::hann;
    if (name == "tukey") return WindowKind::tukey;
    if (name == "rectangular") return WindowKind::rectangular;
    throw InputError("unknown window '" + std::string(name) + "' (hann, tukey, rectangular)");
}

std::string_view to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::hann: return "hann";
        case WindowKind::tukey: return "tukey";
        case WindowKind::rectangular: return "rectangular";
    }
    return "?";
}

void WelchConfig::validate() const {
    if (segment_length < 2) throw InputError("welch.segment_length must be >= 2");
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0))
        throw InputError("welch.overlap_fraction must be in [0, 1)");
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    if (length == 0) throw InputError("window length must be >= 1");
    std::vector<double> w(length, 1.0);
    const double n = static_cast<double>(length);
    constexpr double pi = std::numbers::pi;
    switch (kind) {
        case WindowKind::rectangular: break;
        case WindowKind::hann:
            // periodic form
            for (std::size_t i = 0; i < length; ++i)
                w[i] = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / n);
            break;
        case WindowKind::tukey: {
            // 50% taper, split between both ends
            constexpr double alpha = 0.5;
            const double edge = alpha * n / 2.0;
            for (std::size_t i = 0; i < length; ++i) {
                const double x = static_cast<double>(i);
                if (x < edge)
                    w[i] = 0.5 - 0.5 * std::cos(pi * x / edge);
                else if (x > n - edge)
                    w[i] = 0.5 - 0.5 * std::cos(pi * (n - x) / edge);
            }
            break;
        }
    }
    return w;
}

Psd welch_psd(std::span<const double> series, double sample_rate, const WelchConfig& cfg) {
    cfg.validate();
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw InputError("welch_psd: sample_rate must be > 0");
    const std::size_t n = cfg.segment_length;
    if (series.size() < n)
        throw InputError("welch_psd: segment_length " + std::to_string(n) + " exceeds series length " +
                         std::to_string(series.size()));

    const auto window = make_window(cfg.window, n);
    double window_power = 0.0;
    for (double v : window) window_power += v * v;
    const auto step = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(n) * (1.0 - cfg.overlap_fraction))));

    const std::size_t bins = n / 2 + 1;
    std::vector<double> acc(bins, 0.0);
    std::vector<double> seg(n);
    std::vector<std::complex<double>> spec;
    Eigen::FFT<double> fft;
    std::size_t segments = 0;
    for (std::size_t start = 0; start + n <= series.size(); start += step) {
        double mean = 0.0;
        if (cfg.detrend == Detrend::mean) {
            for (std::size_t i = 0; i < n; ++i) mean += series[start + i];
            mean /= static_cast<double>(n);
        }
        for (std::size_t i = 0; i < n; ++i) seg[i] = (series[start + i] - mean) * window[i];
        fft.fwd(spec, seg);
        for (std::size_t k = 0; k < bins; ++k) acc[k] += std::norm(spec[k]);
        ++segments;
    }

    // Per Hz: 2 |X|² / (fs Σw²), DC and Nyquist counted once; per rad/s: / 2π.
    const double scale = 1.0 / (static_cast<double>(segments) * sample_rate * window_power * two_pi);
    std::vector<double> omega(bins), density(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
        omega[k] = two_pi * static_cast<double>(k) * sample_rate / static_cast<double>(n);
        density[k] = (single ? 1.0 : 2.0) * acc[k] * scale;
    }
    return Psd(std::move(omega), std::move(density));
}

}  // namespace railload::signal
