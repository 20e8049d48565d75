#include "railload/features.hpp"

#include "railload/csv.hpp"
#include "railload/errors.hpp"

#include <algorithm>
#include <cmath>

namespace railload::signal {

namespace {

void check_band(const std::pair<double, double>& band, const char* name) {
    if (!(std::isfinite(band.first) && std::isfinite(band.second) && band.first >= 0.0 &&
          band.first < band.second))
        throw InputError(std::string("features.") + name + " must satisfy 0 <= low < high");
}

void check_covered(double f, double f_lo, double f_hi, const std::string& what) {
    if (f < f_lo || f > f_hi)
        throw InputError(what + " at " + csv::format(f) + " Hz lies outside the PSD grid [" +
                         csv::format(f_lo) + ", " + csv::format(f_hi) + "] Hz");
}

double interpolate(const std::vector<double>& f, const std::vector<double>& d, double x) {
    auto it = std::lower_bound(f.begin(), f.end(), x);
    if (it == f.end()) return d.back();
    const auto k = static_cast<std::size_t>(it - f.begin());
    if (*it == x || k == 0) return d[k];
    const double t = (x - f[k - 1]) / (f[k] - f[k - 1]);
    return d[k - 1] + t * (d[k] - d[k - 1]);
}

// Trapezoidal integral of d over [lo, hi] with interpolated end points.
double integrate(const std::vector<double>& f, const std::vector<double>& d, double lo, double hi) {
    double total = 0.0;
    double prev_f = lo;
    double prev_d = interpolate(f, d, lo);
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k] <= lo) continue;
        if (f[k] >= hi) break;
        total += 0.5 * (prev_d + d[k]) * (f[k] - prev_f);
        prev_f = f[k];
        prev_d = d[k];
    }
    total += 0.5 * (prev_d + interpolate(f, d, hi)) * (hi - prev_f);
    return total;
}

double band_argmax(const std::vector<double>& f, const std::vector<double>& d,
                   const std::pair<double, double>& band, const char* name) {
    std::size_t best = f.size();
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f[k] < band.first || f[k] > band.second) continue;
        if (best == f.size() || d[k] > d[best]) best = k;
    }
    if (best == f.size()) throw InputError(std::string("no PSD bins inside ") + name);
    return f[best];
}

}  // namespace

void FeatureConfig::validate() const {
    check_band(rigid_band, "rigid_band");
    check_band(flexible_band, "flexible_band");
    check_band(power_band, "power_band");
    for (double f : fixed_freqs)
        if (!(std::isfinite(f) && f >= 0.0)) throw InputError("features.fixed_freqs must be >= 0");
}

std::string fixed_freq_key(double f_hz) { return "psd_at_" + csv::format(f_hz) + "Hz"; }

std::optional<double> FeatureVector::value(std::string_view key) const {
    if (key == "rigid_peak_freq") return rigid_peak_freq;
    if (key == "flexible_peak_freq") return flexible_peak_freq;
    if (key == "band_power_1_5Hz") return band_power_1_5Hz;
    if (key == "total_rms") return total_rms;
    for (const auto& [f, v] : psd_at_fixed_freqs)
        if (fixed_freq_key(f) == key) return v;
    return std::nullopt;
}

FeatureVector extract_features(const Psd& psd, const FeatureConfig& cfg) {
    cfg.validate();
    if (psd.size() < 2) throw InputError("extract_features: PSD needs at least two bins");
    const auto f = psd.frequencies_hz();
    const auto d = psd.density_per_hz();
    const double f_lo = f.front(), f_hi = f.back();
    for (const auto& [band, name] : {std::pair{cfg.rigid_band, "rigid_band"},
                                     std::pair{cfg.flexible_band, "flexible_band"},
                                     std::pair{cfg.power_band, "power_band"}}) {
        check_covered(band.first, f_lo, f_hi, name);
        check_covered(band.second, f_lo, f_hi, name);
    }
    for (double x : cfg.fixed_freqs) check_covered(x, f_lo, f_hi, "fixed frequency");

    FeatureVector out;
    out.rigid_peak_freq = band_argmax(f, d, cfg.rigid_band, "rigid_band");
    out.flexible_peak_freq = band_argmax(f, d, cfg.flexible_band, "flexible_band");
    out.band_power_1_5Hz = integrate(f, d, cfg.power_band.first, cfg.power_band.second);
    for (double x : cfg.fixed_freqs) out.psd_at_fixed_freqs[x] = interpolate(f, d, x);
    out.total_rms = std::sqrt(integrate(f, d, f_lo, f_hi));
    return out;
}

}  // namespace railload::signal
