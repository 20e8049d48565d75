#include "railload/track_model.hpp"

#include "railload/csv.hpp"
#include "railload/errors.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <random>
#include <string>

namespace railload::track {

namespace {

struct Cutoffs {
    double upper;
    double lower;
};

Cutoffs effective_cutoffs(const TrackSpectrumParams& p) {
    const double scale = p.cutoff_units == CutoffUnits::radians_per_metre ? two_pi : 1.0;
    return {p.upper_cutoff * scale, p.lower_cutoff * scale};
}

// Uniform in [0, 2π) from the top 53 bits; independent of the standard
// library's distribution implementation.
double next_phase(std::mt19937_64& rng) {
    return two_pi * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void TrackSpectrumParams::validate() const {
    if (!(std::isfinite(intensity) && intensity > 0.0))
        throw InputError("track.intensity must be > 0");
    if (!(std::isfinite(lower_cutoff) && lower_cutoff > 0.0))
        throw InputError("track.lower_cutoff must be > 0");
    if (!(std::isfinite(upper_cutoff) && upper_cutoff > lower_cutoff))
        throw InputError("track.upper_cutoff must exceed track.lower_cutoff");
    if (!(std::isfinite(speed) && speed > 0.0)) throw InputError("track.speed must be > 0");
}

double track_psd(const TrackSpectrumParams& params, double omega) {
    if (!std::isfinite(omega) || omega < 0.0)
        throw InputError("track_psd: frequency must be finite and nonnegative");
    const auto [oc, orr] = effective_cutoffs(params);
    const double v = params.speed;
    const double v2 = v * v;
    const double w2 = omega * omega;
    const double den = w2 * w2 + (oc * oc + orr * orr) * v2 * w2 + orr * orr * oc * oc * v2 * v2;
    return params.intensity * oc * oc * v2 * v / den;
}

Psd track_psd(const TrackSpectrumParams& params, std::span<const double> omega) {
    params.validate();
    std::vector<double> values(omega.size());
    for (std::size_t i = 0; i < omega.size(); ++i) values[i] = track_psd(params, omega[i]);
    return Psd({omega.begin(), omega.end()}, std::move(values));
}

TrackProfile synthesize_profile(const TrackSpectrumParams& params, double duration,
                                double sample_rate, std::uint64_t seed) {
    params.validate();
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw InputError("synthesize_profile: duration must be > 0");
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw InputError("synthesize_profile: sample_rate must be > 0");
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    if (n < 2) throw InputError("synthesize_profile: duration * sample_rate must be >= 2");

    const double d_omega = two_pi * sample_rate / static_cast<double>(n);
    const std::size_t last = (n % 2 == 0) ? n / 2 - 1 : n / 2;  // Nyquist line left empty
    std::vector<std::complex<double>> spectrum(n, {0.0, 0.0});
    std::mt19937_64 rng(seed);
    const double half_n = 0.5 * static_cast<double>(n);
    for (std::size_t k = 1; k <= last; ++k) {
        const double amplitude =
            std::sqrt(2.0 * track_psd(params, static_cast<double>(k) * d_omega) * d_omega);
        const double phase = next_phase(rng);
        spectrum[k] = std::polar(half_n * amplitude, phase);
        spectrum[n - k] = std::conj(spectrum[k]);
    }

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> time(n);
    fft.inv(time, spectrum);

    TrackProfile out;
    out.sample_rate = sample_rate;
    out.seed = seed;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] = time[i].real();
    return out;
}

void write_profile_csv(std::ostream& os, const TrackProfile& profile) {
    std::vector<double> t(profile.samples.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i) / profile.sample_rate;
    const std::string header[] = {"time_s", "displacement_m"};
    const std::vector<double> cols[] = {t, profile.samples};
    csv::write_columns(os, header, cols);
}

TrackProfile read_profile_csv(std::istream& is) {
    const std::string header[] = {"time_s", "displacement_m"};
    auto cols = csv::read_columns(is, header);
    const auto& t = cols[0];
    if (t.size() < 2) throw FormatError("profile needs at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw FormatError("profile time column must increase");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-6 * dt + 1e-9)
            throw FormatError("profile must be uniformly sampled", i + 1);
    TrackProfile out;
    out.sample_rate = 1.0 / dt;
    // Times are written as i / fs; undo the rounding for integral rates.
    if (const double r = std::round(out.sample_rate); std::abs(out.sample_rate - r) <= 1e-9 * r)
        out.sample_rate = r;
    out.samples = std::move(cols[1]);
    return out;
}

void write_psd_csv(std::ostream& os, const Psd& psd) {
    const std::string header[] = {"omega_rad_s", "psd"};
    const std::vector<double> cols[] = {psd.omega(), psd.density()};
    csv::write_columns(os, header, cols);
}

}  // namespace railload::track
