#include "railload/twodof.hpp"

#include "railload/errors.hpp"

#include <cmath>
#include <limits>

namespace railload::twodof {

void TwoDofParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0)) throw InputError(std::string("twodof.") + name + " must be > 0");
    };
    auto nonnegative = [](double v, const char* name) {
        if (!(std::isfinite(v) && v >= 0.0)) throw InputError(std::string("twodof.") + name + " must be >= 0");
    };
    positive(carbody_mass, "carbody_mass");
    positive(bogie_mass, "bogie_mass");
    positive(carbody_stiffness, "carbody_stiffness");
    positive(bogie_stiffness, "bogie_stiffness");
    nonnegative(carbody_damping, "carbody_damping");
    nonnegative(bogie_damping, "bogie_damping");
    positive(mass_per_passenger, "mass_per_passenger");
}

TwoDofParams loaded_params(const TwoDofParams& base, int passenger_count) {
    if (passenger_count < 0) throw InputError("passenger count must be >= 0");
    TwoDofParams p = base;
    p.carbody_mass += passenger_count * base.mass_per_passenger;
    return p;
}

std::complex<double> transfer_function(const TwoDofParams& p, std::complex<double> s) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw InputError("transfer_function: s must be finite");
    p.validate();
    // [ m_c s² + c_c s + k_c        -(c_c s + k_c)                 ] [Z_c]   [      0      ]
    // [ -(c_c s + k_c)    m_b s² + (c_c + c_b) s + k_c + k_b       ] [Z_b] = [ c_b s + k_b ] Z_o
    // det = a11 a22 - coupling² expanded so the coupling² terms cancel
    // analytically; H(0) = k_c k_b / (k_c k_b) is then exact.
    const auto coupling = p.carbody_damping * s + p.carbody_stiffness;
    const auto base_force = p.bogie_damping * s + p.bogie_stiffness;
    const auto a22 = p.bogie_mass * s * s + (p.carbody_damping + p.bogie_damping) * s +
                     p.carbody_stiffness + p.bogie_stiffness;
    const auto carbody_term = p.carbody_mass * s * s * a22;
    const auto bogie_term = coupling * (p.bogie_mass * s * s + base_force);
    const auto det = carbody_term + bogie_term;
    const double scale = std::abs(carbody_term) + std::abs(bogie_term);
    if (std::abs(det) <= 64 * std::numeric_limits<double>::epsilon() * scale)
        throw SingularityError(s);
    return coupling * base_force / det;
}

double accel_transfer_magnitude(const TwoDofParams& params, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega))
        throw InputError("accel_transfer_magnitude: omega must be finite and >= 0");
    return omega * omega * std::abs(transfer_function(params, {0.0, omega}));
}

std::vector<SweepPoint> fixed_frequency_load_sweep(const TwoDofParams& base, double f0_hz,
                                                   std::span<const int> counts) {
    if (!(f0_hz > 0.0) || !std::isfinite(f0_hz)) throw InputError("load sweep: f0 must be > 0");
    if (counts.empty()) throw InputError("load sweep: counts must be nonempty");
    std::vector<SweepPoint> out;
    out.reserve(counts.size());
    const std::complex<double> s{0.0, hz_to_rad(f0_hz)};
    for (int c : counts) out.push_back({c, std::abs(transfer_function(loaded_params(base, c), s))});
    return out;
}

FrequencyResponse response_curve(const TwoDofParams& params, std::span<const double> freqs_hz) {
    FrequencyResponse r;
    r.omega = to_omega(freqs_hz);
    r.values.reserve(r.omega.size());
    for (double w : r.omega) r.values.push_back(transfer_function(params, {0.0, w}));
    return r;
}

}  // namespace railload::twodof
