#pragma once

// Two-mass quarter-car model: carbody (m_c) on a bogie (m_b) through the
// k_c/c_c suspension, bogie on the track through k_b/c_b. Track displacement
// z_o enters through the bogie suspension only.

#include "railload/spectrum.hpp"

#include <complex>
#include <span>
#include <vector>

namespace railload::twodof {

struct TwoDofParams {
    double carbody_mass = 38000.0;      ///< m_c [kg]
    double bogie_mass = 3000.0;         ///< m_b [kg]
    double carbody_stiffness = 0.78e6;  ///< k_c, carbody-bogie spring [N/m]
    double carbody_damping = 30e3;      ///< c_c, carbody-bogie damper [N s/m]
    double bogie_stiffness = 0.55e6;    ///< k_b, bogie-track spring [N/m]
    double bogie_damping = 60e3;        ///< c_b, bogie-track damper [N s/m]
    double mass_per_passenger = 70.0;   ///< [kg]

    /// Reference vehicle with a 30e3 N s/m carbody damper.
    static TwoDofParams defaults() { return {}; }
    /// Same vehicle with a 30e6 N s/m carbody damper.
    static TwoDofParams heavy_carbody_damper() {
        TwoDofParams p;
        p.carbody_damping = 30e6;
        return p;
    }

    void validate() const;

    bool operator==(const TwoDofParams&) const = default;
};

/// Copy of `base` with the carbody mass raised by count * mass_per_passenger.
TwoDofParams loaded_params(const TwoDofParams& base, int passenger_count);

/// Z_c(s) / Z_o(s) from the 2x2 Laplace-domain system. Throws
/// SingularityError when s is a pole.
std::complex<double> transfer_function(const TwoDofParams& params, std::complex<double> s);

/// ω² |H(jω)|: carbody acceleration per unit track displacement.
double accel_transfer_magnitude(const TwoDofParams& params, double omega);

struct SweepPoint {
    int count;
    double magnitude;
};

/// |H(j 2π f0)| for each passenger count.
std::vector<SweepPoint> fixed_frequency_load_sweep(const TwoDofParams& base, double f0_hz,
                                                   std::span<const int> counts);

/// H(jω) on a frequency grid given in Hz.
FrequencyResponse response_curve(const TwoDofParams& params, std::span<const double> freqs_hz);

}  // namespace railload::twodof
