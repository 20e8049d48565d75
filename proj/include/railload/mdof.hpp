#pragma once

// Flexible carbody on two bogies, each riding on two wheels.
//
// State vector y = [z_b, θ_b, q_3 .. q_n, z_t1, z_t2, θ_t1, θ_t2] with
// M ÿ + C ẏ + K y = D_w z_w + D_dw ż_w over wheel inputs z_w = [z_w1 .. z_w4].
//
// Geometry: x runs from the leading end of the carbody (x = 0) to the
// trailing end (x = L). Bogie 1 sits under l_1 = L/2 - l_b and leads. Wheels
// are ordered front-to-rear: w1, w2 on bogie 1, w3, w4 on bogie 2, and wheel
// w(2j-1) sees z_tj - l_w θ_tj.

#include "railload/beam_modal.hpp"
#include "railload/spectrum.hpp"
#include "railload/track_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace railload::mdof {

struct MdofParams {
    double carbody_mass = 28000.0;        ///< m_b [kg]
    double carbody_pitch_inertia = 1.3e6; ///< I_b [kg m²]
    double bending_stiffness = 4.987e9;   ///< EI [N m²]
    double internal_damping = 1.936e6;    ///< μI [N m² s]
    double length = 24.5;                 ///< L [m]
    double bogie_mass = 2500.0;           ///< m_t [kg]
    double bogie_pitch_inertia = 1500.0;  ///< I_t [kg m²]
    double bogie_half_spacing = 8.75;     ///< l_b [m]
    double half_wheelbase = 1.25;         ///< l_w [m]
    double primary_stiffness = 2.4e6;     ///< k_p per wheel [N/m]
    double primary_damping = 30e6;        ///< c_p per wheel [N s/m]
    double secondary_stiffness = 0.5e6;   ///< k_s per bogie [N/m]
    double secondary_damping = 60e3;      ///< c_s per bogie [N s/m]
    double mass_per_passenger = 70.0;     ///< [kg]
    double speed = 13.89;                 ///< V [m/s]
    int n_modes = 5;                      ///< bounce + pitch + flexible modes

    static MdofParams defaults() { return {}; }

    void validate() const;

    /// Secondary suspension attachment points (l_1, l_2) = (L/2 - l_b, L/2 + l_b).
    std::pair<double, double> suspension_positions() const {
        return {length / 2 - bogie_half_spacing, length / 2 + bogie_half_spacing};
    }
    double mass_per_length() const { return carbody_mass / length; }

    bool operator==(const MdofParams&) const = default;
};

/// Adds count * mass_per_passenger to the carbody and scales its pitch
/// inertia by the same mass ratio (uniformly spread load).
MdofParams loaded_mdof(const MdofParams& base, int passenger_count);

struct SystemMatrices {
    Eigen::MatrixXd mass;
    Eigen::MatrixXd damping;
    Eigen::MatrixXd stiffness;
    Eigen::MatrixXd wheel_displacement_input;  ///< D_w, (n+4) x 4
    Eigen::MatrixXd wheel_velocity_input;      ///< D_dw, (n+4) x 4
    int n_modes = 0;

    int dimension() const { return n_modes + 4; }
    // State indices.
    static constexpr int bounce = 0;
    static constexpr int pitch = 1;
    int modal(int i) const { return i - 1; }  ///< q_i, 3 <= i <= n
    int bogie_bounce(int j) const { return n_modes + j - 1; }      ///< z_tj, j = 1, 2
    int bogie_pitch(int j) const { return n_modes + 1 + j; }       ///< θ_tj, j = 1, 2
};

SystemMatrices assemble(const MdofParams& params);
/// Throws InputError if basis.n_modes() or its length disagree with params.
SystemMatrices assemble(const MdofParams& params, const beam::ModalBasis& basis);

/// [1, e^{-s 2l_w/V}, e^{-s 2l_b/V}, e^{-s (2l_b+2l_w)/V}]: one track input
/// mapped to the four wheels by pure transport delay.
std::array<std::complex<double>, 4> wheel_phasors(const MdofParams& params, std::complex<double> s);

/// Immutable model with its modal basis and matrices precomputed.
class CarbodyModel {
public:
    explicit CarbodyModel(MdofParams params);

    const MdofParams& params() const noexcept { return params_; }
    const beam::ModalBasis& basis() const noexcept { return basis_; }
    const SystemMatrices& matrices() const noexcept { return matrices_; }

    /// Carbody displacement at x per unit track displacement. Throws
    /// SingularityError when Ms² + Cs + K is singular.
    std::complex<double> response_at(double x, std::complex<double> s) const;
    /// Full state response Y(s) per unit track displacement.
    Eigen::VectorXcd state_response(std::complex<double> s) const;

    /// Row weights w with z(x) = w · y.
    Eigen::RowVectorXd displacement_weights(double x) const;

    /// First-order system matrix over [y; ẏ].
    Eigen::MatrixXd first_order_matrix() const;
    Eigen::VectorXcd first_order_eigenvalues() const;

    /// Highest flexible-mode natural frequency [Hz]; 0 without flexible modes.
    double highest_modal_frequency_hz() const;

private:
    MdofParams params_;
    beam::ModalBasis basis_;
    SystemMatrices matrices_;
};

std::complex<double> response_at(const MdofParams& params, double x, std::complex<double> s);

/// S_a(ω, x) = ω⁴ |H(x, jω)|² S_track(ω) for the loaded vehicle. The track
/// spectrum speed must equal params.speed.
Psd accel_psd_at(const MdofParams& params, const track::TrackSpectrumParams& track, double x,
                 int load_count, std::span<const double> omega);

struct SimulationOptions {
    /// Integration step [s]; 0 selects default_time_step().
    double step = 0.0;
};

struct TimeResponse {
    double sample_rate = 0.0;
    double step = 0.0;  ///< integration step actually used
    std::vector<double> positions;
    std::vector<std::vector<double>> accel;  ///< one series per position [m/s²]
};

/// min(1 / (20 f_max), 2.5 / spectral radius of the first-order matrix).
double default_time_step(const CarbodyModel& model);

/// Fixed-step RK4 response to one track profile read by the four wheels with
/// their transport delays (linear interpolation, edge values held outside the
/// record). Starts from static equilibrium under the initial wheel inputs.
/// The step is shrunk so that it divides the profile sample interval; output
/// is carbody acceleration at each position, sampled like the profile.
/// Throws DivergenceError if the state overflows.
TimeResponse simulate_time_response(const MdofParams& params, int load_count,
                                    const track::TrackProfile& profile,
                                    std::span<const double> positions,
                                    const SimulationOptions& options = {});

}  // namespace railload::mdof
