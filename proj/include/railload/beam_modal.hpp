#pragma once

// Free-free Euler-Bernoulli beam modal basis for the carbody.
//
// Mode numbering follows the displacement expansion
//   z(x, t) = z_b(t) + (L/2 - x) θ_b(t) + Σ_{i=3..n} Y_i(x) q_i(t)
// so i = 1 is bounce, i = 2 is pitch and i >= 3 are flexible modes.

#include <utility>
#include <vector>

namespace railload::beam {

/// cos λ - sech λ: zero exactly where 1 - cosh λ cos λ = 0, without overflow.
double characteristic_residual(double lambda);

/// First `count` positive roots of 1 - cosh λ cos λ = 0, ascending.
/// Bracketed bisection on [kπ, (k+1)π], tolerance 1e-12.
std::vector<double> solve_mode_roots(int count);

struct ModalConstants {
    double omega;          ///< natural frequency [rad/s]
    double damping_ratio;  ///< ξ
};

/// ω² = EI β⁴ / ρ and ξ = μI β⁴ / (2 ρ ω).
ModalConstants modal_constants(double bending_stiffness, double internal_damping,
                               double mass_per_length, double beta);

class ModalBasis {
public:
    /// n_modes counts bounce and pitch, so n_modes - 2 flexible modes are solved.
    ModalBasis(double length, int n_modes);

    double length() const noexcept { return length_; }
    int n_modes() const noexcept { return n_modes_; }
    int flexible_count() const noexcept { return n_modes_ - 2; }

    /// λ_i and β_i = λ_i / L for mode index 3 <= i <= n.
    double lambda(int i) const;
    double beta(int i) const;
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }

    /// Y_i(x) for 3 <= i <= n, 0 <= x <= L.
    double mode_shape(int i, double x) const;
    /// (Y_1, Y_2) = (1, L/2 - x).
    std::pair<double, double> rigid_shapes(double x) const;
    /// Y_i(x) for any 1 <= i <= n.
    double shape(int i, double x) const;

private:
    void check_position(double x) const;
    void check_flexible(int i) const;

    double length_;
    int n_modes_;
    std::vector<double> lambdas_;
    std::vector<double> one_minus_sigma_;  // 1 - (cosh λ - cos λ)/(sinh λ - sin λ)
};

}  // namespace railload::beam
