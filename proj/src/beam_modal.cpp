#include "railload/beam_modal.hpp"

#include "railload/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace railload::beam {

double characteristic_residual(double lambda) {
    return std::cos(lambda) - 1.0 / std::cosh(lambda);
}

std::vector<double> solve_mode_roots(int count) {
    if (count < 0) throw InputError("solve_mode_roots: count must be >= 0");
    std::vector<double> roots;
    roots.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) {
        // cos λ - sech λ has opposite signs at kπ and (k+1)π for k >= 1.
        double lo = k * std::numbers::pi;
        double hi = (k + 1) * std::numbers::pi;
        double f_lo = characteristic_residual(lo);
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = characteristic_residual(mid);
            if ((f_mid < 0) == (f_lo < 0)) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

ModalConstants modal_constants(double bending_stiffness, double internal_damping,
                               double mass_per_length, double beta) {
    if (!(bending_stiffness > 0.0)) throw InputError("modal_constants: EI must be > 0");
    if (!(mass_per_length > 0.0)) throw InputError("modal_constants: mass per length must be > 0");
    if (!(internal_damping >= 0.0)) throw InputError("modal_constants: internal damping must be >= 0");
    const double b4 = std::pow(beta, 4);
    const double omega = std::sqrt(bending_stiffness * b4 / mass_per_length);
    return {omega, internal_damping * b4 / (2.0 * mass_per_length * omega)};
}

ModalBasis::ModalBasis(double length, int n_modes) : length_(length), n_modes_(n_modes) {
    if (!(length > 0.0) || !std::isfinite(length)) throw InputError("ModalBasis: length must be > 0");
    if (n_modes < 2) throw InputError("ModalBasis: n_modes must be >= 2");
    lambdas_ = solve_mode_roots(n_modes - 2);
    one_minus_sigma_.reserve(lambdas_.size());
    for (double l : lambdas_) {
        // 1 - (cosh λ - cos λ)/(sinh λ - sin λ) without subtracting two large numbers.
        one_minus_sigma_.push_back((std::cos(l) - std::sin(l) - std::exp(-l)) /
                                   (std::sinh(l) - std::sin(l)));
    }
}

void ModalBasis::check_position(double x) const {
    if (!(x >= 0.0 && x <= length_))
        throw InputError("position " + std::to_string(x) + " outside carbody [0, " +
                         std::to_string(length_) + "]");
}

void ModalBasis::check_flexible(int i) const {
    if (i < 3 || i > n_modes_)
        throw InputError("flexible mode index " + std::to_string(i) + " outside [3, " +
                         std::to_string(n_modes_) + "]");
}

double ModalBasis::lambda(int i) const {
    check_flexible(i);
    return lambdas_[static_cast<std::size_t>(i - 3)];
}

double ModalBasis::beta(int i) const { return lambda(i) / length_; }

double ModalBasis::mode_shape(int i, double x) const {
    check_flexible(i);
    check_position(x);
    const auto k = static_cast<std::size_t>(i - 3);
    const double u = lambdas_[k] / length_ * x;
    const double oms = one_minus_sigma_[k];
    const double sigma = 1.0 - oms;
    // cosh u - σ sinh u = ((1 - σ) e^u + (1 + σ) e^-u) / 2
    return 0.5 * (oms * std::exp(u) + (1.0 + sigma) * std::exp(-u)) + std::cos(u) -
           sigma * std::sin(u);
}

std::pair<double, double> ModalBasis::rigid_shapes(double x) const {
    check_position(x);
    return {1.0, length_ / 2 - x};
}

double ModalBasis::shape(int i, double x) const {
    if (i == 1) return rigid_shapes(x).first;
    if (i == 2) return rigid_shapes(x).second;
    return mode_shape(i, x);
}

}  // namespace railload::beam
