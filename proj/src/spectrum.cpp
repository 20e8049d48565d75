#include "railload/spectrum.hpp"

#include "railload/errors.hpp"

#include <cmath>

namespace railload {

Psd::Psd(std::vector<double> omega, std::vector<double> density)
    : omega_(std::move(omega)), density_(std::move(density)) {
    if (omega_.size() != density_.size())
        throw InputError("Psd: frequency and density lengths differ");
    for (std::size_t i = 0; i < omega_.size(); ++i) {
        if (!std::isfinite(omega_[i]) || (i > 0 && !(omega_[i] > omega_[i - 1])))
            throw InputError("Psd: frequencies must be finite and strictly increasing");
        if (!std::isfinite(density_[i]) || density_[i] < 0.0)
            throw InputError("Psd: densities must be finite and nonnegative");
    }
}

std::vector<double> Psd::frequencies_hz() const {
    std::vector<double> out(omega_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = hz(i);
    return out;
}

std::vector<double> Psd::density_per_hz() const {
    std::vector<double> out(density_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = per_hz(i);
    return out;
}

std::vector<double> frequency_grid_hz(double f_min, double f_max, std::size_t points,
                                      GridSpacing spacing) {
    if (!(f_min < f_max) || points < 2)
        throw InputError("frequency grid needs f_min < f_max and at least two points");
    if (spacing == GridSpacing::log && !(f_min > 0.0))
        throw InputError("log frequency grid needs f_min > 0");
    std::vector<double> out(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(points - 1);
        out[i] = spacing == GridSpacing::linear
                     ? f_min + u * (f_max - f_min)
                     : std::exp(std::log(f_min) + u * (std::log(f_max) - std::log(f_min)));
    }
    out.front() = f_min;
    out.back() = f_max;
    return out;
}

std::vector<double> to_omega(std::span<const double> hz) {
    std::vector<double> out(hz.size());
    for (std::size_t i = 0; i < hz.size(); ++i) out[i] = hz_to_rad(hz[i]);
    return out;
}

}  // namespace railload
