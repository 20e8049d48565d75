#include "railload/mdof.hpp"

#include "railload/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace railload::mdof {

namespace {

constexpr double singular_threshold = 1e-11;

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError("mdof." + what);
}

}  // namespace

void MdofParams::validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    auto nonnegative = [](double v) { return std::isfinite(v) && v >= 0.0; };
    require(positive(carbody_mass), "carbody_mass must be > 0");
    require(positive(carbody_pitch_inertia), "carbody_pitch_inertia must be > 0");
    require(positive(bending_stiffness), "bending_stiffness must be > 0");
    require(nonnegative(internal_damping), "internal_damping must be >= 0");
    require(positive(length), "length must be > 0");
    require(positive(bogie_mass), "bogie_mass must be > 0");
    require(positive(bogie_pitch_inertia), "bogie_pitch_inertia must be > 0");
    require(positive(half_wheelbase), "half_wheelbase must be > 0");
    require(bogie_half_spacing > half_wheelbase, "bogie_half_spacing must exceed half_wheelbase");
    require(bogie_half_spacing < length / 2, "bogie_half_spacing must be < length / 2");
    require(positive(primary_stiffness), "primary_stiffness must be > 0");
    require(nonnegative(primary_damping), "primary_damping must be >= 0");
    require(nonnegative(secondary_stiffness), "secondary_stiffness must be >= 0");
    require(nonnegative(secondary_damping), "secondary_damping must be >= 0");
    require(positive(mass_per_passenger), "mass_per_passenger must be > 0");
    require(positive(speed), "speed must be > 0");
    require(n_modes >= 2, "n_modes must be >= 2");
}

MdofParams loaded_mdof(const MdofParams& base, int passenger_count) {
    if (passenger_count < 0) throw InputError("passenger count must be >= 0");
    MdofParams p = base;
    if (passenger_count == 0) return p;
    p.carbody_mass = base.carbody_mass + passenger_count * base.mass_per_passenger;
    p.carbody_pitch_inertia = base.carbody_pitch_inertia * (p.carbody_mass / base.carbody_mass);
    return p;
}

SystemMatrices assemble(const MdofParams& params) {
    params.validate();
    return assemble(params, beam::ModalBasis(params.length, params.n_modes));
}

SystemMatrices assemble(const MdofParams& p, const beam::ModalBasis& basis) {
    p.validate();
    if (basis.n_modes() != p.n_modes)
        throw InputError("assemble: modal basis has " + std::to_string(basis.n_modes()) +
                         " modes, parameters ask for " + std::to_string(p.n_modes));
    if (basis.length() != p.length) throw InputError("assemble: modal basis length differs");

    SystemMatrices m;
    m.n_modes = p.n_modes;
    const int n = m.dimension();
    m.mass = Eigen::MatrixXd::Zero(n, n);
    m.damping = Eigen::MatrixXd::Zero(n, n);
    m.stiffness = Eigen::MatrixXd::Zero(n, n);
    m.wheel_displacement_input = Eigen::MatrixXd::Zero(n, 4);
    m.wheel_velocity_input = Eigen::MatrixXd::Zero(n, 4);

    m.mass(SystemMatrices::bounce, SystemMatrices::bounce) = p.carbody_mass;
    m.mass(SystemMatrices::pitch, SystemMatrices::pitch) = p.carbody_pitch_inertia;
    const double rho = p.mass_per_length();
    for (int i = 3; i <= p.n_modes; ++i) {
        const int q = m.modal(i);
        const auto mc = beam::modal_constants(p.bending_stiffness, p.internal_damping, rho, basis.beta(i));
        m.mass(q, q) = 1.0;
        m.damping(q, q) = 2.0 * mc.damping_ratio * mc.omega;
        m.stiffness(q, q) = mc.omega * mc.omega;
    }
    for (int j = 1; j <= 2; ++j) {
        m.mass(m.bogie_bounce(j), m.bogie_bounce(j)) = p.bogie_mass;
        m.mass(m.bogie_pitch(j), m.bogie_pitch(j)) = p.bogie_pitch_inertia;
    }

    // Secondary suspension j: deflection d_j = z(l_j) - z_tj = g_j · y acts on
    // the carbody as P_j = -k_s d_j - c_s ḋ_j and on bogie j as -P_j. Each
    // equation picks P_j up with weight w_j: 1 (bounce), L/2 - l_j (pitch),
    // Y_i(l_j)/m_b (mode i), -1 (bogie bounce).
    const auto [l1, l2] = p.suspension_positions();
    for (int j = 1; j <= 2; ++j) {
        const double lj = j == 1 ? l1 : l2;
        Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        g(SystemMatrices::bounce) = w(SystemMatrices::bounce) = 1.0;
        g(SystemMatrices::pitch) = w(SystemMatrices::pitch) = p.length / 2 - lj;
        for (int i = 3; i <= p.n_modes; ++i) {
            const double y = basis.mode_shape(i, lj);
            g(m.modal(i)) = y;
            w(m.modal(i)) = y / p.carbody_mass;
        }
        g(m.bogie_bounce(j)) = -1.0;
        w(m.bogie_bounce(j)) = -1.0;
        m.stiffness += p.secondary_stiffness * w * g.transpose();
        m.damping += p.secondary_damping * w * g.transpose();
    }

    // Primary suspension: wheel 2j-1 (front) and 2j (rear) of bogie j with
    // deflection e = z_tj ∓ l_w θ_tj - z_w.
    for (int j = 1; j <= 2; ++j) {
        for (int side : {-1, 1}) {
            const int wheel = 2 * (j - 1) + (side < 0 ? 0 : 1);
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            g(m.bogie_bounce(j)) = 1.0;
            g(m.bogie_pitch(j)) = side * p.half_wheelbase;
            m.stiffness += p.primary_stiffness * g * g.transpose();
            m.damping += p.primary_damping * g * g.transpose();
            m.wheel_displacement_input.col(wheel) += p.primary_stiffness * g;
            m.wheel_velocity_input.col(wheel) += p.primary_damping * g;
        }
    }
    return m;
}

std::array<std::complex<double>, 4> wheel_phasors(const MdofParams& p, std::complex<double> s) {
    if (!(p.speed > 0.0)) throw InputError("wheel_phasors: speed must be > 0");
    const double lags[4] = {0.0, 2 * p.half_wheelbase, 2 * p.bogie_half_spacing,
                            2 * p.bogie_half_spacing + 2 * p.half_wheelbase};
    std::array<std::complex<double>, 4> out;
    for (int k = 0; k < 4; ++k) out[k] = std::exp(-s * (lags[k] / p.speed));
    return out;
}

CarbodyModel::CarbodyModel(MdofParams params)
    : params_((params.validate(), std::move(params))),
      basis_(params_.length, params_.n_modes),
      matrices_(assemble(params_, basis_)) {}

Eigen::VectorXcd CarbodyModel::state_response(std::complex<double> s) const {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw InputError("response: s must be finite");
    const auto& m = matrices_;
    const Eigen::MatrixXcd a = (s * s) * m.mass.cast<std::complex<double>>() +
                               s * m.damping.cast<std::complex<double>>() +
                               m.stiffness.cast<std::complex<double>>();
    const auto ph = wheel_phasors(params_, s);
    const Eigen::Vector4cd wheels(ph[0], ph[1], ph[2], ph[3]);
    const Eigen::VectorXcd rhs = (m.wheel_displacement_input.cast<std::complex<double>>() +
                                  s * m.wheel_velocity_input.cast<std::complex<double>>()) *
                                 wheels;
    // Rows mix modal (unit mass) and physical equations of very different
    // magnitude. Scale each row by the size of its separate mass, damping and
    // stiffness terms so that cancellation between them shows up as a small pivot.
    const double abs_s = std::abs(s);
    const Eigen::VectorXd row_scale =
        (abs_s * abs_s * m.mass.cwiseAbs() + abs_s * m.damping.cwiseAbs() + m.stiffness.cwiseAbs())
            .rowwise()
            .maxCoeff()
            .cwiseInverse();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(row_scale.asDiagonal() * a);
    lu.setThreshold(singular_threshold);
    if (!lu.isInvertible()) throw SingularityError(s);
    return lu.solve(row_scale.asDiagonal() * rhs);
}

Eigen::RowVectorXd CarbodyModel::displacement_weights(double x) const {
    Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(matrices_.dimension());
    const auto [y1, y2] = basis_.rigid_shapes(x);
    w(SystemMatrices::bounce) = y1;
    w(SystemMatrices::pitch) = y2;
    for (int i = 3; i <= params_.n_modes; ++i) w(matrices_.modal(i)) = basis_.mode_shape(i, x);
    return w;
}

std::complex<double> CarbodyModel::response_at(double x, std::complex<double> s) const {
    const Eigen::RowVectorXd w = displacement_weights(x);
    return w.cast<std::complex<double>>().dot(state_response(s));
}

Eigen::MatrixXd CarbodyModel::first_order_matrix() const {
    const auto& m = matrices_;
    const int n = m.dimension();
    const Eigen::MatrixXd minv = m.mass.inverse();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n).setIdentity();
    a.bottomLeftCorner(n, n) = -minv * m.stiffness;
    a.bottomRightCorner(n, n) = -minv * m.damping;
    return a;
}

Eigen::VectorXcd CarbodyModel::first_order_eigenvalues() const {
    Eigen::EigenSolver<Eigen::MatrixXd> es(first_order_matrix(), false);
    return es.eigenvalues();
}

double CarbodyModel::highest_modal_frequency_hz() const {
    double f = 0.0;
    for (int i = 3; i <= params_.n_modes; ++i) {
        const auto mc = beam::modal_constants(params_.bending_stiffness, params_.internal_damping,
                                              params_.mass_per_length(), basis_.beta(i));
        f = std::max(f, rad_to_hz(mc.omega));
    }
    return f;
}

std::complex<double> response_at(const MdofParams& params, double x, std::complex<double> s) {
    return CarbodyModel(params).response_at(x, s);
}

Psd accel_psd_at(const MdofParams& params, const track::TrackSpectrumParams& track, double x,
                 int load_count, std::span<const double> omega) {
    track.validate();
    if (track.speed != params.speed)
        throw InputError("accel_psd_at: track spectrum speed differs from vehicle speed");
    const CarbodyModel model(loaded_mdof(params, load_count));
    model.basis().rigid_shapes(x);  // range check before the sweep
    std::vector<double> values(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) {
        const double w = omega[k];
        const double s_track = track::track_psd(track, w);
        if (w == 0.0) {
            values[k] = 0.0;
            continue;
        }
        const double mag = std::abs(model.response_at(x, {0.0, w}));
        values[k] = w * w * w * w * mag * mag * s_track;
    }
    return Psd({omega.begin(), omega.end()}, std::move(values));
}

double default_time_step(const CarbodyModel& model) {
    const double f_max = model.highest_modal_frequency_hz();
    double step = f_max > 0.0 ? 1.0 / (20.0 * f_max) : std::numeric_limits<double>::infinity();
    const double radius = model.first_order_eigenvalues().cwiseAbs().maxCoeff();
    if (radius > 0.0) step = std::min(step, 2.5 / radius);
    return step;
}

namespace {

// Wheel inputs read from one profile with transport lags, linearly
// interpolated; edge samples are held outside the record.
class WheelInputs {
public:
    WheelInputs(const track::TrackProfile& profile, const MdofParams& p)
        : z_(profile.samples), fs_(profile.sample_rate) {
        const double d[4] = {0.0, 2 * p.half_wheelbase, 2 * p.bogie_half_spacing,
                             2 * p.bogie_half_spacing + 2 * p.half_wheelbase};
        for (int k = 0; k < 4; ++k) lag_samples_[k] = d[k] / p.speed * fs_;
    }

    void at(double t, Eigen::Ref<Eigen::Vector4d> z, Eigen::Ref<Eigen::Vector4d> dz) const {
        const double last = static_cast<double>(z_.size() - 1);
        for (int k = 0; k < 4; ++k) {
            const double pos = t * fs_ - lag_samples_[k];
            if (pos <= 0.0) {
                z(k) = z_.front();
                dz(k) = 0.0;
            } else if (pos >= last) {
                z(k) = z_.back();
                dz(k) = 0.0;
            } else {
                const auto i = static_cast<std::size_t>(pos);
                const double frac = pos - static_cast<double>(i);
                const double slope = z_[i + 1] - z_[i];
                z(k) = z_[i] + frac * slope;
                dz(k) = slope * fs_;
            }
        }
    }

private:
    const std::vector<double>& z_;
    double fs_;
    double lag_samples_[4];
};

}  // namespace

TimeResponse simulate_time_response(const MdofParams& params, int load_count,
                                    const track::TrackProfile& profile,
                                    std::span<const double> positions,
                                    const SimulationOptions& options) {
    if (!(profile.sample_rate > 0.0)) throw InputError("simulate: profile sample_rate must be > 0");
    if (profile.samples.size() < 2) throw InputError("simulate: profile needs at least two samples");
    for (double v : profile.samples)
        if (!std::isfinite(v)) throw InputError("simulate: profile has non-finite samples");
    if (options.step < 0.0 || !std::isfinite(options.step))
        throw InputError("simulate: step must be >= 0");

    const CarbodyModel model(loaded_mdof(params, load_count));
    const auto& m = model.matrices();
    const int n = m.dimension();

    std::vector<Eigen::RowVectorXd> out_weights;
    for (double x : positions) out_weights.push_back(model.displacement_weights(x));

    const double interval = 1.0 / profile.sample_rate;
    const double max_step = options.step > 0.0 ? options.step : default_time_step(model);
    const auto substeps = static_cast<long>(std::max(1.0, std::ceil(interval / max_step - 1e-9)));
    const double h = interval / static_cast<double>(substeps);

    const Eigen::VectorXd minv = m.mass.diagonal().cwiseInverse();
    const Eigen::MatrixXd ky = -(minv.asDiagonal() * m.stiffness);
    const Eigen::MatrixXd cv = -(minv.asDiagonal() * m.damping);
    const Eigen::MatrixXd bz = minv.asDiagonal() * m.wheel_displacement_input;
    const Eigen::MatrixXd bdz = minv.asDiagonal() * m.wheel_velocity_input;

    const WheelInputs inputs(profile, model.params());
    Eigen::Vector4d z, dz;

    // d/dt [y; v] = [v; ky y + cv v + bz z_w + bdz ż_w]
    auto accel = [&](double t, const Eigen::VectorXd& y, const Eigen::VectorXd& v,
                     Eigen::VectorXd& a) {
        inputs.at(t, z, dz);
        a.noalias() = ky * y;
        a.noalias() += cv * v;
        a.noalias() += bz * z;
        a.noalias() += bdz * dz;
    };

    Eigen::VectorXd y(n), v = Eigen::VectorXd::Zero(n);
    inputs.at(0.0, z, dz);
    y = m.stiffness.fullPivLu().solve(m.wheel_displacement_input * z);

    TimeResponse r;
    r.sample_rate = profile.sample_rate;
    r.step = h;
    r.positions.assign(positions.begin(), positions.end());
    const std::size_t count = profile.samples.size();
    r.accel.assign(positions.size(), std::vector<double>(count));

    Eigen::VectorXd a(n), k1y(n), k1v(n), k2y(n), k2v(n), k3y(n), k3v(n), k4v(n), ty(n), tv(n);
    for (std::size_t sample = 0; sample < count; ++sample) {
        const double t0 = static_cast<double>(sample) * interval;
        accel(t0, y, v, a);
        for (std::size_t p = 0; p < positions.size(); ++p) r.accel[p][sample] = out_weights[p].dot(a);
        if (!y.allFinite() || !v.allFinite() || y.norm() + v.norm() > 1e100)
            throw DivergenceError(h);
        if (sample + 1 == count) break;

        for (long k = 0; k < substeps; ++k) {
            const double t = t0 + static_cast<double>(k) * h;
            accel(t, y, v, k1v);
            k1y = v;
            ty = y + 0.5 * h * k1y;
            tv = v + 0.5 * h * k1v;
            accel(t + 0.5 * h, ty, tv, k2v);
            k2y = tv;
            ty = y + 0.5 * h * k2y;
            tv = v + 0.5 * h * k2v;
            accel(t + 0.5 * h, ty, tv, k3v);
            k3y = tv;
            ty = y + h * k3y;
            tv = v + h * k3v;
            accel(t + h, ty, tv, k4v);
            y += (h / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + tv);
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
    }
    return r;
}

}  // namespace railload::mdof
