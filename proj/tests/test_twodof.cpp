#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "railload/errors.hpp"
#include "railload/twodof.hpp"

#include <limits>
#include <random>

using namespace railload;
using twodof::TwoDofParams;
using cd = std::complex<double>;

namespace {

// Direct Cramer solve of the unreduced 2x2 system.
cd cramer(const TwoDofParams& p, cd s) {
    const cd a11 = p.carbody_mass * s * s + p.carbody_damping * s + p.carbody_stiffness;
    const cd a12 = -(p.carbody_damping * s + p.carbody_stiffness);
    const cd a22 = p.bogie_mass * s * s + (p.carbody_damping + p.bogie_damping) * s + p.carbody_stiffness +
                   p.bogie_stiffness;
    const cd b2 = p.bogie_damping * s + p.bogie_stiffness;
    return -a12 * b2 / (a11 * a22 - a12 * a12);
}

TwoDofParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.2, 5.0);
    TwoDofParams p;
    p.carbody_mass *= u(rng);
    p.bogie_mass *= u(rng);
    p.carbody_stiffness *= u(rng);
    p.bogie_stiffness *= u(rng);
    p.carbody_damping *= u(rng);
    p.bogie_damping *= u(rng);
    return p;
}

}  // namespace

TEST_CASE("loaded_params adds passenger mass only to the carbody") {
    const auto base = TwoDofParams::defaults();
    CHECK(twodof::loaded_params(base, 0).carbody_mass == 38000.0);
    CHECK(twodof::loaded_params(base, 100).carbody_mass == 45000.0);
    auto one = twodof::loaded_params(base, 1);
    CHECK(one.carbody_mass - base.carbody_mass == 70.0);
    one.carbody_mass = base.carbody_mass;
    CHECK(one == base);
    CHECK_THROWS_AS(twodof::loaded_params(base, -1), InputError);
}

TEST_CASE("parameter validation") {
    auto p = TwoDofParams::defaults();
    p.bogie_mass = 0;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = TwoDofParams::defaults();
    p.bogie_damping = -1;
    CHECK_THROWS_AS(p.validate(), InputError);
    p = TwoDofParams::defaults();
    p.bogie_damping = 0;
    CHECK_NOTHROW(p.validate());
    p.mass_per_passenger = 0;
    CHECK_THROWS_AS(p.validate(), InputError);
}

TEST_CASE("static gain is exactly one") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = twodof::loaded_params(random_params(rng), trial);
        CHECK(twodof::transfer_function(p, 0.0) == cd(1.0, 0.0));
    }
    CHECK(twodof::transfer_function(TwoDofParams::heavy_carbody_damper(), 0.0) == cd(1.0, 0.0));
}

TEST_CASE("conjugate symmetry") {
    const auto p = TwoDofParams::defaults();
    const cd s(1.0, 2.0);
    const cd a = twodof::transfer_function(p, std::conj(s));
    const cd b = std::conj(twodof::transfer_function(p, s));
    CHECK(std::abs(a - b) <= 1e-14 * std::abs(b));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 100; ++i) {
        const cd z(u(rng), u(rng));
        const cd h = twodof::transfer_function(p, z);
        CHECK(std::abs(twodof::transfer_function(p, std::conj(z)) - std::conj(h)) <= 1e-12 * std::abs(h));
    }
}

TEST_CASE("frozen |H(j2π)| at default parameters") {
    // high-precision solves of the 2x2 system at 0 passengers.
    const cd s(0.0, 2 * std::numbers::pi);
    const cd h = twodof::transfer_function(TwoDofParams::defaults(), s);
    CHECK(std::abs(h) == doctest::Approx(0.32979224470838147092).epsilon(1e-12));
    CHECK(h.real() == doctest::Approx(-0.2824889775721895246).epsilon(1e-12));
    CHECK(h.imag() == doctest::Approx(-0.17018490596998304324).epsilon(1e-12));

    const cd g = twodof::transfer_function(TwoDofParams::heavy_carbody_damper(), s);
    CHECK(std::abs(g) == doctest::Approx(0.58637956555783447329).epsilon(1e-12));
    CHECK(g.real() == doctest::Approx(-0.34489392607452989467).epsilon(1e-12));
    CHECK(g.imag() == doctest::Approx(-0.47422481447167165815).epsilon(1e-12));
}

TEST_CASE("agrees with a direct solve on random right half-plane points") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> re(0.0, 30.0), im(-300.0, 300.0);
    for (int i = 0; i < 100; ++i) {
        const auto p = random_params(rng);
        const cd s(re(rng), im(rng));
        const cd a = twodof::transfer_function(p, s);
        const cd b = cramer(p, s);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
    }
}

TEST_CASE("pole of an undamped system raises SingularityError") {
    auto p = TwoDofParams::defaults();
    p.carbody_damping = 0;
    p.bogie_damping = 0;
    // det = m_c m_b x² + (m_c (k_c + k_b) + k_c m_b) x + k_c k_b with x = s²
    const double a = p.carbody_mass * p.bogie_mass;
    const double b = p.carbody_mass * (p.carbody_stiffness + p.bogie_stiffness) + p.carbody_stiffness * p.bogie_mass;
    const double c = p.carbody_stiffness * p.bogie_stiffness;
    const double x = -2 * c / (b + std::sqrt(b * b - 4 * a * c));
    const cd pole(0.0, std::sqrt(-x));
    try {
        twodof::transfer_function(p, pole);
        FAIL("expected SingularityError");
    } catch (const SingularityError& e) {
        CHECK(e.s() == pole);
    }
}

TEST_CASE("non-finite s is rejected") {
    CHECK_THROWS_AS(twodof::transfer_function(TwoDofParams::defaults(), cd(std::nan(""), 0)), InputError);
}

TEST_CASE("acceleration magnitude") {
    const auto p = TwoDofParams::defaults();
    CHECK(twodof::accel_transfer_magnitude(p, 0.0) == 0.0);
    const double w = 2 * std::numbers::pi;
    CHECK(twodof::accel_transfer_magnitude(p, w) == w * w * std::abs(twodof::transfer_function(p, cd(0, w))));
    CHECK_THROWS_AS(twodof::accel_transfer_magnitude(p, -1.0), InputError);
}

TEST_CASE("acceleration curve has a resonance below 5 Hz") {
    const auto f = frequency_grid_hz(0.1, 50.0, 5000);
    const auto p = TwoDofParams::defaults();
    std::size_t best = 0;
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        a[i] = twodof::accel_transfer_magnitude(p, hz_to_rad(f[i]));
        if (a[i] > a[best]) best = i;
    }
    CHECK(f[best] < 5.0);
    CHECK(best > 0);
    CHECK(a[best] > a[best - 1]);
    CHECK(a[best] > a[best + 1]);
}

TEST_CASE("a 30e6 carbody damper welds carbody to bogie") {
    // The acceleration curve keeps rising to 50 Hz and the 0.5 Hz sweep
    // increases with load.
    const auto p = TwoDofParams::heavy_carbody_damper();
    const auto f = frequency_grid_hz(0.1, 50.0, 2000);
    std::size_t best = 0;
    double best_val = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = twodof::accel_transfer_magnitude(p, hz_to_rad(f[i]));
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    CHECK(f[best] > 5.0);
    const int counts[] = {0, 200};
    const auto sweep = twodof::fixed_frequency_load_sweep(p, 0.5, counts);
    CHECK(sweep[1].magnitude > sweep[0].magnitude);
}

TEST_CASE("fixed-frequency sweeps decrease with load") {
    const auto p = TwoDofParams::defaults();
    const int zero[] = {0};
    const auto single = twodof::fixed_frequency_load_sweep(p, 1.0, zero);
    REQUIRE(single.size() == 1);
    CHECK(single[0].count == 0);
    CHECK(single[0].magnitude == std::abs(twodof::transfer_function(p, cd(0, hz_to_rad(1.0)))));

    std::vector<int> counts;
    for (int n = 0; n <= 200; n += 10) counts.push_back(n);
    for (double f0 : {0.5, 1.0, 1.5, 2.0, 3.0}) {
        const auto sweep = twodof::fixed_frequency_load_sweep(p, f0, counts);
        REQUIRE(sweep.size() == counts.size());
        for (std::size_t i = 1; i < sweep.size(); ++i) {
            INFO("f0 = " << f0 << " count " << sweep[i].count);
            CHECK(sweep[i].magnitude < sweep[i - 1].magnitude);
        }
    }
}

TEST_CASE("sweep input errors") {
    const auto p = TwoDofParams::defaults();
    const int neg[] = {0, -5};
    CHECK_THROWS_AS(twodof::fixed_frequency_load_sweep(p, 1.0, neg), InputError);
    const int ok[] = {0};
    CHECK_THROWS_AS(twodof::fixed_frequency_load_sweep(p, 0.0, ok), InputError);
    CHECK_THROWS_AS(twodof::fixed_frequency_load_sweep(p, 1.0, std::span<const int>{}), InputError);
}

TEST_CASE("response curve") {
    const double f[] = {0.5, 1.0, 2.0};
    const auto r = twodof::response_curve(TwoDofParams::defaults(), f);
    REQUIRE(r.omega.size() == 3);
    REQUIRE(r.values.size() == 3);
    CHECK(r.omega[1] == doctest::Approx(2 * std::numbers::pi));
    CHECK(r.values[1] == twodof::transfer_function(TwoDofParams::defaults(), cd(0, r.omega[1])));
}
