#pragma once

#include "railload/spectrum.hpp"

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace testing {

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("railload_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Octave bands [lo, 2 lo), [2 lo, 4 lo), ... with the last band cut at hi.
inline std::vector<std::pair<double, double>> octave_bands(double lo, double hi) {
    std::vector<std::pair<double, double>> out;
    for (double f = lo; f < hi; f *= 2) out.emplace_back(f, std::min(2 * f, hi));
    return out;
}

struct BandRatio {
    double lo, hi, ratio;
};

/// Mean of `estimate` over bins inside each band divided by the mean of
/// `reference` over the same bins (both on the estimate's grid).
inline std::vector<BandRatio> band_ratios(const railload::Psd& estimate,
                                          const std::vector<double>& reference, double lo_hz,
                                          double hi_hz) {
    std::vector<BandRatio> out;
    for (auto [lo, hi] : octave_bands(lo_hz, hi_hz)) {
        double se = 0, sr = 0;
        for (std::size_t i = 0; i < estimate.size(); ++i) {
            const double f = estimate.hz(i);
            const bool last = hi == hi_hz;
            if (f >= lo && (f < hi || (last && f <= hi))) {
                se += estimate.density()[i];
                sr += reference[i];
            }
        }
        out.push_back({lo, hi, se / sr});
    }
    return out;
}

inline double db(double ratio) { return 10.0 * std::log10(ratio); }

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, sd);
    std::vector<double> out(n);
    for (auto& v : out) v = nd(rng);
    return out;
}

}  // namespace testing
