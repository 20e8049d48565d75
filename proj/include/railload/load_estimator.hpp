#pragma once

// Monotone feature -> passenger-count calibration.
//
// Vibration features fall as the carbody gets heavier, so calibration fits a
// nonincreasing count -> feature map with pool-adjacent-violators and
// inverts it into a piecewise-linear feature -> count map.

#include "railload/features.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace railload::estimator {

inline constexpr std::string_view default_feature_key = "psd_at_3Hz";

struct CalibrationSample {
    signal::FeatureVector features;
    int passenger_count = 0;
};

struct Knot {
    double feature;
    double count;
    bool operator==(const Knot&) const = default;
};

struct CalibrationModel {
    std::string feature_key{default_feature_key};
    std::vector<Knot> knots;  ///< feature strictly increasing, count strictly decreasing
    double residual_sd = 0.0;
    std::pair<double, double> fit_range{0.0, 0.0};  ///< (min, max) knot count

    /// Throws InputError if the invariants above do not hold.
    void validate() const;
    bool operator==(const CalibrationModel&) const = default;
};

/// Weighted least-squares nonincreasing fit (pool adjacent violators).
std::vector<double> isotonic_nonincreasing(std::span<const double> values,
                                           std::span<const double> weights = {});

/// Needs >= 3 samples with >= 2 distinct counts (InputError); throws
/// DegenerateFitError when the feature does not vary or the monotone fit
/// collapses to a single level.
CalibrationModel calibrate(std::span<const CalibrationSample> samples,
                           std::string_view feature_key = default_feature_key);

struct LoadEstimate {
    double count = 0.0;
    double lower = 0.0;  ///< count - 2 residual_sd
    double upper = 0.0;  ///< count + 2 residual_sd
    bool clamped = false;
};

/// Linear interpolation on the knots; outside the calibrated feature range the
/// estimate is clamped to the fit_range end and flagged.
LoadEstimate estimate_load(const CalibrationModel& model, double feature);
/// Throws InputError if the features lack model.feature_key.
LoadEstimate estimate_load(const CalibrationModel& model, const signal::FeatureVector& features);

struct Metrics {
    double mae = 0.0;
    double within_5 = 0.0;
    double within_10 = 0.0;
    double within_20 = 0.0;
    std::size_t n = 0;
};

Metrics evaluate(const CalibrationModel& model, std::span<const CalibrationSample> samples);

/// Versioned JSON document {format, version, feature_key, knots, residual_sd, fit_range}.
std::string model_to_json(const CalibrationModel& model);
/// Throws FormatError on a malformed document or unsupported version.
CalibrationModel model_from_json(std::string_view text);

}  // namespace railload::estimator
