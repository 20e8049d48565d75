#pragma once

#include "railload/features.hpp"
#include "railload/mdof.hpp"
#include "railload/segmentation.hpp"
#include "railload/spectrum.hpp"
#include "railload/track_model.hpp"
#include "railload/twodof.hpp"
#include "railload/welch.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace railload::cli {

/// Bad configuration value, unknown key or unusable output directory (exit 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double f_min = 0.1;
    double f_max = 30.0;
    std::size_t points = 2000;
    GridSpacing spacing = GridSpacing::linear;
    bool operator==(const GridSpec&) const = default;
};

struct SimulationSpec {
    double duration_s = 600.0;
    double sample_rate = 200.0;
    double stationary_s = 30.0;  ///< silent padding before and after the motion
    double noise_sd = 0.002;     ///< accelerometer noise [m/s²]
    bool operator==(const SimulationSpec&) const = default;
};

struct AnalysisSpec {
    signal::SegmentationConfig segmentation;
    signal::WelchConfig welch;
    signal::FeatureConfig features;
    std::string feature_key = "psd_at_3Hz";
    int axis = -1;  ///< accelerometer axis, -1 = closest to gravity
    bool operator==(const AnalysisSpec&) const = default;
};

struct RunConfig {
    twodof::TwoDofParams twodof;
    mdof::MdofParams mdof;
    track::TrackSpectrumParams track;
    GridSpec grid;
    std::vector<int> loads = default_loads();
    std::vector<double> sweep_freqs{0.5, 1.0, 1.5, 2.0, 3.0};  ///< [Hz]
    std::vector<double> positions;  ///< [m]; empty = {L/2, l_1}
    std::vector<std::uint64_t> seeds{1};
    SimulationSpec simulation;
    AnalysisSpec analysis;
    std::string out_dir = ".";

    static std::vector<int> default_loads();

    /// Throws ConfigError naming the offending field.
    void validate() const;
    std::vector<double> resolved_positions() const;

    bool operator==(const RunConfig&) const = default;
};

/// Merges an INI document (sections twodof, mdof, track, grid, run, analysis).
void apply_ini(RunConfig& cfg, const std::filesystem::path& path);
/// Applies one "section.key=value" override.
void apply_override(RunConfig& cfg, std::string_view assignment);
void set_value(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value);

/// Every field as {section: {key: value}}.
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(std::string_view text);

/// Section/key names accepted by set_value, in document order.
std::vector<std::string> config_keys();

}  // namespace railload::cli
