#include "run_config.hpp"

#include "railload/errors.hpp"

#include "json.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

namespace railload::cli {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    s = trim(s);
    if (s.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.push_back(trim(s.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class T>
T parse_number(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("not a valid number: '" + std::string(text) + "'");
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(v)) throw ConfigError("value must be finite");
    return v;
}

template <class T>
struct Codec {
    static T parse(std::string_view s) { return parse_number<T>(s); }
    static json to_json(const T& v) { return v; }
    static T from_json(const json& j) { return j.get<T>(); }
};

template <>
struct Codec<std::string> {
    static std::string parse(std::string_view s) { return std::string(trim(s)); }
    static json to_json(const std::string& v) { return v; }
    static std::string from_json(const json& j) { return j.get<std::string>(); }
};

template <class T>
struct Codec<std::vector<T>> {
    static std::vector<T> parse(std::string_view s) {
        std::vector<T> out;
        for (auto item : split_list(s)) out.push_back(Codec<T>::parse(item));
        return out;
    }
    static json to_json(const std::vector<T>& v) { return v; }
    static std::vector<T> from_json(const json& j) { return j.get<std::vector<T>>(); }
};

template <>
struct Codec<std::pair<double, double>> {
    static std::pair<double, double> parse(std::string_view s) {
        const auto items = split_list(s);
        if (items.size() != 2) throw ConfigError("expected 'low,high', got '" + std::string(s) + "'");
        return {parse_number<double>(items[0]), parse_number<double>(items[1])};
    }
    static json to_json(const std::pair<double, double>& v) { return json::array({v.first, v.second}); }
    static std::pair<double, double> from_json(const json& j) {
        if (!j.is_array() || j.size() != 2) throw ConfigError("expected [low, high]");
        return {j[0].get<double>(), j[1].get<double>()};
    }
};

template <class T>
struct NamedEnum;

template <>
struct NamedEnum<GridSpacing> {
    static constexpr std::pair<GridSpacing, std::string_view> names[] = {
        {GridSpacing::linear, "linear"}, {GridSpacing::log, "log"}};
};
template <>
struct NamedEnum<track::CutoffUnits> {
    static constexpr std::pair<track::CutoffUnits, std::string_view> names[] = {
        {track::CutoffUnits::cycles_per_metre, "cycles_per_metre"},
        {track::CutoffUnits::radians_per_metre, "radians_per_metre"}};
};
template <>
struct NamedEnum<signal::WindowKind> {
    static constexpr std::pair<signal::WindowKind, std::string_view> names[] = {
        {signal::WindowKind::hann, "hann"},
        {signal::WindowKind::tukey, "tukey"},
        {signal::WindowKind::rectangular, "rectangular"}};
};
template <>
struct NamedEnum<signal::Detrend> {
    static constexpr std::pair<signal::Detrend, std::string_view> names[] = {
        {signal::Detrend::none, "none"}, {signal::Detrend::mean, "mean"}};
};

template <class E>
    requires std::is_enum_v<E>
struct Codec<E> {
    static E parse(std::string_view s) {
        s = trim(s);
        std::string known;
        for (const auto& [value, name] : NamedEnum<E>::names) {
            if (s == name) return value;
            known += (known.empty() ? "" : ", ") + std::string(name);
        }
        throw ConfigError("unknown value '" + std::string(s) + "' (expected one of " + known + ")");
    }
    static json to_json(E v) {
        for (const auto& [value, name] : NamedEnum<E>::names)
            if (value == v) return std::string(name);
        return nullptr;
    }
    static E from_json(const json& j) { return parse(j.get<std::string>()); }
};

struct Field {
    std::string section;
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set_text;
    std::function<void(RunConfig&, const json&)> set_json;
    std::function<json(const RunConfig&)> get;
};

template <class T, class Access>
Field make_field(const char* section, const char* key, Access access) {
    return {section, key,
            [access](RunConfig& c, std::string_view v) { access(c) = Codec<T>::parse(v); },
            [access](RunConfig& c, const json& j) { access(c) = Codec<T>::from_json(j); },
            [access](const RunConfig& c) { return Codec<T>::to_json(access(const_cast<RunConfig&>(c))); }};
}

#define RL_FIELD(section, key, member) \
    make_field<decltype(RunConfig{}.member)>(section, key, [](RunConfig& c) -> auto& { return c.member; })

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        RL_FIELD("twodof", "carbody_mass", twodof.carbody_mass),
        RL_FIELD("twodof", "bogie_mass", twodof.bogie_mass),
        RL_FIELD("twodof", "carbody_stiffness", twodof.carbody_stiffness),
        RL_FIELD("twodof", "carbody_damping", twodof.carbody_damping),
        RL_FIELD("twodof", "bogie_stiffness", twodof.bogie_stiffness),
        RL_FIELD("twodof", "bogie_damping", twodof.bogie_damping),
        RL_FIELD("twodof", "mass_per_passenger", twodof.mass_per_passenger),

        RL_FIELD("mdof", "carbody_mass", mdof.carbody_mass),
        RL_FIELD("mdof", "carbody_pitch_inertia", mdof.carbody_pitch_inertia),
        RL_FIELD("mdof", "bending_stiffness", mdof.bending_stiffness),
        RL_FIELD("mdof", "internal_damping", mdof.internal_damping),
        RL_FIELD("mdof", "length", mdof.length),
        RL_FIELD("mdof", "bogie_mass", mdof.bogie_mass),
        RL_FIELD("mdof", "bogie_pitch_inertia", mdof.bogie_pitch_inertia),
        RL_FIELD("mdof", "bogie_half_spacing", mdof.bogie_half_spacing),
        RL_FIELD("mdof", "half_wheelbase", mdof.half_wheelbase),
        RL_FIELD("mdof", "primary_stiffness", mdof.primary_stiffness),
        RL_FIELD("mdof", "primary_damping", mdof.primary_damping),
        RL_FIELD("mdof", "secondary_stiffness", mdof.secondary_stiffness),
        RL_FIELD("mdof", "secondary_damping", mdof.secondary_damping),
        RL_FIELD("mdof", "mass_per_passenger", mdof.mass_per_passenger),
        RL_FIELD("mdof", "speed", mdof.speed),
        RL_FIELD("mdof", "n_modes", mdof.n_modes),

        RL_FIELD("track", "intensity", track.intensity),
        RL_FIELD("track", "upper_cutoff", track.upper_cutoff),
        RL_FIELD("track", "lower_cutoff", track.lower_cutoff),
        RL_FIELD("track", "speed", track.speed),
        RL_FIELD("track", "cutoff_units", track.cutoff_units),

        RL_FIELD("grid", "f_min", grid.f_min),
        RL_FIELD("grid", "f_max", grid.f_max),
        RL_FIELD("grid", "points", grid.points),
        RL_FIELD("grid", "spacing", grid.spacing),

        RL_FIELD("run", "loads", loads),
        RL_FIELD("run", "sweep_freqs", sweep_freqs),
        RL_FIELD("run", "positions", positions),
        RL_FIELD("run", "seeds", seeds),
        RL_FIELD("run", "duration_s", simulation.duration_s),
        RL_FIELD("run", "sample_rate", simulation.sample_rate),
        RL_FIELD("run", "stationary_s", simulation.stationary_s),
        RL_FIELD("run", "noise_sd", simulation.noise_sd),
        RL_FIELD("run", "out_dir", out_dir),

        RL_FIELD("analysis", "window_s", analysis.segmentation.window_s),
        RL_FIELD("analysis", "rms_threshold", analysis.segmentation.rms_threshold),
        RL_FIELD("analysis", "min_duration_s", analysis.segmentation.min_duration_s),
        RL_FIELD("analysis", "hysteresis", analysis.segmentation.hysteresis),
        RL_FIELD("analysis", "segment_length", analysis.welch.segment_length),
        RL_FIELD("analysis", "overlap_fraction", analysis.welch.overlap_fraction),
        RL_FIELD("analysis", "window", analysis.welch.window),
        RL_FIELD("analysis", "detrend", analysis.welch.detrend),
        RL_FIELD("analysis", "rigid_band", analysis.features.rigid_band),
        RL_FIELD("analysis", "flexible_band", analysis.features.flexible_band),
        RL_FIELD("analysis", "power_band", analysis.features.power_band),
        RL_FIELD("analysis", "fixed_freqs", analysis.features.fixed_freqs),
        RL_FIELD("analysis", "feature_key", analysis.feature_key),
        RL_FIELD("analysis", "axis", analysis.axis),
    };
    return table;
}

#undef RL_FIELD

const Field& find_field(std::string_view section, std::string_view key) {
    for (const auto& f : fields())
        if (f.section == section && f.key == key) return f;
    throw ConfigError("unknown config key '" + std::string(section) + "." + std::string(key) + "'");
}

void check(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError(field + " " + what);
}

}  // namespace

std::vector<int> RunConfig::default_loads() {
    std::vector<int> out;
    for (int n = 0; n <= 200; n += 20) out.push_back(n);
    return out;
}

std::vector<double> RunConfig::resolved_positions() const {
    if (!positions.empty()) return positions;
    return {mdof.length / 2, mdof.suspension_positions().first};
}

void RunConfig::validate() const {
    try {
        twodof.validate();
        mdof.validate();
        track.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    check(track.speed == mdof.speed, "track.speed", "must equal mdof.speed");

    check(grid.f_min >= 0.0, "grid.f_min", "must be >= 0");
    check(grid.f_min < grid.f_max, "grid.f_max", "must exceed grid.f_min");
    check(grid.points >= 2, "grid.points", "must be >= 2");
    check(grid.spacing != GridSpacing::log || grid.f_min > 0.0, "grid.f_min", "must be > 0 for log spacing");

    check(!loads.empty(), "run.loads", "must be nonempty");
    check(std::set<int>(loads.begin(), loads.end()).size() == loads.size(), "run.loads",
          "must not repeat a count");
    for (int n : loads) check(n >= 0, "run.loads", "must be >= 0");
    check(!sweep_freqs.empty(), "run.sweep_freqs", "must be nonempty");
    for (double f : sweep_freqs) check(f > 0.0, "run.sweep_freqs", "must be > 0");
    for (double x : positions)
        check(x >= 0.0 && x <= mdof.length, "run.positions", "must lie within [0, mdof.length]");
    check(!seeds.empty(), "run.seeds", "must be nonempty");
    check(simulation.duration_s > 0.0, "run.duration_s", "must be > 0");
    check(simulation.sample_rate > 0.0, "run.sample_rate", "must be > 0");
    check(simulation.duration_s * simulation.sample_rate >= 2.0, "run.duration_s",
          "must cover at least two samples");
    check(simulation.stationary_s >= 0.0, "run.stationary_s", "must be >= 0");
    check(simulation.noise_sd >= 0.0, "run.noise_sd", "must be >= 0");
    check(!out_dir.empty(), "run.out_dir", "must be nonempty");

    const auto& seg = analysis.segmentation;
    check(seg.window_s > 0.0, "analysis.window_s", "must be > 0");
    check(seg.rms_threshold > 0.0, "analysis.rms_threshold", "must be > 0");
    check(seg.min_duration_s >= 0.0, "analysis.min_duration_s", "must be >= 0");
    check(seg.hysteresis > 0.0 && seg.hysteresis <= 1.0, "analysis.hysteresis", "must be in (0, 1]");
    check(analysis.welch.segment_length >= 2, "analysis.segment_length", "must be >= 2");
    check(analysis.welch.overlap_fraction >= 0.0 && analysis.welch.overlap_fraction < 1.0,
          "analysis.overlap_fraction", "must be in [0, 1)");
    try {
        analysis.features.validate();
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    check(!analysis.feature_key.empty(), "analysis.feature_key", "must be nonempty");
    check(analysis.axis >= -1 && analysis.axis <= 2, "analysis.axis", "must be -1, 0, 1 or 2");
}

void set_value(RunConfig& cfg, std::string_view section, std::string_view key, std::string_view value) {
    const auto& f = find_field(section, key);
    try {
        f.set_text(cfg, value);
    } catch (const ConfigError& e) {
        throw ConfigError(f.section + "." + f.key + ": " + e.what());
    }
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
        throw ConfigError("override must look like section.key=value, got '" + std::string(assignment) + "'");
    set_value(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
              assignment.substr(eq + 1));
}

void apply_ini(RunConfig& cfg, const std::filesystem::path& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config file: ") + e.what());
    }
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw ConfigError("config file: key '" + section + "' must sit inside a [section]");
        for (const auto& [key, value] : body) set_value(cfg, section, key, value.data());
    }
}

std::string config_to_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& f : fields()) j[f.section][f.key] = f.get(cfg);
    return j.dump(2);
}

RunConfig config_from_json(std::string_view text) {
    RunConfig cfg;
    try {
        const auto j = json::parse(text);
        for (const auto& [section, body] : j.items())
            for (const auto& [key, value] : body.items()) {
                const auto& f = find_field(section, key);
                f.set_json(cfg, value);
            }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config document: ") + e.what());
    }
    return cfg;
}

std::vector<std::string> config_keys() {
    std::vector<std::string> out;
    for (const auto& f : fields()) out.push_back(f.section + "." + f.key);
    return out;
}

}  // namespace railload::cli
