#include "cli.hpp"

#include "run_config.hpp"

#include "railload/accel_log.hpp"
#include "railload/csv.hpp"
#include "railload/errors.hpp"
#include "railload/features.hpp"
#include "railload/load_estimator.hpp"
#include "railload/mdof.hpp"
#include "railload/segmentation.hpp"
#include "railload/track_model.hpp"
#include "railload/twodof.hpp"
#include "railload/welch.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>

namespace railload::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* tool_version = "0.1.0";
constexpr double standard_gravity = 9.80665;

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool force = false;
    std::vector<std::string> sets;
    bool gnuplot = false;
};

// Files are written under temporary names and renamed into place only once
// every output of the command is complete.
class Staging {
public:
    Staging(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}
    Staging(const Staging&) = delete;
    Staging& operator=(const Staging&) = delete;
    ~Staging() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& [tmp, final_path] : files_) fs::remove(tmp, ec);
    }

    /// Claims an output name; refuses existing files unless forced.
    void claim(const std::string& name, bool always_replace = false) {
        const fs::path target = dir_ / name;
        if (!force_ && !always_replace && fs::exists(target))
            throw ConfigError("refusing to overwrite " + target.string() + " (pass --force)");
        files_[name] = {dir_ / ("." + name + ".partial"), target};
    }

    std::ofstream open(const std::string& name) {
        auto it = files_.find(name);
        if (it == files_.end()) throw std::logic_error("output not claimed: " + name);
        std::ofstream os(it->second.first, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot write " + it->second.first.string());
        return os;
    }

    void write(const std::string& name, const std::string& text) {
        auto os = open(name);
        os << text;
        if (!os) throw ConfigError("cannot write " + name);
    }

    void commit() {
        for (const auto& [name, paths] : files_)
            if (!fs::exists(paths.first)) throw std::logic_error("output never written: " + name);
        for (const auto& [name, paths] : files_) fs::rename(paths.first, paths.second);
        committed_ = true;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& [name, paths] : files_) out.push_back(name);
        return out;
    }

private:
    fs::path dir_;
    bool force_;
    bool committed_ = false;
    std::map<std::string, std::pair<fs::path, fs::path>> files_;
};

struct Context {
    RunConfig cfg;
    CommonOptions opts;
    std::string command;
    std::vector<std::string> inputs;
    std::ostream& out;
    std::ostream& err;
};

RunConfig resolve_config(const CommonOptions& o) {
    RunConfig cfg;
    if (!o.config.empty()) {
        if (!fs::exists(o.config)) throw ConfigError("config file not found: " + o.config);
        apply_ini(cfg, o.config);
    }
    for (const auto& s : o.sets) apply_override(cfg, s);
    if (o.seed) cfg.seeds = {*o.seed};
    if (!o.out.empty()) cfg.out_dir = o.out;
    cfg.validate();
    if (!fs::is_directory(cfg.out_dir))
        throw ConfigError("output directory does not exist: " + cfg.out_dir);
    return cfg;
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void finish(Context& ctx, Staging& staging) {
    json meta;
    meta["tool"] = "railload";
    meta["version"] = tool_version;
    meta["command"] = ctx.command;
    meta["created_utc"] = utc_now();
    meta["seed"] = ctx.cfg.seeds.front();
    meta["inputs"] = ctx.inputs;
    meta["outputs"] = staging.names();
    meta["config"] = json::parse(config_to_json(ctx.cfg));
    staging.claim("run_meta.json", true);
    staging.write("run_meta.json", meta.dump(2) + "\n");
    staging.commit();
}

std::string load_column(int n) { return "load_" + std::to_string(n); }

std::vector<double> grid_hz(const RunConfig& cfg) {
    return frequency_grid_hz(cfg.grid.f_min, cfg.grid.f_max, cfg.grid.points, cfg.grid.spacing);
}

std::string gnuplot_script(const std::string& title, const std::vector<std::string>& files,
                           const std::string& ylabel, bool logy, int columns = 2) {
    std::ostringstream os;
    os << "set datafile separator ','\n"
       << "set key autotitle columnhead\n"
       << "set title '" << title << "'\n"
       << "set xlabel 'frequency [Hz]'\n"
       << "set ylabel '" << ylabel << "'\n";
    if (logy) os << "set logscale y\n";
    os << "plot ";
    bool first = true;
    for (const auto& f : files) {
        for (int c = 2; c <= columns; ++c) {
            os << (first ? "" : ", \\\n     ") << "'" << f << "' using 1:" << c << " with lines";
            first = false;
        }
    }
    os << "\n";
    return os.str();
}

track::TrackProfile read_profile_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open profile " + path);
    try {
        return track::read_profile_csv(is);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    }
}

// -- tf2dof -------------------------------------------------------------------

int cmd_tf2dof(Context& ctx, std::optional<int> passengers) {
    auto& cfg = ctx.cfg;
    if (passengers) {
        if (*passengers < 0) throw ConfigError("--passengers must be >= 0");
        cfg.loads = {*passengers};
    }
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("tf_curve.csv");
    st.claim("load_sweep.csv");
    if (ctx.opts.gnuplot) st.claim("tf_curve.gp");

    const auto f = grid_hz(cfg);
    std::vector<std::string> header{"freq_hz"};
    std::vector<std::vector<double>> cols{f};
    for (int n : cfg.loads) {
        const auto r = twodof::response_curve(twodof::loaded_params(cfg.twodof, n), f);
        std::vector<double> mag(r.values.size());
        for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(r.values[i]);
        header.push_back(load_column(n));
        cols.push_back(std::move(mag));
    }
    {
        auto os = st.open("tf_curve.csv");
        csv::write_columns(os, header, cols);
    }

    std::vector<std::string> sweep_header{"count"};
    std::vector<std::vector<double>> sweep_cols(1);
    for (int n : cfg.loads) sweep_cols[0].push_back(n);
    for (double f0 : cfg.sweep_freqs) {
        sweep_header.push_back("f_" + csv::format(f0) + "Hz");
        std::vector<double> mags;
        for (const auto& p : twodof::fixed_frequency_load_sweep(cfg.twodof, f0, cfg.loads))
            mags.push_back(p.magnitude);
        sweep_cols.push_back(std::move(mags));
    }
    {
        auto os = st.open("load_sweep.csv");
        csv::write_columns(os, sweep_header, sweep_cols);
    }
    if (ctx.opts.gnuplot)
        st.write("tf_curve.gp", gnuplot_script("2-DOF transfer function", {"tf_curve.csv"}, "|H|", true,
                                               static_cast<int>(cfg.loads.size()) + 1));
    finish(ctx, st);
    return exit_ok;
}

// -- mdof-psd -----------------------------------------------------------------

int cmd_mdof_psd(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const auto positions = cfg.resolved_positions();
    Staging st(cfg.out_dir, ctx.opts.force);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < positions.size(); ++i)
        for (int n : cfg.loads) {
            names.push_back("mdof_psd_pos" + std::to_string(i) + "_load" + std::to_string(n) + ".csv");
            st.claim(names.back());
        }
    if (ctx.opts.gnuplot) st.claim("mdof_psd.gp");

    const auto f = grid_hz(cfg);
    const auto omega = to_omega(f);
    std::size_t k = 0;
    for (double x : positions)
        for (int n : cfg.loads) {
            const auto psd = mdof::accel_psd_at(cfg.mdof, cfg.track, x, n, omega);
            const std::string header[] = {"freq_hz", "psd"};
            const std::vector<double> cols[] = {f, psd.density_per_hz()};
            auto os = st.open(names[k++]);
            csv::write_columns(os, header, cols);
        }
    if (ctx.opts.gnuplot)
        st.write("mdof_psd.gp", gnuplot_script("carbody acceleration PSD", names, "PSD [(m/s^2)^2/Hz]", true));
    finish(ctx, st);
    return exit_ok;
}

// -- track-psd ----------------------------------------------------------------

int cmd_track_psd(Context& ctx) {
    const auto& cfg = ctx.cfg;
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("track_psd.csv");
    if (ctx.opts.gnuplot) st.claim("track_psd.gp");
    const auto f = grid_hz(cfg);
    const auto psd = track::track_psd(cfg.track, to_omega(f));
    {
        const std::string header[] = {"freq_hz", "psd"};
        const std::vector<double> cols[] = {f, psd.density_per_hz()};
        auto os = st.open("track_psd.csv");
        csv::write_columns(os, header, cols);
    }
    if (ctx.opts.gnuplot)
        st.write("track_psd.gp", gnuplot_script("track irregularity PSD", {"track_psd.csv"}, "PSD [m^2/Hz]", true));
    finish(ctx, st);
    return exit_ok;
}

// -- synth --------------------------------------------------------------------

int cmd_synth(Context& ctx) {
    const auto& cfg = ctx.cfg;
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("profile.csv");
    if (ctx.opts.gnuplot) st.claim("profile.gp");
    const auto profile = track::synthesize_profile(cfg.track, cfg.simulation.duration_s,
                                                   cfg.simulation.sample_rate, cfg.seeds.front());
    {
        auto os = st.open("profile.csv");
        track::write_profile_csv(os, profile);
    }
    if (ctx.opts.gnuplot)
        st.write("profile.gp", "set datafile separator ','\nset key autotitle columnhead\n"
                               "set xlabel 'time [s]'\nset ylabel 'displacement [m]'\n"
                               "plot 'profile.csv' using 1:2 with lines\n");
    finish(ctx, st);
    return exit_ok;
}

// -- simulate -----------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Box-Muller on raw generator bits so logs do not depend on the standard
// library's distribution implementation.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (spare_) {
            const double v = *spare_;
            spare_.reset();
            return v;
        }
        const double u1 = (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        return r * std::cos(two_pi * u2);
    }

private:
    std::mt19937_64 rng_;
    std::optional<double> spare_;
};

std::string log_name(int n) { return "log_load" + std::to_string(n) + ".csv"; }

int cmd_simulate(Context& ctx, const std::string& profile_path) {
    const auto& cfg = ctx.cfg;
    Staging st(cfg.out_dir, ctx.opts.force);
    for (int n : cfg.loads) st.claim(log_name(n));
    st.claim("labels.csv");

    track::TrackProfile profile;
    if (!profile_path.empty()) {
        profile = read_profile_file(profile_path);
        ctx.inputs.push_back(profile_path);
    } else {
        profile = track::synthesize_profile(cfg.track, cfg.simulation.duration_s,
                                            cfg.simulation.sample_rate, cfg.seeds.front());
    }
    const double fs = profile.sample_rate;
    const auto pad = static_cast<std::size_t>(std::llround(cfg.simulation.stationary_s * fs));
    const double x = cfg.resolved_positions().front();
    const double xs[] = {x};

    for (int n : cfg.loads) {
        const auto r = mdof::simulate_time_response(cfg.mdof, n, profile, xs);
        const auto& a = r.accel.front();
        Gaussian noise(splitmix64(cfg.seeds.front() ^ splitmix64(static_cast<std::uint64_t>(n))));
        const double sd = cfg.simulation.noise_sd;
        const std::size_t total = a.size() + 2 * pad;
        std::vector<signal::AccelLogRecord> records(total);
        for (std::size_t i = 0; i < total; ++i) {
            auto& rec = records[i];
            rec.timestamp = static_cast<double>(i) / fs;
            const double motion = (i >= pad && i < pad + a.size()) ? a[i - pad] : 0.0;
            rec.accel = {sd * noise(), sd * noise(), standard_gravity + motion + sd * noise()};
            rec.gyro = {1e-3 * sd * noise(), 1e-3 * sd * noise(), 1e-3 * sd * noise()};
            rec.mag = {22.0, 0.0, -41.0};
            rec.orientation = {0.0, 0.0, 0.0};
        }
        auto os = st.open(log_name(n));
        signal::write_log(os, records);
        if (!os) throw ConfigError("cannot write " + log_name(n));
        ctx.out << "simulated load " << n << " (" << total << " samples, step " << r.step << " s)\n";
    }
    {
        auto os = st.open("labels.csv");
        os << "file,passenger_count\n";
        for (int n : cfg.loads) os << log_name(n) << ',' << n << '\n';
    }
    finish(ctx, st);
    return exit_ok;
}

// -- analyze ------------------------------------------------------------------

std::map<std::string, int> read_labels(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open labels " + path);
    std::string line;
    std::getline(is, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "file,passenger_count") throw FormatError(path + ": expected header file,passenger_count", 1);
    std::map<std::string, int> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = csv::split(line);
        if (f.size() != 2) throw FormatError(path + ": expected 2 fields", lineno);
        const double v = csv::parse_double(f[1], lineno);
        if (v < 0 || v != std::floor(v)) throw FormatError(path + ": passenger_count must be a whole number >= 0", lineno);
        out[std::string(f[0])] = static_cast<int>(v);
    }
    return out;
}

json features_to_json(const signal::FeatureVector& fv) {
    json j;
    j["rigid_peak_freq"] = fv.rigid_peak_freq;
    j["flexible_peak_freq"] = fv.flexible_peak_freq;
    j["band_power_1_5Hz"] = fv.band_power_1_5Hz;
    json fixed = json::object();
    for (const auto& [f, v] : fv.psd_at_fixed_freqs) fixed[csv::format(f)] = v;
    j["psd_at_fixed_freqs"] = fixed;
    j["total_rms"] = fv.total_rms;
    return j;
}

int cmd_analyze(Context& ctx, const std::vector<std::string>& logs, const std::string& labels_path) {
    const auto& cfg = ctx.cfg;
    if (logs.empty()) throw ConfigError("analyze needs at least one log file");
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("features.jsonl");
    std::map<std::string, int> labels;
    if (!labels_path.empty()) {
        labels = read_labels(labels_path);
        ctx.inputs.push_back(labels_path);
    }

    std::ostringstream out;
    for (const auto& path : logs) {
        ctx.inputs.push_back(path);
        std::ifstream is(path);
        if (!is) throw InputError("cannot open log " + path);
        std::vector<signal::AccelLogRecord> records;
        try {
            records = signal::parse_log(is);
        } catch (const FormatError& e) {
            throw FormatError(path + ": " + e.what());
        }
        if (records.size() < 2) throw InputError(path + ": log has fewer than two records");
        const double fs = signal::estimate_sample_rate(records);
        const int axis = cfg.analysis.axis >= 0 ? cfg.analysis.axis : signal::vertical_axis(records);
        const auto series = signal::accel_channel(records, axis);
        const auto segments = signal::detect_motion_segments(series, fs, cfg.analysis.segmentation);
        const std::string name = fs::path(path).filename().string();
        const auto label = labels.find(name);
        if (segments.empty()) ctx.err << "warning: " << path << ": no motion segments\n";
        for (std::size_t k = 0; k < segments.size(); ++k) {
            const auto& seg = segments[k];
            if (seg.length() < cfg.analysis.welch.segment_length) {
                ctx.err << "warning: " << path << ": segment " << k << " shorter than the Welch segment, skipped\n";
                continue;
            }
            std::vector<double> part(series.begin() + static_cast<std::ptrdiff_t>(seg.start_idx),
                                     series.begin() + static_cast<std::ptrdiff_t>(seg.end_idx));
            double mean = 0.0;
            for (double v : part) mean += v;
            mean /= static_cast<double>(part.size());
            for (double& v : part) v -= mean;
            const auto psd = signal::welch_psd(part, fs, cfg.analysis.welch);
            json j;
            j["file"] = name;
            j["segment"] = k;
            j["start_idx"] = seg.start_idx;
            j["end_idx"] = seg.end_idx;
            if (label != labels.end()) j["label"] = label->second;
            j["features"] = features_to_json(signal::extract_features(psd, cfg.analysis.features));
            out << j.dump() << '\n';
        }
    }
    st.write("features.jsonl", out.str());
    finish(ctx, st);
    return exit_ok;
}

// -- calibrate / estimate -----------------------------------------------------

struct FeatureRecord {
    std::string file;
    std::size_t segment = 0;
    std::optional<int> label;
    signal::FeatureVector features;
};

std::vector<FeatureRecord> read_features(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot open features " + path);
    std::vector<FeatureRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            const auto j = json::parse(line);
            FeatureRecord r;
            r.file = j.at("file").get<std::string>();
            r.segment = j.at("segment").get<std::size_t>();
            if (j.contains("label")) r.label = j.at("label").get<int>();
            const auto& f = j.at("features");
            if (f.contains("rigid_peak_freq")) r.features.rigid_peak_freq = f["rigid_peak_freq"].get<double>();
            if (f.contains("flexible_peak_freq"))
                r.features.flexible_peak_freq = f["flexible_peak_freq"].get<double>();
            if (f.contains("band_power_1_5Hz")) r.features.band_power_1_5Hz = f["band_power_1_5Hz"].get<double>();
            if (f.contains("total_rms")) r.features.total_rms = f["total_rms"].get<double>();
            if (f.contains("psd_at_fixed_freqs"))
                for (const auto& [k, v] : f["psd_at_fixed_freqs"].items())
                    r.features.psd_at_fixed_freqs[csv::parse_double(k, lineno)] = v.get<double>();
            out.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw FormatError(path + ": " + e.what(), lineno);
        }
    }
    return out;
}

int cmd_calibrate(Context& ctx, const std::vector<std::string>& inputs) {
    const auto& cfg = ctx.cfg;
    if (inputs.empty()) throw ConfigError("calibrate needs at least one features file");
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("model.json");
    std::vector<estimator::CalibrationSample> samples;
    for (const auto& path : inputs) {
        ctx.inputs.push_back(path);
        for (auto& r : read_features(path))
            if (r.label) samples.push_back({std::move(r.features), *r.label});
    }
    if (samples.empty()) throw InputError("no labelled feature records to calibrate on");
    const auto model = estimator::calibrate(samples, cfg.analysis.feature_key);
    st.write("model.json", estimator::model_to_json(model));
    ctx.out << "calibrated on " << samples.size() << " segments, " << model.knots.size()
            << " knots, residual_sd " << model.residual_sd << "\n";
    finish(ctx, st);
    return exit_ok;
}

int cmd_estimate(Context& ctx, const std::string& model_path, const std::vector<std::string>& inputs) {
    const auto& cfg = ctx.cfg;
    if (inputs.empty()) throw ConfigError("estimate needs at least one features file");
    Staging st(cfg.out_dir, ctx.opts.force);
    st.claim("estimates.csv");
    std::ifstream ms(model_path);
    if (!ms) throw InputError("cannot open model " + model_path);
    ctx.inputs.push_back(model_path);
    const std::string text((std::istreambuf_iterator<char>(ms)), std::istreambuf_iterator<char>());
    const auto model = estimator::model_from_json(text);

    std::ostringstream out;
    out << "file,segment,count,lower,upper,clamped,label\n";
    std::vector<estimator::CalibrationSample> labelled;
    for (const auto& path : inputs) {
        ctx.inputs.push_back(path);
        for (const auto& r : read_features(path)) {
            const auto e = estimator::estimate_load(model, r.features);
            out << r.file << ',' << r.segment << ',' << csv::format(e.count) << ',' << csv::format(e.lower)
                << ',' << csv::format(e.upper) << ',' << (e.clamped ? 1 : 0) << ','
                << (r.label ? std::to_string(*r.label) : "") << '\n';
            if (r.label) labelled.push_back({r.features, *r.label});
        }
    }
    st.write("estimates.csv", out.str());
    if (!labelled.empty()) {
        const auto m = estimator::evaluate(model, labelled);
        ctx.out << "n " << m.n << " mae " << m.mae << " within_5 " << m.within_5 << " within_10 "
                << m.within_10 << " within_20 " << m.within_20 << "\n";
    }
    finish(ctx, st);
    return exit_ok;
}

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "INI config file (sections twodof, mdof, track, grid, run, analysis)");
    sub->add_option("--out", o.out, "Existing output directory");
    sub->add_option("--seed", o.seed, "Random seed (replaces run.seeds)");
    sub->add_flag("--force", o.force, "Overwrite existing outputs");
    sub->add_option("--set", o.sets, "Override section.key=value (repeatable)");
    sub->add_flag("--gnuplot", o.gnuplot, "Also write a gnuplot script");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Passenger-load vibration toolkit for rail carbodies", "railload"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    CommonOptions opts;
    std::optional<int> passengers;
    std::string profile_path, labels_path, model_path;
    std::vector<std::string> positional;

    auto* tf2dof = app.add_subcommand("tf2dof", "2-DOF transfer function curves and load sweep");
    tf2dof->add_option("--passengers", passengers, "Single passenger count instead of run.loads");
    auto* mdof_psd = app.add_subcommand("mdof-psd", "Multi-DOF carbody acceleration PSDs");
    auto* track_psd = app.add_subcommand("track-psd", "Track irregularity PSD");
    auto* synth = app.add_subcommand("synth", "Synthesize a track profile");
    auto* simulate = app.add_subcommand("simulate", "Simulate accelerometer logs for run.loads");
    simulate->add_option("--profile", profile_path, "Profile CSV (default: synthesize from the seed)");
    auto* analyze = app.add_subcommand("analyze", "Segment logs and extract spectral features");
    analyze->add_option("logs", positional, "Log CSV files")->required();
    analyze->add_option("--labels", labels_path, "CSV file,passenger_count");
    auto* calibrate = app.add_subcommand("calibrate", "Fit a feature to passenger-count model");
    calibrate->add_option("features", positional, "features.jsonl files")->required();
    auto* estimate = app.add_subcommand("estimate", "Estimate passenger counts");
    estimate->add_option("--model", model_path, "model.json")->required();
    estimate->add_option("features", positional, "features.jsonl files")->required();
    for (auto* sub : {tf2dof, mdof_psd, track_psd, synth, simulate, analyze, calibrate, estimate})
        add_common(sub, opts);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    auto* sub = app.get_subcommands().front();
    try {
        Context ctx{resolve_config(opts), opts, sub->get_name(), {}, out, err};
        if (sub == tf2dof) return cmd_tf2dof(ctx, passengers);
        if (sub == mdof_psd) return cmd_mdof_psd(ctx);
        if (sub == track_psd) return cmd_track_psd(ctx);
        if (sub == synth) return cmd_synth(ctx);
        if (sub == simulate) return cmd_simulate(ctx, profile_path);
        if (sub == analyze) return cmd_analyze(ctx, positional, labels_path);
        if (sub == calibrate) return cmd_calibrate(ctx, positional);
        if (sub == estimate) return cmd_estimate(ctx, model_path, positional);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const SingularityError& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const DivergenceError& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const DegenerateFitError& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const Error& e) {
        err << "input error: " << e.what() << "\n";
        return exit_input;
    } catch (const fs::filesystem_error& e) {
        err << "input error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_config;
}

}  // namespace railload::cli
