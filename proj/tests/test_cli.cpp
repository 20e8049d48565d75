#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pipeline.hpp"
#include "support.hpp"

#include "cli.hpp"
#include "run_config.hpp"

#include "railload/accel_log.hpp"
#include "railload/csv.hpp"
#include "railload/twodof.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

using namespace railload;
using namespace railload::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "railload");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::vector<std::string> listing(const fs::path& dir) {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json meta(const fs::path& dir) { return nlohmann::json::parse(slurp(dir / "run_meta.json")); }

}  // namespace

TEST_CASE("config JSON round trip covers every key") {
    RunConfig cfg;
    set_value(cfg, "mdof", "n_modes", "7");
    set_value(cfg, "run", "loads", "0, 35, 170");
    set_value(cfg, "analysis", "window", "tukey");
    set_value(cfg, "analysis", "rigid_band", "0.4,2.5");
    set_value(cfg, "grid", "spacing", "log");
    set_value(cfg, "track", "cutoff_units", "radians_per_metre");
    set_value(cfg, "run", "positions", "1.5,12.25");
    set_value(cfg, "twodof", "carbody_damping", "0.1");
    const auto text = config_to_json(cfg);
    CHECK(config_from_json(text) == cfg);
    const auto j = nlohmann::json::parse(text);
    std::size_t n = 0;
    for (const auto& [section, body] : j.items()) n += body.size();
    CHECK(n == config_keys().size());
    CHECK(cfg.loads == std::vector<int>{0, 35, 170});
}

TEST_CASE("config values are validated with the field name") {
    RunConfig cfg;
    CHECK_THROWS_WITH_AS(set_value(cfg, "mdof", "n_modes", "five"), doctest::Contains("mdof.n_modes"), ConfigError);
    CHECK_THROWS_WITH_AS(set_value(cfg, "grid", "spacing", "cubic"), doctest::Contains("grid.spacing"), ConfigError);
    CHECK_THROWS_WITH_AS(set_value(cfg, "mdof", "colour", "1"), doctest::Contains("mdof.colour"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "no_dot=1"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "mdof.speed"), ConfigError);
    cfg.track.speed = 20;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("track.speed"), ConfigError);
    cfg = RunConfig{};
    cfg.loads = {0, 20, 20};
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("run.loads"), ConfigError);
    cfg = RunConfig{};
    cfg.analysis.axis = 3;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("analysis.axis"), ConfigError);
    CHECK_NOTHROW(RunConfig{}.validate());
    CHECK(RunConfig{}.resolved_positions() == std::vector<double>{12.25, 3.5});
}

TEST_CASE("INI file and overrides") {
    const auto dir = testing::scratch_dir("cli_ini");
    {
        std::ofstream ini(dir / "run.ini");
        ini << "; test config\n[twodof]\ncarbody_mass = 40000\nbogie_mass = 3000\n\n[run]\nloads = 0, 10\n";
    }
    RunConfig cfg;
    apply_ini(cfg, dir / "run.ini");
    CHECK(cfg.twodof.carbody_mass == 40000.0);
    CHECK(cfg.loads == std::vector<int>{0, 10});
    {
        std::ofstream bad(dir / "bad.ini");
        bad << "[mdof]\nwheels = 4\n";
    }
    CHECK_THROWS_WITH_AS(apply_ini(cfg, dir / "bad.ini"), doctest::Contains("mdof.wheels"), ConfigError);
}

TEST_CASE("command line beats the config file, which beats defaults") {
    const auto dir = testing::scratch_dir("cli_precedence");
    {
        std::ofstream ini(dir / "run.ini");
        ini << "[twodof]\ncarbody_mass = 40000\nbogie_mass = 3000\n[run]\nloads = 0\nseeds = 5\n";
    }
    const auto r = run({"tf2dof", "--config", (dir / "run.ini").string(), "--out", dir.string(), "--set",
                        "twodof.carbody_mass=41000", "--seed", "9"});
    REQUIRE(r.code == 0);
    const auto m = meta(dir);
    CHECK(m["config"]["twodof"]["carbody_mass"] == 41000.0);
    CHECK(m["config"]["twodof"]["bogie_mass"] == 3000.0);
    CHECK(m["config"]["twodof"]["bogie_stiffness"] == twodof::TwoDofParams{}.bogie_stiffness);
    CHECK(m["seed"] == 9);
    CHECK(m["command"] == "tf2dof");
    CHECK(m["tool"] == "railload");
}

TEST_CASE("tf2dof output matches the library") {
    const auto dir = testing::scratch_dir("cli_tf2dof");
    const auto r = run({"tf2dof", "--passengers", "0", "--out", dir.string(), "--set", "grid.points=50"});
    REQUIRE(r.code == 0);
    CHECK(listing(dir) == std::vector<std::string>{"load_sweep.csv", "run_meta.json", "tf_curve.csv"});
    std::ifstream is(dir / "tf_curve.csv");
    const std::string header[] = {"freq_hz", "load_0"};
    const auto cols = csv::read_columns(is, header);
    REQUIRE(cols[0].size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        const double expect = std::abs(twodof::transfer_function(twodof::TwoDofParams{}, {0, hz_to_rad(cols[0][i])}));
        CHECK(cols[1][i] == expect);
    }
    std::ifstream ls(dir / "load_sweep.csv");
    std::string line;
    std::getline(ls, line);
    CHECK(line == "count,f_0.5Hz,f_1Hz,f_1.5Hz,f_2Hz,f_3Hz");
}

TEST_CASE("missing output directory is a config error and writes nothing") {
    const auto dir = testing::scratch_dir("cli_missing");
    const auto r = run({"track-psd", "--out", (dir / "nope").string()});
    CHECK(r.code == exit_config);
    CHECK(r.err.find("does not exist") != std::string::npos);
    CHECK(listing(dir).empty());
}

TEST_CASE("existing outputs are kept unless forced") {
    const auto dir = testing::scratch_dir("cli_force");
    REQUIRE(run({"track-psd", "--out", dir.string(), "--set", "grid.points=20"}).code == 0);
    const auto before = slurp(dir / "track_psd.csv");
    const auto again = run({"track-psd", "--out", dir.string(), "--set", "grid.points=30"});
    CHECK(again.code == exit_config);
    CHECK(again.err.find("--force") != std::string::npos);
    CHECK(slurp(dir / "track_psd.csv") == before);
    CHECK(listing(dir) == std::vector<std::string>{"run_meta.json", "track_psd.csv"});
    REQUIRE(run({"track-psd", "--out", dir.string(), "--set", "grid.points=30", "--force"}).code == 0);
    CHECK(slurp(dir / "track_psd.csv") != before);
}

TEST_CASE("mdof-psd writes one file per position and load") {
    const auto dir = testing::scratch_dir("cli_mdof");
    const auto r = run({"mdof-psd", "--out", dir.string(), "--gnuplot", "--set", "run.loads=0,100", "--set",
                        "grid.points=40"});
    REQUIRE(r.code == 0);
    CHECK(listing(dir) == std::vector<std::string>{"mdof_psd.gp", "mdof_psd_pos0_load0.csv",
                                                   "mdof_psd_pos0_load100.csv", "mdof_psd_pos1_load0.csv",
                                                   "mdof_psd_pos1_load100.csv", "run_meta.json"});
    CHECK(slurp(dir / "mdof_psd.gp").find("mdof_psd_pos1_load100.csv") != std::string::npos);
    CHECK(meta(dir)["outputs"].size() == 5);
}

TEST_CASE("cheap commands are deterministic") {
    const auto a = testing::scratch_dir("cli_det_a");
    const auto b = testing::scratch_dir("cli_det_b");
    for (const auto& d : {a, b}) {
        REQUIRE(run({"synth", "--out", d.string(), "--seed", "4", "--set", "run.duration_s=20"}).code == 0);
        REQUIRE(run({"track-psd", "--out", d.string(), "--force"}).code == 0);
    }
    CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));
    CHECK(slurp(a / "track_psd.csv") == slurp(b / "track_psd.csv"));
}

TEST_CASE("argument errors") {
    CHECK(run({}).code == exit_config);
    CHECK(run({"tf2dof", "--bogus"}).code == exit_config);
    CHECK(run({"fly"}).code == exit_config);
    CHECK(run({"tf2dof", "--set", "mdof.n_modes=x"}).code == exit_config);
    CHECK(run({"tf2dof", "--passengers", "-3"}).code == exit_config);
    CHECK(run({"tf2dof", "--config", "/nonexistent/run.ini"}).code == exit_config);
    CHECK(run({"analyze", "--out", fs::temp_directory_path().string()}).code == exit_config);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bad inputs map to exit code 3, degenerate fits to 4") {
    const auto dir = testing::scratch_dir("cli_inputs");
    const auto features = dir / "features.jsonl";
    {
        std::ofstream os(features);
        for (int n : {0, 50, 100})
            os << R"({"file":"x","segment":0,"label":)" << n
               << R"(,"features":{"total_rms":0.1,"psd_at_fixed_freqs":{"3":)" << 1.0 - n / 200.0 << "}}}\n";
    }
    const auto model_dir = dir / "model";
    fs::create_directory(model_dir);
    REQUIRE(run({"calibrate", "--out", model_dir.string(), features.string()}).code == 0);

    // feature key the records do not carry
    const auto est = dir / "est";
    fs::create_directory(est);
    auto r = run({"estimate", "--out", est.string(), "--model", (model_dir / "model.json").string(), "--set",
                  "analysis.feature_key=psd_at_3Hz", (dir / "missing.jsonl").string()});
    CHECK(r.code == exit_input);
    {
        std::ofstream os(dir / "nokey.jsonl");
        os << R"({"file":"y","segment":0,"features":{"total_rms":0.2}})" << "\n";
    }
    r = run({"estimate", "--out", est.string(), "--model", (model_dir / "model.json").string(),
             (dir / "nokey.jsonl").string()});
    CHECK(r.code == exit_input);
    CHECK(r.err.find("psd_at_3Hz") != std::string::npos);
    CHECK(listing(est).empty());

    const auto degen = dir / "degen";
    fs::create_directory(degen);
    r = run({"calibrate", "--out", degen.string(), "--set", "analysis.feature_key=total_rms", features.string()});
    CHECK(r.code == exit_numerical);
    CHECK(listing(degen).empty());

    {
        std::ofstream os(dir / "broken.jsonl");
        os << "{not json\n";
    }
    CHECK(run({"calibrate", "--out", degen.string(), (dir / "broken.jsonl").string()}).code == exit_input);
    {
        std::ofstream os(dir / "log.csv");
        os << "time,z\n0,1\n";
    }
    CHECK(run({"analyze", "--out", degen.string(), (dir / "log.csv").string()}).code == exit_input);
    CHECK(run({"simulate", "--out", degen.string(), "--profile", (dir / "log.csv").string()}).code == exit_input);
    CHECK(listing(degen).empty());
}

TEST_CASE("simulate writes one log per load and a label file") {
    const auto dir = testing::scratch_dir("cli_simulate");
    const auto r = run({"simulate", "--out", dir.string(), "--set", "run.loads=0,30", "--set", "run.duration_s=4",
                        "--set", "run.stationary_s=1"});
    REQUIRE(r.code == 0);
    CHECK(listing(dir) == std::vector<std::string>{"labels.csv", "log_load0.csv", "log_load30.csv", "run_meta.json"});
    CHECK(slurp(dir / "labels.csv") == "file,passenger_count\nlog_load0.csv,0\nlog_load30.csv,30\n");
    std::ifstream is(dir / "log_load30.csv");
    const auto recs = signal::parse_log(is);
    CHECK(recs.size() == 6 * 200);
    CHECK(signal::vertical_axis(recs) == 2);
}

TEST_CASE("short pipeline estimates a held-out load") {
    const auto root = testing::scratch_dir("cli_pipeline");
    const auto r = testing::run_pipeline(root, {0, 40, 80, 120}, {60},
                                         {"run.duration_s=90", "run.stationary_s=10"}, 3);
    REQUIRE(r.estimates.size() == 1);
    INFO("estimate " << r.estimates[0].count << "; " << r.summary);
    CHECK(r.estimates[0].label == 60);
    CHECK(!r.estimates[0].clamped);
    CHECK(std::abs(r.estimates[0].count - 60.0) <= 10.0);
    CHECK(r.summary.find("n 1 mae") == 0);
    const auto m = meta(root / "eval");
    CHECK(m["command"] == "estimate");
    CHECK(m["inputs"].size() == 2);
}
