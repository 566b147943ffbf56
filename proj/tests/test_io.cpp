#include "nvc/dsp/dft.hpp"
#include "nvc/error.hpp"
#include "nvc/io/config.hpp"
#include "nvc/io/csv.hpp"
#include "nvc/io/plotdata.hpp"
#include "nvc/io/report_json.hpp"
#include "nvc/sim/campaign.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nvc;
namespace fs = std::filesystem;

namespace {

const std::string shipped_config = std::string(NVC_SOURCE_DIR) + "/configs/paper-defaults.yaml";

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nvc_tests_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(NVC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string with_key_replaced(const std::string& text, const std::string& key,
                              const std::string& line) {
    std::istringstream in(text);
    std::string out;
    std::string l;
    while (std::getline(in, l)) {
        out += (l.find(key + ":") != std::string::npos ? line : l) + "\n";
    }
    return out;
}

} // namespace

TEST_SUITE("io") {

TEST_CASE("config: shipped file carries the calibrated values") {
    const auto loaded = io::load_config(shipped_config);
    const auto& c = loaded.config;
    CHECK(loaded.warnings.empty());
    CHECK(c.geometry.outer_diameter == doctest::Approx(0.10));
    CHECK(c.geometry.inner_diameter == doctest::Approx(0.06));
    CHECK(c.geometry.thickness == doctest::Approx(0.02));
    CHECK(c.geometry.gap_length == doctest::Approx(0.02));
    CHECK(c.windings.primary_turns == 10);
    CHECK(c.windings.secondary_turns == 10);
    CHECK(c.ratio_error(67.0) == doctest::Approx(76e-6));
    CHECK(c == sim::calibrated_defaults());
}

TEST_CASE("config: empty file lists every mandatory key at once") {
    try {
        io::parse_config("");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.missing_keys == io::mandatory_config_keys());
        const std::string msg = e.what();
        for (const auto& k : io::mandatory_config_keys()) {
            CHECK(msg.find(k) != std::string::npos);
        }
    }
}

TEST_CASE("config: zero gap violates the geometry invariant") {
    const auto text = with_key_replaced(slurp(shipped_config), "gap_length_m", "  gap_length_m: 0.0");
    try {
        io::parse_config(text);
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("gap") != std::string::npos);
    }
}

TEST_CASE("config: syntax errors carry line and column") {
    try {
        io::parse_config("geometry:\n  outer_diameter_m: [0.1\n", "bad.yaml");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.yaml:") != std::string::npos);
        CHECK(msg.find(":3:") != std::string::npos);
    }
}

TEST_CASE("config: unknown keys warn, wrong types fail") {
    const auto text = slurp(shipped_config) + "colour: blue\n";
    const auto loaded = io::parse_config(text);
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(loaded.warnings[0].find("colour") != std::string::npos);
    const auto bad = with_key_replaced(slurp(shipped_config), "primary_turns", "  primary_turns: ten");
    CHECK_THROWS_AS(io::parse_config(bad), ConfigError);
}

TEST_CASE("config: dump and parse round-trip") {
    auto cfg = sim::calibrated_defaults();
    cfg.seed = 42;
    cfg.sensor_mode = sim::SensorMode::ideal;
    cfg.noise.random_walk_asd = 3e-13;
    cfg.tracker.guard_field = 5e-6;
    CHECK(io::parse_config(io::dump_config(cfg)).config == cfg);
}

TEST_CASE("csv: 10 kHz record round-trips losslessly") {
    auto ts = sim::simulate_measurement(sim::calibrated_defaults(), sim::AcDrive{67.0, 1.0}, 0.5);
    std::stringstream ss;
    io::write_timeseries(ss, ts);
    const auto back = io::read_timeseries(ss);
    CHECK(back.sample_rate == ts.sample_rate);
    CHECK(back.start_time == ts.start_time);
    CHECK(back.samples == ts.samples);
}

TEST_CASE("csv: duplicated timestamp names its row") {
    std::stringstream ss("time_s,field_T\n0,1\n0.1,2\n0.1,3\n0.3,4\n");
    try {
        io::read_timeseries(ss);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.row == 4);
        CHECK(std::string(e.what()).find("4") != std::string::npos);
    }
}

TEST_CASE("csv: non-uniform spacing and non-numeric rows are rejected") {
    std::stringstream jitter("0,1\n0.1,2\n0.2,3\n0.3001,4\n");
    CHECK_THROWS_AS(io::read_timeseries(jitter), DataError);
    std::stringstream text("time_s,field_T\n0,1\n0.1,abc\n");
    try {
        io::read_timeseries(text);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.row == 3);
    }
    std::stringstream tiny("# comment\n0,1\n\n1e-4,2\n2e-4,3\n");
    CHECK(io::read_timeseries(tiny).sample_rate == doctest::Approx(1e4));
}

TEST_CASE("csv: externally formatted 67 Hz sinusoid demodulates to its amplitude") {
    // printf-style fixed-point text, as another tool would write it.
    const double amp = 38.1e-9;
    std::stringstream ss;
    ss << "time_s,field_T\n";
    char buf[96];
    for (int i = 0; i < 10000; ++i) {
        const double t = i / 1e4;
        std::snprintf(buf, sizeof buf, "%.6f,%.9e\n", t, 1e-4 + amp * std::sin(2.0 * M_PI * 67.0 * t + 0.3));
        ss << buf;
    }
    const auto ts = io::read_timeseries(ss);
    CHECK(ts.sample_rate == doctest::Approx(1e4));
    CHECK(dsp::dft_bin_amplitude(ts, 67.0) == doctest::Approx(amp).epsilon(1e-6));
}

TEST_CASE("report: JSON round-trip preserves every field") {
    const auto cfg = sim::calibrated_defaults();
    const std::vector<double> f{30.0, 67.0, 120.0};
    const std::vector<double> a{0.5, 1.0};
    const auto ac = sim::run_ac_campaign(cfg, f, a, 1.0, 2);
    CHECK(io::report_from_json(io::report_to_json(ac)) == ac);

    const auto dc = sim::run_dc_campaign(cfg, 1.0, {1.0, 0.5, 4});
    CHECK(io::report_from_json(io::report_to_json(dc)) == dc);

    auto ideal = cfg;
    ideal.sensor_mode = sim::SensorMode::ideal;
    const auto allan = sim::run_allan_campaign(ideal, sim::AcDrive{67.0, 1.0}, 300.0, {});
    CHECK(io::report_from_json(io::report_to_json(allan)) == allan);

    const auto dir = scratch("report");
    io::write_report(allan, (dir / "r.json").string());
    CHECK(io::read_report((dir / "r.json").string()) == allan);
    CHECK_THROWS_AS(io::read_report((dir / "missing.json").string()), IoError);
}

TEST_CASE("plot data: headers and spectrum peak") {
    const auto dir = scratch("plot");
    auto cfg = sim::calibrated_defaults();
    const auto ac = sim::run_ac_campaign(cfg, std::vector<double>{67.0}, std::vector<double>{1.0}, 1.0, 1);
    io::emit_plotdata(ac, dir.string());
    CHECK(first_line(dir / "spectrum.csv") == "frequency_Hz,flux_T,current_A");

    std::ifstream in(dir / "spectrum.csv");
    std::string line;
    std::getline(in, line);
    double best_f = 0.0;
    double best = -1.0;
    while (std::getline(in, line)) {
        double fr = 0.0;
        double flux = 0.0;
        std::sscanf(line.c_str(), "%lf,%lf", &fr, &flux);
        if (flux > best) {
            best = flux;
            best_f = fr;
        }
    }
    CHECK(best_f == doctest::Approx(67.0));

    cfg.sensor_mode = sim::SensorMode::ideal;
    const auto allan = sim::run_allan_campaign(cfg, sim::AcDrive{67.0, 1.0}, 100.0, {});
    io::emit_plotdata(allan, dir.string());
    CHECK(first_line(dir / "allan.csv") == "tau_s,sigma_T,sigma_A,ci");
}

}

TEST_SUITE("cli") {

TEST_CASE("cli: exit codes") {
    const auto dir = scratch("cli");
    const std::string out = " --out " + (dir / "out").string();
    CHECK(run_cli("") == 1);
    CHECK(run_cli("simulate --bogus") == 1);
    CHECK(run_cli("simulate --config " + shipped_config + out) == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "series.csv"));
    CHECK(run_cli("analyze --input " + (dir / "out" / "series.csv").string() + " --f0 67" + out) == 0);

    {
        std::ofstream empty(dir / "empty.yaml");
    }
    CHECK(run_cli("simulate --config " + (dir / "empty.yaml").string() + out) == 2);

    {
        std::ofstream bad(dir / "bad.csv");
        bad << "time_s,field_T\n0,1\n0,2\n";
    }
    CHECK(run_cli("analyze --input " + (dir / "bad.csv").string() + out) == 3);

    {
        std::ofstream noisy(dir / "lockloss.yaml");
        noisy << with_key_replaced(slurp(shipped_config), "hysteresis", "  hysteresis: 0.5");
    }
    CHECK(run_cli("simulate --config " + (dir / "lockloss.yaml").string() + out) == 4);

    {
        std::ofstream blocker(dir / "file");
    }
    CHECK(run_cli("simulate --out " + (dir / "file" / "sub").string()) == 5);
}

TEST_CASE("cli: identical inputs give identical outputs apart from timestamps") {
    const auto dir = scratch("cli_idem");
    const std::string base = "sweep --freqs 67 --amps 1 --repeats 2 --seed 7 --out ";
    REQUIRE(run_cli(base + (dir / "a").string()) == 0);
    REQUIRE(run_cli(base + (dir / "b").string()) == 0);
    auto a = io::read_report((dir / "a" / "report.json").string());
    auto b = io::read_report((dir / "b" / "report.json").string());
    CHECK(a.provenance.seed == 7);
    a.provenance.timestamp.clear();
    b.provenance.timestamp.clear();
    CHECK(a == b);
    CHECK(slurp(dir / "a" / "frequency_sweep.csv") == slurp(dir / "b" / "frequency_sweep.csv"));
}

TEST_CASE("cli: output directory from the environment") {
    const auto dir = scratch("cli_env");
    const std::string cmd = "NVC_OUTPUT_DIR=" + (dir / "env").string() + " " + NVC_CLI_PATH +
                            " dc --cycles 3 >/dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "env" / "report.json"));
    CHECK(fs::exists(dir / "env" / "dc_cycles.csv"));
}

}
