#include "nvc/dsp/dft.hpp"
#include "nvc/error.hpp"
#include "nvc/sim/campaign.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nvc;
using namespace nvc::sim;

namespace {

ComparatorConfig quiet(SensorMode mode = SensorMode::ideal) {
    auto cfg = calibrated_defaults();
    cfg.noise = {};
    cfg.ratio_drift = {};
    cfg.sensor_mode = mode;
    return cfg;
}

CampaignReport strip_time(CampaignReport r) {
    r.provenance.timestamp.clear();
    return r;
}

} // namespace

TEST_SUITE("sim") {

TEST_CASE("lowpass response matches the difference equation") {
    const double fs = 1e4;
    const double fc = 300.0;
    const double f = 67.0;
    const double alpha = 1.0 - std::exp(-2.0 * M_PI * fc / fs);
    TimeSeries x{fs, 0.0, std::vector<double>(20000)};
    for (std::size_t i = 0; i < x.size(); ++i) {
        x.samples[i] = std::sin(2.0 * M_PI * f * i / fs);
    }
    std::vector<double> y(x.size());
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += alpha * (x.samples[i] - s);
        y[i] = s;
    }
    TimeSeries tail{fs, 0.0, std::vector<double>(y.end() - 10000, y.end())};
    CHECK(dsp::dft_bin_amplitude(tail, f) == doctest::Approx(lowpass_gain(fc, fs, f)).epsilon(1e-9));
    CHECK(lowpass_gain(0.0, fs, f) == 1.0);
    CHECK(std::abs(lowpass_response(fc, fs, 0.0) - 1.0) < 1e-15);
}

TEST_CASE("offset field from the auxiliary winding") {
    const auto cfg = calibrated_defaults();
    CHECK(cfg.offset_field() == doctest::Approx(100.49e-6).epsilon(1e-4));
    CHECK(cfg.conversion(0.0) == doctest::Approx(6.28076e-4).epsilon(1e-5));
    CHECK(cfg.conversion(67.0) == doctest::Approx(6.28076e-4 * 0.8).epsilon(1e-4));
    CHECK(cfg.ratio_error(67.0) == doctest::Approx(76e-6));
}

TEST_CASE("residual flux carries K(f) I eps(f)") {
    const auto cfg = quiet();
    const auto b = residual_flux(cfg, AcDrive{67.0, 0.6}, 1.0, 0.0, 1);
    const double expect = cfg.conversion(67.0) * 0.6 * cfg.ratio_error(67.0);
    CHECK(dsp::dft_bin_amplitude(b, 67.0) == doctest::Approx(expect).epsilon(1e-9));
    const double k67 = cfg.conversion(67.0) * 0.6 * 76e-6;
    CHECK(k67 == doctest::Approx(22.92e-9).epsilon(1e-3));
}

TEST_CASE("AC campaign: noiseless run recovers the injected current difference") {
    for (const auto mode : {SensorMode::ideal, SensorMode::tracker}) {
        const auto cfg = quiet(mode);
        const std::vector<double> f{67.0};
        const std::vector<double> a{0.2, 1.0};
        const auto r = run_ac_campaign(cfg, f, a, 1.0, 1);
        REQUIRE(r.ac);
        for (const auto& cell : r.ac->cells) {
            CHECK(cell.error.empty());
            CHECK(cell.current_mean ==
                  doctest::Approx(cell.amplitude * cfg.ratio_error(67.0)).epsilon(1e-6));
            CHECK(cell.ratio_error == doctest::Approx(76e-6).epsilon(1e-6));
            CHECK_FALSE(cell.negative_ratio_error);
        }
        REQUIRE(r.ac->linearity.size() == 1);
        CHECK(r.ac->linearity[0].fit.at("slope") == doctest::Approx(76e-6).epsilon(1e-6));
    }
}

TEST_CASE("AC campaign: negative injected error keeps its sign") {
    auto cfg = quiet();
    cfg.injected_ratio_error = {-42.5e-6, -0.5e-6};
    const std::vector<double> f{67.0};
    const std::vector<double> a{1.0};
    const auto r = run_ac_campaign(cfg, f, a, 1.0, 1);
    CHECK(r.ac->cells[0].current_mean == doctest::Approx(-76e-6).epsilon(1e-6));
    CHECK(r.ac->cells[0].negative_ratio_error);
}

TEST_CASE("AC campaign: frequency fit recovers eps_h and eps_e") {
    const auto cfg = quiet();
    const std::vector<double> f{20.0, 67.0, 120.0, 200.0};
    const std::vector<double> a{1.0};
    const auto r = run_ac_campaign(cfg, f, a, 1.0, 1);
    REQUIRE(r.ac->frequency_response.size() == 1);
    const auto& fit = r.ac->frequency_response[0].fit;
    CHECK(fit.at("eps_h") == doctest::Approx(42.5e-6).epsilon(1e-5));
    CHECK(fit.at("eps_e") == doctest::Approx(0.5e-6).epsilon(1e-5));
}

TEST_CASE("AC campaign: identical inputs give identical reports apart from the timestamp") {
    const auto cfg = calibrated_defaults();
    const std::vector<double> f{67.0};
    const std::vector<double> a{0.5};
    const auto one = strip_time(run_ac_campaign(cfg, f, a, 1.0, 2));
    const auto two = strip_time(run_ac_campaign(cfg, f, a, 1.0, 2));
    CHECK(one == two);
    auto other = cfg;
    other.seed += 1;
    CHECK_FALSE(one == strip_time(run_ac_campaign(other, f, a, 1.0, 2)));
}

TEST_CASE("AC campaign: scaling eps and I together scales the result") {
    auto cfg = quiet();
    const std::vector<double> f{67.0};
    const auto base = run_ac_campaign(cfg, f, std::vector<double>{0.4}, 1.0, 1);
    cfg.injected_ratio_error = {2.0 * 42.5e-6, 2.0 * 0.5e-6};
    const auto scaled = run_ac_campaign(cfg, f, std::vector<double>{0.8}, 1.0, 1);
    CHECK(scaled.ac->cells[0].current_mean ==
          doctest::Approx(4.0 * base.ac->cells[0].current_mean).epsilon(1e-6));
}

TEST_CASE("AC campaign: zero noise and zero error leave only the offset") {
    auto cfg = quiet();
    cfg.injected_ratio_error = {0.0, 0.0};
    const auto series = simulate_measurement(cfg, AcDrive{67.0, 1.0}, 1.0);
    for (double v : series.samples) {
        CHECK(v == doctest::Approx(cfg.offset_field()).epsilon(1e-12));
    }
    const auto r = run_ac_campaign(cfg, std::vector<double>{67.0}, std::vector<double>{1.0}, 1.0, 1);
    CHECK(std::abs(r.ac->cells[0].current_mean) < 1e-15);
}

TEST_CASE("AC campaign: invalid cells are recorded, the rest still run") {
    const auto cfg = quiet();
    const std::vector<double> f{67.0, -5.0};
    const std::vector<double> a{1.0};
    const auto r = run_ac_campaign(cfg, f, a, 1.0, 1);
    REQUIRE(r.ac->cells.size() == 2);
    CHECK(r.ac->cells[0].error.empty());
    CHECK_FALSE(r.ac->cells[1].error.empty());
}

TEST_CASE("AC campaign: spectrum peaks at the drive frequency") {
    const auto r = run_ac_campaign(calibrated_defaults(), std::vector<double>{67.0},
                                   std::vector<double>{1.0}, 1.0, 1);
    REQUIRE(r.ac->spectrum);
    const auto& s = *r.ac->spectrum;
    std::size_t peak = 0;
    for (std::size_t k = 0; k < s.flux.size(); ++k) {
        if (s.flux[k] > s.flux[peak]) {
            peak = k;
        }
    }
    CHECK(s.frequencies[peak] == doctest::Approx(67.0));
}

TEST_CASE("DC campaign: noiseless step is about 95 pT") {
    const auto cfg = quiet();
    const auto r = run_dc_campaign(cfg, 1.0, {1.0, 0.5, 10});
    REQUIRE(r.dc);
    CHECK(r.dc->step == doctest::Approx(cfg.conversion(0.0) * 1.5e-7).epsilon(1e-6));
    CHECK(r.dc->step == doctest::Approx(95e-12).epsilon(0.02));
    CHECK(r.dc->ratio_error == doctest::Approx(1.5e-7).epsilon(1e-6));
}

TEST_CASE("DC campaign: zero current gives a zero step and a warning") {
    const auto r = run_dc_campaign(quiet(), 0.0, {1.0, 0.5, 5});
    CHECK(std::abs(r.dc->step) < 1e-18);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("guard band violation is rejected") {
    auto cfg = calibrated_defaults();
    cfg.auxiliary_current = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
    CHECK_THROWS_AS(simulate_measurement(cfg, AcDrive{67.0, 1.0}, 1.0), ValidationError);
}

TEST_CASE("tracker lock loss propagates") {
    auto cfg = quiet(SensorMode::tracker);
    cfg.injected_ratio_error = {0.5, 0.0}; // tens of microtesla of residual flux
    CHECK_THROWS_AS(simulate_measurement(cfg, AcDrive{67.0, 1.0}, 0.2), LockLossError);
}

TEST_CASE("Allan campaign: noiseless run is flat at zero") {
    const auto cfg = quiet();
    const auto r = run_allan_campaign(cfg, AcDrive{67.0, 1.0}, 200.0, {});
    REQUIRE(r.allan);
    for (double s : r.allan->curve.sigmas) {
        CHECK(s < 1e-18);
    }
}

TEST_CASE("Allan campaign: white-only noise falls monotonically") {
    auto cfg = quiet();
    cfg.noise.white_asd = 300e-12;
    const auto r = run_allan_campaign(cfg, AcDrive{67.0, 1.0}, 600.0, {});
    const auto& c = r.allan->curve;
    REQUIRE(c.size() >= 5);
    CHECK(c.sigmas.back() < c.sigmas.front());
    CHECK(dsp::loglog_slope(c, c.taus.front(), c.taus.back()) == doctest::Approx(-0.5).epsilon(0.3));
    CHECK(r.allan->min_tau >= c.taus[c.size() - 3]);
}

TEST_CASE("time compression scales the noise model and forces ideal mode") {
    const auto cfg = calibrated_defaults();
    const auto fast = time_compressed(cfg, 20.0);
    CHECK(fast.sensor_mode == SensorMode::ideal);
    CHECK(fast.sample_rate == cfg.sample_rate);
    CHECK(fast.ratio_drift.ac == doctest::Approx(cfg.ratio_drift.ac * std::sqrt(20.0)));
    CHECK(fast.material.eddy_corner_frequency == doctest::Approx(20.0 * 89.33));
    CHECK(fast.conversion(20.0 * 67.0) == doctest::Approx(cfg.conversion(67.0)).epsilon(1e-12));
    CHECK(fast.ratio_error(20.0 * 67.0) == doctest::Approx(cfg.ratio_error(67.0)).epsilon(1e-12));
    CHECK_THROWS_AS(time_compressed(cfg, 0.5), ValidationError);
    CHECK(fast.noise.white_asd == doctest::Approx(cfg.noise.white_asd / std::sqrt(20.0)));
    CHECK(fast.noise.flicker_knee == doctest::Approx(20.0 * cfg.noise.flicker_knee));
}

}
