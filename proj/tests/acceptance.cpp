// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "nvc/dsp/allan.hpp"
#include "nvc/dsp/dft.hpp"
#include "nvc/dsp/fit.hpp"
#include "nvc/dsp/uncertainty.hpp"
#include "nvc/io/report_json.hpp"
#include "nvc/magcore.hpp"
#include "nvc/noise.hpp"
#include "nvc/nvsensor.hpp"
#include "nvc/random.hpp"
#include "nvc/sim/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

using namespace nvc;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stdev(const std::vector<double>& v) {
    const double m = mean(v);
    double acc = 0.0;
    for (double x : v) {
        acc += (x - m) * (x - m);
    }
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares slope of log y against log x.
double loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<dsp::Point> pts;
    for (std::size_t i = 0; i < x.size(); ++i) {
        pts.push_back({std::log10(x[i]), std::log10(y[i])});
    }
    return dsp::fit_line(pts).at("slope");
}

sim::ComparatorConfig quiet_config() {
    auto cfg = sim::calibrated_defaults();
    cfg.noise = {};
    cfg.ratio_drift = {};
    return cfg;
}

Outcome flux_requirement() {
    const auto cfg = sim::calibrated_defaults();
    const double b = magcore::gap_flux_density(cfg.geometry, cfg.material, 3e-6);
    return {within(b, 188e-12, 0.02), fmt("B(3 uA-turns) = %.2f pT, target 188 pT +/- 2%%", b * 1e12)};
}

Outcome dc_conversion() {
    const auto cfg = sim::calibrated_defaults();
    const double k0 = magcore::conversion_coefficient(cfg.geometry, cfg.material, 10, 0.0);
    const double target = 95e-12 / 150e-9;
    return {within(k0, target, 0.02),
            fmt("K(0) = %.4f pT/nA, target %.4f pT/nA +/- 2%%", k0 * 1e3, target * 1e3)};
}

Outcome integration_time() {
    const double t = dsp::required_integration_time(300e-12, 188e-12);
    return {within(t, 2.5, 0.05), fmt("t = %.3f s, target 2.5 s +/- 5%%", t)};
}

Outcome shot_noise() {
    const sensor::SensorPhysics phys{};
    const double eta = sensor::shot_noise_limit(phys);
    const bool ok = eta >= 80e-12 && eta <= 92e-12;
    return {ok, fmt("eta = %.2f pT/rtHz for 1 MHz, C = 0.01, R = 1e15/s; window [80, 92]", eta * 1e12)};
}

Outcome ac_end_to_end() {
    const int seeds = 200;
    const int repeats = 100;
    const std::vector<double> f{67.0};
    const std::vector<double> a{1.0};
    std::vector<double> sds;
    int covered = 0;
    int failed_cells = 0;
    for (int s = 1; s <= seeds; ++s) {
        auto cfg = sim::calibrated_defaults();
        cfg.seed = static_cast<std::uint64_t>(s);
        const auto r = sim::run_ac_campaign(cfg, f, a, 1.0, repeats);
        const auto& cell = r.ac->cells.front();
        if (!cell.error.empty()) {
            ++failed_cells;
            continue;
        }
        sds.push_back(cell.current_sd);
        if (std::abs(cell.ratio_error - cell.injected_ratio_error) <= 3.0 * cell.ratio_error_se) {
            ++covered;
        }
    }
    if (sds.empty()) {
        return {false, "every cell failed"};
    }
    const double sd = median(sds);
    const double coverage = static_cast<double>(covered) / seeds;
    const bool ok = failed_cells == 0 && sd >= 0.5e-6 && sd <= 1.5e-6 && coverage >= 0.95;
    return {ok, fmt("single-window sd = %.3f uA (window [0.5, 1.5]), 76 uA/A within 3 SE in "
                    "%.1f%% of %d seeds (>= 95%%), %d failed cells",
                    sd * 1e6, coverage * 100.0, seeds, failed_cells)};
}

Outcome linearity() {
    const auto cfg = sim::calibrated_defaults();
    const std::vector<double> f{67.0};
    const std::vector<double> a{0.2, 0.4, 0.6, 0.8, 1.0};
    const auto r = sim::run_ac_campaign(cfg, f, a, 1.0, 100);
    if (r.ac->linearity.empty()) {
        return {false, "no linearity fit"};
    }
    const auto& fit = r.ac->linearity.front().fit;
    const double eps = cfg.ratio_error(67.0);
    const double slope = fit.at("slope");
    const double icpt = fit.at("intercept");
    const double icpt_se = fit.standard_error("intercept");
    const bool ok = within(slope, eps, 0.01) && std::abs(icpt) <= 2.0 * icpt_se;
    return {ok, fmt("slope = %.3f uA/A (76 +/- 1%%), intercept = %.3f +/- %.3f uA (|b| <= 2 se)",
                    slope * 1e6, icpt * 1e6, icpt_se * 1e6)};
}

Outcome frequency_fit() {
    const double eps_h = 42.5e-6;
    const double eps_e = 0.5e-6;
    const int seeds = 200;
    int good = 0;
    for (int s = 0; s < seeds; ++s) {
        std::mt19937_64 rng(derive_seed(20251016, {7, static_cast<std::uint64_t>(s)}));
        std::normal_distribution<double> noise(0.0, 1e-6);
        std::vector<dsp::Point> pts;
        for (double fr = 10.0; fr <= 300.0; fr += 10.0) {
            // 1 A drive: current noise in A maps one-to-one onto A/A.
            pts.push_back({fr, eps_h + eps_e * fr + noise(rng)});
        }
        const auto fit = dsp::fit_frequency_response(pts, dsp::ratio_frequency_model());
        if (within(fit.at("eps_h"), eps_h, 0.05) && within(fit.at("eps_e"), eps_e, 0.05)) {
            ++good;
        }
    }
    const double frac = static_cast<double>(good) / seeds;
    return {frac >= 0.9, fmt("(eps_h, eps_e) within 5%% in %.1f%% of %d seeds (>= 90%%)",
                             frac * 100.0, seeds)};
}

Outcome dc_protocol() {
    const dsp::SquareWaveProtocol short_run{1.0, 0.5, 10};
    const auto quiet = sim::run_dc_campaign(quiet_config(), 1.0, short_run);
    const double step = quiet.dc->step;
    const bool step_ok = within(step, 95e-12, 0.02);

    const std::vector<double> counts{10, 20, 50, 100, 200, 500, 1000};
    std::vector<double> log_se(counts.size(), 0.0);
    const int seeds = 3;
    for (int s = 1; s <= seeds; ++s) {
        auto cfg = sim::calibrated_defaults();
        cfg.seed = static_cast<std::uint64_t>(s);
        const auto r = sim::run_dc_campaign(cfg, 1.0, {1.0, 0.5, 1000});
        const auto& cycles = r.dc->per_cycle;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const std::vector<double> head(cycles.begin(),
                                           cycles.begin() + static_cast<std::ptrdiff_t>(counts[i]));
            log_se[i] += std::log(stdev(head) / std::sqrt(counts[i])) / seeds;
        }
    }
    std::vector<double> se(log_se.size());
    std::transform(log_se.begin(), log_se.end(), se.begin(), [](double v) { return std::exp(v); });
    const double slope = loglog_fit(counts, se);
    const bool slope_ok = std::abs(slope + 0.5) <= 0.1;
    return {step_ok && slope_ok,
            fmt("noiseless step = %.3f pT (95 +/- 2%%); SE slope over 10..1000 cycles = %.3f "
                "(-0.5 +/- 0.1), SE(1000) = %.1f pT",
                step * 1e12, slope, se.back() * 1e12)};
}

Outcome allan_estimator() {
    std::string detail;
    bool ok = true;

    // White: slope and level, averaged over independent records.
    const double d = 1e-10;
    // Integer averaging factors; the estimator merges taus that round to the same one.
    std::vector<double> taus;
    for (double t : dsp::log_spaced_taus(1.0, 1000.0, 10)) {
        const double m = std::round(t);
        if (taus.empty() || m != taus.back()) {
            taus.push_back(m);
        }
    }
    std::vector<double> white_log(taus.size(), 0.0);
    std::vector<double> rw_log(taus.size(), 0.0);
    std::vector<double> fl_log(taus.size(), 0.0);
    const int records = 4;
    for (int k = 0; k < records; ++k) {
        const auto w = noise::synthesize_noise({d, 0.0, 0.0, {}}, 1.0, 2e5, 100 + k);
        const auto rw = noise::synthesize_noise({0.0, 0.0, 1e-12, {}}, 1.0, 2e5, 200 + k);
        const auto fl = noise::synthesize_noise({1e-12, 1e4, 0.0, {}}, 1.0, 2e5, 300 + k);
        const auto cw = dsp::allan_deviation(w, taus);
        const auto cr = dsp::allan_deviation(rw, taus);
        const auto cf = dsp::allan_deviation(fl, taus);
        for (std::size_t i = 0; i < taus.size(); ++i) {
            white_log[i] += std::log(cw.sigmas[i]) / records;
            rw_log[i] += std::log(cr.sigmas[i]) / records;
            fl_log[i] += std::log(cf.sigmas[i]) / records;
        }
    }
    auto curve = [&](const std::vector<double>& logs) {
        std::vector<double> y(logs.size());
        std::transform(logs.begin(), logs.end(), y.begin(), [](double v) { return std::exp(v); });
        return y;
    };
    const auto white = curve(white_log);
    const double ws = loglog_fit(taus, white);
    double worst_level = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double expect = dsp::white_allan_deviation(d, taus[i]);
        worst_level = std::max(worst_level, std::abs(white[i] / expect - 1.0));
    }
    const double rs = loglog_fit(taus, curve(rw_log));
    const double fs = loglog_fit(taus, curve(fl_log));
    ok = ok && std::abs(ws + 0.5) <= 0.05 && worst_level <= 0.1;
    ok = ok && std::abs(rs - 0.5) <= 0.05;
    ok = ok && std::abs(fs) < 0.1;

    // Oracle: textbook non-overlapping estimator on a 1e4-sample record.
    const auto small = noise::synthesize_noise({d, 0.0, 0.0, {}}, 1.0, 1e4, 400);
    double worst_oracle = 0.0;
    bool oracle_ok = true;
    for (std::size_t m : {1U, 3U, 10U, 30U, 100U}) {
        const std::size_t blocks = small.size() / m;
        std::vector<double> means(blocks, 0.0);
        for (std::size_t b = 0; b < blocks; ++b) {
            for (std::size_t j = 0; j < m; ++j) {
                means[b] += small.samples[b * m + j] / static_cast<double>(m);
            }
        }
        double acc = 0.0;
        for (std::size_t b = 1; b < blocks; ++b) {
            acc += (means[b] - means[b - 1]) * (means[b] - means[b - 1]);
        }
        const double brute = std::sqrt(acc / (2.0 * static_cast<double>(blocks - 1)));
        const double est = dsp::allan_deviation(small, std::vector<double>{static_cast<double>(m)}).sigmas[0];
        const double rel = std::abs(est / brute - 1.0);
        worst_oracle = std::max(worst_oracle, rel);
        oracle_ok = oracle_ok && rel <= 3.0 / std::sqrt(static_cast<double>(blocks));
    }
    ok = ok && oracle_ok;
    return {ok, fmt("white slope %.3f, level error %.1f%%; random-walk slope %.3f; flicker slope %.3f; "
                    "non-overlapping oracle max deviation %.1f%%",
                    ws, worst_level * 100.0, rs, fs, worst_oracle * 100.0)};
}

Outcome allan_minimum() {
    const auto cfg = sim::calibrated_defaults();
    sim::AllanOptions ac_opt;
    ac_opt.time_compression = 20.0;
    const auto ac = sim::run_allan_campaign(cfg, sim::AcDrive{67.0, 1.0}, 40000.0, {}, ac_opt);
    sim::AllanOptions dc_opt;
    dc_opt.time_compression = 500.0;
    const auto dc = sim::run_allan_campaign(cfg, sim::DcDrive{1.0, {1.0, 0.5, 1}}, 1e6, {}, dc_opt);
    const double ac_min = ac.allan->min_sigma;
    const double ac_tau = ac.allan->min_tau;
    const double dc_min = dc.allan->min_sigma;
    const bool ok = ac_min >= 15e-12 && ac_min <= 35e-12 && ac_tau >= 250.0 && ac_tau <= 1000.0 &&
                    dc_min >= 20e-12 && dc_min <= 40e-12;
    return {ok, fmt("AC minimum %.1f pT at %.0f s ([15, 35] pT, [250, 1000] s); DC minimum %.1f pT "
                    "at %.0f s ([20, 40] pT); compression 20x / 500x",
                    ac_min * 1e12, ac_tau, dc_min * 1e12, dc.allan->min_tau)};
}

Outcome oracles() {
    // DFT bin against a long-double quadrature sum.
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 1e-10);
    TimeSeries ts{1e4, 0.0, std::vector<double>(10000)};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        ts.samples[i] = 1e-4 + 38e-9 * std::sin(2.0 * std::numbers::pi * 67.0 * i / 1e4 + 0.4) + g(rng);
    }
    long double re = 0.0L;
    long double im = 0.0L;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const long double w = 2.0L * std::numbers::pi_v<long double> * 67.0L * i / 1e4L;
        re += ts.samples[i] * std::cos(w);
        im -= ts.samples[i] * std::sin(w);
    }
    const double brute = static_cast<double>(2.0L * std::sqrt(re * re + im * im) / ts.size());
    const double dft_rel = std::abs(dsp::dft_bin_amplitude(ts, 67.0) / brute - 1.0);

    // Noiseless pipeline through the tracker.
    const auto cfg = quiet_config();
    const auto r = sim::run_ac_campaign(cfg, std::vector<double>{67.0}, std::vector<double>{1.0}, 1.0, 1);
    const double injected = cfg.ratio_error(67.0);
    const double pipe_rel = std::abs(r.ac->cells.front().ratio_error / injected - 1.0);

    const bool round_trip = io::report_from_json(io::report_to_json(r)) == r;
    const bool ok = dft_rel <= 1e-12 && pipe_rel <= 1e-6 && round_trip;
    return {ok, fmt("dft vs quadrature %.1e (<= 1e-12); noiseless recovery %.1e (<= 1e-6); "
                    "report round-trip %s",
                    dft_rel, pipe_rel, round_trip ? "identical" : "differs")};
}

} // namespace

int main(int argc, char** argv) {
    // Optional arguments pick criteria by number.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        only.push_back(std::atoi(argv[i]));
    }
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, flux_requirement}, {2, dc_conversion},  {3, integration_time}, {4, shot_noise},
        {5, ac_end_to_end},    {6, linearity},      {7, frequency_fit},    {8, dc_protocol},
        {9, allan_estimator},  {10, allan_minimum}, {11, oracles},
    };
    int failures = 0;
    for (const auto& [id, run] : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s criterion %2d: %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
