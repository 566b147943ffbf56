#include "nvc/io/report_json.hpp"

#include "nvc/error.hpp"
#include "nvc/io/config.hpp"
#include "nvc/io/csv.hpp"

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace nvc::io {

namespace {

using json = nlohmann::ordered_json;
using namespace nvc::sim;

// ---- config: reuse the YAML layout ---------------------------------------

json yaml_to_json(const YAML::Node& node) {
    if (node.IsMap()) {
        json obj = json::object();
        for (const auto& kv : node) {
            obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
        }
        return obj;
    }
    if (node.IsSequence()) {
        json arr = json::array();
        for (const auto& item : node) {
            arr.push_back(yaml_to_json(item));
        }
        return arr;
    }
    const std::string s = node.Scalar();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        return node.as<std::uint64_t>();
    }
    if (!s.empty() && s[0] == '-' && s.find_first_not_of("0123456789", 1) == std::string::npos) {
        return node.as<std::int64_t>();
    }
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        return s;
    }
}

void json_to_yaml(const json& j, YAML::Emitter& out) {
    if (j.is_object()) {
        out << YAML::BeginMap;
        for (const auto& [k, v] : j.items()) {
            out << YAML::Key << k << YAML::Value;
            json_to_yaml(v, out);
        }
        out << YAML::EndMap;
    } else if (j.is_array()) {
        out << YAML::BeginSeq;
        for (const auto& v : j) {
            json_to_yaml(v, out);
        }
        out << YAML::EndSeq;
    } else if (j.is_number_unsigned()) {
        out << std::to_string(j.get<std::uint64_t>());
    } else if (j.is_number_integer()) {
        out << std::to_string(j.get<std::int64_t>());
    } else if (j.is_number_float()) {
        out << format_double(j.get<double>());
    } else if (j.is_string()) {
        out << j.get<std::string>();
    } else {
        throw DataError("report: unexpected value in config section");
    }
}

json config_json(const ComparatorConfig& cfg) {
    return yaml_to_json(YAML::Load(dump_config(cfg)));
}

ComparatorConfig config_from(const json& j) {
    YAML::Emitter out;
    json_to_yaml(j, out);
    return parse_config(out.c_str(), "report config").config;
}

// ---- leaf helpers -----------------------------------------------------------

template <class T>
T get(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw DataError(std::string("report: missing key '") + key + "'");
    }
    return j.at(key).get<T>();
}

json fit_json(const dsp::FitResult& f, const std::map<std::string, std::string>& units,
              const std::string& residual_unit) {
    json p = json::object();
    json v = json::object();
    json u = json::object();
    for (const auto& [name, value] : f.parameters) {
        p[name] = value;
        const auto it = units.find(name);
        u[name] = it == units.end() ? "" : it->second;
    }
    for (const auto& [name, value] : f.covariance_diag) {
        v[name] = value;
    }
    return {{"parameters", p},
            {"variances", v},
            {"units", u},
            {"residual_norm", f.residual_norm},
            {"residual_unit", residual_unit},
            {"iterations", f.iterations}};
}

dsp::FitResult fit_from(const json& j) {
    dsp::FitResult f;
    f.parameters = get<std::map<std::string, double>>(j, "parameters");
    f.covariance_diag = get<std::map<std::string, double>>(j, "variances");
    f.residual_norm = get<double>(j, "residual_norm");
    f.iterations = get<int>(j, "iterations");
    return f;
}

const std::map<std::string, std::string> line_units{{"slope", "A/A"}, {"intercept", "A"}};
const std::map<std::string, std::string> ratio_units{{"eps_h", "A/A"}, {"eps_e", "1/Hz"}};

json protocol_json(const dsp::SquareWaveProtocol& p) {
    return {{"half_period_s", p.half_period},
            {"transient_exclusion_s", p.transient_exclusion},
            {"cycles", p.cycles}};
}

dsp::SquareWaveProtocol protocol_from(const json& j) {
    return {get<double>(j, "half_period_s"), get<double>(j, "transient_exclusion_s"),
            get<int>(j, "cycles")};
}

// ---- campaign sections ------------------------------------------------------

json ac_json(const AcCampaign& ac) {
    json cells = json::array();
    for (const auto& c : ac.cells) {
        cells.push_back({{"frequency_Hz", c.frequency},
                         {"amplitude_A", c.amplitude},
                         {"repeats", c.repeats},
                         {"window_s", c.window},
                         {"conversion_T_per_A", c.conversion},
                         {"readout_gain_T_per_T", c.readout_gain},
                         {"flux_mean_T", c.flux_mean},
                         {"flux_se_T", c.flux_se},
                         {"current_mean_A", c.current_mean},
                         {"current_se_A", c.current_se},
                         {"current_sd_A", c.current_sd},
                         {"ratio_error_A_per_A", c.ratio_error},
                         {"ratio_error_se_A_per_A", c.ratio_error_se},
                         {"injected_ratio_error_A_per_A", c.injected_ratio_error},
                         {"currents_A", c.currents},
                         {"negative_ratio_error", c.negative_ratio_error},
                         {"error", c.error}});
    }
    json lin = json::array();
    for (const auto& l : ac.linearity) {
        lin.push_back({{"frequency_Hz", l.frequency}, {"fit", fit_json(l.fit, line_units, "A")}});
    }
    json fr = json::array();
    for (const auto& f : ac.frequency_response) {
        fr.push_back({{"amplitude_A", f.amplitude}, {"fit", fit_json(f.fit, ratio_units, "A/A")}});
    }
    json out = {{"cells", cells}, {"linearity", lin}, {"frequency_response", fr}};
    if (ac.spectrum) {
        const auto& s = *ac.spectrum;
        out["spectrum"] = {{"drive_frequency_Hz", s.frequency},
                           {"drive_amplitude_A", s.amplitude},
                           {"frequencies_Hz", s.frequencies},
                           {"flux_T", s.flux},
                           {"current_A", s.current}};
    }
    return out;
}

AcCampaign ac_from(const json& j) {
    AcCampaign ac;
    for (const auto& c : get<json>(j, "cells")) {
        AcCell cell;
        cell.frequency = get<double>(c, "frequency_Hz");
        cell.amplitude = get<double>(c, "amplitude_A");
        cell.repeats = get<int>(c, "repeats");
        cell.window = get<double>(c, "window_s");
        cell.conversion = get<double>(c, "conversion_T_per_A");
        cell.readout_gain = get<double>(c, "readout_gain_T_per_T");
        cell.flux_mean = get<double>(c, "flux_mean_T");
        cell.flux_se = get<double>(c, "flux_se_T");
        cell.current_mean = get<double>(c, "current_mean_A");
        cell.current_se = get<double>(c, "current_se_A");
        cell.current_sd = get<double>(c, "current_sd_A");
        cell.ratio_error = get<double>(c, "ratio_error_A_per_A");
        cell.ratio_error_se = get<double>(c, "ratio_error_se_A_per_A");
        cell.injected_ratio_error = get<double>(c, "injected_ratio_error_A_per_A");
        cell.currents = get<std::vector<double>>(c, "currents_A");
        cell.negative_ratio_error = get<bool>(c, "negative_ratio_error");
        cell.error = get<std::string>(c, "error");
        ac.cells.push_back(std::move(cell));
    }
    for (const auto& l : get<json>(j, "linearity")) {
        ac.linearity.push_back({get<double>(l, "frequency_Hz"), fit_from(get<json>(l, "fit"))});
    }
    for (const auto& f : get<json>(j, "frequency_response")) {
        ac.frequency_response.push_back(
            {get<double>(f, "amplitude_A"), fit_from(get<json>(f, "fit"))});
    }
    if (j.contains("spectrum")) {
        const auto& s = j.at("spectrum");
        ac.spectrum = Spectrum{get<double>(s, "drive_frequency_Hz"),
                               get<double>(s, "drive_amplitude_A"),
                               get<std::vector<double>>(s, "frequencies_Hz"),
                               get<std::vector<double>>(s, "flux_T"),
                               get<std::vector<double>>(s, "current_A")};
    }
    return ac;
}

json dc_json(const DcCampaign& dc) {
    return {{"current_A", dc.current},
            {"protocol", protocol_json(dc.protocol)},
            {"conversion_T_per_A", dc.conversion},
            {"step_T", dc.step},
            {"step_se_T", dc.step_se},
            {"off_mean_T", dc.off_mean},
            {"current_difference_A", dc.current_difference},
            {"current_difference_se_A", dc.current_difference_se},
            {"ratio_error_A_per_A", dc.ratio_error},
            {"ratio_error_se_A_per_A", dc.ratio_error_se},
            {"per_cycle_T", dc.per_cycle}};
}

DcCampaign dc_from(const json& j) {
    DcCampaign dc;
    dc.current = get<double>(j, "current_A");
    dc.protocol = protocol_from(get<json>(j, "protocol"));
    dc.conversion = get<double>(j, "conversion_T_per_A");
    dc.step = get<double>(j, "step_T");
    dc.step_se = get<double>(j, "step_se_T");
    dc.off_mean = get<double>(j, "off_mean_T");
    dc.current_difference = get<double>(j, "current_difference_A");
    dc.current_difference_se = get<double>(j, "current_difference_se_A");
    dc.ratio_error = get<double>(j, "ratio_error_A_per_A");
    dc.ratio_error_se = get<double>(j, "ratio_error_se_A_per_A");
    dc.per_cycle = get<std::vector<double>>(j, "per_cycle_T");
    return dc;
}

dsp::NoiseRegime regime_from(const std::string& s) {
    if (s == "white") {
        return dsp::NoiseRegime::white;
    }
    if (s == "flicker") {
        return dsp::NoiseRegime::flicker;
    }
    if (s == "random-walk") {
        return dsp::NoiseRegime::random_walk;
    }
    throw DataError("report: unknown noise regime '" + s + "'");
}

json allan_json(const AllanCampaign& a) {
    json slopes = json::array();
    for (const auto& s : a.slopes) {
        slopes.push_back({{"tau_lo_s", s.tau_lo},
                          {"tau_hi_s", s.tau_hi},
                          {"slope", s.slope},
                          {"points", s.points},
                          {"regime", dsp::to_string(s.regime)}});
    }
    return {{"drive", a.drive},
            {"frequency_Hz", a.frequency},
            {"amplitude_A", a.amplitude},
            {"total_duration_s", a.total_duration},
            {"time_compression", a.time_compression},
            {"sequence_period_s", a.sequence_period},
            {"conversion_T_per_A", a.conversion},
            {"curve",
             {{"taus_s", a.curve.taus},
              {"sigmas_T", a.curve.sigmas},
              {"averaging_factors", a.curve.averaging_factors},
              {"pair_counts", a.curve.pair_counts},
              {"omitted_taus_s", a.curve.omitted_taus}}},
            {"sigma_current_A", a.sigma_current},
            {"min_tau_s", a.min_tau},
            {"min_sigma_T", a.min_sigma},
            {"min_sigma_current_A", a.min_sigma_current},
            {"slopes", slopes}};
}

AllanCampaign allan_from(const json& j) {
    AllanCampaign a;
    a.drive = get<std::string>(j, "drive");
    a.frequency = get<double>(j, "frequency_Hz");
    a.amplitude = get<double>(j, "amplitude_A");
    a.total_duration = get<double>(j, "total_duration_s");
    a.time_compression = get<double>(j, "time_compression");
    a.sequence_period = get<double>(j, "sequence_period_s");
    a.conversion = get<double>(j, "conversion_T_per_A");
    const auto& c = get<json>(j, "curve");
    a.curve.taus = get<std::vector<double>>(c, "taus_s");
    a.curve.sigmas = get<std::vector<double>>(c, "sigmas_T");
    a.curve.averaging_factors = get<std::vector<std::size_t>>(c, "averaging_factors");
    a.curve.pair_counts = get<std::vector<std::size_t>>(c, "pair_counts");
    a.curve.omitted_taus = get<std::vector<double>>(c, "omitted_taus_s");
    a.sigma_current = get<std::vector<double>>(j, "sigma_current_A");
    a.min_tau = get<double>(j, "min_tau_s");
    a.min_sigma = get<double>(j, "min_sigma_T");
    a.min_sigma_current = get<double>(j, "min_sigma_current_A");
    for (const auto& s : get<json>(j, "slopes")) {
        a.slopes.push_back({get<double>(s, "tau_lo_s"), get<double>(s, "tau_hi_s"),
                            get<double>(s, "slope"), get<std::size_t>(s, "points"),
                            regime_from(get<std::string>(s, "regime"))});
    }
    return a;
}

json fit_report_json(const FitReport& f) {
    json xs = json::array();
    json ys = json::array();
    for (const auto& p : f.points) {
        xs.push_back(p.x);
        ys.push_back(p.y);
    }
    const auto& units = f.model == "line" ? line_units : ratio_units;
    return {{"model", f.model},
            {"x_unit", f.x_unit},
            {"y_unit", f.y_unit},
            {"x", xs},
            {"y", ys},
            {"fit", fit_json(f.fit, units, f.y_unit)}};
}

FitReport fit_report_from(const json& j) {
    FitReport f;
    f.model = get<std::string>(j, "model");
    f.x_unit = get<std::string>(j, "x_unit");
    f.y_unit = get<std::string>(j, "y_unit");
    const auto xs = get<std::vector<double>>(j, "x");
    const auto ys = get<std::vector<double>>(j, "y");
    if (xs.size() != ys.size()) {
        throw DataError("report: fit x and y lengths differ");
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        f.points.push_back({xs[i], ys[i]});
    }
    f.fit = fit_from(get<json>(j, "fit"));
    return f;
}

} // namespace

std::string report_to_json(const CampaignReport& r, int indent) {
    json j;
    j["kind"] = r.kind;
    j["provenance"] = {{"seed", r.provenance.seed},
                       {"timestamp_utc", r.provenance.timestamp},
                       {"software_version", r.provenance.software_version}};
    j["config"] = config_json(r.config);
    if (r.ac) {
        j["ac"] = ac_json(*r.ac);
    }
    if (r.dc) {
        j["dc"] = dc_json(*r.dc);
    }
    if (r.allan) {
        j["allan"] = allan_json(*r.allan);
    }
    if (r.fit) {
        j["fit"] = fit_report_json(*r.fit);
    }
    j["warnings"] = r.warnings;
    return j.dump(indent);
}

CampaignReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("report: ") + e.what());
    }
    try {
        CampaignReport r;
        r.kind = get<std::string>(j, "kind");
        const auto& p = get<json>(j, "provenance");
        r.provenance = {get<std::uint64_t>(p, "seed"), get<std::string>(p, "timestamp_utc"),
                        get<std::string>(p, "software_version")};
        r.config = config_from(get<json>(j, "config"));
        if (j.contains("ac")) {
            r.ac = ac_from(j.at("ac"));
        }
        if (j.contains("dc")) {
            r.dc = dc_from(j.at("dc"));
        }
        if (j.contains("allan")) {
            r.allan = allan_from(j.at("allan"));
        }
        if (j.contains("fit")) {
            r.fit = fit_report_from(j.at("fit"));
        }
        r.warnings = get<std::vector<std::string>>(j, "warnings");
        return r;
    } catch (const json::exception& e) {
        throw DataError(std::string("report: ") + e.what());
    }
}

void write_report(const CampaignReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out << report_to_json(report) << '\n';
    if (!out) {
        throw IoError("write failed for '" + path + "'");
    }
}

CampaignReport read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return report_from_json(ss.str());
}

} // namespace nvc::io
