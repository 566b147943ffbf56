#include "nvc/io/config.hpp"

#include "nvc/error.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace nvc::io {

namespace {

using sim::ComparatorConfig;

struct Field {
    std::string path;
    bool mandatory;
    std::function<void(ComparatorConfig&, const YAML::Node&)> read;
    std::function<std::string(const ComparatorConfig&)> write;
};

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    // Keep YAML reading it back as a float, not an int.
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string where(const YAML::Node& node, const std::string& source) {
    const auto m = node.Mark();
    return source + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key, const std::string& source) {
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where(node, source) + ": " + key + ": expected a number");
    }
}

#define NVC_DOUBLE(PATH, MANDATORY, MEMBER)                                                  \
    Field {                                                                                   \
        PATH, MANDATORY,                                                                      \
            [](ComparatorConfig& c, const YAML::Node& n) { c.MEMBER = n.as<double>(); },      \
            [](const ComparatorConfig& c) { return num(c.MEMBER); }                           \
    }
#define NVC_INT(PATH, MANDATORY, MEMBER)                                                      \
    Field {                                                                                   \
        PATH, MANDATORY, [](ComparatorConfig& c, const YAML::Node& n) { c.MEMBER = n.as<int>(); }, \
            [](const ComparatorConfig& c) { return std::to_string(c.MEMBER); }                \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        NVC_DOUBLE("geometry.outer_diameter_m", true, geometry.outer_diameter),
        NVC_DOUBLE("geometry.inner_diameter_m", true, geometry.inner_diameter),
        NVC_DOUBLE("geometry.thickness_m", true, geometry.thickness),
        NVC_DOUBLE("geometry.gap_length_m", true, geometry.gap_length),
        NVC_DOUBLE("material.relative_permeability", true, material.relative_permeability),
        NVC_DOUBLE("material.eddy_corner_Hz", false, material.eddy_corner_frequency),
        NVC_DOUBLE("material.hysteresis_attenuation", false, material.hysteresis_attenuation),
        NVC_INT("windings.primary_turns", true, windings.primary_turns),
        NVC_INT("windings.secondary_turns", true, windings.secondary_turns),
        NVC_INT("windings.auxiliary_turns", false, windings.auxiliary_turns),
        NVC_DOUBLE("windings.auxiliary_current_A", false, auxiliary_current),
        NVC_DOUBLE("ratio_error.hysteresis", true, injected_ratio_error.hysteresis),
        NVC_DOUBLE("ratio_error.eddy_per_Hz", true, injected_ratio_error.eddy_per_hz),
        NVC_DOUBLE("ratio_error.dc", true, dc_ratio_error),
        NVC_DOUBLE("ratio_error.drift_ac_per_sqrt_s", false, ratio_drift.ac),
        NVC_DOUBLE("ratio_error.drift_dc_per_sqrt_s", false, ratio_drift.dc),
        NVC_DOUBLE("noise.white_T_per_sqrt_Hz", false, noise.white_asd),
        NVC_DOUBLE("noise.flicker_knee_Hz", false, noise.flicker_knee),
        NVC_DOUBLE("noise.random_walk_T_sqrt_Hz", false, noise.random_walk_asd),
        NVC_DOUBLE("sensor.zero_field_splitting_Hz", false, sensor.zero_field_splitting),
        NVC_DOUBLE("sensor.gyromagnetic_ratio_Hz_per_T", false, sensor.gyromagnetic_ratio),
        NVC_DOUBLE("sensor.contrast", false, sensor.contrast),
        NVC_DOUBLE("sensor.linewidth_Hz", false, sensor.linewidth_fwhm),
        NVC_DOUBLE("sensor.photon_rate_per_s", false, sensor.photon_rate),
        Field{"sensor.mode", false,
              [](ComparatorConfig& c, const YAML::Node& n) {
                  const auto v = n.as<std::string>();
                  if (v == "tracker") {
                      c.sensor_mode = sim::SensorMode::tracker;
                  } else if (v == "ideal") {
                      c.sensor_mode = sim::SensorMode::ideal;
                  } else {
                      throw YAML::TypedBadConversion<std::string>(n.Mark());
                  }
              },
              [](const ComparatorConfig& c) {
                  return std::string(c.sensor_mode == sim::SensorMode::ideal ? "ideal" : "tracker");
              }},
        NVC_DOUBLE("tracker.fm_deviation_Hz", false, tracker.fm_deviation),
        NVC_DOUBLE("tracker.multiplex_period_s", false, tracker.multiplex_period),
        NVC_DOUBLE("tracker.loop_gain", false, tracker.loop_gain),
        NVC_DOUBLE("tracker.loop_bandwidth_Hz", false, tracker.loop_bandwidth),
        NVC_DOUBLE("tracker.guard_field_T", false, tracker.guard_field),
        NVC_DOUBLE("readout_bandwidth_Hz", false, readout_bandwidth),
        NVC_DOUBLE("sample_rate_Hz", true, sample_rate),
        Field{"seed", true,
              [](ComparatorConfig& c, const YAML::Node& n) { c.seed = n.as<std::uint64_t>(); },
              [](const ComparatorConfig& c) { return std::to_string(c.seed); }},
    };
    return table;
}

#undef NVC_DOUBLE
#undef NVC_INT

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    for (std::string p; std::getline(ss, p, '.');) {
        parts.push_back(p);
    }
    return parts;
}

YAML::Node lookup(const YAML::Node& root, const std::string& path) {
    YAML::Node cur = root;
    for (const auto& part : split_path(path)) {
        if (!cur.IsMap()) {
            return YAML::Node(YAML::NodeType::Undefined);
        }
        const YAML::Node next = cur[part];
        if (!next) {
            return YAML::Node(YAML::NodeType::Undefined);
        }
        cur.reset(next); // plain assignment would overwrite the parent's value
    }
    return cur;
}

void collect_unknown(const YAML::Node& node, const std::string& prefix,
                     const std::set<std::string>& known, std::vector<std::string>& out,
                     const std::string& source) {
    for (const auto& kv : node) {
        const std::string key = kv.first.as<std::string>();
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (known.count(path)) {
            continue;
        }
        bool is_section = false;
        for (const auto& k : known) {
            if (k.rfind(path + ".", 0) == 0) {
                is_section = true;
                break;
            }
        }
        if (is_section && kv.second.IsMap()) {
            collect_unknown(kv.second, path, known, out, source);
        } else {
            out.push_back(where(kv.first, source) + ": unknown key '" + path + "' ignored");
        }
    }
}

std::vector<noise::LineSpur> read_spurs(const YAML::Node& node, const std::string& source) {
    if (!node.IsSequence()) {
        throw ConfigError(where(node, source) + ": noise.line_spurs: expected a list");
    }
    std::vector<noise::LineSpur> spurs;
    for (const auto& item : node) {
        if (!item.IsMap() || !item["frequency_Hz"] || !item["amplitude_T"]) {
            throw ConfigError(where(item, source) +
                              ": noise.line_spurs entries need frequency_Hz and amplitude_T");
        }
        spurs.push_back({scalar<double>(item["frequency_Hz"], "frequency_Hz", source),
                         scalar<double>(item["amplitude_T"], "amplitude_T", source)});
    }
    return spurs;
}

} // namespace

const std::vector<std::string>& mandatory_config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) {
            if (f.mandatory) {
                k.push_back(f.path);
            }
        }
        return k;
    }();
    return keys;
}

LoadedConfig parse_config(const std::string& text, const std::string& source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" +
                          std::to_string(e.mark.column + 1) + ": " + e.msg);
    }
    if (root.IsNull() || !root.IsDefined()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    if (!root.IsMap()) {
        throw ConfigError(where(root, source) + ": top level must be a mapping");
    }

    LoadedConfig out;
    out.config = sim::calibrated_defaults();
    std::vector<std::string> missing;
    std::set<std::string> known{"noise.line_spurs"};
    for (const auto& f : fields()) {
        known.insert(f.path);
        const YAML::Node node = lookup(root, f.path);
        if (!node.IsDefined() || node.IsNull()) {
            if (f.mandatory) {
                missing.push_back(f.path);
            }
            continue;
        }
        try {
            f.read(out.config, node);
        } catch (const YAML::Exception&) {
            throw ConfigError(where(node, source) + ": " + f.path + ": invalid value '" +
                              (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'");
        }
    }
    if (!missing.empty()) {
        std::string msg = source + ": missing mandatory keys:";
        for (const auto& k : missing) {
            msg += " " + k;
        }
        throw ConfigError(msg, missing);
    }
    const YAML::Node spurs = lookup(root, "noise.line_spurs");
    if (spurs.IsDefined() && !spurs.IsNull()) {
        out.config.noise.line_spurs = read_spurs(spurs, source);
    }
    collect_unknown(root, "", known, out.warnings, source);
    out.config.validate();
    return out;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const sim::ComparatorConfig& cfg) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields()) {
        const auto dot = f.path.find('.');
        const std::string sec = dot == std::string::npos ? "" : f.path.substr(0, dot);
        const std::string key = dot == std::string::npos ? f.path : f.path.substr(dot + 1);
        if (sec != section) {
            if (section == "noise") {
                os << "  line_spurs:";
                if (cfg.noise.line_spurs.empty()) {
                    os << " []";
                }
                os << "\n";
                for (const auto& s : cfg.noise.line_spurs) {
                    os << "    - {frequency_Hz: " << num(s.frequency)
                       << ", amplitude_T: " << num(s.amplitude) << "}\n";
                }
            }
            section = sec;
            if (!sec.empty()) {
                os << sec << ":\n";
            }
        }
        os << (sec.empty() ? "" : "  ") << key << ": " << f.write(cfg) << "\n";
    }
    return os.str();
}

} // namespace nvc::io
