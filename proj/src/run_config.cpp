#include "pcqc/run_config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pcqc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value,
                    const std::string& where) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return out;
    } catch (const std::exception&) {
        throw ConfigError(where + ": type mismatch for " + key +
                          " (expected number, got '" + value + "')");
    }
}

std::vector<double> parse_delta_list(const std::string& value,
                                     const std::string& where) {
    if (trim(value) == "auto") return {};
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double("deltas", trim(item), where));
    }
    if (out.size() < 4) {
        throw ConfigError(where + ": deltas needs 'auto' or >= 4 values");
    }
    return out;
}

void require_positive(double v, const std::string& key) {
    if (!(v > 0.0)) {
        throw ConfigError("config: range violation, " + key +
                          " must be positive (got " + std::to_string(v) + ")");
    }
}

void require_unit_interval(double v, const std::string& key) {
    if (v < 0.0 || v > 1.0) {
        throw ConfigError("config: range violation, " + key +
                          " must lie in [0, 1]");
    }
}

using Setter = std::function<void(RunConfig&, const std::string& value,
                                  const std::string& where)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"physical.lattice_a",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.physical.lattice_a = parse_double("physical.lattice_a", v, w);
         }},
        {"physical.wavelength",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.physical.wavelength = parse_double("physical.wavelength", v, w);
             c.physical.omega = 2.0 * kPi * kSpeedOfLight / c.physical.wavelength;
         }},
        {"physical.dipole_mu10",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.physical.dipole_mu10 = parse_double("physical.dipole_mu10", v, w);
         }},
        {"physical.v_a",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.physical.v_a = parse_double("physical.v_a", v, w);
         }},
        {"physical.v_b",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.physical.v_b = parse_double("physical.v_b", v, w);
         }},
        {"cavity.width_sigma",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.cavity.width_sigma = parse_double("cavity.width_sigma", v, w);
         }},
        {"cavity.center",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.cavity.center = parse_double("cavity.center", v, w);
         }},
        {"cavity.span",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.cavity.span = parse_double("cavity.span", v, w);
         }},
        {"cavity.profile_file",
         [](RunConfig& c, const std::string& v, const std::string&) {
             c.cavity_profile_file = trim(v);
         }},
        {"waveguide.lobe_period",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double("waveguide.lobe_period", v, w);
             c.waveguide1.lobe_period = d;
             c.waveguide2.lobe_period = d;
         }},
        {"waveguide.envelope_sigma",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             const double d = parse_double("waveguide.envelope_sigma", v, w);
             c.waveguide1.envelope_sigma = d;
             c.waveguide2.envelope_sigma = d;
         }},
        {"targets.g_b_area",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.g_b_target = parse_double("targets.g_b_area", v, w);
         }},
        {"targets.g_a_area",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.g_a_target = parse_double("targets.g_a_area", v, w);
         }},
        {"targets.zone_area",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.zone_area_target = parse_double("targets.zone_area", v, w);
         }},
        {"readout.deltas",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.deltas = parse_delta_list(v, w);
         }},
        {"readout.delta_range_factor",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.delta_range_factor =
                 parse_double("readout.delta_range_factor", v, w);
         }},
        {"shots.n_per_delta",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.shots_per_delta =
                 static_cast<int>(parse_double("shots.n_per_delta", v, w));
         }},
        {"shots.seed",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.seed = static_cast<std::uint64_t>(
                 parse_double("shots.seed", v, w));
         }},
        {"shots.detector_efficiency",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.detector_efficiency =
                 parse_double("shots.detector_efficiency", v, w);
         }},
        {"shots.zone_loss",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.zone_loss = parse_double("shots.zone_loss", v, w);
         }},
        {"input.theta",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.input_theta = parse_double("input.theta", v, w);
         }},
        {"input.phi",
         [](RunConfig& c, const std::string& v, const std::string& w) {
             c.input_phi = parse_double("input.phi", v, w);
         }},
        {"output.dir",
         [](RunConfig& c, const std::string& v, const std::string&) {
             c.output_dir = trim(v);
         }},
    };
    return table;
}

void validate(const RunConfig& cfg) {
    cfg.physical.validate();
    require_positive(cfg.cavity.width_sigma, "cavity.width_sigma");
    require_positive(cfg.cavity.span, "cavity.span");
    require_positive(cfg.waveguide1.lobe_period, "waveguide.lobe_period");
    require_positive(cfg.waveguide1.envelope_sigma, "waveguide.envelope_sigma");
    require_positive(cfg.g_b_target, "targets.g_b_area");
    require_positive(cfg.g_a_target, "targets.g_a_area");
    require_positive(cfg.zone_area_target, "targets.zone_area");
    require_positive(cfg.delta_range_factor, "readout.delta_range_factor");
    if (cfg.shots_per_delta < 1) {
        throw ConfigError("config: range violation, shots.n_per_delta must be >= 1");
    }
    require_unit_interval(cfg.detector_efficiency, "shots.detector_efficiency");
    require_unit_interval(cfg.zone_loss, "shots.zone_loss");
    if (cfg.input_theta < 0.0 || cfg.input_theta > kPi) {
        throw ConfigError("config: range violation, input.theta outside [0, pi]");
    }
    if (!cfg.cavity_profile_file.empty()) {
        std::ifstream probe(cfg.cavity_profile_file);
        if (!probe) {
            throw ConfigError("config: cavity.profile_file does not exist: " +
                              cfg.cavity_profile_file);
        }
    }
}

void apply_env_overrides(RunConfig& cfg) {
    for (const auto& [key, setter] : setters()) {
        std::string env_name = "PCQC_";
        for (char ch : key) {
            env_name += (ch == '.') ? '_' : static_cast<char>(std::toupper(ch));
        }
        if (const char* value = std::getenv(env_name.c_str())) {
            setter(cfg, value, "env " + env_name);
        }
    }
}

}  // namespace

RunConfig parse_config(const std::string& path) {
    RunConfig cfg;
    // Physical defaults carry no calibrated g0 at this layer.
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("config: cannot open " + path);
        }
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string where = path + ":" + std::to_string(lineno);
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[' && t.back() == ']') {
                section = trim(t.substr(1, t.size() - 2));
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError(where + ": expected key = value");
            }
            std::string key = trim(t.substr(0, eq));
            const std::string value = trim(t.substr(eq + 1));
            if (!section.empty() && key.find('.') == std::string::npos) {
                key = section + "." + key;
            }
            const auto it = setters().find(key);
            if (it == setters().end()) {
                cfg.warnings.push_back(where + ": unknown key '" + key +
                                       "' ignored");
                continue;
            }
            it->second(cfg, value, where);
        }
    }
    apply_env_overrides(cfg);
    validate(cfg);
    return cfg;
}

std::string config_text(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "physical.lattice_a=" << cfg.physical.lattice_a << '\n'
       << "physical.wavelength=" << cfg.physical.wavelength << '\n'
       << "physical.dipole_mu10=" << cfg.physical.dipole_mu10 << '\n'
       << "physical.v_a=" << cfg.physical.v_a << '\n'
       << "physical.v_b=" << cfg.physical.v_b << '\n'
       << "cavity.width_sigma=" << cfg.cavity.width_sigma << '\n'
       << "cavity.center=" << cfg.cavity.center << '\n'
       << "cavity.span=" << cfg.cavity.span << '\n'
       << "cavity.profile_file=" << cfg.cavity_profile_file << '\n'
       << "waveguide.lobe_period=" << cfg.waveguide1.lobe_period << '\n'
       << "waveguide.envelope_sigma=" << cfg.waveguide1.envelope_sigma << '\n'
       << "targets.g_b_area=" << cfg.g_b_target << '\n'
       << "targets.g_a_area=" << cfg.g_a_target << '\n'
       << "targets.zone_area=" << cfg.zone_area_target << '\n'
       << "readout.delta_range_factor=" << cfg.delta_range_factor << '\n'
       << "shots.n_per_delta=" << cfg.shots_per_delta << '\n'
       << "shots.seed=" << cfg.seed << '\n'
       << "shots.detector_efficiency=" << cfg.detector_efficiency << '\n'
       << "shots.zone_loss=" << cfg.zone_loss << '\n'
       << "input.theta=" << cfg.input_theta << '\n'
       << "input.phi=" << cfg.input_phi << '\n';
    os << "readout.deltas=";
    for (double d : cfg.deltas) os << d << ',';
    os << '\n';
    return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    // FNV-1a, stable across platforms.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char ch : config_text(cfg)) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    return h;
}

TeleportConfig build_teleport_config(const RunConfig& cfg) {
    TeleportConfig tc;
    tc.params = cfg.physical;
    tc.cavity_profile = cfg.cavity_profile_file.empty()
                            ? render_cavity(cfg.cavity)
                            : load_profile(cfg.cavity_profile_file);
    tc.b_entry = 0.0;
    tc.b_exit = 18.0;
    tc.t1 = (tc.b_exit - tc.b_entry) * tc.params.lattice_a / tc.params.v_b;
    tc.params.g0 = calibrate_g0(tc.cavity_profile, tc.params.lattice_a,
                                tc.params.v_b, cfg.g_b_target, tc.b_entry,
                                tc.b_exit);
    const double t2 = 13.0 * tc.params.lattice_a / tc.params.v_b;
    const double span_a = tc.params.v_a * t2 / tc.params.lattice_a;
    tc.a_entry = cfg.cavity.center - 0.5 * span_a;
    tc.detector_position = cfg.cavity.center + 0.5 * span_a;
    tc.trace_resolution = tc.params.lattice_a / 65.0 / tc.params.v_b;
    tc.validate();
    return tc;
}

ReadoutConfig build_readout_config(const RunConfig& cfg) {
    ReadoutConfig rc;
    rc.zone1 = render_waveguide(cfg.waveguide1);
    rc.zone2 = render_waveguide(cfg.waveguide2);
    rc.v = cfg.physical.v_b;
    rc.lattice_a = cfg.physical.lattice_a;
    rc.step = cfg.physical.lattice_a / 65.0 / cfg.physical.v_b;
    rc.peak_rabi = calibrate_g0(rc.zone1, rc.lattice_a, rc.v,
                                cfg.zone_area_target, rc.zone1.positions(0),
                                rc.zone1.positions(rc.zone1.positions.size() - 1));
    rc.validate();
    return rc;
}

std::vector<double> resolve_deltas(const RunConfig& cfg,
                                   const ReadoutConfig& readout) {
    if (!cfg.deltas.empty()) return cfg.deltas;
    const double range = cfg.delta_range_factor * average_rabi(readout);
    return choose_detunings(readout, 4, -range, range);
}

}  // namespace pcqc
