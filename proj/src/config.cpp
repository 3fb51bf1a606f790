#include "cascade/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace cascade {

namespace {

struct Entry {
    std::string value;
    int line = -1;
    bool consumed = false;
};

using Section = std::map<std::string, Entry>;
using RawConfig = std::map<std::string, Section>;

const char* const kSections[] = {"run",       "params", "pulse",
                                 "integrator", "sweep",  "output"};

// key -> section, for resolving bare --param overrides.
const std::pair<const char*, const char*> kKeyTable[] = {
    {"protocol", "run"},       {"threads", "run"},
    {"kappa1_max", "params"},  {"kappa2_max", "params"},
    {"gamma", "params"},       {"omega_m", "params"},
    {"coupling", "params"},    {"eta_tr", "params"},
    {"t1_cav1_inv", "params"}, {"t1_cav2_inv", "params"},
    {"t_final", "params"},     {"t_mid", "params"},
    {"g0", "pulse"},           {"sigma", "pulse"},
    {"t1", "pulse"},           {"t2", "pulse"},
    {"rel_tol", "integrator"}, {"abs_tol", "integrator"},
    {"max_step", "integrator"},{"dense_samples", "integrator"},
    {"parameter", "sweep"},    {"min", "sweep"},
    {"max", "sweep"},          {"points", "sweep"},
    {"scale", "sweep"},        {"dir", "output"},
};

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool known_section(const std::string& name) {
    return std::find_if(std::begin(kSections), std::end(kSections),
                        [&](const char* s) { return name == s; }) !=
           std::end(kSections);
}

const char* section_for_key(const std::string& key) {
    for (const auto& [k, section] : kKeyTable) {
        if (key == k) return section;
    }
    return nullptr;
}

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream stream(text);
    std::string line;
    std::string current_section;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty() || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("malformed section header '" + line + "'",
                                  lineno);
            }
            current_section = trim(line.substr(1, line.size() - 2));
            if (!known_section(current_section)) {
                throw ConfigError("unknown section [" + current_section + "]",
                                  lineno);
            }
            raw[current_section];  // empty sections are fine
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'key = value', got '" + line + "'",
                              lineno);
        }
        if (current_section.empty()) {
            throw ConfigError("key outside of any [section]", lineno);
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("empty key or value", lineno);
        }
        const char* expected_section = section_for_key(key);
        if (expected_section == nullptr ||
            expected_section != current_section) {
            throw ConfigError("unknown key '" + key + "' in section [" +
                                  current_section + "]",
                              lineno);
        }
        auto [it, inserted] = raw[current_section].emplace(key,
                                                           Entry{value, lineno});
        if (!inserted) {
            throw ConfigError("duplicate key '" + key + "' (first on line " +
                                  std::to_string(it->second.line) + ")",
                              lineno);
        }
    }
    return raw;
}

void apply_overrides(RawConfig& raw, const std::vector<std::string>& overrides) {
    for (const std::string& item : overrides) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= item.size()) {
            throw ConfigError("override must be key=value, got '" + item + "'");
        }
        std::string key = trim(item.substr(0, eq));
        std::string value = trim(item.substr(eq + 1));
        const char* section = section_for_key(key);
        if (section == nullptr) {
            throw ConfigError("unknown override key '" + key + "'");
        }
        raw[section][key] = Entry{value, -1};
    }
}

class Assembler {
public:
    explicit Assembler(RawConfig raw) : raw_(std::move(raw)) {}

    std::optional<std::string> take(const char* section, const char* key) {
        auto sec = raw_.find(section);
        if (sec == raw_.end()) return std::nullopt;
        auto it = sec->second.find(key);
        if (it == sec->second.end()) return std::nullopt;
        it->second.consumed = true;
        last_line_ = it->second.line;
        return it->second.value;
    }

    double take_double(const char* section, const char* key, double fallback) {
        auto v = take(section, key);
        if (!v) return fallback;
        return parse_double(*v);
    }

    std::optional<double> take_double_opt(const char* section, const char* key) {
        auto v = take(section, key);
        if (!v) return std::nullopt;
        return parse_double(*v);
    }

    int take_int(const char* section, const char* key, int fallback) {
        auto v = take(section, key);
        if (!v) return fallback;
        std::size_t pos = 0;
        long n = 0;
        try {
            n = std::stol(*v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v->size()) {
            throw ConfigError("expected an integer for '" + std::string(key) +
                                  "', got '" + *v + "'",
                              last_line_);
        }
        return static_cast<int>(n);
    }

    bool has_section(const char* section) const {
        return raw_.count(section) > 0;
    }

    int last_line() const { return last_line_; }

private:
    double parse_double(const std::string& v) {
        std::size_t pos = 0;
        double x = 0.0;
        try {
            x = std::stod(v, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != v.size()) {
            throw ConfigError("expected a number, got '" + v + "'", last_line_);
        }
        return x;
    }

    RawConfig raw_;
    int last_line_ = -1;
};

}  // namespace

RunConfig parse_config(const std::string& text,
                       std::optional<ProtocolKind> forced_protocol,
                       const std::vector<std::string>& overrides) {
    RawConfig raw = parse_raw(text);
    apply_overrides(raw, overrides);
    Assembler a(std::move(raw));
    std::vector<std::string> missing;

    RunConfig cfg;

    // Protocol: subcommand wins unless the document disagrees.
    auto protocol_key = a.take("run", "protocol");
    if (protocol_key) {
        auto parsed = protocol_from_name(*protocol_key);
        if (!parsed) {
            throw ConfigError("unknown protocol '" + *protocol_key + "'",
                              a.last_line());
        }
        if (forced_protocol && *forced_protocol != *parsed) {
            throw ConfigError("config protocol '" + *protocol_key +
                                  "' conflicts with the requested subcommand '" +
                                  protocol_name(*forced_protocol) + "'",
                              a.last_line());
        }
        cfg.protocol = *parsed;
    } else if (forced_protocol) {
        cfg.protocol = *forced_protocol;
    } else {
        missing.push_back("run.protocol");
    }

    cfg.threads = a.take_int("run", "threads", 0);
    if (cfg.threads < 0) {
        throw ConfigError("threads must be >= 0", a.last_line());
    }

    const bool memory = cfg.protocol == ProtocolKind::Memory;

    // Parameter defaults depend on the protocol: write/read use the
    // 25/kappa_m figure run, memory the 100/kappa_m pulsed run.
    SystemParams& p = cfg.params;
    p.kappa1_max = a.take_double("params", "kappa1_max", 1.0);
    p.kappa2_max = a.take_double("params", "kappa2_max", 1.0);
    p.gamma = a.take_double("params", "gamma", 140.0 / 215000.0);
    p.omega_m = a.take_double("params", "omega_m", 947.0 / 215.0);
    p.coupling = a.take_double("params", "coupling", 0.12);
    p.eta_tr = a.take_double("params", "eta_tr", 1.0);
    p.t1_cav1_inv = a.take_double("params", "t1_cav1_inv", 0.0);
    p.t1_cav2_inv = a.take_double("params", "t1_cav2_inv", 0.0);
    p.t_final = a.take_double("params", "t_final", memory ? 100.0 : 25.0);
    p.t_mid = a.take_double("params", "t_mid",
                            memory ? p.t_final / 8.0 : p.t_final / 2.0);

    if (a.has_section("pulse") && !memory) {
        throw ConfigError("[pulse] section is only valid for the memory protocol");
    }
    if (memory) {
        PulseParams pulse;
        pulse.g0 = a.take_double("pulse", "g0", 0.32);
        pulse.sigma = a.take_double("pulse", "sigma", std::sqrt(5.0));
        pulse.t1 = a.take_double("pulse", "t1", 2.0 * p.t_mid);
        pulse.t2 = a.take_double("pulse", "t2", 5.0 * p.t_mid);
        cfg.pulse = pulse;
    }

    cfg.integrator.rel_tol = a.take_double("integrator", "rel_tol", 1e-10);
    cfg.integrator.abs_tol = a.take_double("integrator", "abs_tol", 1e-10);
    cfg.integrator.max_step = a.take_double("integrator", "max_step", 0.0);
    cfg.integrator.dense_samples = a.take_int("integrator", "dense_samples", 2001);

    if (a.has_section("sweep")) {
        SweepSpec sweep;
        sweep.protocol = cfg.protocol;
        sweep.base = cfg.params;
        sweep.pulse = cfg.pulse;
        sweep.integrator = cfg.integrator;

        auto parameter = a.take("sweep", "parameter");
        auto min = a.take_double_opt("sweep", "min");
        auto max = a.take_double_opt("sweep", "max");
        auto points = a.take("sweep", "points");
        if (!parameter) missing.push_back("sweep.parameter");
        if (!min) missing.push_back("sweep.min");
        if (!max) missing.push_back("sweep.max");
        if (!points) missing.push_back("sweep.points");
        if (parameter) {
            auto parsed = sweep_parameter_from_name(*parameter);
            if (!parsed) {
                throw ConfigError(
                    "unknown sweep parameter '" + *parameter +
                    "' (expected coupling, q_factor, or t_final)");
            }
            sweep.parameter = *parsed;
        }
        if (min) sweep.min = *min;
        if (max) sweep.max = *max;
        if (points) {
            std::size_t pos = 0;
            long n = 0;
            try {
                n = std::stol(*points, &pos);
            } catch (const std::exception&) {
                pos = 0;
            }
            if (pos != points->size()) {
                throw ConfigError("expected an integer for 'points', got '" +
                                  *points + "'");
            }
            sweep.points = static_cast<int>(n);
        }
        std::string scale = a.take("sweep", "scale")
                                .value_or(sweep.parameter ==
                                                  SweepParameter::QFactor
                                              ? "log"
                                              : "linear");
        if (scale == "log") {
            sweep.log_scale = true;
        } else if (scale == "linear") {
            sweep.log_scale = false;
        } else {
            throw ConfigError("sweep scale must be 'linear' or 'log', got '" +
                              scale + "'");
        }
        cfg.sweep = sweep;
    }

    cfg.output_dir = a.take("output", "dir").value_or("out");

    if (!missing.empty()) {
        std::string msg = "missing required keys:";
        for (const auto& key : missing) msg += " " + key;
        throw ConfigError(msg);
    }

    // Collective invariant validation.
    std::vector<std::string> issues = validate(cfg.params);
    if (cfg.pulse) {
        auto pulse_issues = validate(*cfg.pulse, cfg.params.t_final);
        issues.insert(issues.end(), pulse_issues.begin(), pulse_issues.end());
    }
    auto icfg_issues = validate(cfg.integrator);
    issues.insert(issues.end(), icfg_issues.begin(), icfg_issues.end());
    if (cfg.sweep) {
        auto sweep_issues = validate(*cfg.sweep);
        issues.insert(issues.end(), sweep_issues.begin(), sweep_issues.end());
    }
    // validate(SweepSpec) re-checks the base params; drop the duplicates.
    std::sort(issues.begin(), issues.end());
    issues.erase(std::unique(issues.begin(), issues.end()), issues.end());
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return cfg;
}

RunConfig load_config_file(const std::string& path,
                           std::optional<ProtocolKind> forced_protocol,
                           const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), forced_protocol, overrides);
}

}  // namespace cascade
