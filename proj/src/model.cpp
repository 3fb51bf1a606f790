#include "cascade/model.hpp"

#include <cmath>
#include <sstream>

namespace cascade {

std::string protocol_name(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::Write: return "write";
        case ProtocolKind::Read: return "read";
        case ProtocolKind::Memory: return "memory";
    }
    return "unknown";
}

std::optional<ProtocolKind> protocol_from_name(const std::string& name) {
    if (name == "write") return ProtocolKind::Write;
    if (name == "read") return ProtocolKind::Read;
    if (name == "memory") return ProtocolKind::Memory;
    return std::nullopt;
}

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& issue : issues) os << "\n  - " << issue;
    return os.str();
}

void check_nonneg(std::vector<std::string>& issues, const char* name, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        issues.push_back(std::string(name) + " must be a finite rate >= 0, got " +
                         std::to_string(v));
    }
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::vector<std::string> validate(const SystemParams& p) {
    std::vector<std::string> issues;
    check_nonneg(issues, "kappa1_max", p.kappa1_max);
    check_nonneg(issues, "kappa2_max", p.kappa2_max);
    check_nonneg(issues, "gamma", p.gamma);
    check_nonneg(issues, "omega_m", p.omega_m);
    check_nonneg(issues, "coupling", p.coupling);
    check_nonneg(issues, "t1_cav1_inv", p.t1_cav1_inv);
    check_nonneg(issues, "t1_cav2_inv", p.t1_cav2_inv);
    if (!(p.eta_tr >= 0.0 && p.eta_tr <= 1.0)) {
        issues.push_back("eta_tr out of [0,1], got " + std::to_string(p.eta_tr));
    }
    if (!(p.t_final > 0.0) || !std::isfinite(p.t_final)) {
        issues.push_back("t_final must be > 0, got " + std::to_string(p.t_final));
    }
    if (!(p.t_mid > 0.0)) {
        issues.push_back("t_mid must be > 0, got " + std::to_string(p.t_mid));
    }
    if (!(p.t_mid < p.t_final)) {
        issues.push_back("t_mid must precede t_final (t_mid=" +
                         std::to_string(p.t_mid) + ", t_final=" +
                         std::to_string(p.t_final) + ")");
    }
    if (p.gamma > 0.0 && !std::isfinite(p.omega_m / p.gamma)) {
        issues.push_back("Q_m = omega_m/gamma is not finite");
    }
    return issues;
}

std::vector<std::string> validate(const PulseParams& pulse, double t_final) {
    std::vector<std::string> issues;
    if (!(pulse.g0 >= 0.0) || !std::isfinite(pulse.g0)) {
        issues.push_back("g0 must be a finite rate >= 0, got " +
                         std::to_string(pulse.g0));
    }
    if (!(pulse.sigma > 0.0)) {
        issues.push_back("sigma must be > 0, got " + std::to_string(pulse.sigma));
    }
    if (!(pulse.t1 < pulse.t2)) {
        issues.push_back("pulse centers must satisfy t1 < t2 (t1=" +
                         std::to_string(pulse.t1) + ", t2=" +
                         std::to_string(pulse.t2) + ")");
    }
    if (!(pulse.t1 >= 0.0 && pulse.t1 <= t_final)) {
        issues.push_back("t1 outside [0, t_final]");
    }
    if (!(pulse.t2 >= 0.0 && pulse.t2 <= t_final)) {
        issues.push_back("t2 outside [0, t_final]");
    }
    return issues;
}

SystemParams validated(const SystemParams& params) {
    auto issues = validate(params);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return params;
}

PulseParams validated(const PulseParams& pulse, double t_final) {
    auto issues = validate(pulse, t_final);
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return pulse;
}

std::vector<std::string> validate(const IntegratorConfig& cfg) {
    std::vector<std::string> issues;
    if (!(cfg.rel_tol > 0.0 && cfg.rel_tol <= 1e-3)) {
        issues.push_back("rel_tol must be in (0, 1e-3], got " +
                         std::to_string(cfg.rel_tol));
    }
    if (!(cfg.abs_tol > 0.0 && cfg.abs_tol <= 1e-3)) {
        issues.push_back("abs_tol must be in (0, 1e-3], got " +
                         std::to_string(cfg.abs_tol));
    }
    if (cfg.max_step < 0.0 || !std::isfinite(cfg.max_step)) {
        issues.push_back("max_step must be >= 0 and finite");
    }
    if (cfg.dense_samples < 2) {
        issues.push_back("dense_samples must be >= 2, got " +
                         std::to_string(cfg.dense_samples));
    }
    return issues;
}

namespace {

const char* kLabRateKeys[] = {"kappa1_max", "kappa2_max", "gamma",   "omega_m",
                              "coupling",   "t1_cav1_inv", "t1_cav2_inv"};

double* rate_field(SystemParams& p, const std::string& key) {
    if (key == "kappa1_max") return &p.kappa1_max;
    if (key == "kappa2_max") return &p.kappa2_max;
    if (key == "gamma") return &p.gamma;
    if (key == "omega_m") return &p.omega_m;
    if (key == "coupling") return &p.coupling;
    if (key == "t1_cav1_inv") return &p.t1_cav1_inv;
    if (key == "t1_cav2_inv") return &p.t1_cav2_inv;
    return nullptr;
}

}  // namespace

SystemParams from_lab_units(const std::map<std::string, double>& freqs,
                            double kappa_ref) {
    std::vector<std::string> issues;
    if (!(kappa_ref > 0.0) || !std::isfinite(kappa_ref)) {
        issues.push_back("reference kappa_m must be positive, got " +
                         std::to_string(kappa_ref));
    }
    SystemParams params;
    for (const auto& [key, value] : freqs) {
        double* field = rate_field(params, key);
        if (field == nullptr) {
            issues.push_back("unknown laboratory frequency key '" + key + "'");
            continue;
        }
        if (!(value > 0.0) || !std::isfinite(value)) {
            issues.push_back(key + " must be a positive frequency, got " +
                             std::to_string(value));
            continue;
        }
        if (!issues.empty()) continue;
        *field = value / kappa_ref;
    }
    if (!issues.empty()) throw ValidationError(std::move(issues));
    return params;
}

std::map<std::string, double> to_lab_units(const SystemParams& params,
                                           double kappa_ref) {
    if (!(kappa_ref > 0.0) || !std::isfinite(kappa_ref)) {
        throw ValidationError({"reference kappa_m must be positive, got " +
                               std::to_string(kappa_ref)});
    }
    SystemParams p = params;
    std::map<std::string, double> out;
    for (const char* key : kLabRateKeys) {
        out[key] = *rate_field(p, key) * kappa_ref;
    }
    return out;
}

ModeState initial_state(ProtocolKind kind) {
    ModeState s;
    if (kind == ProtocolKind::Read) {
        s.beta = 1.0;
    } else {
        s.alpha1 = 1.0;
    }
    return s;
}

double Trajectory::energy_balance_residual() const {
    const auto& first = samples.front();
    const auto& last = samples.back();
    return first.state.total_occupation() -
           (last.state.total_occupation() + last.leaked_cum + last.mech_loss_cum);
}

}  // namespace cascade
