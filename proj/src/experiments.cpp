#include "cascade/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cascade/dynamics.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade {

std::string sweep_parameter_name(SweepParameter p) {
    switch (p) {
        case SweepParameter::Coupling: return "coupling";
        case SweepParameter::QFactor: return "q_factor";
        case SweepParameter::TFinal: return "t_final";
    }
    return "unknown";
}

std::optional<SweepParameter> sweep_parameter_from_name(
    const std::string& name) {
    if (name == "coupling") return SweepParameter::Coupling;
    if (name == "q_factor") return SweepParameter::QFactor;
    if (name == "t_final") return SweepParameter::TFinal;
    return std::nullopt;
}

std::vector<std::string> validate(const SweepSpec& spec) {
    std::vector<std::string> issues = validate(spec.base);
    if (spec.points < 2) {
        issues.push_back("sweep points must be >= 2, got " +
                         std::to_string(spec.points));
    }
    if (!(spec.min < spec.max)) {
        issues.push_back("sweep min must be < max");
    }
    if (spec.log_scale && !(spec.min > 0.0)) {
        issues.push_back("log-scale sweep requires min > 0");
    }
    if (spec.min < 0.0) {
        issues.push_back("sweep bounds must be >= 0");
    }
    if (spec.parameter != SweepParameter::TFinal &&
        spec.protocol == ProtocolKind::Memory) {
        issues.push_back("coupling/q_factor sweeps support write and read only");
    }
    if (spec.protocol == ProtocolKind::Memory && !spec.pulse) {
        issues.push_back("memory sweep requires pulse parameters");
    }
    return issues;
}

void apply_sweep_point(const SweepSpec& spec, double value, SystemParams& p,
                       std::optional<PulseParams>& pulse) {
    p = spec.base;
    pulse = spec.pulse;
    switch (spec.parameter) {
        case SweepParameter::Coupling:
            p.coupling = value;
            break;
        case SweepParameter::QFactor:
            p.gamma = p.omega_m / value;
            break;
        case SweepParameter::TFinal: {
            double scale = value / spec.base.t_final;
            p.t_final = value;
            p.t_mid = spec.base.t_mid * scale;
            if (pulse) {
                pulse->t1 = spec.pulse->t1 * scale;
                pulse->t2 = spec.pulse->t2 * scale;
            }
            break;
        }
    }
}

namespace {

std::vector<double> sweep_grid(const SweepSpec& spec) {
    std::vector<double> grid(spec.points);
    if (spec.log_scale) {
        double lmin = std::log(spec.min);
        double lmax = std::log(spec.max);
        for (int i = 0; i < spec.points; ++i) {
            grid[i] = std::exp(lmin + (lmax - lmin) * i / (spec.points - 1));
        }
    } else {
        for (int i = 0; i < spec.points; ++i) {
            grid[i] = spec.min + (spec.max - spec.min) * i / (spec.points - 1);
        }
    }
    return grid;
}

double eta_at_point(const SweepSpec& spec, double value) {
    SystemParams p;
    std::optional<PulseParams> pulse;
    apply_sweep_point(spec, value, p, pulse);
    Trajectory traj = integrate_protocol(spec.protocol, p, pulse,
                                         spec.integrator);
    return efficiency(traj).eta;
}

SweepResult assemble(const SweepSpec& spec, std::vector<double> grid,
                     std::vector<double> eta) {
    SweepResult result;
    result.spec = spec;
    result.parameter_values = std::move(grid);
    result.eta = std::move(eta);
    result.argmax_index = static_cast<std::size_t>(
        std::max_element(result.eta.begin(), result.eta.end()) -
        result.eta.begin());
    return result;
}

}  // namespace

SweepResult run_sweep_serial(const SweepSpec& spec) {
    auto issues = validate(spec);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    std::vector<double> grid = sweep_grid(spec);
    std::vector<double> eta(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        eta[i] = eta_at_point(spec, grid[i]);
    }
    return assemble(spec, std::move(grid), std::move(eta));
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
    if (threads == 1) return run_sweep_serial(spec);
    auto issues = validate(spec);
    if (!issues.empty()) throw ValidationError(std::move(issues));

    std::vector<double> grid = sweep_grid(spec);
    std::vector<double> eta(grid.size());
    const auto n = static_cast<long>(grid.size());

    // Each point integrates independently and writes only its own slot, so
    // the table is bit-identical for any thread count.
    std::exception_ptr failure = nullptr;
#ifdef _OPENMP
    int num_threads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(num_threads)
    for (long i = 0; i < n; ++i) {
        try {
            eta[i] = eta_at_point(spec, grid[i]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
#else
    for (long i = 0; i < n; ++i) {
        eta[i] = eta_at_point(spec, grid[i]);
    }
#endif
    if (failure) std::rethrow_exception(failure);
    return assemble(spec, std::move(grid), std::move(eta));
}

SweepResult sweep_coupling(const SweepSpec& spec, int threads) {
    SweepSpec s = spec;
    s.parameter = SweepParameter::Coupling;
    return run_sweep(s, threads);
}

SweepResult sweep_qfactor(const SweepSpec& spec, int threads) {
    SweepSpec s = spec;
    s.parameter = SweepParameter::QFactor;
    s.log_scale = true;
    return run_sweep(s, threads);
}

SaturationInfo saturation_info(const SweepResult& result, double tolerance) {
    SaturationInfo info;
    info.saturation_eta = result.eta.back();
    info.knee_parameter = result.parameter_values.back();
    for (std::size_t i = 0; i < result.eta.size(); ++i) {
        if (result.eta[i] >= info.saturation_eta - tolerance) {
            info.knee_parameter = result.parameter_values[i];
            break;
        }
    }
    return info;
}

Trajectory occupation_trace(ProtocolKind kind, const SystemParams& params,
                            const std::optional<PulseParams>& pulse,
                            const IntegratorConfig& cfg) {
    if (params.t_final == 0.0) {
        // Degenerate span: one sample holding the initial condition.
        Trajectory traj;
        traj.protocol = kind;
        traj.params = params;
        traj.pulse = (kind == ProtocolKind::Memory) ? pulse : std::nullopt;
        traj.integrator = cfg;
        TrajectorySample sample;
        sample.t = 0.0;
        sample.state = initial_state(kind);
        InstantRates r = rates_at(0.0, kind, params, traj.pulse);
        sample.kappa1 = r.kappa1;
        sample.kappa2 = r.kappa2;
        sample.g = r.g;
        traj.samples.push_back(sample);
        return traj;
    }
    return integrate_protocol(kind, params, pulse, cfg);
}

std::vector<LossStudyRow> loss_study(ProtocolKind kind,
                                     const SystemParams& base,
                                     const std::optional<PulseParams>& pulse,
                                     const std::vector<LossCase>& cases,
                                     const IntegratorConfig& cfg) {
    SystemParams lossless = base;
    lossless.eta_tr = 1.0;
    lossless.t1_cav1_inv = 0.0;
    lossless.t1_cav2_inv = 0.0;
    double eta0 =
        efficiency(integrate_protocol(kind, lossless, pulse, cfg)).eta;

    std::vector<LossStudyRow> rows;
    rows.reserve(cases.size());
    for (const LossCase& c : cases) {
        SystemParams p = lossless;
        p.eta_tr = c.eta_tr;
        p.t1_cav1_inv = c.t1_cav1_inv;
        p.t1_cav2_inv = c.t1_cav2_inv;
        LossStudyRow row;
        row.eta_tr = c.eta_tr;
        row.t1_cav1_inv = c.t1_cav1_inv;
        row.t1_cav2_inv = c.t1_cav2_inv;
        row.eta_simulated =
            efficiency(integrate_protocol(kind, p, pulse, cfg)).eta;
        row.eta_estimate = eta0 * c.eta_tr *
                           std::exp(-0.5 * p.t_final * c.t1_cav1_inv) *
                           std::exp(-0.5 * p.t_final * c.t1_cav2_inv);
        row.ratio = row.eta_simulated / row.eta_estimate;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cascade
