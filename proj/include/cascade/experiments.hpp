#pragma once

#include <string>
#include <vector>

#include "cascade/integrator.hpp"
#include "cascade/metrics.hpp"
#include "cascade/model.hpp"

// Figure-reproduction harness: parameter sweeps and canonical runs. Sweeps
// are embarrassingly parallel across grid points; run_sweep dispatches to an
// OpenMP kernel, run_sweep_serial is the reference implementation kept for
// testing and benchmarking. Both produce identical tables: each grid point
// owns an independent integration and results are stored by grid index.

namespace cascade {

enum class SweepParameter { Coupling, QFactor, TFinal };

std::string sweep_parameter_name(SweepParameter p);
std::optional<SweepParameter> sweep_parameter_from_name(const std::string& name);

struct SweepSpec {
    ProtocolKind protocol = ProtocolKind::Write;
    SweepParameter parameter = SweepParameter::Coupling;
    double min = 0.0;
    double max = 0.5;
    int points = 201;
    bool log_scale = false;
    SystemParams base;
    std::optional<PulseParams> pulse;
    IntegratorConfig integrator;
};

std::vector<std::string> validate(const SweepSpec& spec);

struct SweepResult {
    SweepSpec spec;
    std::vector<double> parameter_values;
    std::vector<double> eta;
    std::size_t argmax_index = 0;

    double argmax_parameter() const { return parameter_values[argmax_index]; }
    double max_eta() const { return eta[argmax_index]; }
};

// threads <= 0: use all available; threads == 1: serial path.
SweepResult run_sweep(const SweepSpec& spec, int threads = 0);
SweepResult run_sweep_serial(const SweepSpec& spec);

// Saturation diagnostics for a rising curve (q_factor sweeps): the value at
// the top of the grid and the smallest parameter whose efficiency is within
// `tolerance` of it.
struct SaturationInfo {
    double saturation_eta = 0.0;
    double knee_parameter = 0.0;
};
SaturationInfo saturation_info(const SweepResult& result,
                               double tolerance = 0.004);

// Convenience wrappers matching the figure axes.
SweepResult sweep_coupling(const SweepSpec& spec, int threads = 0);
SweepResult sweep_qfactor(const SweepSpec& spec, int threads = 0);

// Dense occupation trace of one protocol run. t_final == 0 yields a
// single-sample trajectory equal to the initial condition.
Trajectory occupation_trace(ProtocolKind kind, const SystemParams& params,
                            const std::optional<PulseParams>& pulse,
                            const IntegratorConfig& cfg);

// Simulated vs estimated efficiency under channel and intrinsic losses. The
// estimate is eta_lossless * eta_tr * exp(-t_f/2T1,cav1) * exp(-t_f/2T1,cav2).
struct LossStudyRow {
    double eta_tr = 1.0;
    double t1_cav1_inv = 0.0;
    double t1_cav2_inv = 0.0;
    double eta_simulated = 0.0;
    double eta_estimate = 0.0;
    double ratio = 1.0;
};

struct LossCase {
    double eta_tr = 1.0;
    double t1_cav1_inv = 0.0;
    double t1_cav2_inv = 0.0;
};

std::vector<LossStudyRow> loss_study(ProtocolKind kind,
                                     const SystemParams& base,
                                     const std::optional<PulseParams>& pulse,
                                     const std::vector<LossCase>& cases,
                                     const IntegratorConfig& cfg);

// Applies the derived quantities for one sweep grid point: coupling is set
// directly, q_factor fixes gamma = omega_m/Q, t_final rescales t_mid and the
// pulse centers proportionally (pulse width unchanged).
void apply_sweep_point(const SweepSpec& spec, double value, SystemParams& p,
                       std::optional<PulseParams>& pulse);

}  // namespace cascade
