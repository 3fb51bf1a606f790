#pragma once

#include <functional>

#include "cascade/model.hpp"
#include "cascade/schedules.hpp"

// Efficiency and fidelity functionals over trajectories, plus the closed-form
// quadrature for the two-cavity subproblem used as an independent oracle
// against direct ODE integration.

namespace cascade {

struct EfficiencyReport {
    double eta = 0.0;
    ProtocolKind protocol = ProtocolKind::Write;
    double n1_final = 0.0;
    double nb_final = 0.0;
    double n2_final = 0.0;
    double leaked_total = 0.0;
    double mech_loss_total = 0.0;
    double balance_residual = 0.0;  // meaningful for lossless-channel runs
    bool lossless = true;
};

// eta_w = |beta(t_f)|^2 / |alpha1(0)|^2
EfficiencyReport write_efficiency(const Trajectory& traj);
// eta_r = |alpha1(t_f)|^2 / |beta(0)|^2
EfficiencyReport read_efficiency(const Trajectory& traj);
// eta_mem = |alpha2(t_f)|^2 / |alpha1(0)|^2 (recaptured state before release)
EfficiencyReport memory_efficiency(const Trajectory& traj);

EfficiencyReport efficiency(const Trajectory& traj);

// Transfer efficiency of the first half of the two-cavity subproblem:
// sqrt(eta1) = sqrt(k2m) Int_0^t dt' sqrt(k1(t')) e^{-k2m (t-t')/2}
//              e^{-1/2 Int_0^t' k1}.
// The inner integral is evaluated analytically for the rising write profile
// and numerically for any other schedule.
double two_cavity_efficiency_quadrature(const Schedule& k1_profile, double k2m,
                                        double t);

// Process fidelity of a single-excitation transfer with efficiency eta and
// propagation phase phi. Uses the normalized form
// (1 + eta + 2 sqrt(eta) cos(phi)) / 4, which is bounded by 1; the variant
// with the outer square exceeds 1 at eta = 1 and is not used.
double process_fidelity(double eta, double phi = 0.0);

// gamma = 0 truncation-loss estimate for the transfer inefficiency,
// 1 - eta ~ exp(-k_m t_f / 2). Order-of-magnitude only: exact for the bare
// two-cavity protocol, a lower bound once the mechanical leg is included.
double inefficiency_estimate(double t_final, double k_m = 1.0);

namespace detail {
// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double integrate_simpson(const std::function<double(double)>& f, double a,
                         double b, double tol);
}  // namespace detail

}  // namespace cascade
