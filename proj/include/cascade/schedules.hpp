#pragma once

#include <utility>

#include "cascade/model.hpp"

// Closed-form time profiles for the cavity damping rates and the pulsed
// optomechanical coupling.
//
// Write protocol: kappa1 rises from nearly zero to kappa1_max over [0, t_mid]
// while kappa2 stays at its maximum; after t_mid the roles reverse and kappa2
// falls. The read protocol interchanges the two profiles. Outside its active
// half each profile is held constant at its maximum.

namespace cascade {

// kappa1_max / (2 e^{kappa2_max (t_mid - t)} - 1) for t <= t_mid, then
// kappa1_max. Continuous at t_mid.
double kappa1_write(double t, double t_mid, double k1_max, double k2_max);

// kappa2_max for t < t_mid, then kappa2_max / (2 e^{kappa1_max (t - t_mid)} - 1).
double kappa2_write(double t, double t_mid, double k1_max, double k2_max);

// Read profiles: the pair (kappa1, kappa2) with kappa2 rising like the write
// kappa1 (roles of the maxima swapped) and kappa1 constant then falling.
std::pair<double, double> kappa_read(double t, double t_mid, double k1_max,
                                     double k2_max);

// Analytic time derivative of the rising write-kappa1 profile, valid for
// t <= t_mid.
double kappa1_write_derivative(double t, double t_mid, double k1_max,
                               double k2_max);

// Residual of the Euler-Lagrange damping-rate equation
// kappa1^2 - d(kappa1)/dt + kappa2_max * kappa1 evaluated with the analytic
// derivative. Identically zero for the rising profile when k1_max == k2_max
// (the regime in which the profile was derived); nonzero otherwise.
double schedule_ode_residual(double t, double t_mid, double k1_max,
                             double k2_max);

// Two-Gaussian coupling pulse G0 [e^{-(t-t1)^2/2s^2} + e^{-(t-t2)^2/2s^2}].
double coupling_pulse(double t, const PulseParams& pulse);

enum class ScheduleKind {
    WriteKappa1,
    WriteKappa2,
    ReadKappa1,
    ReadKappa2,
    Constant,
    GaussianPair,
};

// A time-dependent rate profile with its parameter snapshot. The optional
// floor clamps the asymptotically tiny early-time rates; default off.
struct Schedule {
    ScheduleKind kind = ScheduleKind::Constant;
    double k1_max = 1.0;
    double k2_max = 1.0;
    double t_mid = 0.0;
    double value = 0.0;      // Constant profiles
    PulseParams pulse;       // GaussianPair profiles
    double floor = 0.0;

    double operator()(double t) const;

    static Schedule write_kappa1(double t_mid, double k1_max, double k2_max);
    static Schedule write_kappa2(double t_mid, double k1_max, double k2_max);
    static Schedule read_kappa1(double t_mid, double k1_max, double k2_max);
    static Schedule read_kappa2(double t_mid, double k1_max, double k2_max);
    static Schedule constant(double value);
    static Schedule gaussian_pair(const PulseParams& pulse);
};

}  // namespace cascade
