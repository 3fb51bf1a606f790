#include "cascade/schedules.hpp"

#include <algorithm>
#include <cmath>

namespace cascade {

double kappa1_write(double t, double t_mid, double k1_max, double k2_max) {
    if (t > t_mid) return k1_max;
    // 2 e^x - 1 >= 1 for x >= 0, so the profile stays in (0, k1_max].
    return k1_max / (2.0 * std::exp(k2_max * (t_mid - t)) - 1.0);
}

double kappa2_write(double t, double t_mid, double k1_max, double k2_max) {
    if (t < t_mid) return k2_max;
    return k2_max / (2.0 * std::exp(k1_max * (t - t_mid)) - 1.0);
}

std::pair<double, double> kappa_read(double t, double t_mid, double k1_max,
                                     double k2_max) {
    // Interchanged write profiles: kappa2 rises while kappa1 holds, then
    // kappa1 falls. Each formula uses the other cavity's maximum in the
    // exponent, mirroring the write pair.
    double k2 = (t <= t_mid)
                    ? k2_max / (2.0 * std::exp(k1_max * (t_mid - t)) - 1.0)
                    : k2_max;
    double k1 = (t <= t_mid)
                    ? k1_max
                    : k1_max / (2.0 * std::exp(k2_max * (t - t_mid)) - 1.0);
    return {k1, k2};
}

double kappa1_write_derivative(double t, double t_mid, double k1_max,
                               double k2_max) {
    if (t > t_mid) return 0.0;
    double e = std::exp(k2_max * (t_mid - t));
    double denom = 2.0 * e - 1.0;
    return 2.0 * k1_max * k2_max * e / (denom * denom);
}

double schedule_ode_residual(double t, double t_mid, double k1_max,
                             double k2_max) {
    double k1 = kappa1_write(t, t_mid, k1_max, k2_max);
    double dk1 = kappa1_write_derivative(t, t_mid, k1_max, k2_max);
    return k1 * k1 - dk1 + k2_max * k1;
}

double coupling_pulse(double t, const PulseParams& pulse) {
    double u1 = (t - pulse.t1) / pulse.sigma;
    double u2 = (t - pulse.t2) / pulse.sigma;
    return pulse.g0 * (std::exp(-0.5 * u1 * u1) + std::exp(-0.5 * u2 * u2));
}

double Schedule::operator()(double t) const {
    double v = 0.0;
    switch (kind) {
        case ScheduleKind::WriteKappa1:
            v = kappa1_write(t, t_mid, k1_max, k2_max);
            break;
        case ScheduleKind::WriteKappa2:
            v = kappa2_write(t, t_mid, k1_max, k2_max);
            break;
        case ScheduleKind::ReadKappa1:
            v = kappa_read(t, t_mid, k1_max, k2_max).first;
            break;
        case ScheduleKind::ReadKappa2:
            v = kappa_read(t, t_mid, k1_max, k2_max).second;
            break;
        case ScheduleKind::Constant:
            v = value;
            break;
        case ScheduleKind::GaussianPair:
            v = coupling_pulse(t, pulse);
            break;
    }
    return std::max(v, floor);
}

Schedule Schedule::write_kappa1(double t_mid, double k1_max, double k2_max) {
    Schedule s;
    s.kind = ScheduleKind::WriteKappa1;
    s.t_mid = t_mid;
    s.k1_max = k1_max;
    s.k2_max = k2_max;
    return s;
}

Schedule Schedule::write_kappa2(double t_mid, double k1_max, double k2_max) {
    Schedule s = write_kappa1(t_mid, k1_max, k2_max);
    s.kind = ScheduleKind::WriteKappa2;
    return s;
}

Schedule Schedule::read_kappa1(double t_mid, double k1_max, double k2_max) {
    Schedule s = write_kappa1(t_mid, k1_max, k2_max);
    s.kind = ScheduleKind::ReadKappa1;
    return s;
}

Schedule Schedule::read_kappa2(double t_mid, double k1_max, double k2_max) {
    Schedule s = write_kappa1(t_mid, k1_max, k2_max);
    s.kind = ScheduleKind::ReadKappa2;
    return s;
}

Schedule Schedule::constant(double value) {
    Schedule s;
    s.kind = ScheduleKind::Constant;
    s.value = value;
    return s;
}

Schedule Schedule::gaussian_pair(const PulseParams& pulse) {
    Schedule s;
    s.kind = ScheduleKind::GaussianPair;
    s.pulse = pulse;
    return s;
}

}  // namespace cascade
