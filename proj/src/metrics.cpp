#include "cascade/metrics.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace cascade {

namespace {

EfficiencyReport make_report(const Trajectory& traj, double numerator,
                             double denominator, const char* denom_desc) {
    if (denominator <= 0.0) {
        throw std::invalid_argument(
            std::string("efficiency undefined: ") + denom_desc + " is zero");
    }
    const auto& last = traj.back();
    EfficiencyReport report;
    report.eta = numerator / denominator;
    report.protocol = traj.protocol;
    report.n1_final = last.state.n1();
    report.nb_final = last.state.nb();
    report.n2_final = last.state.n2();
    report.leaked_total = last.leaked_cum;
    report.mech_loss_total = last.mech_loss_cum;
    report.balance_residual = traj.energy_balance_residual();
    report.lossless = !traj.params.losses_enabled();
    return report;
}

void require_protocol(const Trajectory& traj, ProtocolKind expected) {
    if (traj.protocol != expected) {
        throw std::invalid_argument("trajectory was produced by the " +
                                    protocol_name(traj.protocol) +
                                    " protocol, expected " +
                                    protocol_name(expected));
    }
}

}  // namespace

EfficiencyReport write_efficiency(const Trajectory& traj) {
    require_protocol(traj, ProtocolKind::Write);
    return make_report(traj, traj.back().state.nb(), traj.front().state.n1(),
                       "initial cavity-1 occupation");
}

EfficiencyReport read_efficiency(const Trajectory& traj) {
    require_protocol(traj, ProtocolKind::Read);
    return make_report(traj, traj.back().state.n1(), traj.front().state.nb(),
                       "initial mechanical occupation");
}

EfficiencyReport memory_efficiency(const Trajectory& traj) {
    require_protocol(traj, ProtocolKind::Memory);
    return make_report(traj, traj.back().state.n2(), traj.front().state.n1(),
                       "initial cavity-1 occupation");
}

EfficiencyReport efficiency(const Trajectory& traj) {
    switch (traj.protocol) {
        case ProtocolKind::Write: return write_efficiency(traj);
        case ProtocolKind::Read: return read_efficiency(traj);
        case ProtocolKind::Memory: return memory_efficiency(traj);
    }
    throw std::logic_error("unreachable protocol kind");
}

namespace detail {

namespace {

double simpson_rule(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double m, double fm,
                       double whole, double tol, int depth) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson_rule(a, fa, m, fm, flm);
    double right = simpson_rule(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                           depth - 1) +
           simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                           depth - 1);
}

}  // namespace

double integrate_simpson(const std::function<double(double)>& f, double a,
                         double b, double tol) {
    if (b <= a) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson_rule(a, fa, b, fb, fm);
    return simpson_recurse(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

}  // namespace detail

double two_cavity_efficiency_quadrature(const Schedule& k1_profile, double k2m,
                                        double t) {
    if (t <= 0.0) return 0.0;

    std::function<double(double)> accumulated_k1;
    if (k1_profile.kind == ScheduleKind::WriteKappa1 && k1_profile.floor <= 0.0) {
        // Closed form of Int_0^tp k1 for the rising profile
        // k1m / (2 e^{k2s (tm - t)} - 1), where k2s is the schedule's own
        // exponent rate (not necessarily the receiving-cavity k2m).
        double k1m = k1_profile.k1_max;
        double k2s = k1_profile.k2_max;
        double tm = k1_profile.t_mid;
        accumulated_k1 = [k1m, k2s, tm](double tp) {
            return k1m / k2s *
                   (std::log(2.0 - std::exp(-k2s * tm)) -
                    std::log(2.0 - std::exp(-k2s * (tm - tp))));
        };
    } else {
        accumulated_k1 = [&k1_profile](double tp) {
            return detail::integrate_simpson(
                [&k1_profile](double u) { return k1_profile(u); }, 0.0, tp,
                1e-13);
        };
    }

    auto integrand = [&](double tp) {
        return std::sqrt(k1_profile(tp)) *
               std::exp(-0.5 * k2m * (t - tp)) *
               std::exp(-0.5 * accumulated_k1(tp));
    };
    double sqrt_eta =
        std::sqrt(k2m) * detail::integrate_simpson(integrand, 0.0, t, 1e-13);
    return sqrt_eta * sqrt_eta;
}

double process_fidelity(double eta, double phi) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw std::invalid_argument("efficiency out of [0,1]: " +
                                    std::to_string(eta));
    }
    return (1.0 + eta + 2.0 * std::sqrt(eta) * std::cos(phi)) / 4.0;
}

double inefficiency_estimate(double t_final, double k_m) {
    return std::exp(-0.5 * k_m * t_final);
}

}  // namespace cascade
