#include "cascade/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "cascade/integrator.hpp"

namespace cascade {

namespace {

using Complex = std::complex<double>;
constexpr Complex kImag{0.0, 1.0};

ModeState cascade_rhs(const ModeState& s, const SystemParams& p, double k1,
                      double k2, double g, bool feed_forward) {
    ModeState d;
    double feed = std::sqrt(k1 * k2) * std::sqrt(p.eta_tr);
    if (feed_forward) {
        // write/memory: cavity 1 -> cavity 2
        d.alpha1 = -0.5 * (k1 + p.t1_cav1_inv) * s.alpha1;
        d.beta = -0.5 * p.gamma * s.beta - kImag * g * s.alpha2;
        d.alpha2 = -0.5 * (k2 + p.t1_cav2_inv) * s.alpha2 -
                   kImag * g * s.beta + feed * s.alpha1;
    } else {
        // read: cavity 2 -> cavity 1
        d.alpha1 = -0.5 * (k1 + p.t1_cav1_inv) * s.alpha1 + feed * s.alpha2;
        d.beta = -0.5 * p.gamma * s.beta - kImag * g * s.alpha2;
        d.alpha2 = -0.5 * (k2 + p.t1_cav2_inv) * s.alpha2 - kImag * g * s.beta;
    }
    return d;
}

}  // namespace

ModeState write_rhs(double t, const ModeState& s, const SystemParams& p) {
    double k1 = kappa1_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
    double k2 = kappa2_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
    return cascade_rhs(s, p, k1, k2, p.coupling, true);
}

ModeState read_rhs(double t, const ModeState& s, const SystemParams& p) {
    auto [k1, k2] = kappa_read(t, p.t_mid, p.kappa1_max, p.kappa2_max);
    return cascade_rhs(s, p, k1, k2, p.coupling, false);
}

ModeState memory_rhs(double t, const ModeState& s, const SystemParams& p,
                     const PulseParams& pulse) {
    double k1 = kappa1_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
    double k2 = kappa2_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
    return cascade_rhs(s, p, k1, k2, coupling_pulse(t, pulse), true);
}

double leaked_power(double t, const ModeState& s, const SystemParams& p,
                    ProtocolKind kind) {
    if (p.losses_enabled()) {
        throw std::invalid_argument(
            "leaked_power requires a lossless channel (eta_tr = 1, no T1 terms)");
    }
    InstantRates r = rates_at(t, kind, p, std::nullopt);
    Complex out = std::sqrt(r.kappa1) * s.alpha1 - std::sqrt(r.kappa2) * s.alpha2;
    return std::norm(out);
}

double mechanical_loss_rate(const ModeState& s, const SystemParams& p) {
    return p.gamma * s.nb();
}

InstantRates rates_at(double t, ProtocolKind kind, const SystemParams& p,
                      const std::optional<PulseParams>& pulse) {
    InstantRates r;
    switch (kind) {
        case ProtocolKind::Write:
            r.kappa1 = kappa1_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
            r.kappa2 = kappa2_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
            r.g = p.coupling;
            break;
        case ProtocolKind::Read: {
            auto [k1, k2] = kappa_read(t, p.t_mid, p.kappa1_max, p.kappa2_max);
            r.kappa1 = k1;
            r.kappa2 = k2;
            r.g = p.coupling;
            break;
        }
        case ProtocolKind::Memory:
            r.kappa1 = kappa1_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
            r.kappa2 = kappa2_write(t, p.t_mid, p.kappa1_max, p.kappa2_max);
            r.g = pulse ? coupling_pulse(t, *pulse) : 0.0;
            break;
    }
    return r;
}

AugmentedState pack_state(const ModeState& s, double leaked_cum,
                          double mech_cum) {
    return {s.alpha1.real(), s.alpha1.imag(), s.beta.real(), s.beta.imag(),
            s.alpha2.real(), s.alpha2.imag(), leaked_cum, mech_cum};
}

ModeState unpack_state(const AugmentedState& y) {
    ModeState s;
    s.alpha1 = {y[0], y[1]};
    s.beta = {y[2], y[3]};
    s.alpha2 = {y[4], y[5]};
    return s;
}

AugmentedRhs make_augmented_rhs(ProtocolKind kind, const SystemParams& p,
                                const std::optional<PulseParams>& pulse) {
    if (kind == ProtocolKind::Memory && !pulse) {
        throw std::invalid_argument("memory protocol requires pulse parameters");
    }
    PulseParams pl = pulse.value_or(PulseParams{});
    return [kind, p, pl](double t, const AugmentedState& y, AugmentedState& dy) {
        ModeState s = unpack_state(y);
        ModeState d;
        InstantRates r;
        switch (kind) {
            case ProtocolKind::Write:
                d = write_rhs(t, s, p);
                break;
            case ProtocolKind::Read:
                d = read_rhs(t, s, p);
                break;
            case ProtocolKind::Memory:
                d = memory_rhs(t, s, p, pl);
                break;
        }
        r = rates_at(t, kind, p, pl);
        dy[0] = d.alpha1.real();
        dy[1] = d.alpha1.imag();
        dy[2] = d.beta.real();
        dy[3] = d.beta.imag();
        dy[4] = d.alpha2.real();
        dy[5] = d.alpha2.imag();
        Complex port = std::sqrt(r.kappa1) * s.alpha1 -
                       std::sqrt(r.kappa2) * s.alpha2;
        dy[6] = std::norm(port);
        dy[7] = p.gamma * s.nb();
    };
}

}  // namespace cascade
