#pragma once

#include <array>
#include <functional>

#include "cascade/model.hpp"
#include "cascade/schedules.hpp"

// Right-hand sides of the three transfer protocols. The write and memory
// protocols cascade cavity 1 into cavity 2 (feed term sqrt(kappa1 kappa2)
// alpha1); the read protocol runs the cascade in the opposite direction.
// Loss extensions: intrinsic cavity dissipation adds -alpha/(2 T1) decay and
// the transmission loss scales the feed by sqrt(eta_tr).

namespace cascade {

// Derivative of the three amplitudes at (t, s); the coupling g is the
// instantaneous optomechanical rate (constant for write/read, pulsed for
// memory).
ModeState write_rhs(double t, const ModeState& s, const SystemParams& p);
ModeState read_rhs(double t, const ModeState& s, const SystemParams& p);
ModeState memory_rhs(double t, const ModeState& s, const SystemParams& p,
                     const PulseParams& pulse);

// Instantaneous flux out of the open cavity port,
// |sqrt(kappa1) alpha1 - sqrt(kappa2) alpha2|^2 (write/memory: output of
// cavity 2; read: output of cavity 1 - same magnitude either way).
// Only meaningful for lossless-channel runs; throws otherwise.
double leaked_power(double t, const ModeState& s, const SystemParams& p,
                    ProtocolKind kind);

// Mechanical dissipation rate gamma |beta|^2, reported separately.
double mechanical_loss_rate(const ModeState& s, const SystemParams& p);

// Instantaneous damping rates and coupling for a protocol at time t.
struct InstantRates {
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double g = 0.0;
};
InstantRates rates_at(double t, ProtocolKind kind, const SystemParams& p,
                      const std::optional<PulseParams>& pulse);

// Flat ODE state for the integrator: six amplitude components plus the two
// running loss integrals (port flux, mechanical dissipation).
using AugmentedState = std::array<double, 8>;

AugmentedState pack_state(const ModeState& s, double leaked_cum,
                          double mech_cum);
ModeState unpack_state(const AugmentedState& y);

using AugmentedRhs =
    std::function<void(double, const AugmentedState&, AugmentedState&)>;

// Builds the augmented derivative function for one protocol. The loss
// integrals always accumulate the lossless-channel port expression; they are
// exact bookkeeping only when p.losses_enabled() is false.
AugmentedRhs make_augmented_rhs(ProtocolKind kind, const SystemParams& p,
                                const std::optional<PulseParams>& pulse);

}  // namespace cascade
