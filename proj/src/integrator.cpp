#include "cascade/integrator.hpp"

#include "cascade/dynamics.hpp"

namespace cascade {

Trajectory integrate_protocol(ProtocolKind kind, const SystemParams& params,
                              const std::optional<PulseParams>& pulse,
                              const IntegratorConfig& cfg) {
    SystemParams p = validated(params);
    if (kind == ProtocolKind::Memory) {
        if (!pulse) {
            throw ValidationError({"memory protocol requires a [pulse] section"});
        }
        (void)validated(*pulse, p.t_final);
    }
    auto cfg_issues = validate(cfg);
    if (!cfg_issues.empty()) throw ValidationError(std::move(cfg_issues));

    Trajectory traj;
    traj.protocol = kind;
    traj.params = p;
    traj.pulse = (kind == ProtocolKind::Memory) ? pulse : std::nullopt;
    traj.integrator = cfg;

    const double t_final = p.t_final;
    const int n = cfg.dense_samples;
    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) {
        grid[i] = t_final * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    grid.back() = t_final;

    AugmentedState y0 = pack_state(initial_state(kind), 0.0, 0.0);
    AugmentedRhs rhs = make_augmented_rhs(kind, p, traj.pulse);
    AdaptiveIntegrator<8> stepper(cfg);
    const double breaks[] = {p.t_mid};
    auto states = stepper.integrate(rhs, y0, 0.0, t_final, grid, breaks);

    traj.samples.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        TrajectorySample sample;
        sample.t = grid[i];
        sample.state = unpack_state(states[i]);
        InstantRates r = rates_at(grid[i], kind, p, traj.pulse);
        sample.kappa1 = r.kappa1;
        sample.kappa2 = r.kappa2;
        sample.g = r.g;
        sample.leaked_cum = states[i][6];
        sample.mech_loss_cum = states[i][7];
        traj.samples.push_back(sample);
    }
    return traj;
}

}  // namespace cascade
