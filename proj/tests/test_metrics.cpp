#include <doctest.h>

#include <cmath>

#include "cascade/dynamics.hpp"
#include "cascade/integrator.hpp"
#include "cascade/metrics.hpp"

using namespace cascade;

namespace {

// Fixed-step oracle for one protocol run, split at t_mid.
double oracle_eta(ProtocolKind kind, const SystemParams& p,
                  const std::optional<PulseParams>& pulse, double h = 1e-3) {
    auto rhs = make_augmented_rhs(kind, p, pulse);
    AugmentedState y0 = pack_state(initial_state(kind), 0.0, 0.0);
    auto mid = integrate_fixed_oracle<8>(rhs, y0, 0.0, p.t_mid, h);
    auto fin = integrate_fixed_oracle<8>(rhs, mid, p.t_mid, p.t_final, h);
    ModeState s = unpack_state(fin);
    switch (kind) {
        case ProtocolKind::Write: return s.nb();
        case ProtocolKind::Read: return s.n1();
        case ProtocolKind::Memory: return s.n2();
    }
    return 0.0;
}

SystemParams write_defaults() {
    SystemParams p;
    p.gamma = 6.51e-4;
    return p;
}

SystemParams memory_defaults() {
    SystemParams p;
    p.gamma = 6.51e-4;
    p.t_final = 100.0;
    p.t_mid = 12.5;
    return p;
}

PulseParams memory_pulse() { return PulseParams{}; }

}  // namespace

TEST_CASE("write efficiency at the canonical parameters") {
    IntegratorConfig cfg;
    SystemParams p = write_defaults();

    // G = 0: the mechanical mode is never populated.
    SystemParams p0 = p;
    p0.coupling = 0.0;
    auto traj0 = integrate_protocol(ProtocolKind::Write, p0, std::nullopt, cfg);
    CHECK(write_efficiency(traj0).eta == doctest::Approx(0.0).epsilon(1e-15));

    // t_mid = t_f/2 default.
    auto traj = integrate_protocol(ProtocolKind::Write, p, std::nullopt, cfg);
    double frozen_half = 0.98954648567;  // fixed-step oracle, h = 1e-3
    CHECK(write_efficiency(traj).eta ==
          doctest::Approx(frozen_half).epsilon(1e-8));
    CHECK(oracle_eta(ProtocolKind::Write, p, std::nullopt) ==
          doctest::Approx(frozen_half).epsilon(1e-8));

    // Calibrated switchover t_mid = 13: the published 99.4% operating point.
    SystemParams pc = p;
    pc.t_mid = 13.0;
    auto trajc = integrate_protocol(ProtocolKind::Write, pc, std::nullopt, cfg);
    double frozen_cal = 0.99322430699;
    CHECK(write_efficiency(trajc).eta ==
          doctest::Approx(frozen_cal).epsilon(1e-8));
    CHECK(write_efficiency(trajc).eta == doctest::Approx(0.994).epsilon(4e-3));

    // gamma = 0 saturation value.
    SystemParams pg = p;
    pg.gamma = 0.0;
    auto trajg = integrate_protocol(ProtocolKind::Write, pg, std::nullopt, cfg);
    CHECK(write_efficiency(trajg).eta ==
          doctest::Approx(0.99394131082).epsilon(1e-8));
}

TEST_CASE("read efficiency mirrors the write protocol") {
    IntegratorConfig cfg;
    SystemParams p = write_defaults();
    p.t_mid = 12.0;  // mirror of the calibrated write switchover

    auto traj = integrate_protocol(ProtocolKind::Read, p, std::nullopt, cfg);
    CHECK(read_efficiency(traj).eta ==
          doctest::Approx(0.99322430699).epsilon(1e-8));

    SystemParams p0 = p;
    p0.coupling = 0.0;
    auto traj0 = integrate_protocol(ProtocolKind::Read, p0, std::nullopt, cfg);
    CHECK(read_efficiency(traj0).eta == doctest::Approx(0.0).epsilon(1e-15));

    // Fig. 4(c) dashed operating point (t_f, G) = (15, 0.1835).
    SystemParams p15 = write_defaults();
    p15.t_final = 15.0;
    p15.t_mid = 7.5;
    p15.coupling = 0.1835;
    auto traj15 = integrate_protocol(ProtocolKind::Read, p15, std::nullopt, cfg);
    CHECK(read_efficiency(traj15).eta ==
          doctest::Approx(0.98539657612).epsilon(1e-7));
}

TEST_CASE("reciprocity: mirrored write and read runs agree") {
    IntegratorConfig cfg;
    SystemParams w = write_defaults();
    w.t_mid = 13.0;
    SystemParams r = write_defaults();
    r.t_mid = 12.0;  // t_f - 13
    double eta_w =
        write_efficiency(integrate_protocol(ProtocolKind::Write, w,
                                            std::nullopt, cfg))
            .eta;
    double eta_r =
        read_efficiency(integrate_protocol(ProtocolKind::Read, r, std::nullopt,
                                           cfg))
            .eta;
    CHECK(std::abs(eta_w - eta_r) < 1e-3);

    // self-mirrored default split
    SystemParams w2 = write_defaults();
    SystemParams r2 = write_defaults();
    double eta_w2 =
        write_efficiency(integrate_protocol(ProtocolKind::Write, w2,
                                            std::nullopt, cfg))
            .eta;
    double eta_r2 =
        read_efficiency(integrate_protocol(ProtocolKind::Read, r2,
                                           std::nullopt, cfg))
            .eta;
    CHECK(std::abs(eta_w2 - eta_r2) < 1e-9);
}

TEST_CASE("memory efficiency with the literal pulsed-run parameters") {
    IntegratorConfig cfg;
    SystemParams p = memory_defaults();
    PulseParams pulse = memory_pulse();

    // The integrated dynamics give 0.794 here, not the often-quoted 0.96:
    // the pulse area G0 sigma sqrt(2 pi) = 1.794 rad overshoots the pi/2
    // swap, and the 0.96/0.94/0.99 figures coincide with the dissipation
    // estimate exp(-gamma 5 t_mid) instead. The frozen value below is the
    // fixed-step oracle result, cross-checked against cos^2 of the double
    // pulse area.
    auto traj = integrate_protocol(ProtocolKind::Memory, p, pulse, cfg);
    double frozen = 0.79427786442;
    CHECK(memory_efficiency(traj).eta == doctest::Approx(frozen).epsilon(1e-7));
    CHECK(oracle_eta(ProtocolKind::Memory, p, pulse) ==
          doctest::Approx(frozen).epsilon(1e-7));

    // gamma = 0 bound: cos^2(2 theta) with theta the single-pulse area.
    SystemParams pg = p;
    pg.gamma = 0.0;
    auto trajg = integrate_protocol(ProtocolKind::Memory, pg, pulse, cfg);
    double eta_g0 = memory_efficiency(trajg).eta;
    double theta = pulse.g0 * pulse.sigma * std::sqrt(2.0 * M_PI);
    CHECK(eta_g0 == doctest::Approx(0.81425210896).epsilon(1e-7));
    CHECK(eta_g0 ==
          doctest::Approx(std::pow(std::cos(2.0 * theta), 2)).epsilon(5e-5));
    // dissipation strictly reduces the stored state
    CHECK(eta_g0 > memory_efficiency(traj).eta);

    // 50% longer procedure with proportionally scaled times.
    SystemParams p150 = memory_defaults();
    p150.t_final = 150.0;
    p150.t_mid = 150.0 / 8.0;
    PulseParams pulse150 = pulse;
    pulse150.t1 = 2.0 * p150.t_mid;
    pulse150.t2 = 5.0 * p150.t_mid;
    auto traj150 = integrate_protocol(ProtocolKind::Memory, p150, pulse150, cfg);
    CHECK(memory_efficiency(traj150).eta ==
          doctest::Approx(0.78410633178).epsilon(1e-7));

    // microwave-resonator damping ratio
    SystemParams pmw = memory_defaults();
    pmw.gamma = 1.765e-4;
    auto trajmw = integrate_protocol(ProtocolKind::Memory, pmw, pulse, cfg);
    CHECK(memory_efficiency(trajmw).eta ==
          doctest::Approx(0.80878728106).epsilon(1e-7));
}

TEST_CASE("efficiency error paths") {
    IntegratorConfig cfg;
    SystemParams p = write_defaults();
    auto traj = integrate_protocol(ProtocolKind::Write, p, std::nullopt, cfg);
    CHECK_THROWS_AS(read_efficiency(traj), std::invalid_argument);
    CHECK_THROWS_AS(memory_efficiency(traj), std::invalid_argument);

    // zero initial occupation
    Trajectory empty = traj;
    for (auto& s : empty.samples) s.state = ModeState{};
    CHECK_THROWS_AS(write_efficiency(empty), std::invalid_argument);
}

TEST_CASE("efficiency report carries the balance bookkeeping") {
    IntegratorConfig cfg;
    SystemParams p = write_defaults();
    auto report =
        write_efficiency(integrate_protocol(ProtocolKind::Write, p,
                                            std::nullopt, cfg));
    CHECK(report.lossless);
    CHECK(report.eta >= 0.0);
    CHECK(report.eta <= 1.0);
    CHECK(std::abs(report.balance_residual) < 1e-9);
    CHECK(report.nb_final == doctest::Approx(report.eta));
    double total = report.n1_final + report.nb_final + report.n2_final +
                   report.leaked_total + report.mech_loss_total;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("monotone degradation of the write efficiency in gamma") {
    IntegratorConfig cfg;
    double prev = 1.0;
    for (double gamma : {0.0, 1e-4, 3e-4, 1e-3, 3e-3, 1e-2}) {
        SystemParams p = write_defaults();
        p.gamma = gamma;
        double eta =
            write_efficiency(integrate_protocol(ProtocolKind::Write, p,
                                                std::nullopt, cfg))
                .eta;
        CHECK(eta <= prev + 1e-12);
        prev = eta;
    }
}

TEST_CASE("two-cavity quadrature: trivial limits") {
    Schedule k1 = Schedule::write_kappa1(12.5, 1.0, 1.0);
    CHECK(two_cavity_efficiency_quadrature(k1, 1.0, 0.0) == 0.0);
    CHECK(two_cavity_efficiency_quadrature(Schedule::constant(0.0), 1.0, 6.0) ==
          doctest::Approx(0.0).epsilon(1e-18));
}

TEST_CASE("two-cavity quadrature matches the G = 0 ODE across switchover times") {
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = 1e-12;
    // frozen quadrature values for kappa2_max * t_mid in {5, 12.5, 50}
    const std::pair<double, double> expected[] = {
        {5.0, 0.494952233925},
        {12.5, 0.499997205012},
        {50.0, 0.500000000000},
    };
    for (auto [tm, eta_frozen] : expected) {
        Schedule k1 = Schedule::write_kappa1(tm, 1.0, 1.0);
        double eta_quad = two_cavity_efficiency_quadrature(k1, 1.0, tm);
        CHECK(eta_quad == doctest::Approx(eta_frozen).epsilon(2e-9));

        // two-cavity system: alpha1' = -k1/2 a1, alpha2' = -k2m/2 a2 + feed
        RhsFn<4> rhs = [tm](double t, const std::array<double, 4>& y,
                            std::array<double, 4>& dy) {
            double k1t = kappa1_write(t, tm, 1.0, 1.0);
            dy[0] = -0.5 * k1t * y[0];
            dy[1] = -0.5 * k1t * y[1];
            dy[2] = -0.5 * y[2] + std::sqrt(k1t) * y[0];
            dy[3] = -0.5 * y[3] + std::sqrt(k1t) * y[1];
        };
        AdaptiveIntegrator<4> stepper(cfg);
        const double grid[] = {tm};
        auto states = stepper.integrate(rhs, {1.0, 0.0, 0.0, 0.0}, 0.0, tm,
                                        grid);
        double eta_ode = states[0][2] * states[0][2] +
                         states[0][3] * states[0][3];
        CHECK(std::abs(eta_quad - eta_ode) < 1e-8);
    }
}

TEST_CASE("quadrature numeric inner-integral path agrees with the analytic one") {
    // A read kappa2 profile with swapped maxima is pointwise identical to the
    // write kappa1 profile, but takes the numeric inner-integral branch.
    double tm = 8.0;
    Schedule analytic = Schedule::write_kappa1(tm, 1.0, 1.0);
    Schedule numeric = Schedule::read_kappa2(tm, 1.0, 1.0);
    double a = two_cavity_efficiency_quadrature(analytic, 1.0, tm);
    double b = two_cavity_efficiency_quadrature(numeric, 1.0, tm);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
}

TEST_CASE("process fidelity: normalized single-excitation form") {
    CHECK(process_fidelity(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(process_fidelity(0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(process_fidelity(0.0, 1.234) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(process_fidelity(0.994, 0.0) ==
          doctest::Approx(0.99700).epsilon(1e-5));
    // phase pi flips the interference term
    CHECK(process_fidelity(0.994, M_PI) ==
          doctest::Approx((1.994 - 2.0 * std::sqrt(0.994)) / 4.0)
              .epsilon(1e-12));
    CHECK_THROWS_AS(process_fidelity(1.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(process_fidelity(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("truncation-loss estimate") {
    CHECK(inefficiency_estimate(10.0) ==
          doctest::Approx(std::exp(-5.0)).epsilon(1e-15));
    CHECK(inefficiency_estimate(0.0) == 1.0);

    // Exact for the bare two-cavity protocol (G = 0, both halves).
    IntegratorConfig cfg;
    SystemParams p;
    p.coupling = 0.0;
    p.gamma = 0.0;
    p.t_final = 10.0;
    p.t_mid = 5.0;
    auto traj = integrate_protocol(ProtocolKind::Write, p, std::nullopt, cfg);
    double inefficiency = 1.0 - traj.back().state.n2();
    CHECK(inefficiency / inefficiency_estimate(10.0) ==
          doctest::Approx(1.0).epsilon(0.05));

    // A lower bound only once the mechanical leg is included: at the
    // (t_f, G) = (10, 0.265) operating point the coupling truncation
    // dominates and the measured ratio is ~5.7.
    SystemParams pw;
    pw.coupling = 0.265;
    pw.gamma = 0.0;
    pw.t_final = 10.0;
    pw.t_mid = 5.0;
    auto trajw = integrate_protocol(ProtocolKind::Write, pw, std::nullopt, cfg);
    double ratio =
        (1.0 - write_efficiency(trajw).eta) / inefficiency_estimate(10.0);
    CHECK(ratio > 1.0);
    CHECK(ratio < 10.0);
    // Fig. 2(c) dashed-curve plateau (gamma = 0 at that operating point)
    CHECK(write_efficiency(trajw).eta ==
          doctest::Approx(0.96148055928).epsilon(1e-7));
}
