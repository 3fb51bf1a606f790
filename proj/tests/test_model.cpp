#include <doctest.h>

#include <cmath>
#include <random>

#include "cascade/model.hpp"

using namespace cascade;

TEST_CASE("lab-unit conversion reproduces the experimental rate ratios") {
    // kappa_m = 2pi x 215 kHz, gamma = 2pi x 140 Hz: the 2pi factors cancel.
    auto p = from_lab_units({{"gamma", 140.0}}, 215e3);
    CHECK(p.gamma == doctest::Approx(6.51e-4).epsilon(1e-3));
    CHECK(p.gamma == doctest::Approx(140.0 / 215e3).epsilon(1e-14));

    // Identity ratio.
    auto q = from_lab_units({{"gamma", 123.0}}, 123.0);
    CHECK(q.gamma == doctest::Approx(1.0).epsilon(1e-15));

    // Microwave resonator rates: gamma_mu = 2pi x 30 Hz, kappa_mu = 2pi x 170 kHz.
    auto mw = from_lab_units({{"gamma", 30.0}}, 170e3);
    CHECK(mw.gamma == doctest::Approx(1.765e-4).epsilon(1e-3));
}

TEST_CASE("lab-unit conversion rejects bad input by field name") {
    CHECK_THROWS_WITH_AS(from_lab_units({{"gamma", -1.0}}, 215e3),
                         doctest::Contains("gamma"), ValidationError);
    CHECK_THROWS_WITH_AS(from_lab_units({{"bogus", 1.0}}, 215e3),
                         doctest::Contains("bogus"), ValidationError);
    CHECK_THROWS_AS(from_lab_units({{"gamma", 1.0}}, 0.0), ValidationError);
}

TEST_CASE("unit round-trip preserves every rate to 1e-12") {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> rate(1.0, 1e7);
    for (int trial = 0; trial < 50; ++trial) {
        double kappa_ref = rate(rng);
        std::map<std::string, double> in = {
            {"kappa1_max", rate(rng)}, {"kappa2_max", rate(rng)},
            {"gamma", rate(rng)},      {"omega_m", rate(rng)},
            {"coupling", rate(rng)},   {"t1_cav1_inv", rate(rng)},
            {"t1_cav2_inv", rate(rng)},
        };
        SystemParams p = from_lab_units(in, kappa_ref);
        auto out = to_lab_units(p, kappa_ref);
        for (const auto& [key, value] : in) {
            CHECK(out.at(key) == doctest::Approx(value).epsilon(1e-12));
        }
        // Q_m computed in lab units and in kappa_m units agrees.
        double q_lab = in.at("omega_m") / in.at("gamma");
        CHECK(p.q_factor() == doctest::Approx(q_lab).epsilon(1e-12));
    }
}

TEST_CASE("validation collects every violation") {
    SystemParams p;
    CHECK(validate(p).empty());  // defaults are a known-good configuration

    p.eta_tr = 1.2;
    p.t_mid = p.t_final;  // must strictly precede
    auto issues = validate(p);
    REQUIRE(issues.size() == 2);
    CHECK(issues[0].find("eta_tr") != std::string::npos);
    CHECK(issues[1].find("t_mid") != std::string::npos);

    CHECK_THROWS_AS((void)validated(p), ValidationError);
    try {
        (void)validated(p);
    } catch (const ValidationError& e) {
        CHECK(e.issues().size() == 2);
    }
}

TEST_CASE("pulse validation") {
    PulseParams pulse;
    CHECK(validate(pulse, 100.0).empty());

    pulse.sigma = 0.0;
    pulse.t2 = pulse.t1;  // centers must be ordered
    auto issues = validate(pulse, 100.0);
    CHECK(issues.size() == 2);

    PulseParams outside;
    outside.t2 = 120.0;
    CHECK(validate(outside, 100.0).size() == 1);
}

TEST_CASE("initial conditions are fixed per protocol") {
    ModeState w = initial_state(ProtocolKind::Write);
    CHECK(w.alpha1 == std::complex<double>(1.0, 0.0));
    CHECK(w.total_occupation() == doctest::Approx(1.0));

    ModeState r = initial_state(ProtocolKind::Read);
    CHECK(r.beta == std::complex<double>(1.0, 0.0));
    CHECK(r.n1() == 0.0);

    ModeState m = initial_state(ProtocolKind::Memory);
    CHECK(m.alpha1 == std::complex<double>(1.0, 0.0));
}

TEST_CASE("protocol names round-trip") {
    for (auto kind : {ProtocolKind::Write, ProtocolKind::Read,
                      ProtocolKind::Memory}) {
        CHECK(protocol_from_name(protocol_name(kind)) == kind);
    }
    CHECK(!protocol_from_name("bogus").has_value());
}
