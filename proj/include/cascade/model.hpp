#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Domain types for the cascaded cavity-optomechanics simulator.
//
// All quantities are dimensionless: rates in units of the maximum cavity
// damping rate kappa_m, times in units of 1/kappa_m. Laboratory frequencies
// enter only through from_lab_units()/to_lab_units().

namespace cascade {

enum class ProtocolKind { Write, Read, Memory };

std::string protocol_name(ProtocolKind kind);
std::optional<ProtocolKind> protocol_from_name(const std::string& name);

// Thrown when a parameter set violates its invariants. Carries the full
// list of violations, not just the first one.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

// Physical constants of one protocol run, in kappa_m units.
struct SystemParams {
    double kappa1_max = 1.0;   // maximum damping rate of cavity 1
    double kappa2_max = 1.0;   // maximum damping rate of cavity 2
    double gamma = 140.0 / 215000.0;       // mechanical damping rate
    double omega_m = 947.0 / 215.0;        // mechanical frequency (enters Q_m only)
    double coupling = 0.12;    // constant optomechanical coupling G
    double eta_tr = 1.0;       // transmission-channel energy efficiency
    double t1_cav1_inv = 0.0;  // intrinsic dissipation rate 1/T1 of cavity 1
    double t1_cav2_inv = 0.0;  // intrinsic dissipation rate 1/T1 of cavity 2
    double t_final = 25.0;     // procedure time
    double t_mid = 12.5;       // schedule switchover time

    double q_factor() const { return omega_m / gamma; }
    bool losses_enabled() const {
        return eta_tr < 1.0 || t1_cav1_inv > 0.0 || t1_cav2_inv > 0.0;
    }
};

// Gaussian coupling pulse pair for the memory protocol.
struct PulseParams {
    double g0 = 0.32;            // peak coupling G0
    double sigma = 2.2360679774997896;  // Gaussian width, sqrt(5)
    double t1 = 25.0;            // write-in pulse center
    double t2 = 62.5;            // read-out pulse center
};

// Collects invariant violations; empty result means the params are valid.
std::vector<std::string> validate(const SystemParams& params);
std::vector<std::string> validate(const PulseParams& pulse, double t_final);

// Returns params unchanged if valid, otherwise throws ValidationError with
// every violation.
SystemParams validated(const SystemParams& params);
PulseParams validated(const PulseParams& pulse, double t_final);

// Laboratory-unit boundary. Frequencies may be in Hz or rad/s as long as the
// reference kappa_m uses the same convention; only ratios survive.
// Recognized keys: kappa1_max, kappa2_max, gamma, omega_m, coupling,
// t1_cav1_inv, t1_cav2_inv. Every supplied value must be positive.
SystemParams from_lab_units(const std::map<std::string, double>& freqs,
                            double kappa_ref);
std::map<std::string, double> to_lab_units(const SystemParams& params,
                                           double kappa_ref);

// The three complex mode amplitudes at one instant.
struct ModeState {
    std::complex<double> alpha1{0.0, 0.0};  // cavity 1
    std::complex<double> beta{0.0, 0.0};    // mechanical mode
    std::complex<double> alpha2{0.0, 0.0};  // cavity 2

    double n1() const { return std::norm(alpha1); }
    double nb() const { return std::norm(beta); }
    double n2() const { return std::norm(alpha2); }
    double total_occupation() const { return n1() + nb() + n2(); }
};

// Protocol-fixed initial conditions: write/memory start in cavity 1,
// read starts in the mechanical mode.
ModeState initial_state(ProtocolKind kind);

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double max_step = 0.0;     // 0 = auto (span/16)
    int dense_samples = 2001;
};

std::vector<std::string> validate(const IntegratorConfig& cfg);

struct TrajectorySample {
    double t = 0.0;
    ModeState state;
    double kappa1 = 0.0;
    double kappa2 = 0.0;
    double g = 0.0;
    double leaked_cum = 0.0;     // integral of the cavity output-port flux
    double mech_loss_cum = 0.0;  // integral of gamma*|beta|^2
};

// Dense record of one protocol run.
struct Trajectory {
    ProtocolKind protocol = ProtocolKind::Write;
    SystemParams params;
    std::optional<PulseParams> pulse;
    IntegratorConfig integrator;
    std::vector<TrajectorySample> samples;

    const TrajectorySample& front() const { return samples.front(); }
    const TrajectorySample& back() const { return samples.back(); }

    // initial occupation - (final occupation + leaked + mechanical loss);
    // zero up to integration error for lossless-channel runs.
    double energy_balance_residual() const;
};

}  // namespace cascade
