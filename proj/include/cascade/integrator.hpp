#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/model.hpp"

// Adaptive Dormand-Prince 5(4) integration with a fourth-order continuous
// extension for dense output, plus a fixed-step classical RK4 used as an
// independent oracle in tests. Both are deterministic: no randomness, no
// time-of-day, identical inputs give bit-identical results.

namespace cascade {

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t)
        : std::runtime_error(what + " at t = " + std::to_string(t)), t_(t) {}
    double where() const { return t_; }

private:
    double t_;
};

template <std::size_t N>
using RhsFn = std::function<void(double, const std::array<double, N>&,
                                 std::array<double, N>&)>;

namespace detail {

// Dormand-Prince 5(4) tableau.
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                        a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                        a65 = -5103.0 / 18656.0;
inline constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                        a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                        a76 = 11.0 / 84.0;
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                        c5 = 8.0 / 9.0;
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                        e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                        e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous-extension coefficients (Hairer & Wanner).
inline constexpr double d1 = -12715105075.0 / 11282082432.0,
                        d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0,
                        d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0,
                        d7 = 69997945.0 / 29380423.0;

inline constexpr double kSafety = 0.9;
inline constexpr double kMinFactor = 0.2;
inline constexpr double kMaxFactor = 10.0;
inline constexpr double kBeta = 0.04;

template <std::size_t N>
bool finite(const std::array<double, N>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

// Polynomial coefficients of the quartic interpolant over one accepted step.
template <std::size_t N>
struct DenseStep {
    double t0 = 0.0, h = 0.0;
    std::array<double, N> r1{}, r2{}, r3{}, r4{}, r5{};

    std::array<double, N> eval(double t) const {
        double theta = (t - t0) / h;
        double theta1 = 1.0 - theta;
        std::array<double, N> y;
        for (std::size_t i = 0; i < N; ++i) {
            y[i] = r1[i] +
                   theta * (r2[i] +
                            theta1 * (r3[i] + theta * (r4[i] + theta1 * r5[i])));
        }
        return y;
    }
};

}  // namespace detail

struct IntegrationStats {
    long steps_accepted = 0;
    long steps_rejected = 0;
    long rhs_evaluations = 0;
};

// One adaptive integration over [t0, t1] producing states at the requested
// sample times (ascending, within [t0, t1]). The span is additionally split
// at each interior point of `breaks` and the stepper restarted there, so
// slope discontinuities of the right-hand side never straddle a step.
template <std::size_t N>
class AdaptiveIntegrator {
public:
    explicit AdaptiveIntegrator(const IntegratorConfig& cfg) : cfg_(cfg) {
        auto issues = validate(cfg);
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }

    std::vector<std::array<double, N>> integrate(
        const RhsFn<N>& rhs, const std::array<double, N>& y0, double t0,
        double t1, std::span<const double> sample_times,
        std::span<const double> breaks = {}) {
        std::vector<std::array<double, N>> samples(sample_times.size());
        std::size_t next_sample = 0;
        auto emit_exact = [&](double t, const std::array<double, N>& y) {
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <= t + kTimeEps * std::abs(t)) {
                samples[next_sample++] = y;
            }
        };

        std::array<double, N> y = y0;
        if (!detail::finite(y)) {
            throw IntegrationError("non-finite initial state", t0);
        }
        emit_exact(t0, y);
        if (t1 <= t0) {
            // Zero-length span: every requested sample is the initial state.
            while (next_sample < sample_times.size()) samples[next_sample++] = y;
            return samples;
        }

        std::vector<double> segment_ends;
        for (double b : breaks) {
            if (b > t0 && b < t1) segment_ends.push_back(b);
        }
        segment_ends.push_back(t1);

        double t = t0;
        for (double seg_end : segment_ends) {
            integrate_segment(rhs, y, t, seg_end, sample_times, samples,
                              next_sample);
            t = seg_end;
            emit_exact(t, y);
        }
        while (next_sample < sample_times.size()) samples[next_sample++] = y;
        return samples;
    }

    const IntegrationStats& stats() const { return stats_; }

private:
    static constexpr double kTimeEps = 1e-12;

    void integrate_segment(const RhsFn<N>& rhs, std::array<double, N>& y,
                           double t0, double t1,
                           std::span<const double> sample_times,
                           std::vector<std::array<double, N>>& samples,
                           std::size_t& next_sample) {
        const double span = t1 - t0;
        const double max_step =
            cfg_.max_step > 0.0 ? std::min(cfg_.max_step, span) : span / 16.0;

        std::array<double, N> k1, k2, k3, k4, k5, k6, k7, y_stage, y_new, err_vec;
        double t = t0;
        eval(rhs, t, y, k1);
        double h = initial_step(rhs, t, y, k1, max_step);
        double facold = 1e-4;

        while (t < t1) {
            if (h < 4.0 * std::numeric_limits<double>::epsilon() *
                        std::max(std::abs(t), 1.0)) {
                throw IntegrationError("step size underflow", t);
            }
            bool last = false;
            if (t + h >= t1 - kTimeEps * std::max(std::abs(t1), 1.0)) {
                h = t1 - t;
                last = true;
            }

            for (std::size_t i = 0; i < N; ++i)
                y_stage[i] = y[i] + h * detail::a21 * k1[i];
            eval(rhs, t + detail::c2 * h, y_stage, k2);
            for (std::size_t i = 0; i < N; ++i)
                y_stage[i] = y[i] + h * (detail::a31 * k1[i] + detail::a32 * k2[i]);
            eval(rhs, t + detail::c3 * h, y_stage, k3);
            for (std::size_t i = 0; i < N; ++i)
                y_stage[i] = y[i] + h * (detail::a41 * k1[i] + detail::a42 * k2[i] +
                                         detail::a43 * k3[i]);
            eval(rhs, t + detail::c4 * h, y_stage, k4);
            for (std::size_t i = 0; i < N; ++i)
                y_stage[i] = y[i] + h * (detail::a51 * k1[i] + detail::a52 * k2[i] +
                                         detail::a53 * k3[i] + detail::a54 * k4[i]);
            eval(rhs, t + detail::c5 * h, y_stage, k5);
            for (std::size_t i = 0; i < N; ++i)
                y_stage[i] = y[i] + h * (detail::a61 * k1[i] + detail::a62 * k2[i] +
                                         detail::a63 * k3[i] + detail::a64 * k4[i] +
                                         detail::a65 * k5[i]);
            eval(rhs, t + h, y_stage, k6);
            for (std::size_t i = 0; i < N; ++i)
                y_new[i] = y[i] + h * (detail::a71 * k1[i] + detail::a73 * k3[i] +
                                       detail::a74 * k4[i] + detail::a75 * k5[i] +
                                       detail::a76 * k6[i]);
            eval(rhs, t + h, y_new, k7);

            double err = 0.0;
            for (std::size_t i = 0; i < N; ++i) {
                err_vec[i] = h * (detail::e1 * k1[i] + detail::e3 * k3[i] +
                                  detail::e4 * k4[i] + detail::e5 * k5[i] +
                                  detail::e6 * k6[i] + detail::e7 * k7[i]);
                double scale = cfg_.abs_tol +
                               cfg_.rel_tol *
                                   std::max(std::abs(y[i]), std::abs(y_new[i]));
                double r = err_vec[i] / scale;
                err += r * r;
            }
            err = std::sqrt(err / static_cast<double>(N));
            if (!std::isfinite(err)) {
                throw IntegrationError("non-finite state in right-hand side", t);
            }

            double fac11 = std::pow(err, 0.2 - detail::kBeta * 0.75);
            double fac = fac11 / std::pow(facold, detail::kBeta);
            fac = std::max(1.0 / detail::kMaxFactor,
                           std::min(1.0 / detail::kMinFactor, fac / detail::kSafety));

            if (err > 1.0) {
                h /= std::min(1.0 / detail::kMinFactor, fac11 / detail::kSafety);
                ++stats_.steps_rejected;
                continue;
            }

            // Accepted: build the continuous extension, emit dense samples.
            detail::DenseStep<N> dense;
            dense.t0 = t;
            dense.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                double dy = y_new[i] - y[i];
                double bspl = h * k1[i] - dy;
                dense.r1[i] = y[i];
                dense.r2[i] = dy;
                dense.r3[i] = bspl;
                dense.r4[i] = dy - h * k7[i] - bspl;
                dense.r5[i] = h * (detail::d1 * k1[i] + detail::d3 * k3[i] +
                                   detail::d4 * k4[i] + detail::d5 * k5[i] +
                                   detail::d6 * k6[i] + detail::d7 * k7[i]);
            }
            double t_new = last ? t1 : t + h;
            while (next_sample < sample_times.size() &&
                   sample_times[next_sample] <=
                       t_new + kTimeEps * std::max(std::abs(t_new), 1.0)) {
                samples[next_sample] = dense.eval(sample_times[next_sample]);
                ++next_sample;
            }

            facold = std::max(err, 1e-4);
            y = y_new;
            k1 = k7;  // first-same-as-last
            t = t_new;
            ++stats_.steps_accepted;
            if (++total_steps_ > kMaxSteps) {
                throw IntegrationError("step budget exceeded", t);
            }
            h = std::min(h / fac, max_step);
        }
    }

    double initial_step(const RhsFn<N>& rhs, double t,
                        const std::array<double, N>& y,
                        const std::array<double, N>& k1, double max_step) {
        // Standard two-evaluation heuristic: match 0.01 of the tolerance scale.
        double dnf = 0.0, dny = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double scale = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
            double a = k1[i] / scale;
            double b = y[i] / scale;
            dnf += a * a;
            dny += b * b;
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10)
                       ? 1e-6
                       : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, max_step);

        std::array<double, N> y1, k2;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h * k1[i];
        eval(rhs, t + h, y1, k2);
        double der2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            double scale = cfg_.abs_tol + cfg_.rel_tol * std::abs(y[i]);
            double d = (k2[i] - k1[i]) / scale;
            der2 += d * d;
        }
        der2 = std::sqrt(der2) / h;
        double der12 = std::max(der2, std::sqrt(dnf));
        double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
        return std::min({100.0 * h, h1, max_step});
    }

    void eval(const RhsFn<N>& rhs, double t, const std::array<double, N>& y,
              std::array<double, N>& dydt) {
        rhs(t, y, dydt);
        ++stats_.rhs_evaluations;
        if (!detail::finite(dydt)) {
            throw IntegrationError("non-finite derivative", t);
        }
    }

    static constexpr long kMaxSteps = 50'000'000;
    IntegratorConfig cfg_;
    IntegrationStats stats_;
    long total_steps_ = 0;
};

// Classical fixed-step fourth-order Runge-Kutta over [t0, t1] with step h.
// h must divide the span to within rounding. Used as the independent oracle.
template <std::size_t N>
std::array<double, N> integrate_fixed_oracle(const RhsFn<N>& rhs,
                                             std::array<double, N> y,
                                             double t0, double t1, double h) {
    double span = t1 - t0;
    if (span == 0.0) return y;
    if (!(span > 0.0) || !(h > 0.0)) {
        throw IntegrationError("invalid span or step", t0);
    }
    auto n = static_cast<long long>(std::llround(span / h));
    if (n <= 0 || std::abs(n * h - span) > 1e-9 * span) {
        throw IntegrationError("step does not divide the span", t0);
    }
    std::array<double, N> k1, k2, k3, k4, tmp;
    for (long long step = 0; step < n; ++step) {
        double t = t0 + static_cast<double>(step) * h;
        rhs(t, y, k1);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < N; ++i) {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if (!detail::finite(y)) {
            throw IntegrationError("non-finite state", t + h);
        }
    }
    return y;
}

// Integrates one protocol run and assembles the dense Trajectory, splitting
// the span at t_mid. For the memory protocol `pulse` must be present.
Trajectory integrate_protocol(ProtocolKind kind, const SystemParams& params,
                              const std::optional<PulseParams>& pulse,
                              const IntegratorConfig& cfg);

}  // namespace cascade
