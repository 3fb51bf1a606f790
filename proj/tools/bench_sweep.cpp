// Compares the serial and OpenMP sweep kernels on the canonical coupling
// sweep (write protocol, 201 grid points) and checks that both produce the
// same table bit for bit.

#include <chrono>
#include <cmath>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cascade/experiments.hpp"

using namespace cascade;

namespace {

double run_ms(const char* label, SweepResult& out, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    out = fn();
    auto stop = std::chrono::steady_clock::now();
    double ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    std::printf("%-22s %8.1f ms  (argmax G = %.4f, eta = %.6f)\n", label, ms,
                out.argmax_parameter(), out.max_eta());
    return ms;
}

}  // namespace

int main() {
    SweepSpec spec;
    spec.protocol = ProtocolKind::Write;
    spec.parameter = SweepParameter::Coupling;
    spec.min = 0.0;
    spec.max = 0.5;
    spec.points = 201;
    spec.base.t_final = 25.0;
    spec.base.t_mid = 13.0;

#ifdef _OPENMP
    int threads = omp_get_max_threads();
#else
    int threads = 1;
#endif
    std::printf("coupling sweep, %d points, %d thread(s)\n", spec.points,
                threads);

    SweepResult serial, parallel;
    double t_serial = run_ms("serial reference", serial,
                             [&] { return run_sweep_serial(spec); });
    double t_parallel =
        run_ms("openmp kernel", parallel, [&] { return run_sweep(spec, 0); });

    bool identical = serial.eta == parallel.eta &&
                     serial.parameter_values == parallel.parameter_values;
    std::printf("tables identical: %s\n", identical ? "yes" : "NO");
    std::printf("speedup: %.2fx\n", t_serial / t_parallel);
    return identical ? 0 : 1;
}
