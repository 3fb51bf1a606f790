#include "cascade/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace cascade {

namespace fs = std::filesystem;

std::string format_full(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string trace_csv(const Trajectory& traj) {
    std::string out =
        "t,re_a1,im_a1,re_b,im_b,re_a2,im_a2,n1,nb,n2,kappa1,kappa2,g,"
        "leaked_cum\n";
    for (const TrajectorySample& s : traj.samples) {
        const ModeState& m = s.state;
        out += format_full(s.t);
        for (double v :
             {m.alpha1.real(), m.alpha1.imag(), m.beta.real(), m.beta.imag(),
              m.alpha2.real(), m.alpha2.imag(), m.n1(), m.nb(), m.n2(),
              s.kappa1, s.kappa2, s.g, s.leaked_cum}) {
            out += ',';
            out += format_full(v);
        }
        out += '\n';
    }
    return out;
}

std::string sweep_csv(const SweepResult& result) {
    std::string out = "param,eta\n";
    for (std::size_t i = 0; i < result.parameter_values.size(); ++i) {
        out += format_full(result.parameter_values[i]);
        out += ',';
        out += format_full(result.eta[i]);
        out += '\n';
    }
    return out;
}

namespace {

void append_kv(std::string& out, const std::string& key, double value) {
    out += key + " = " + format_full(value) + "\n";
}

const char* eta_key(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::Write: return "eta_w";
        case ProtocolKind::Read: return "eta_r";
        case ProtocolKind::Memory: return "eta_mem";
    }
    return "eta";
}

}  // namespace

std::string run_summary(const Trajectory& traj, const EfficiencyReport& report) {
    std::string out;
    out += "protocol = " + protocol_name(traj.protocol) + "\n";
    out += std::string(eta_key(traj.protocol)) + " = " +
           format_full(report.eta) + "\n";
    append_kv(out, "n1_final", report.n1_final);
    append_kv(out, "nb_final", report.nb_final);
    append_kv(out, "n2_final", report.n2_final);
    append_kv(out, "leaked_total", report.leaked_total);
    append_kv(out, "mech_loss_total", report.mech_loss_total);
    if (report.lossless) {
        append_kv(out, "energy_balance_residual", report.balance_residual);
    } else {
        out += "energy_balance_residual = n/a (lossy channel)\n";
    }
    const SystemParams& p = traj.params;
    append_kv(out, "kappa1_max", p.kappa1_max);
    append_kv(out, "kappa2_max", p.kappa2_max);
    append_kv(out, "gamma", p.gamma);
    append_kv(out, "omega_m", p.omega_m);
    append_kv(out, "q_factor", p.q_factor());
    append_kv(out, "eta_tr", p.eta_tr);
    append_kv(out, "t1_cav1_inv", p.t1_cav1_inv);
    append_kv(out, "t1_cav2_inv", p.t1_cav2_inv);
    append_kv(out, "t_final", p.t_final);
    append_kv(out, "t_mid", p.t_mid);
    if (traj.pulse) {
        const PulseParams& pl = *traj.pulse;
        append_kv(out, "g0", pl.g0);
        append_kv(out, "sigma", pl.sigma);
        append_kv(out, "pulse_t1", pl.t1);
        append_kv(out, "pulse_t2", pl.t2);
        // Two storage-time readings, reported side by side: the gap between
        // the pulse centers, and five switchover times.
        double storage_gap = pl.t2 - pl.t1;
        double storage_five_tmid = 5.0 * p.t_mid;
        append_kv(out, "t_storage_pulse_gap", storage_gap);
        append_kv(out, "t_storage_five_t_mid", storage_five_tmid);
        append_kv(out, "decay_estimate_pulse_gap",
                  std::exp(-p.gamma * storage_gap));
        append_kv(out, "decay_estimate_five_t_mid",
                  std::exp(-p.gamma * storage_five_tmid));
    } else {
        append_kv(out, "coupling", p.coupling);
    }
    append_kv(out, "rel_tol", traj.integrator.rel_tol);
    append_kv(out, "abs_tol", traj.integrator.abs_tol);
    out += "dense_samples = " + std::to_string(traj.integrator.dense_samples) +
           "\n";
    return out;
}

std::string sweep_summary(const SweepResult& result) {
    std::string out;
    out += "protocol = " + protocol_name(result.spec.protocol) + "\n";
    out += "swept_parameter = " + sweep_parameter_name(result.spec.parameter) +
           "\n";
    append_kv(out, "grid_min", result.spec.min);
    append_kv(out, "grid_max", result.spec.max);
    out += "grid_points = " + std::to_string(result.spec.points) + "\n";
    out += std::string("grid_scale = ") +
           (result.spec.log_scale ? "log" : "linear") + "\n";
    append_kv(out, "argmax_parameter", result.argmax_parameter());
    append_kv(out, "max_eta", result.max_eta());
    if (result.spec.parameter == SweepParameter::QFactor) {
        SaturationInfo info = saturation_info(result);
        append_kv(out, "saturation_eta", info.saturation_eta);
        append_kv(out, "saturation_knee_q", info.knee_parameter);
    }
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    fs::path target(path);
    std::error_code ec;
    if (target.has_parent_path()) {
        fs::create_directories(target.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory '" +
                          target.parent_path().string() + "': " + ec.message());
        }
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw IoError("failed while writing '" + tmp.string() + "'");
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename temp file onto '" + path + "'");
    }
}

std::vector<TraceRow> read_trace_csv(const std::string& content) {
    std::vector<TraceRow> rows;
    std::istringstream stream(content);
    std::string line;
    if (!std::getline(stream, line)) {
        throw IoError("empty trace csv");
    }
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        std::array<double, 14> fields{};
        std::size_t start = 0;
        for (int i = 0; i < 14; ++i) {
            std::size_t end = line.find(',', start);
            std::string cell = line.substr(
                start, end == std::string::npos ? std::string::npos
                                                : end - start);
            fields[static_cast<std::size_t>(i)] = std::stod(cell);
            if (end == std::string::npos && i != 13) {
                throw IoError("short trace csv row: " + line);
            }
            start = end + 1;
        }
        rows.push_back(TraceRow{fields[0], fields[7], fields[8], fields[9]});
    }
    return rows;
}

}  // namespace cascade
