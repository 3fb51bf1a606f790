// cascade-sim: command-line driver for the cascaded optomechanical
// state-transfer protocols. Subcommands: write, read, memory, sweep.
//
// Exit codes: 0 success, 1 configuration error, 2 integration error,
// 3 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cascade/config.hpp"
#include "cascade/experiments.hpp"
#include "cascade/io.hpp"
#include "cascade/metrics.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> params;
    int threads = -1;  // -1: not given on the command line
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--param", args.params,
                    "override a config value, key=value (repeatable)");
    cmd->add_option("--threads", args.threads,
                    "worker threads for sweeps (0 = all cores)");
}

cascade::RunConfig load(const CommonArgs& args,
                        std::optional<cascade::ProtocolKind> protocol) {
    cascade::RunConfig cfg =
        args.config_path.empty()
            ? cascade::parse_config("", protocol, args.params)
            : cascade::load_config_file(args.config_path, protocol, args.params);
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    if (args.threads >= 0) {
        cfg.threads = args.threads;
    } else if (cfg.threads == 0) {
        if (const char* env = std::getenv("CASCADE_SIM_THREADS")) {
            cfg.threads = std::max(0, std::atoi(env));
        }
    }
    return cfg;
}

std::string join_path(const std::string& dir, const char* name) {
    return (std::filesystem::path(dir) / name).string();
}

int run_protocol_command(const CommonArgs& args,
                         cascade::ProtocolKind protocol) {
    cascade::RunConfig cfg = load(args, protocol);
    cascade::Trajectory traj = cascade::occupation_trace(
        cfg.protocol, cfg.params, cfg.pulse, cfg.integrator);
    cascade::EfficiencyReport report = cascade::efficiency(traj);

    cascade::atomic_write_file(join_path(cfg.output_dir, "trace.csv"),
                               cascade::trace_csv(traj));
    std::string summary = cascade::run_summary(traj, report);
    cascade::atomic_write_file(join_path(cfg.output_dir, "summary.txt"),
                               summary);
    std::cout << summary;
    return 0;
}

int run_sweep_command(const CommonArgs& args) {
    cascade::RunConfig cfg = load(args, std::nullopt);
    if (!cfg.sweep) {
        throw cascade::ConfigError(
            "the sweep subcommand requires a [sweep] section");
    }
    cascade::SweepResult result = cascade::run_sweep(*cfg.sweep, cfg.threads);

    cascade::atomic_write_file(join_path(cfg.output_dir, "sweep.csv"),
                               cascade::sweep_csv(result));
    std::string summary = cascade::sweep_summary(result);
    cascade::atomic_write_file(join_path(cfg.output_dir, "summary.txt"),
                               summary);
    std::cout << summary;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cascaded cavity-optomechanics state-transfer simulator"};
    app.require_subcommand(1);

    CommonArgs write_args, read_args, memory_args, sweep_args;
    CLI::App* write_cmd =
        app.add_subcommand("write", "optical cavity -> mechanical oscillator");
    CLI::App* read_cmd =
        app.add_subcommand("read", "mechanical oscillator -> optical cavity");
    CLI::App* memory_cmd =
        app.add_subcommand("memory", "pulsed-coupling storage and retrieval");
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "parameter sweep from the [sweep] section");
    add_common(write_cmd, write_args);
    add_common(read_cmd, read_args);
    add_common(memory_cmd, memory_args);
    add_common(sweep_cmd, sweep_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (write_cmd->parsed()) {
            return run_protocol_command(write_args,
                                        cascade::ProtocolKind::Write);
        }
        if (read_cmd->parsed()) {
            return run_protocol_command(read_args, cascade::ProtocolKind::Read);
        }
        if (memory_cmd->parsed()) {
            return run_protocol_command(memory_args,
                                        cascade::ProtocolKind::Memory);
        }
        return run_sweep_command(sweep_args);
    } catch (const cascade::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cascade::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const cascade::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << "\n";
        return 2;
    } catch (const cascade::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
