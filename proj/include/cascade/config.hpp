#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/experiments.hpp"
#include "cascade/model.hpp"

// Run configuration: a flat key = value document with [section] headers.
// Sections: run, params, pulse, integrator, sweep, output. Every key has a
// documented default (the canonical write/read/memory figure parameters), so
// an empty document is a valid write-protocol configuration. Unknown sections
// or keys are rejected with their line number; missing required keys are
// reported collectively.

namespace cascade {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, int line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + what
                                       : what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct RunConfig {
    ProtocolKind protocol = ProtocolKind::Write;
    SystemParams params;
    std::optional<PulseParams> pulse;  // memory protocol only
    IntegratorConfig integrator;
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";
    int threads = 0;  // 0 = all available
};

// Parses and fully validates a configuration document. `forced_protocol`
// comes from the CLI subcommand; a conflicting [run] protocol key is an
// error. `overrides` are "key=value" pairs applied on top of the document
// before defaults are resolved (keys are unambiguous across sections).
// Throws ConfigError on parse/shape problems, ValidationError when the
// assembled parameters violate their invariants.
RunConfig parse_config(const std::string& text,
                       std::optional<ProtocolKind> forced_protocol = {},
                       const std::vector<std::string>& overrides = {});

RunConfig load_config_file(const std::string& path,
                           std::optional<ProtocolKind> forced_protocol = {},
                           const std::vector<std::string>& overrides = {});

}  // namespace cascade
