// config.hpp: the run configuration read by the command-line tool.
//
// Format: one `key = value` per line, dotted sections, `#` starts a comment.
//
//   scenario = fig3             # optional preset: params, initial state, horizon
//   params.r1 = 2.5
//   params.gamma1 = 1.0
//   initial = case1_b           # preset name, or explicit initial.* entries
//   initial.bc_re = -0.5
//   integrator.method = rk45
//   sweep.r1 = 0.01, 0.1, 1
//
// Explicit keys override the scenario preset. Unknown keys are rejected.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lambda_cpt/core.hpp"
#include "lambda_cpt/integrator.hpp"

namespace lambda_cpt {

enum class Command { Simulate, Steady, Sweep, Dressed, Scenarios };

std::string_view to_string(Command command) noexcept;
std::optional<Command> parse_command(std::string_view text) noexcept;

class ConfigError : public Error {
public:
    ConfigError(int line, int column, const std::string& message);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

struct OutputSpec {
    std::string dir = ".";
    std::string csv = "trajectory.csv";
    std::string json = "summary.json";

    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

// Empty axes take the single value from `params`.
struct SweepAxes {
    std::vector<double> r1;
    std::vector<double> r2;
    std::vector<double> gamma1;
    std::vector<double> gamma2;

    friend bool operator==(const SweepAxes&, const SweepAxes&) = default;
};

struct RunConfig {
    Command command = Command::Simulate;
    std::optional<std::string> scenario;
    SystemParams params{0.0, 0.0, 1.0, 1.0};
    DensityMatrix initial = DensityMatrix::diagonal(0.0, 1.0, 0.0);
    std::string initial_label = "case1_b";
    IntegratorConfig integrator;
    OutputSpec output;
    SweepAxes sweep;
    std::optional<double> dressed_r1;
    std::optional<double> dressed_r2;

    std::vector<SystemParams> sweep_grid() const;
};

bool semantically_equal(const RunConfig& x, const RunConfig& y);

/// Parses and validates. Syntax problems and unknown keys throw ConfigError
/// (with line and column); invariant violations throw ValidationError.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

// Inverse of parse_config; every field is written explicitly.
std::string serialize_config(const RunConfig& config);

} // namespace lambda_cpt
