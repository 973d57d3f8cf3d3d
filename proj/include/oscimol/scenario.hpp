// scenario.hpp — Scenario configuration: presets for the studied parameter
// sets, JSON config files with strict (unknown keys rejected) parsing,
// resolved-config dumps, and sweep specifications.

#pragma once

#include <string>
#include <vector>

#include "oscimol/environment.hpp"
#include "oscimol/molecule.hpp"

namespace oscimol::app {

struct IntegratorConfig {
    int steps_per_period = 20000;
    double cycle_tol = 1e-6;
    int max_cycles = 200;
};

struct OutputConfig {
    std::string path = "out.csv";
    int stride = 20; // steps between CSV samples
};

enum class InitialState {
    Steady,         // static steady state of the t = 0 configuration
    MaximallyMixed, // I/4
};

struct ScenarioConfig {
    std::string scenario = "custom";
    mol::Trajectory trajectory = mol::HarmonicTrajectory{};
    mol::FieldProfile field;
    env::BathSpec bath = env::BosonicBath{};
    IntegratorConfig integrator;
    InitialState initial_state = InitialState::Steady;
    OutputConfig output;
};

// Full validation of ranges and cross-field constraints; throws InputError.
void validate_config(const ScenarioConfig& config);

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name); // InputError for unknown names

// Parse a JSON config. `base` supplies defaults for sections that are partial
// or absent (the file may also select a preset base itself via "scenario").
// Unknown keys are hard errors naming the offending path; parse errors carry
// line/column. `origin` labels error messages (usually the file path).
ScenarioConfig parse_config(const std::string& json_text, const std::string& origin,
                            const ScenarioConfig* base = nullptr);
ScenarioConfig load_config(const std::string& path, const ScenarioConfig* base = nullptr);

// Resolved config as JSON; parse_config(dump_config(c)) reproduces c exactly.
std::string dump_config(const ScenarioConfig& config);

struct SweepSpec {
    enum class Parameter { Tau, Gamma, S, Kappa, Beta };
    Parameter parameter = Parameter::Tau;
    std::vector<double> values; // ascending
};

// "tau=6,20,100" or "gamma=log:0.01:0.3:7" (log-spaced inclusive range).
SweepSpec parse_sweep(const std::string& text);

const char* sweep_parameter_name(SweepSpec::Parameter p);

// Validates every value against the parameter's range and the base config
// (e.g. a tau sweep needs a harmonic trajectory); throws InputError.
void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep);

ScenarioConfig apply_sweep_value(ScenarioConfig base, SweepSpec::Parameter parameter,
                                 double value);

} // namespace oscimol::app
