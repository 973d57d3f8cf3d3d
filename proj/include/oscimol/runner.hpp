// runner.hpp — Scenario execution: propagate a configured scenario to its
// asymptotic cycle, stream per-sample observables into CSV, and report the
// summary. Also the static profile: the steady-state entanglement landscape
// along one trajectory period.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscimol/dynamics.hpp"
#include "oscimol/observables.hpp"
#include "oscimol/scenario.hpp"

namespace oscimol::app {

struct ScenarioSummary {
    bool converged = false;
    int n_cycles = 0;
    double residual = 0.0;
    double c_max = 0.0;            // max concurrence on the asymptotic cycle
    double first_cycle_c_max = 0.0;
    double p_g_min = 0.0;          // over the asymptotic cycle
    double p_g_max = 0.0;
    std::optional<double> min_t_spec;
    // of the asymptotic-cycle samples with C > 0.01, the fraction with J_h > 0
    std::optional<double> heat_positive_while_entangled;
    int entangled_samples = 0;
    double entropy_range = 0.0; // max - min entropy over the asymptotic cycle
    double max_adiabaticity_ratio = 0.0;
};

struct RunResult {
    ScenarioSummary summary;
    std::string csv; // header, every strided sample of every cycle, summary block
    dyn::CycleReport report;
};

// Initial state selected by the config (steady state of the t = 0
// configuration, or I/4).
la::ComplexMatrix initial_state(const ScenarioConfig& config);

RunResult run_scenario(const ScenarioConfig& config);

// Reduced runner for sweeps: no CSV accumulation, summary only.
ScenarioSummary run_for_summary(const ScenarioConfig& config);

struct ProfileRow {
    double d = 0.0;
    double J = 0.0;
    double B = 0.0;
    double c_static = 0.0; // steady-state concurrence at the frozen configuration
    double t_c = 0.0;      // critical temperature of the thermal state
};

// One trajectory period sampled on the output grid. The parallel variant
// distributes rows over OpenMP threads (capped by max_threads) and produces
// output identical to the serial one.
std::vector<ProfileRow> static_profile_serial(const ScenarioConfig& config);
std::vector<ProfileRow> static_profile_parallel(const ScenarioConfig& config, int max_threads);

std::string profile_csv(const std::vector<ProfileRow>& rows);

void write_file(const std::string& path, const std::string& content);

} // namespace oscimol::app
