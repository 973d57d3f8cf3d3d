// sweep.hpp — Parameter sweeps: one scenario run per value, reduced to the
// maximal concurrence on the asymptotic cycle (C_m). Points are independent,
// so the parallel variant distributes them over OpenMP threads; results are
// merged in value order and are identical to the serial variant's.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscimol/runner.hpp"
#include "oscimol/scenario.hpp"

namespace oscimol::app {

struct SweepPoint {
    double value = 0.0;
    std::optional<double> c_m; // empty when the point failed
    bool converged = false;
    std::string error; // nonempty when the point failed; the sweep continues
};

std::vector<SweepPoint> run_sweep_serial(const ScenarioConfig& base, const SweepSpec& sweep);

// max_threads <= 0 means the SIM_THREADS cap (or all cores).
std::vector<SweepPoint> run_sweep_parallel(const ScenarioConfig& base, const SweepSpec& sweep,
                                           int max_threads = 0);

// value,C_m,converged rows; failed points keep an empty C_m and add a
// trailing comment line with the error message.
std::string sweep_csv(const std::vector<SweepPoint>& points);

// Concurrency cap: SIM_THREADS if set (must be a positive integer), else the
// hardware thread count.
int thread_cap();

} // namespace oscimol::app
