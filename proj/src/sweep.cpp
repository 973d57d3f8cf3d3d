#include "oscimol/sweep.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oscimol/csv.hpp"

namespace oscimol::app {

namespace {

SweepPoint run_point(const ScenarioConfig& base, SweepSpec::Parameter parameter, double value) {
    SweepPoint point;
    point.value = value;
    try {
        const ScenarioConfig config = apply_sweep_value(base, parameter, value);
        const ScenarioSummary summary = run_for_summary(config);
        point.c_m = summary.c_max;
        point.converged = summary.converged;
    } catch (const std::exception& e) {
        point.error = e.what();
        point.converged = false;
    }
    return point;
}

} // namespace

std::vector<SweepPoint> run_sweep_serial(const ScenarioConfig& base, const SweepSpec& sweep) {
    validate_sweep(base, sweep);
    std::vector<SweepPoint> points(sweep.values.size());
    for (std::size_t k = 0; k < sweep.values.size(); ++k)
        points[k] = run_point(base, sweep.parameter, sweep.values[k]);
    return points;
}

std::vector<SweepPoint> run_sweep_parallel(const ScenarioConfig& base, const SweepSpec& sweep,
                                           int max_threads) {
    validate_sweep(base, sweep);
    std::vector<SweepPoint> points(sweep.values.size());
#ifdef _OPENMP
    int threads = max_threads > 0 ? max_threads : thread_cap();
    threads = std::max(1, std::min(threads, omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (std::size_t k = 0; k < sweep.values.size(); ++k)
        points[k] = run_point(base, sweep.parameter, sweep.values[k]);
#else
    (void)max_threads;
    for (std::size_t k = 0; k < sweep.values.size(); ++k)
        points[k] = run_point(base, sweep.parameter, sweep.values[k]);
#endif
    return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
    std::string csv = "value,C_m,converged\n";
    for (const auto& p : points) {
        append_number(csv, p.value);
        csv += ',';
        append_optional(csv, p.c_m);
        csv += ',';
        csv += p.converged ? "true" : "false";
        csv += '\n';
    }
    for (const auto& p : points) {
        if (p.error.empty()) continue;
        csv += "# error: value=";
        append_number(csv, p.value);
        csv += ' ';
        csv += p.error;
        csv += '\n';
    }
    return csv;
}

int thread_cap() {
    const char* env = std::getenv("SIM_THREADS");
    if (env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == nullptr || *end != '\0' || v < 1)
            throw InputError("SIM_THREADS must be a positive integer, got \"" +
                             std::string(env) + "\"");
        return static_cast<int>(v);
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace oscimol::app
