// bench — Compares the serial reference implementations against the
// OpenMP-parallel ones on the two data-parallel surfaces (parameter sweeps
// and static profiles), verifying identical output and reporting timings.

#include <chrono>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oscimol/runner.hpp"
#include "oscimol/scenario.hpp"
#include "oscimol/sweep.hpp"

using namespace oscimol;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"serial vs OpenMP benchmark for sweeps and static profiles"};
    int points = 6;
    int threads = 0;
    cli.add_option("--points", points, "sweep points")->check(CLI::PositiveNumber);
    cli.add_option("--threads", threads, "thread cap (0: SIM_THREADS or all cores)");
    CLI11_PARSE(cli, argc, argv);

    if (threads <= 0) threads = app::thread_cap();
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d, using %d\n", omp_get_max_threads(), threads);
#else
    std::printf("OpenMP disabled at build time; parallel variants run serially\n");
#endif

    // sweep benchmark: spin-gas tau sweep at reduced resolution
    app::ScenarioConfig config = app::preset("fig4");
    config.integrator.steps_per_period = 2000;
    config.output.stride = 10;
    app::SweepSpec sweep =
        app::parse_sweep("tau=log:8:40:" + std::to_string(points));

    auto t0 = Clock::now();
    const auto serial = app::run_sweep_serial(config, sweep);
    const double t_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel = app::run_sweep_parallel(config, sweep, threads);
    const double t_parallel = seconds_since(t0);

    const bool sweep_match = app::sweep_csv(serial) == app::sweep_csv(parallel);
    std::printf("sweep   %2d points: serial %7.3f s   parallel %7.3f s   speedup %.2fx   %s\n",
                points, t_serial, t_parallel, t_serial / t_parallel,
                sweep_match ? "outputs identical" : "OUTPUT MISMATCH");

    // profile benchmark: spin-gas null-space solves along one period
    app::ScenarioConfig prof = app::preset("fig4");
    prof.integrator.steps_per_period = 20000;
    prof.output.stride = 10; // 2000 rows

    t0 = Clock::now();
    const auto rows_serial = app::static_profile_serial(prof);
    const double p_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto rows_parallel = app::static_profile_parallel(prof, threads);
    const double p_parallel = seconds_since(t0);

    const bool prof_match = app::profile_csv(rows_serial) == app::profile_csv(rows_parallel);
    std::printf("profile %4zu rows: serial %7.3f s   parallel %7.3f s   speedup %.2fx   %s\n",
                rows_serial.size(), p_serial, p_parallel, p_serial / p_parallel,
                prof_match ? "outputs identical" : "OUTPUT MISMATCH");

    return (sweep_match && prof_match) ? 0 : 1;
}
