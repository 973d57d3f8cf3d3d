// simulate — CLI for the oscillating-molecule entanglement engine.
//
// Modes:
//   (default)        propagate the scenario to its asymptotic cycle, write the
//                    observable time series as CSV with a trailing summary block
//   --sweep p=spec   run one scenario per parameter value, write value,C_m,converged
//   --static-profile sweep one trajectory period, write the frozen-configuration
//                    steady-state entanglement landscape
//
// Exit codes: 0 success (including converged=false), 2 configuration error,
// 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oscimol/runner.hpp"
#include "oscimol/scenario.hpp"
#include "oscimol/sweep.hpp"

namespace {

using namespace oscimol;

int run(const app::ScenarioConfig& config, const std::optional<std::string>& sweep_arg,
        bool static_profile, const std::string& dump_path, bool dry_run) {
    if (!dump_path.empty()) app::write_file(dump_path, app::dump_config(config));
    if (dry_run) {
        std::cout << "config ok: scenario=" << config.scenario << " output=" << config.output.path
                  << "\n";
        return 0;
    }

    if (sweep_arg && static_profile)
        throw InputError("--sweep and --static-profile are mutually exclusive");

    if (static_profile) {
        const auto rows = app::static_profile_parallel(config, app::thread_cap());
        app::write_file(config.output.path, app::profile_csv(rows));
        std::cout << "static profile: " << rows.size() << " rows -> " << config.output.path
                  << "\n";
        return 0;
    }

    if (sweep_arg) {
        const app::SweepSpec sweep = app::parse_sweep(*sweep_arg);
        const int threads = app::thread_cap();
        const auto points = threads > 1 ? app::run_sweep_parallel(config, sweep, threads)
                                        : app::run_sweep_serial(config, sweep);
        app::write_file(config.output.path, app::sweep_csv(points));
        std::cout << "sweep " << app::sweep_parameter_name(sweep.parameter) << ": "
                  << points.size() << " points -> " << config.output.path << "\n";
        for (const auto& p : points)
            if (!p.error.empty())
                std::cerr << "sweep point " << p.value << " failed: " << p.error << "\n";
        return 0;
    }

    const app::RunResult result = app::run_scenario(config);
    app::write_file(config.output.path, result.csv);

    const auto& s = result.summary;
    std::cout << "scenario " << config.scenario << " -> " << config.output.path << "\n";
    std::cout << "converged=" << (s.converged ? "true" : "false") << " n_cycles=" << s.n_cycles
              << " residual=" << s.residual << "\n";
    std::cout << "C_max=" << s.c_max << " first_cycle_C_max=" << s.first_cycle_c_max
              << " p_g=[" << s.p_g_min << ", " << s.p_g_max << "]\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Lindblad dynamics of an oscillating two-spin molecule in a noisy environment"};

    std::string config_path, preset_name, out_path, sweep_arg, dump_path;
    bool static_profile = false, dry_run = false;

    cli.add_option("--config", config_path, "JSON scenario config (may override a preset)");
    cli.add_option("--preset", preset_name,
                   "preset scenario: fig3, fig4, cme-spingas, lms-tau6, lms-tau20, lms-tau100, "
                   "constspeed, subohmic, supraohmic");
    cli.add_option("--out", out_path, "output CSV path (overrides output.path)");
    cli.add_option("--sweep", sweep_arg,
                   "parameter sweep, e.g. tau=6,20,100 or gamma=log:0.01:0.3:7");
    cli.add_flag("--static-profile", static_profile,
                 "emit the static steady-state profile over one period");
    cli.add_option("--dump-config", dump_path, "write the resolved config JSON to this path");
    cli.add_flag("--dry-run", dry_run, "validate (and optionally dump) the config, then exit");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return 2;
    }

    try {
        if (preset_name.empty() && config_path.empty())
            throw oscimol::InputError("need --preset and/or --config");

        oscimol::app::ScenarioConfig config;
        if (!preset_name.empty()) config = oscimol::app::preset(preset_name);
        if (!config_path.empty())
            config = oscimol::app::load_config(config_path,
                                               preset_name.empty() ? nullptr : &config);
        if (!out_path.empty()) config.output.path = out_path;

        const std::optional<std::string> sweep =
            sweep_arg.empty() ? std::nullopt : std::make_optional(sweep_arg);
        return run(config, sweep, static_profile, dump_path, dry_run);
    } catch (const oscimol::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const oscimol::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected failure: " << e.what() << "\n";
        return 3;
    }
}
