#include "oscimol/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "oscimol/csv.hpp"

namespace oscimol::app {

namespace {

constexpr double kEntangledThreshold = 0.01;

void append_record(std::string& csv, const obs::ObservableRecord& rec, double t_abs) {
    append_number(csv, t_abs);
    csv += ',';
    append_number(csv, rec.d);
    csv += ',';
    append_number(csv, rec.J);
    csv += ',';
    append_number(csv, rec.B);
    csv += ',';
    append_number(csv, rec.p_g);
    csv += ',';
    append_number(csv, rec.C);
    csv += ',';
    append_number(csv, rec.J_h);
    csv += ',';
    append_number(csv, rec.S);
    csv += ',';
    append_optional(csv, rec.T_spec);
    csv += '\n';
}

struct CycleStats {
    double c_max = 0.0;
    double p_g_min = 1.0, p_g_max = 0.0;
    std::optional<double> min_t_spec;
    int entangled = 0, entangled_heating = 0;
    double s_min = 0.0, s_max = 0.0;
    bool any = false;

    void add(const obs::ObservableRecord& rec) {
        c_max = std::max(c_max, rec.C);
        p_g_min = std::min(p_g_min, rec.p_g);
        p_g_max = std::max(p_g_max, rec.p_g);
        if (rec.T_spec && (!min_t_spec || *rec.T_spec < *min_t_spec)) min_t_spec = rec.T_spec;
        if (rec.C > kEntangledThreshold) {
            ++entangled;
            if (rec.J_h > 0.0) ++entangled_heating;
        }
        s_min = any ? std::min(s_min, rec.S) : rec.S;
        s_max = any ? std::max(s_max, rec.S) : rec.S;
        any = true;
    }
};

ScenarioSummary summarize(const mol::MoleculeModel& model, const ScenarioConfig& config,
                          const dyn::CycleReport& report, double tau, double first_cycle_c_max) {
    CycleStats stats;
    for (const auto& sample : report.cycle_states) {
        const double local_t = sample.t - (report.n_cycles - 1) * tau;
        stats.add(obs::observe(model, config.bath, local_t, sample.rho));
    }

    ScenarioSummary s;
    s.converged = report.converged;
    s.n_cycles = report.n_cycles;
    s.residual = report.residual;
    s.c_max = stats.c_max;
    s.first_cycle_c_max = first_cycle_c_max;
    s.p_g_min = stats.p_g_min;
    s.p_g_max = stats.p_g_max;
    s.min_t_spec = stats.min_t_spec;
    if (stats.entangled > 0)
        s.heat_positive_while_entangled =
            static_cast<double>(stats.entangled_heating) / stats.entangled;
    s.entangled_samples = stats.entangled;
    s.entropy_range = stats.any ? stats.s_max - stats.s_min : 0.0;
    s.max_adiabaticity_ratio = report.max_adiabaticity_ratio;
    return s;
}

void append_summary(std::string& csv, const ScenarioSummary& s) {
    csv += "# summary: converged=";
    csv += s.converged ? "true" : "false";
    csv += " n_cycles=";
    append_number(csv, s.n_cycles);
    csv += " residual=";
    append_number(csv, s.residual);
    csv += '\n';

    csv += "# summary: C_max=";
    append_number(csv, s.c_max);
    csv += " first_cycle_C_max=";
    append_number(csv, s.first_cycle_c_max);
    csv += '\n';

    csv += "# summary: p_g_min=";
    append_number(csv, s.p_g_min);
    csv += " p_g_max=";
    append_number(csv, s.p_g_max);
    csv += '\n';

    csv += "# summary: min_T_spec=";
    append_optional(csv, s.min_t_spec);
    csv += " heat_positive_while_entangled=";
    append_optional(csv, s.heat_positive_while_entangled);
    csv += " entangled_samples=";
    append_number(csv, s.entangled_samples);
    csv += '\n';

    csv += "# summary: entropy_range=";
    append_number(csv, s.entropy_range);
    csv += " max_adiabaticity_ratio=";
    append_number(csv, s.max_adiabaticity_ratio);
    csv += '\n';
}

} // namespace

la::ComplexMatrix initial_state(const ScenarioConfig& config) {
    if (config.initial_state == InitialState::MaximallyMixed) {
        la::ComplexMatrix m = la::ComplexMatrix::identity(4);
        m *= 0.25;
        return m;
    }
    const mol::MoleculeModel model(config.trajectory, config.field);
    const mol::Configuration c = model.config_at(0.0);
    return obs::static_steady_state(c.J, c.B, config.bath);
}

RunResult run_scenario(const ScenarioConfig& config) {
    validate_config(config);
    const mol::MoleculeModel model(config.trajectory, config.field);

    dyn::CycleOptions opt;
    opt.tau = model.period();
    opt.steps_per_period = config.integrator.steps_per_period;
    opt.cycle_tol = config.integrator.cycle_tol;
    opt.max_cycles = config.integrator.max_cycles;
    opt.stride = config.output.stride;

    RunResult out;
    out.csv = "# hbar=1, k_B=1, thermal units\n";
    out.csv += "t,d,J,B,p_g,C,J_h,S,T_spec\n";

    double first_cycle_c_max = 0.0;
    const auto sink = [&](int cycle, const dyn::Sample& sample) {
        const double local_t = sample.t - cycle * opt.tau;
        const obs::ObservableRecord rec = obs::observe(model, config.bath, local_t, sample.rho);
        append_record(out.csv, rec, sample.t);
        if (cycle == 0) first_cycle_c_max = std::max(first_cycle_c_max, rec.C);
    };

    out.report = dyn::find_asymptotic_cycle(model, config.bath, initial_state(config), opt, sink);

    out.summary = summarize(model, config, out.report, opt.tau, first_cycle_c_max);

    if (out.summary.max_adiabaticity_ratio > dyn::kAdiabaticWarnLevel)
        std::cerr << "warning: adiabaticity ratio " << out.summary.max_adiabaticity_ratio
                  << " exceeds " << dyn::kAdiabaticWarnLevel
                  << "; the driven motion is fast for the eigenbasis generator construction\n";

    append_summary(out.csv, out.summary);
    return out;
}

ScenarioSummary run_for_summary(const ScenarioConfig& config) {
    validate_config(config);
    const mol::MoleculeModel model(config.trajectory, config.field);

    dyn::CycleOptions opt;
    opt.tau = model.period();
    opt.steps_per_period = config.integrator.steps_per_period;
    opt.cycle_tol = config.integrator.cycle_tol;
    opt.max_cycles = config.integrator.max_cycles;
    opt.stride = config.output.stride;

    // first-cycle entanglement is cheap to track; full records only at the end
    double first_cycle_c_max = 0.0;
    const auto sink = [&](int cycle, const dyn::Sample& sample) {
        if (cycle == 0)
            first_cycle_c_max = std::max(first_cycle_c_max, obs::concurrence(sample.rho));
    };

    const dyn::CycleReport report =
        dyn::find_asymptotic_cycle(model, config.bath, initial_state(config), opt, sink);
    return summarize(model, config, report, opt.tau, first_cycle_c_max);
}

namespace {

ProfileRow profile_row(const mol::MoleculeModel& model, const ScenarioConfig& config, double t) {
    const mol::Configuration c = model.config_at(t);
    ProfileRow row;
    row.d = c.d;
    row.J = c.J;
    row.B = c.B;
    if (const auto* bos = std::get_if<env::BosonicBath>(&config.bath))
        row.c_static = obs::static_concurrence(c.J, c.B, bos->beta);
    else
        row.c_static = obs::concurrence(obs::static_steady_state(c.J, c.B, config.bath));
    row.t_c = obs::critical_temperature(c.J, c.B);
    return row;
}

std::vector<double> profile_times(const mol::MoleculeModel& model, const ScenarioConfig& config) {
    const int n = config.integrator.steps_per_period / config.output.stride;
    std::vector<double> times(n);
    const double h = model.period() / config.integrator.steps_per_period;
    for (int k = 0; k < n; ++k) times[k] = (k * config.output.stride) * h;
    return times;
}

} // namespace

std::vector<ProfileRow> static_profile_serial(const ScenarioConfig& config) {
    validate_config(config);
    const mol::MoleculeModel model(config.trajectory, config.field);
    const std::vector<double> times = profile_times(model, config);
    std::vector<ProfileRow> rows(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) rows[k] = profile_row(model, config, times[k]);
    return rows;
}

std::vector<ProfileRow> static_profile_parallel(const ScenarioConfig& config, int max_threads) {
    validate_config(config);
    const mol::MoleculeModel model(config.trajectory, config.field);
    const std::vector<double> times = profile_times(model, config);
    std::vector<ProfileRow> rows(times.size());
#ifdef _OPENMP
    const int threads = std::max(1, std::min(max_threads, omp_get_max_threads()));
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
    for (std::size_t k = 0; k < times.size(); ++k) rows[k] = profile_row(model, config, times[k]);
#else
    (void)max_threads;
    for (std::size_t k = 0; k < times.size(); ++k) rows[k] = profile_row(model, config, times[k]);
#endif
    return rows;
}

std::string profile_csv(const std::vector<ProfileRow>& rows) {
    std::string csv = "# hbar=1, k_B=1, thermal units\n";
    csv += "d,J,B,C_static,T_c\n";
    for (const auto& r : rows) {
        append_number(csv, r.d);
        csv += ',';
        append_number(csv, r.J);
        csv += ',';
        append_number(csv, r.B);
        csv += ',';
        append_number(csv, r.c_static);
        csv += ',';
        append_number(csv, r.t_c);
        csv += '\n';
    }
    return csv;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file \"" + path + "\"");
    out << content;
    if (!out) throw NumericalError("failed writing \"" + path + "\"");
}

} // namespace oscimol::app
