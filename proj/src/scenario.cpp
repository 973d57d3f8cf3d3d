#include "oscimol/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace oscimol::app {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw InputError(msg); }

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Strict object reader: every key must be consumed, leftovers are errors.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail("config: " + (path_.empty() ? "root" : path_) + " must be an object");
    }

    bool has(const char* key) const { return obj_.contains(key); }

    double number(const char* key) {
        require(key);
        return as_number(key);
    }

    double number_or(const char* key, double fallback) {
        if (!has(key)) return fallback;
        return as_number(key);
    }

    int integer_or(const char* key, int fallback) {
        if (!has(key)) return fallback;
        mark(key);
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) fail("config: " + item(key) + " must be an integer");
        return v.get<int>();
    }

    std::string string_or(const char* key, const std::string& fallback) {
        if (!has(key)) return fallback;
        mark(key);
        const json& v = obj_.at(key);
        if (!v.is_string()) fail("config: " + item(key) + " must be a string");
        return v.get<std::string>();
    }

    const json* object(const char* key) {
        if (!has(key)) return nullptr;
        mark(key);
        const json& v = obj_.at(key);
        if (!v.is_object()) fail("config: " + item(key) + " must be an object");
        return &v;
    }

    const json* array(const char* key) {
        if (!has(key)) return nullptr;
        mark(key);
        const json& v = obj_.at(key);
        if (!v.is_array()) fail("config: " + item(key) + " must be an array");
        return &v;
    }

    // call after all expected keys were consumed
    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                fail("config: unknown key \"" + item(it.key().c_str()) + "\"");
    }

    std::string item(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    void require(const char* key) {
        if (!has(key)) fail("config: missing required key \"" + item(key) + "\"");
    }
    void mark(const char* key) { seen_.insert(key); }
    double as_number(const char* key) {
        mark(key);
        const json& v = obj_.at(key);
        if (!v.is_number()) fail("config: " + item(key) + " must be a number");
        return v.get<double>();
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

mol::Trajectory parse_trajectory(const json& node, const mol::Trajectory* base) {
    ObjectReader r(node, "trajectory");
    const std::string variant = r.string_or("variant", "");
    if (variant.empty()) {
        if (!base) fail("config: trajectory.variant is required");
        // partial override of the base variant
        if (const auto* h = std::get_if<mol::HarmonicTrajectory>(base)) {
            mol::HarmonicTrajectory out = *h;
            out.x1_0 = r.number_or("x1_0", out.x1_0);
            out.x2_0 = r.number_or("x2_0", out.x2_0);
            out.a = r.number_or("a", out.a);
            out.tau = r.number_or("tau", out.tau);
            r.finish();
            return out;
        }
        if (const auto* c = std::get_if<mol::ConstantSpeedTrajectory>(base)) {
            mol::ConstantSpeedTrajectory out = *c;
            out.x1_0 = r.number_or("x1_0", out.x1_0);
            out.x2_0 = r.number_or("x2_0", out.x2_0);
            out.speed = r.number_or("speed", out.speed);
            out.d_min = r.number_or("d_min", out.d_min);
            out.dwell = r.number_or("dwell", out.dwell);
            r.finish();
            return out;
        }
        fail("config: trajectory.variant is required when overriding a sampled trajectory");
    }

    if (variant == "harmonic") {
        mol::HarmonicTrajectory out;
        out.x1_0 = r.number("x1_0");
        out.x2_0 = r.number("x2_0");
        out.a = r.number("a");
        out.tau = r.number("tau");
        r.finish();
        return out;
    }
    if (variant == "constant_speed") {
        mol::ConstantSpeedTrajectory out;
        out.x1_0 = r.number("x1_0");
        out.x2_0 = r.number("x2_0");
        out.speed = r.number("speed");
        out.d_min = r.number("d_min");
        out.dwell = r.number_or("dwell", 0.0);
        r.finish();
        return out;
    }
    if (variant == "sampled") {
        mol::SampledTrajectory out;
        const json* samples = r.array("samples");
        if (!samples) fail("config: trajectory.samples is required for the sampled variant");
        for (const auto& row : *samples) {
            if (!row.is_array() || row.size() != 3 || !row[0].is_number())
                fail("config: trajectory.samples rows must be [t, x1, x2]");
            out.samples.push_back(
                {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        r.finish();
        return out;
    }
    fail("config: unknown trajectory.variant \"" + variant + "\"");
}

env::SpectralForm parse_spectral(const json& node) {
    ObjectReader r(node, "bath.spectral");
    const std::string kind = r.string_or("kind", "ohmic");
    if (kind == "ohmic") {
        r.finish();
        return env::OhmicForm{};
    }
    if (kind == "power_law") {
        env::PowerLawForm out;
        out.exponent = r.number("exponent");
        r.finish();
        return out;
    }
    if (kind == "one_over_omega") {
        env::OneOverOmegaForm out;
        out.ir_cutoff = r.number_or("ir_cutoff", env::kDefaultIrCutoff);
        r.finish();
        return out;
    }
    fail("config: unknown bath.spectral.kind \"" + kind + "\"");
}

env::BathSpec parse_bath(const json& node, const env::BathSpec* base) {
    ObjectReader r(node, "bath");
    const std::string variant = r.string_or("variant", "");
    if (variant.empty()) {
        if (!base) fail("config: bath.variant is required");
        if (const auto* b = std::get_if<env::BosonicBath>(base)) {
            env::BosonicBath out = *b;
            out.kappa = r.number_or("kappa", out.kappa);
            out.beta = r.number_or("beta", out.beta);
            if (const json* sp = r.object("spectral")) out.spectral = parse_spectral(*sp);
            r.finish();
            return out;
        }
        env::SpinGasBath out = std::get<env::SpinGasBath>(*base);
        out.gamma = r.number_or("gamma", out.gamma);
        out.s = r.number_or("s", out.s);
        r.finish();
        return out;
    }

    if (variant == "bosonic") {
        env::BosonicBath out;
        out.kappa = r.number("kappa");
        out.beta = r.number("beta");
        if (const json* sp = r.object("spectral")) out.spectral = parse_spectral(*sp);
        r.finish();
        return out;
    }
    if (variant == "spin_gas") {
        env::SpinGasBath out;
        out.gamma = r.number("gamma");
        out.s = r.number("s");
        r.finish();
        return out;
    }
    fail("config: unknown bath.variant \"" + variant + "\"");
}

InitialState parse_initial_state(const std::string& name) {
    if (name == "steady") return InitialState::Steady;
    if (name == "maximally_mixed") return InitialState::MaximallyMixed;
    fail("config: unknown initial_state \"" + name + "\" (use steady or maximally_mixed)");
}

const char* initial_state_name(InitialState s) {
    return s == InitialState::Steady ? "steady" : "maximally_mixed";
}

json trajectory_to_json(const mol::Trajectory& traj) {
    json out;
    if (const auto* h = std::get_if<mol::HarmonicTrajectory>(&traj)) {
        out["variant"] = "harmonic";
        out["x1_0"] = h->x1_0;
        out["x2_0"] = h->x2_0;
        out["a"] = h->a;
        out["tau"] = h->tau;
    } else if (const auto* c = std::get_if<mol::ConstantSpeedTrajectory>(&traj)) {
        out["variant"] = "constant_speed";
        out["x1_0"] = c->x1_0;
        out["x2_0"] = c->x2_0;
        out["speed"] = c->speed;
        out["d_min"] = c->d_min;
        out["dwell"] = c->dwell;
    } else {
        const auto& s = std::get<mol::SampledTrajectory>(traj);
        out["variant"] = "sampled";
        json rows = json::array();
        for (const auto& p : s.samples) rows.push_back({p.t, p.x1, p.x2});
        out["samples"] = rows;
    }
    return out;
}

json bath_to_json(const env::BathSpec& bath) {
    json out;
    if (const auto* b = std::get_if<env::BosonicBath>(&bath)) {
        out["variant"] = "bosonic";
        out["kappa"] = b->kappa;
        out["beta"] = b->beta;
        json sp;
        if (std::holds_alternative<env::OhmicForm>(b->spectral)) {
            sp["kind"] = "ohmic";
        } else if (const auto* pl = std::get_if<env::PowerLawForm>(&b->spectral)) {
            sp["kind"] = "power_law";
            sp["exponent"] = pl->exponent;
        } else {
            sp["kind"] = "one_over_omega";
            sp["ir_cutoff"] = std::get<env::OneOverOmegaForm>(b->spectral).ir_cutoff;
        }
        out["spectral"] = sp;
    } else {
        const auto& sg = std::get<env::SpinGasBath>(bath);
        out["variant"] = "spin_gas";
        out["gamma"] = sg.gamma;
        out["s"] = sg.s;
    }
    return out;
}

} // namespace

void validate_config(const ScenarioConfig& config) {
    mol::validate_trajectory(config.trajectory);
    mol::validate_field(config.field);
    env::validate_bath(config.bath);
    if (config.integrator.steps_per_period < 100)
        fail("config: integrator.steps_per_period must be >= 100");
    if (!(config.integrator.cycle_tol > 0.0 && config.integrator.cycle_tol < 1.0))
        fail("config: integrator.cycle_tol must be in (0, 1)");
    if (config.integrator.max_cycles < 1) fail("config: integrator.max_cycles must be >= 1");
    if (config.output.stride < 1) fail("config: output.stride must be >= 1");
    if (config.output.stride > config.integrator.steps_per_period)
        fail("config: output.stride exceeds steps_per_period");
    if (config.output.path.empty()) fail("config: output.path must not be empty");
}

std::vector<std::string> preset_names() {
    return {"fig3",       "fig4",       "cme-spingas", "lms-tau6", "lms-tau20",
            "lms-tau100", "constspeed", "subohmic",    "supraohmic"};
}

ScenarioConfig preset(const std::string& name) {
    const mol::FieldProfile strong_field{1.3, 2.4, 120.0, 1e4};   // fig3 family
    const mol::FieldProfile weak_field{1.2, 1.2, 120.0, 1.2e3};   // fig4 family
    const mol::HarmonicTrajectory osc20{-20.0, 20.0, 5.0, 100.0}; // fig3 oscillation
    const mol::HarmonicTrajectory osc25{-25.0, 25.0, 10.0, 10.0}; // fig4 oscillation

    ScenarioConfig c;
    c.scenario = name;
    c.output.path = name + ".csv";

    if (name == "fig3") {
        c.trajectory = osc20;
        c.field = strong_field;
        c.bath = env::BosonicBath{0.01, 1.0};
        return c;
    }
    if (name == "fig4") {
        c.trajectory = osc25;
        c.field = weak_field;
        c.bath = env::SpinGasBath{0.1, 0.2};
        c.integrator.max_cycles = 400;
        return c;
    }
    if (name == "cme-spingas") {
        c.trajectory = osc20;
        c.field = strong_field;
        c.bath = env::SpinGasBath{0.025, 0.16};
        c.integrator.max_cycles = 400;
        return c;
    }
    if (name == "lms-tau6" || name == "lms-tau20" || name == "lms-tau100") {
        c.trajectory = osc25;
        c.field = weak_field;
        c.bath = env::SpinGasBath{0.1, 0.2};
        c.integrator.max_cycles = 400;
        auto& h = std::get<mol::HarmonicTrajectory>(c.trajectory);
        h.tau = (name == "lms-tau6") ? 6.0 : (name == "lms-tau20") ? 20.0 : 100.0;
        return c;
    }
    if (name == "constspeed") {
        // same distance range and period as the fig3 oscillation: d 40 -> 20 -> 40
        c.trajectory = mol::ConstantSpeedTrajectory{-20.0, 20.0, 0.2, 20.0, 0.0};
        c.field = strong_field;
        c.bath = env::BosonicBath{0.01, 1.0};
        return c;
    }
    if (name == "subohmic" || name == "supraohmic") {
        c.trajectory = osc20;
        c.field = strong_field;
        c.bath =
            env::BosonicBath{0.01, 1.0, env::PowerLawForm{name == "subohmic" ? 0.8 : 1.2}};
        return c;
    }
    fail("config: unknown preset \"" + name + "\"");
}

ScenarioConfig parse_config(const std::string& json_text, const std::string& origin,
                            const ScenarioConfig* base) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(json_text, e.byte > 0 ? e.byte - 1 : 0);
        fail("config: parse error in " + origin + " at line " + std::to_string(line) +
             " column " + std::to_string(col) + ": " + e.what());
    }

    ObjectReader r(root, "");
    const std::string scenario = r.string_or("scenario", base ? base->scenario : "custom");

    ScenarioConfig out;
    if (scenario != "custom") {
        if (base && base->scenario != "custom" && base->scenario != scenario)
            fail("config: scenario \"" + scenario + "\" conflicts with preset \"" +
                 base->scenario + "\"");
        out = preset(scenario);
    } else if (base) {
        out = *base;
    }
    out.scenario = scenario;
    const bool have_base = (scenario != "custom") || base != nullptr;

    if (const json* t = r.object("trajectory"))
        out.trajectory = parse_trajectory(*t, have_base ? &out.trajectory : nullptr);
    else if (!have_base)
        fail("config: missing required section \"trajectory\"");

    if (const json* f = r.object("field")) {
        ObjectReader fr(*f, "field");
        if (have_base) {
            out.field.B0 = fr.number_or("B0", out.field.B0);
            out.field.B1 = fr.number_or("B1", out.field.B1);
            out.field.sigma = fr.number_or("sigma", out.field.sigma);
            out.field.J0 = fr.number_or("J0", out.field.J0);
        } else {
            out.field.B0 = fr.number("B0");
            out.field.B1 = fr.number("B1");
            out.field.sigma = fr.number("sigma");
            out.field.J0 = fr.number("J0");
        }
        fr.finish();
    } else if (!have_base) {
        fail("config: missing required section \"field\"");
    }

    if (const json* b = r.object("bath"))
        out.bath = parse_bath(*b, have_base ? &out.bath : nullptr);
    else if (!have_base)
        fail("config: missing required section \"bath\"");

    if (const json* i = r.object("integrator")) {
        ObjectReader ir(*i, "integrator");
        out.integrator.steps_per_period =
            ir.integer_or("steps_per_period", out.integrator.steps_per_period);
        out.integrator.cycle_tol = ir.number_or("cycle_tol", out.integrator.cycle_tol);
        out.integrator.max_cycles = ir.integer_or("max_cycles", out.integrator.max_cycles);
        ir.finish();
    }

    if (r.has("initial_state"))
        out.initial_state = parse_initial_state(r.string_or("initial_state", ""));

    if (const json* o = r.object("output")) {
        ObjectReader orr(*o, "output");
        out.output.path = orr.string_or("path", out.output.path);
        out.output.stride = orr.integer_or("stride", out.output.stride);
        orr.finish();
    }

    r.finish();
    validate_config(out);
    return out;
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig* base) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path, base);
}

std::string dump_config(const ScenarioConfig& config) {
    json out;
    out["scenario"] = config.scenario;
    out["trajectory"] = trajectory_to_json(config.trajectory);
    out["field"] = {{"B0", config.field.B0},
                    {"B1", config.field.B1},
                    {"sigma", config.field.sigma},
                    {"J0", config.field.J0}};
    out["bath"] = bath_to_json(config.bath);
    out["integrator"] = {{"steps_per_period", config.integrator.steps_per_period},
                         {"cycle_tol", config.integrator.cycle_tol},
                         {"max_cycles", config.integrator.max_cycles}};
    out["initial_state"] = initial_state_name(config.initial_state);
    out["output"] = {{"path", config.output.path}, {"stride", config.output.stride}};
    return out.dump(2) + "\n";
}

const char* sweep_parameter_name(SweepSpec::Parameter p) {
    switch (p) {
        case SweepSpec::Parameter::Tau: return "tau";
        case SweepSpec::Parameter::Gamma: return "gamma";
        case SweepSpec::Parameter::S: return "s";
        case SweepSpec::Parameter::Kappa: return "kappa";
        case SweepSpec::Parameter::Beta: return "beta";
    }
    return "?";
}

SweepSpec parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        fail("sweep: expected <parameter>=<values>, got \"" + text + "\"");
    const std::string name = text.substr(0, eq);
    const std::string spec = text.substr(eq + 1);

    SweepSpec out;
    if (name == "tau") out.parameter = SweepSpec::Parameter::Tau;
    else if (name == "gamma") out.parameter = SweepSpec::Parameter::Gamma;
    else if (name == "s") out.parameter = SweepSpec::Parameter::S;
    else if (name == "kappa") out.parameter = SweepSpec::Parameter::Kappa;
    else if (name == "beta") out.parameter = SweepSpec::Parameter::Beta;
    else fail("sweep: unknown parameter \"" + name + "\" (tau, gamma, s, kappa, beta)");

    auto to_number = [&](const std::string& tok) -> double {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            fail("sweep: cannot parse number \"" + tok + "\"");
        }
    };

    if (spec.rfind("log:", 0) == 0) {
        std::istringstream ss(spec.substr(4));
        std::string lo_s, hi_s, n_s;
        if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':') ||
            !std::getline(ss, n_s, ':'))
            fail("sweep: log range must be log:<lo>:<hi>:<n>");
        const double lo = to_number(lo_s), hi = to_number(hi_s);
        const int n = static_cast<int>(to_number(n_s));
        if (!(lo > 0.0 && hi > lo)) fail("sweep: log range requires 0 < lo < hi");
        if (n < 2) fail("sweep: log range requires n >= 2");
        for (int k = 0; k < n; ++k)
            out.values.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
    } else {
        std::istringstream ss(spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.values.push_back(to_number(tok));
    }
    if (out.values.empty()) fail("sweep: no values given");
    std::sort(out.values.begin(), out.values.end());
    return out;
}

void validate_sweep(const ScenarioConfig& base, const SweepSpec& sweep) {
    if (sweep.values.empty()) fail("sweep: no values given");
    for (const double v : sweep.values) {
        const ScenarioConfig probe = apply_sweep_value(base, sweep.parameter, v);
        validate_config(probe);
    }
}

ScenarioConfig apply_sweep_value(ScenarioConfig base, SweepSpec::Parameter parameter,
                                 double value) {
    using P = SweepSpec::Parameter;
    switch (parameter) {
        case P::Tau: {
            auto* h = std::get_if<mol::HarmonicTrajectory>(&base.trajectory);
            if (!h) fail("sweep: tau requires a harmonic trajectory");
            h->tau = value;
            break;
        }
        case P::Gamma: {
            auto* sg = std::get_if<env::SpinGasBath>(&base.bath);
            if (!sg) fail("sweep: gamma requires a spin-gas bath");
            sg->gamma = value;
            break;
        }
        case P::S: {
            auto* sg = std::get_if<env::SpinGasBath>(&base.bath);
            if (!sg) fail("sweep: s requires a spin-gas bath");
            sg->s = value;
            break;
        }
        case P::Kappa: {
            auto* b = std::get_if<env::BosonicBath>(&base.bath);
            if (!b) fail("sweep: kappa requires a bosonic bath");
            b->kappa = value;
            break;
        }
        case P::Beta: {
            auto* b = std::get_if<env::BosonicBath>(&base.bath);
            if (!b) fail("sweep: beta requires a bosonic bath");
            b->beta = value;
            break;
        }
    }
    return base;
}

} // namespace oscimol::app
