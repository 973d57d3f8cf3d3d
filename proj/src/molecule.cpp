#include "oscimol/molecule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace oscimol::mol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_period(double t, double period) {
    double s = std::fmod(t, period);
    if (s < 0.0) s += period;
    return s;
}

std::pair<double, double> harmonic_positions(const HarmonicTrajectory& h, double t) {
    // wrap before the trig call: makes periodicity exact and keeps the phase
    // argument small over long runs
    const double s = wrap_period(t, h.tau);
    const double u = h.a * (std::cos(kTwoPi * s / h.tau) - 1.0);
    return {h.x1_0 - u, h.x2_0 + u}; // (-1)^alpha: -u for spin 1, +u for spin 2
}

// Distance schedule for the constant-speed variant; positions scale along the
// initial axis so x1 = -x2 is preserved.
double const_speed_distance(const ConstantSpeedTrajectory& c, double s) {
    const double d0 = std::abs(c.x1_0 - c.x2_0);
    const double travel = (d0 - c.d_min) / (2.0 * c.speed);
    if (s < travel) return d0 - 2.0 * c.speed * s;
    s -= travel;
    if (s < c.dwell) return c.d_min;
    s -= c.dwell;
    if (s < travel) return c.d_min + 2.0 * c.speed * s;
    return d0;
}

std::pair<double, double> const_speed_positions(const ConstantSpeedTrajectory& c, double t) {
    const double d0 = std::abs(c.x1_0 - c.x2_0);
    const double travel = (d0 - c.d_min) / (2.0 * c.speed);
    const double period = 2.0 * travel + 2.0 * c.dwell;
    const double d = const_speed_distance(c, wrap_period(t, period));
    const double scale = d / d0;
    return {c.x1_0 * scale, c.x2_0 * scale};
}

std::pair<double, double> sampled_positions(const SampledTrajectory& s, double t) {
    const auto& v = s.samples;
    const double period = v.back().t;
    const double u = wrap_period(t, period);
    auto it = std::upper_bound(v.begin(), v.end(), u,
                               [](double a, const SampledTrajectory::Sample& b) { return a < b.t; });
    if (it == v.begin()) return {v.front().x1, v.front().x2};
    if (it == v.end()) return {v.back().x1, v.back().x2};
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (u - lo.t) / (hi.t - lo.t);
    return {lo.x1 + w * (hi.x1 - lo.x1), lo.x2 + w * (hi.x2 - lo.x2)};
}

void require(bool cond, const std::string& msg) {
    if (!cond) throw InputError(msg);
}

} // namespace

std::pair<double, double> positions(const Trajectory& traj, double t) {
    return std::visit(
        [&](const auto& v) -> std::pair<double, double> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HarmonicTrajectory>) return harmonic_positions(v, t);
            else if constexpr (std::is_same_v<T, ConstantSpeedTrajectory>)
                return const_speed_positions(v, t);
            else return sampled_positions(v, t);
        },
        traj);
}

double trajectory_period(const Trajectory& traj) {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HarmonicTrajectory>) return v.tau;
            else if constexpr (std::is_same_v<T, ConstantSpeedTrajectory>) {
                const double d0 = std::abs(v.x1_0 - v.x2_0);
                return (d0 - v.d_min) / v.speed + 2.0 * v.dwell;
            } else return v.samples.back().t;
        },
        traj);
}

void validate_field(const FieldProfile& field) {
    require(field.sigma > 0.0, "field: sigma must be > 0");
    require(field.J0 != 0.0, "field: J0 must be nonzero");
    require(std::isfinite(field.B0) && std::isfinite(field.B1) && std::isfinite(field.sigma) &&
                std::isfinite(field.J0),
            "field: parameters must be finite");
}

void validate_trajectory(const Trajectory& traj) {
    std::visit(
        [](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, HarmonicTrajectory>) {
                require(v.tau > 0.0, "trajectory: tau must be > 0");
                require(v.x1_0 == -v.x2_0,
                        "trajectory: asymmetric trajectories are not supported (require x1_0 = -x2_0)");
                require(v.x1_0 != 0.0, "trajectory: spins start at the same point");
                // spin 1 sweeps [x1_0, x1_0 + 2a] (a>0) or [x1_0 + 2a, x1_0]; it
                // must not reach the midpoint, else d(t) = 0 somewhere.
                const double far = v.x1_0 + 2.0 * v.a;
                require(v.x1_0 * far > 0.0, "trajectory: spins cross (d(t) = 0 within a period)");
            } else if constexpr (std::is_same_v<T, ConstantSpeedTrajectory>) {
                require(v.speed > 0.0, "trajectory: speed must be > 0");
                require(v.d_min > 0.0, "trajectory: d_min must be > 0");
                require(v.dwell >= 0.0, "trajectory: dwell must be >= 0");
                require(v.x1_0 == -v.x2_0,
                        "trajectory: asymmetric trajectories are not supported (require x1_0 = -x2_0)");
                const double d0 = std::abs(v.x1_0 - v.x2_0);
                require(d0 > v.d_min, "trajectory: initial distance must exceed d_min");
            } else {
                const auto& s = v.samples;
                require(s.size() >= 2, "trajectory: need at least two samples");
                require(s.front().t == 0.0, "trajectory: samples must start at t = 0");
                for (std::size_t i = 1; i < s.size(); ++i)
                    require(s[i].t > s[i - 1].t, "trajectory: sample times must strictly increase");
                for (const auto& p : s) {
                    const double scale = std::max({1.0, std::abs(p.x1), std::abs(p.x2)});
                    require(std::abs(p.x1 + p.x2) <= 1e-9 * scale,
                            "trajectory: asymmetric trajectories are not supported (require x1 = -x2)");
                    require(std::abs(p.x1 - p.x2) > 0.0, "trajectory: d = 0 at a sample");
                }
                // interpolation must not sweep a spin through the midpoint
                for (std::size_t i = 1; i < s.size(); ++i)
                    require(s[i].x1 * s[i - 1].x1 > 0.0,
                            "trajectory: spins cross between samples (x1 changes sign)");
                const double scale =
                    std::max({1.0, std::abs(s.front().x1), std::abs(s.back().x1)});
                require(std::abs(s.front().x1 - s.back().x1) <= 1e-9 * scale &&
                            std::abs(s.front().x2 - s.back().x2) <= 1e-9 * scale,
                        "trajectory: sampled trajectory must be periodic (first/last positions differ)");
            }
        },
        traj);
}

MoleculeModel::MoleculeModel(Trajectory traj, FieldProfile field)
    : traj_(std::move(traj)), field_(field) {
    validate_trajectory(traj_);
    validate_field(field_);
    period_ = trajectory_period(traj_);
}

Configuration MoleculeModel::config_at(double t) const {
    Configuration c;
    c.t = t;
    std::tie(c.x1, c.x2) = positions(traj_, t);
    c.d = std::abs(c.x1 - c.x2);
    if (c.d <= 0.0)
        throw InputError("config_at: singular configuration (d = 0) at t = " + std::to_string(t));
    c.J = field_.J0 / (c.d * c.d * c.d);
    c.B = field_.B0 - field_.B1 * std::exp(-(c.x1 * c.x1) / field_.sigma);
    c.omega0 = 2.0 * c.B;
    return c;
}

la::ComplexMatrix hamiltonian(const Configuration& config) {
    const double J = config.J, B = config.B;
    // J sx.sx + B (sz.I + I.sz) in basis (uu, ud, du, dd)
    la::ComplexMatrix h(4);
    h(0, 0) = 2.0 * B;
    h(3, 3) = -2.0 * B;
    h(0, 3) = h(3, 0) = J;
    h(1, 2) = h(2, 1) = J;
    return h;
}

la::ComplexMatrix hamiltonian_rate(const MoleculeModel& model, double t, double dt) {
    if (dt <= 0.0) throw InputError("hamiltonian_rate: dt must be > 0");
    la::ComplexMatrix diff = hamiltonian(model.config_at(t + dt));
    diff -= hamiltonian(model.config_at(t - dt));
    diff *= 1.0 / (2.0 * dt);
    return diff;
}

} // namespace oscimol::mol
