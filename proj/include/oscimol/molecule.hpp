// molecule.hpp — Classical two-spin motion, position-dependent field and
// coupling profiles, and the instantaneous Hamiltonian
//
//     H(t) = J(t) sx(1)sx(2) + B(t) (sz(1) + sz(2))
//
// in the fixed product basis (uu, ud, du, dd), spin 1 = left tensor factor.
// Units: hbar = k_B = 1; energies in units of the thermal energy.
//
// J(d) = J0/d^3 with d = |x1 - x2|; B(x) = B0 - B1*exp(-x^2/sigma). Note
// sigma carries units of length^2 (the exponent is x^2/sigma, not (x/sigma)^2).
// The field is evaluated at x1(t); trajectories must be symmetric
// (x1 = -x2 at all times), so this equals evaluation at either spin.
// Asymmetric trajectories are rejected at construction.

#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "oscimol/qlinalg.hpp"

namespace oscimol::mol {

struct FieldProfile {
    double B0 = 0.0;    // field offset (energy)
    double B1 = 0.0;    // field dip amplitude (energy)
    double sigma = 1.0; // Gaussian width parameter (length^2)
    double J0 = 1.0;    // dipole coupling constant (energy * length^3)
};

// x_alpha(t) = x_alpha(0) + (-1)^alpha * a * (cos(2 pi t / tau) - 1), alpha = 1,2
struct HarmonicTrajectory {
    double x1_0 = 0.0;
    double x2_0 = 0.0;
    double a = 0.0;   // oscillation amplitude
    double tau = 1.0; // period
};

// Spins approach each other at constant |dx/dt| = speed until d = d_min,
// dwell there, recede back to d(0), dwell again; period = 2*travel + 2*dwell.
struct ConstantSpeedTrajectory {
    double x1_0 = 0.0;
    double x2_0 = 0.0;
    double speed = 1.0; // per-spin speed
    double d_min = 1.0;
    double dwell = 0.0;
};

// Piecewise-linear replay of an externally generated trajectory. Samples must
// start at t = 0 and are treated as one period; evaluation wraps modulo the
// final sample time, so the first and last positions must agree.
struct SampledTrajectory {
    struct Sample {
        double t, x1, x2;
    };
    std::vector<Sample> samples;
};

using Trajectory = std::variant<HarmonicTrajectory, ConstantSpeedTrajectory, SampledTrajectory>;

struct Configuration {
    double t = 0.0;
    double x1 = 0.0, x2 = 0.0;
    double d = 0.0;      // |x1 - x2|
    double J = 0.0;      // coupling (energy)
    double B = 0.0;      // local field (energy)
    double omega0 = 0.0; // local level splitting, 2B
};

// Positions at time t (any real t; periodic extension).
std::pair<double, double> positions(const Trajectory& traj, double t);

// One full period of the classical motion.
double trajectory_period(const Trajectory& traj);

// Throws InputError on invalid parameters, asymmetric or crossing trajectories.
void validate_trajectory(const Trajectory& traj);
void validate_field(const FieldProfile& field);

// H = J sx(1)sx(2) + B (sz(1) + sz(2)); 4x4, real symmetric in the fixed basis.
la::ComplexMatrix hamiltonian(const Configuration& config);

class MoleculeModel {
public:
    MoleculeModel(Trajectory traj, FieldProfile field);

    const Trajectory& trajectory() const { return traj_; }
    const FieldProfile& field() const { return field_; }
    double period() const { return period_; }

    Configuration config_at(double t) const;
    la::ComplexMatrix hamiltonian_at(double t) const { return hamiltonian(config_at(t)); }

private:
    Trajectory traj_;
    FieldProfile field_;
    double period_;
};

// Central finite difference (H(t+dt) - H(t-dt)) / (2 dt); adiabaticity diagnostic.
la::ComplexMatrix hamiltonian_rate(const MoleculeModel& model, double t, double dt);

} // namespace oscimol::mol
