// dynamics.hpp — Lindblad generators in the instantaneous eigenbasis of H(t),
// master-equation right-hand side, fixed-step RK4 propagation, and detection
// of the asymptotic cycle of a periodically driven open system.
//
// Master equation (hbar = 1):
//     d rho/dt = -i [H(t), rho] + D rho,
//     D rho    = sum_mu 2 L_mu rho L_mu^dag - L_mu^dag L_mu rho - rho L_mu^dag L_mu.
// Note the factor 2 on the sandwich term; all rates in this code base follow
// that convention.
//
// Bosonic baths: sigma_x of each spin is decomposed into transition operators
// between instantaneous eigenstates, grouped by transition frequency
// (a generalization of the secular approximation; near-degenerate frequencies
// within deg_tol share one operator). A group's frequency label omega is the
// energy released to the bath, so omega > 0 operators lower the system energy
// and carry the larger, emission-side rate Gamma(omega); detailed balance
// Gamma(omega) = e^{beta omega} Gamma(-omega) then drives a static
// configuration to its Gibbs state.

#pragma once

#include <functional>
#include <vector>

#include "oscimol/environment.hpp"
#include "oscimol/molecule.hpp"
#include "oscimol/qlinalg.hpp"

namespace oscimol::dyn {

inline constexpr double kDegTol = 1e-9;        // frequency-grouping tolerance
inline constexpr double kTraceTol = 1e-6;      // |Tr rho - 1| allowed during propagation
inline constexpr double kPositivityTol = 1e-6; // min eigenvalue of rho > -this
inline constexpr double kAdiabaticWarnLevel = 0.1;

struct TransitionOperator {
    int spin;               // 1 or 2
    double omega;           // transition frequency (energy released to the bath)
    la::ComplexMatrix matrix; // sum of S_ij |e_i><e_j| over pairs with e_j - e_i = omega
};

// Eigendecompose H (4x4) and decompose sigma_x of each spin into
// frequency-grouped transition operators. Summing all matrices of one spin
// reproduces sigma_x of that spin; the omega and -omega operators are adjoints.
std::vector<TransitionOperator> transition_operators(const la::ComplexMatrix& H,
                                                     double deg_tol = kDegTol);

struct Generator {
    la::ComplexMatrix op;
    int spin;
    double omega; // transition frequency (0 for the fixed spin-gas generators)
};

struct LindbladSet {
    double t = 0.0;
    std::vector<Generator> generators;
};

// Bosonic: one generator sqrt(Gamma(omega)) * S_omega per (spin, frequency group).
// Spin gas: the four fixed local generators, independent of t.
LindbladSet lindblad_set(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                         double deg_tol = kDegTol);

// D rho as written above. Throws InputError on dimension mismatch.
la::ComplexMatrix dissipator(const la::ComplexMatrix& rho, const LindbladSet& lindblads);

// -i[H(t), rho] + D rho
la::ComplexMatrix rhs(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                      const la::ComplexMatrix& rho);

struct Sample {
    double t;
    la::ComplexMatrix rho;
};

struct StepControl {
    int n_steps = 20000;
};

// Classic fixed-step RK4 over [t0, t1]; rho is symmetrized after every step.
// Trace drift is checked every step and positivity at every recorded sample;
// violations raise NumericalError with diagnostics, never silent correction.
// Returns samples every `stride` steps plus the endpoint.
std::vector<Sample> propagate(const mol::MoleculeModel& model, const env::BathSpec& bath,
                              const la::ComplexMatrix& rho0, double t0, double t1,
                              StepControl step_control, int stride = 1);

struct CycleOptions {
    double tau;
    int steps_per_period = 20000;
    double cycle_tol = 1e-6;
    int max_cycles = 200;
    int stride = 20; // sampling stride, in steps
    double deg_tol = kDegTol;
};

struct CycleReport {
    int n_cycles = 0;
    bool converged = false;
    double residual = 0.0;                // trace distance between successive cycle starts
    std::vector<Sample> cycle_states;     // last completed cycle, absolute times
    double max_adiabaticity_ratio = 0.0;  // diagnostic; > kAdiabaticWarnLevel means the
                                          // adiabatic regime assumption is dubious
};

using SampleSink = std::function<void(int cycle, const Sample&)>;

// Propagate cycle by cycle until trace_distance(rho(k tau), rho((k+1) tau))
// drops below cycle_tol. An exhausted max_cycles yields converged=false, not
// an exception. Every recorded sample of every cycle is forwarded to `sink`.
CycleReport find_asymptotic_cycle(const mol::MoleculeModel& model, const env::BathSpec& bath,
                                  const la::ComplexMatrix& rho0, const CycleOptions& options,
                                  const SampleSink& sink = {});

// max over eigenpairs i != j (gap > deg_tol) of |<e_i|dH/dt|e_j>| / (e_i - e_j)^2
double adiabaticity_ratio(const mol::MoleculeModel& model, double t, double dt,
                          double deg_tol = kDegTol);

} // namespace oscimol::dyn
