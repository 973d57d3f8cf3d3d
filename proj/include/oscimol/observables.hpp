// observables.hpp — Physical quantities reported by the engine: concurrence,
// analytic thermal states and static entanglement, critical temperature and
// critical spin-gas excitation, heat current, ground-state population,
// von Neumann entropy, and spectral temperature.

#pragma once

#include <optional>

#include "oscimol/dynamics.hpp"
#include "oscimol/environment.hpp"
#include "oscimol/molecule.hpp"
#include "oscimol/qlinalg.hpp"

namespace oscimol::obs {

// Gibbs state of the two-spin Hamiltonian at fixed (J, B), assembled from the
// closed-form block entries. E = sqrt(4B^2 + J^2); eta = (E - 2B)/J (0 at J=0,
// where the state is built numerically instead). Entries are evaluated in a
// form scaled by e^{-E beta}, so no intermediate overflows for any beta > 0;
// the reported partition function Z itself can overflow for extreme beta.
struct ThermalState {
    double J = 0.0;
    double B = 0.0;
    double beta = 0.0;
    double Z = 0.0; // 2 [cosh(E beta) + cosh(J beta)]
    double E = 0.0;
    double eta = 0.0;
    la::ComplexMatrix rho;
};

// Wootters concurrence of a two-qubit state, in [0, 1]:
// C = max{0, lambda_1 - lambda_2 - lambda_3 - lambda_4}, the lambda_i being
// the decreasing square roots of the eigenvalues of rho * rho_tilde with
// rho_tilde = (sy x sy) conj(rho) (sy x sy). Computed through Hermitian
// eigenproblems only (see the implementation note); roundoff-negative
// lambda^2 clamp to zero, genuine negatives raise NumericalError.
double concurrence(const la::ComplexMatrix& rho);

ThermalState thermal_state(double J, double B, double beta);

// Closed-form concurrence of the thermal state:
// C = (2/Z) max{0, (|J|/E) sinh(E beta) - cosh(J beta)}; 0 at J = 0.
double static_concurrence(double J, double B, double beta);

// The temperature above which the thermal state is separable: the unique T
// with (|J|/E) sinh(E/T) = cosh(J/T), by bisection in 1/T. Returns 0 when the
// thermal state is separable at every temperature (e.g. B = 0).
double critical_temperature(double J, double B);

// Steady state of a fixed configuration. Bosonic baths relax to the Gibbs
// state; the spin gas generally does not, so its steady state is the null
// vector of the vectorized Liouvillian (16x16). A degenerate null space
// raises NumericalError.
la::ComplexMatrix static_steady_state(double J, double B, const env::BathSpec& bath);

// Largest spin-gas excitation s at which the static steady state is still
// entangled, by bisection on s in [0, 1/2]; 0 if separable even at s = 0.
double critical_s(double J, double B, double gamma);

// Tr{H [D rho]}: instantaneous heat flow from the bath into the system.
// The imaginary part must vanish to 1e-8 * |H|_max, else NumericalError.
double heat_current(const la::ComplexMatrix& H, const la::ComplexMatrix& rho,
                    const dyn::LindbladSet& lindblads);

// <e_0| rho |e_0>; requires a nondegenerate ground level (gap > 1e-9).
double ground_state_population(const la::ComplexMatrix& rho, const la::ComplexMatrix& H);

// -sum p_i ln p_i over the eigenvalues of rho, with 0 ln 0 = 0 (nats).
double von_neumann_entropy(const la::ComplexMatrix& rho);

// Effective temperature assigned from the energy-level populations:
// the population-weighted average of pairwise adjacent-level inverse
// temperatures,
//   1/T = -[sum_i w_i (ln p_i - ln p_{i-1})/(e_i - e_{i-1})] / sum_i w_i,
//   w_i = (p_i + p_{i-1})/2,
// skipping adjacent pairs closer than 1e-9. Reduces exactly to the Gibbs
// temperature on thermal states. Returns nullopt when undefined: a required
// population is zero (or negative within roundoff), every pair is degenerate,
// or the populations are uniform (infinite temperature).
std::optional<double> spectral_temperature(const la::ComplexMatrix& rho,
                                           const la::ComplexMatrix& H);

// One CSV time sample.
struct ObservableRecord {
    double t = 0.0;
    double d = 0.0;
    double J = 0.0;
    double B = 0.0;
    double p_g = 0.0;
    double C = 0.0;
    double J_h = 0.0;
    double S = 0.0;
    std::optional<double> T_spec;
};

// Evaluate the full record at time t (pass the cycle-local time so the
// configuration columns are exactly periodic across cycles).
ObservableRecord observe(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                         const la::ComplexMatrix& rho);

} // namespace oscimol::obs
