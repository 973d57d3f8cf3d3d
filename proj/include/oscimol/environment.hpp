// environment.hpp — Bath models: bosonic baths described by a spectral rate
// function Gamma(omega), and the spin-gas collision model described by four
// fixed local gain/decay generators.
//
// All bosonic rates share the thermal factor Theta(omega) = omega/(1 - e^{-beta omega})
// (the Ohmic rate at unit coupling; Theta(0) = 1/beta). Theta is nonnegative
// for every real omega and satisfies detailed balance
// Theta(omega) = e^{beta omega} Theta(-omega) exactly, so relaxation drives
// the system to the Gibbs state at inverse temperature beta. The spectral
// prefactors are even in omega and preserve both properties:
//
//   Ohmic:          Gamma = kappa * Theta(omega)
//   PowerLaw(s):    Gamma = kappa * q^(s-1) * Theta(omega),
//                   q = max(|omega|, omega_min) for s < 1 (IR clamp), |omega| otherwise
//   OneOverOmega:   Gamma = kappa * Theta(omega) / max(|omega|, omega_min)^2
//
// The 1/omega form needs an infrared cutoff; the default omega_min = 1e-3
// (thermal units) is a placeholder choice and user-overridable.

#pragma once

#include <variant>
#include <vector>

#include "oscimol/qlinalg.hpp"

namespace oscimol::env {

inline constexpr double kDefaultIrCutoff = 1e-3;

struct OhmicForm {};
struct PowerLawForm {
    double exponent = 1.0; // in (0, 2] for supported scenarios
};
struct OneOverOmegaForm {
    double ir_cutoff = kDefaultIrCutoff;
};
using SpectralForm = std::variant<OhmicForm, PowerLawForm, OneOverOmegaForm>;

struct BosonicBath {
    double kappa = 0.0; // dimensionless system-bath coupling
    double beta = 1.0;  // inverse temperature
    SpectralForm spectral = OhmicForm{};
};

struct SpinGasBath {
    double gamma = 0.0; // collision-induced relaxation rate
    double s = 0.0;     // equilibrium excitation, in [0, 1/2]
};

using BathSpec = std::variant<BosonicBath, SpinGasBath>;

void validate_bath(const BathSpec& bath); // throws InputError

// Gamma(omega); total in omega, >= 0, continuous at omega = 0.
double rate(const BosonicBath& bath, double omega);

struct SpinGasGenerator {
    la::ComplexMatrix op; // 4x4 in the fixed basis
    int spin;             // 1 or 2
    bool gain;            // true: sqrt(gamma s) sigma_+, false: sqrt(gamma(1-s)) sigma_-
};

// The four time-independent generators sqrt(gamma s) sigma_+^(a),
// sqrt(gamma(1-s)) sigma_-^(a) for a = 1, 2.
std::vector<SpinGasGenerator> spin_gas_generators(const SpinGasBath& bath);

} // namespace oscimol::env
