#include "oscimol/environment.hpp"

#include <cmath>
#include <string>

namespace oscimol::env {

namespace {

// omega / (1 - e^{-beta omega}); equals omega (1 + N_omega). Continuous limit
// 1/beta at omega = 0, evaluated through expm1 to keep precision near zero.
double thermal_factor(double beta, double omega) {
    if (omega == 0.0) return 1.0 / beta;
    return omega / -std::expm1(-beta * omega);
}

} // namespace

void validate_bath(const BathSpec& bath) {
    std::visit(
        [](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BosonicBath>) {
                if (!(b.kappa >= 0.0)) throw InputError("bath: kappa must be >= 0");
                if (!(b.beta > 0.0)) throw InputError("bath: beta must be > 0");
                if (const auto* pl = std::get_if<PowerLawForm>(&b.spectral)) {
                    if (!(pl->exponent > 0.0 && pl->exponent <= 2.0))
                        throw InputError("bath: power-law exponent must be in (0, 2]");
                }
                if (const auto* ow = std::get_if<OneOverOmegaForm>(&b.spectral)) {
                    if (!(ow->ir_cutoff > 0.0))
                        throw InputError("bath: 1/omega infrared cutoff must be > 0");
                }
            } else {
                if (!(b.gamma >= 0.0)) throw InputError("bath: gamma must be >= 0");
                if (!(b.s >= 0.0 && b.s <= 0.5)) throw InputError("bath: s must be in [0, 1/2]");
            }
        },
        bath);
}

double rate(const BosonicBath& bath, double omega) {
    const double theta = thermal_factor(bath.beta, omega);
    return std::visit(
        [&](const auto& form) -> double {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, OhmicForm>) {
                return bath.kappa * theta;
            } else if constexpr (std::is_same_v<T, PowerLawForm>) {
                // the IR clamp tames the s < 1 divergence and keeps the
                // sampled omega -> 0 limit meaningful for s > 1 as well
                const double q = std::max(std::abs(omega), kDefaultIrCutoff);
                return bath.kappa * std::pow(q, form.exponent - 1.0) * theta;
            } else {
                const double q = std::max(std::abs(omega), form.ir_cutoff);
                return bath.kappa * theta / (q * q);
            }
        },
        bath.spectral);
}

std::vector<SpinGasGenerator> spin_gas_generators(const SpinGasBath& bath) {
    const double ag = std::sqrt(bath.gamma * bath.s);
    const double ad = std::sqrt(bath.gamma * (1.0 - bath.s));
    const la::ComplexMatrix i2 = la::ComplexMatrix::identity(2);
    const la::ComplexMatrix sp = la::pauli_plus();
    const la::ComplexMatrix sm = la::pauli_minus();

    std::vector<SpinGasGenerator> out;
    out.reserve(4);
    out.push_back({ag * kron(sp, i2), 1, true});
    out.push_back({ad * kron(sm, i2), 1, false});
    out.push_back({ag * kron(i2, sp), 2, true});
    out.push_back({ad * kron(i2, sm), 2, false});
    return out;
}

} // namespace oscimol::env
