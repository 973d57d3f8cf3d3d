#include "oscimol/observables.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

namespace oscimol::obs {

using la::Complex;
using la::ComplexMatrix;

namespace {

const ComplexMatrix& sigma_y_pair() {
    static const ComplexMatrix yy = la::kron(la::pauli_y(), la::pauli_y());
    return yy;
}

ComplexMatrix static_hamiltonian(double J, double B) {
    mol::Configuration c;
    c.J = J;
    c.B = B;
    return mol::hamiltonian(c);
}

// e^{-beta H} / Z through the eigenbasis with shifted exponents (no overflow).
ComplexMatrix gibbs_state(const ComplexMatrix& H, double beta) {
    const la::EigenDecomposition e = la::eigh(H);
    const int n = e.dim;
    std::array<double, ComplexMatrix::kMaxDim> w{};
    double z = 0.0;
    for (int k = 0; k < n; ++k) {
        w[k] = std::exp(-beta * (e.eigenvalues[k] - e.eigenvalues[0]));
        z += w[k];
    }
    ComplexMatrix rho(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex acc{};
            for (int k = 0; k < n; ++k)
                acc += e.eigenvectors(i, k) * w[k] * std::conj(e.eigenvectors(j, k));
            rho(i, j) = acc / z;
        }
    return rho;
}

} // namespace

double concurrence(const ComplexMatrix& rho) {
    if (rho.dim() != 4) throw InputError("concurrence: expected a 4x4 state");
    if (rho.hermiticity_defect() > 1e-8)
        throw InputError("concurrence: rho is not Hermitian within 1e-8");

    // sqrt(rho), clamping roundoff-negative populations to zero
    const la::EigenDecomposition e = la::eigh(rho);
    if (e.eigenvalues[0] < -1e-9)
        throw NumericalError("concurrence: rho has eigenvalue " +
                             std::to_string(e.eigenvalues[0]));
    ComplexMatrix sq(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Complex acc{};
            for (int k = 0; k < 4; ++k)
                acc += e.eigenvectors(i, k) * std::sqrt(std::max(e.eigenvalues[k], 0.0)) *
                       std::conj(e.eigenvectors(j, k));
            sq(i, j) = acc;
        }

    // The lambda_i (square roots of the eigenvalues of rho * rho_tilde, with
    // rho_tilde = YY conj(rho) YY) are the singular values of
    // A = sqrt(rho) YY conj(sqrt(rho)): rho rho_tilde is similar to A A^dag.
    // They are read off the Hermitian embedding [[0, A], [A^dag, 0]], whose
    // spectrum is {+-lambda_i}; this route never squares the matrix, so the
    // small lambda_i keep absolute accuracy at machine level.
    const ComplexMatrix a = sq * sigma_y_pair() * sq.conjugate();
    ComplexMatrix w(8);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            w(i, 4 + j) = a(i, j);
            w(4 + i, j) = std::conj(a(j, i));
        }
    const la::EigenDecomposition ew = la::eigh(w);

    double lambda[4];
    for (int k = 0; k < 4; ++k) {
        const double v = ew.eigenvalues[4 + k]; // the four nonnegative ones, ascending
        if (v < -1e-10)
            throw NumericalError("concurrence: negative singular value " + std::to_string(v) +
                                 " of the flipped-state product");
        lambda[3 - k] = std::max(v, 0.0);
    }
    return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

ThermalState thermal_state(double J, double B, double beta) {
    if (!(beta > 0.0)) throw InputError("thermal_state: beta must be > 0");
    ThermalState ts;
    ts.J = J;
    ts.B = B;
    ts.beta = beta;
    ts.E = std::hypot(2.0 * B, J);
    ts.Z = 2.0 * (std::cosh(ts.E * beta) + std::cosh(J * beta));

    if (J == 0.0) {
        // eta = (E - 2B)/J is singular; the state itself is fine numerically
        ts.eta = 0.0;
        ts.rho = gibbs_state(static_hamiltonian(J, B), beta);
        return ts;
    }

    ts.eta = (ts.E - 2.0 * B) / J;
    const double E = ts.E;
    const double u = std::exp(-2.0 * E * beta);          // e^{-2 E beta}
    const double wm = std::exp(-(E - J) * beta);         // cosh/sinh(J beta) pieces,
    const double wp = std::exp(-(E + J) * beta);         // scaled by e^{-E beta}
    const double zs = 1.0 + u + wm + wp;                 // Z e^{-E beta}
    const double g = (1.0 - u) / (1.0 + ts.eta * ts.eta); // 2 sinh(E beta)/(1+eta^2) scaled

    ComplexMatrix r(4);
    r(0, 0) = (1.0 - g) / zs;
    r(1, 1) = r(2, 2) = 0.5 * (wm + wp) / zs;
    r(3, 3) = (u + g) / zs;
    r(0, 3) = r(3, 0) = -J * (1.0 - u) / (2.0 * E) / zs;
    r(1, 2) = r(2, 1) = -0.5 * (wm - wp) / zs;
    ts.rho = r;
    return ts;
}

double static_concurrence(double J, double B, double beta) {
    if (!(beta > 0.0)) throw InputError("static_concurrence: beta must be > 0");
    if (J == 0.0) return 0.0;
    const double E = std::hypot(2.0 * B, J);
    const double aJ = std::abs(J);
    const double u = std::exp(-2.0 * E * beta);
    const double wm = std::exp(-(E - aJ) * beta);
    const double wp = std::exp(-(E + aJ) * beta);
    const double zs = 1.0 + u + wm + wp;
    return std::max(0.0, (aJ / E) * (1.0 - u) - (wm + wp)) / zs;
}

double critical_temperature(double J, double B) {
    if (J == 0.0) return 0.0;
    const double E = std::hypot(2.0 * B, J);
    const double aJ = std::abs(J);
    // sign of (|J|/E) sinh(E b) - cosh(J b), evaluated overflow-free
    auto sign_arg = [&](double b) {
        return (aJ / E) * (1.0 - std::exp(-2.0 * E * b)) -
               (std::exp(-(E - aJ) * b) + std::exp(-(E + aJ) * b));
    };
    double hi = 1.0;
    while (sign_arg(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e9) return 0.0; // separable down to T = 0 (e.g. B = 0)
    }
    double lo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (sign_arg(mid) < 0.0 ? lo : hi) = mid;
    }
    return 1.0 / (0.5 * (lo + hi));
}

la::ComplexMatrix static_steady_state(double J, double B, const env::BathSpec& bath) {
    env::validate_bath(bath);
    if (const auto* bos = std::get_if<env::BosonicBath>(&bath))
        return thermal_state(J, B, bos->beta).rho;

    const auto& sg = std::get<env::SpinGasBath>(bath);
    const ComplexMatrix H = static_hamiltonian(J, B);
    dyn::LindbladSet set;
    for (const auto& g : env::spin_gas_generators(sg))
        if (g.op.max_abs() > 0.0) set.generators.push_back({g.op, g.spin, 0.0});

    // Vectorized Liouvillian, column by column (row-major vec, k = 4i + j)
    ComplexMatrix A(16);
    for (int k = 0; k < 16; ++k) {
        ComplexMatrix basis(4);
        basis(k / 4, k % 4) = 1.0;
        ComplexMatrix r = Complex(0.0, -1.0) * commutator(H, basis) + dyn::dissipator(basis, set);
        for (int m = 0; m < 16; ++m) A(m, k) = r(m / 4, m % 4);
    }

    ComplexMatrix gram = A.adjoint() * A;
    gram.symmetrize();
    const la::EigenDecomposition e = la::eigh(gram);
    const double scale = std::max(e.eigenvalues[15], DBL_MIN);
    if (e.eigenvalues[1] < 1e-10 * scale)
        throw NumericalError(
            "static_steady_state: degenerate Liouvillian null space (second singular value^2 " +
            std::to_string(e.eigenvalues[1]) + " vs scale " + std::to_string(scale) + ")");

    ComplexMatrix rho(4);
    for (int m = 0; m < 16; ++m) rho(m / 4, m % 4) = e.eigenvectors(m, 0);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-8)
        throw NumericalError("static_steady_state: null vector has vanishing trace");
    rho *= std::conj(tr) / std::abs(tr); // rotate the arbitrary global phase
    rho.symmetrize();
    rho *= 1.0 / rho.trace().real();
    return rho;
}

double critical_s(double J, double B, double gamma) {
    if (J == 0.0) throw InputError("critical_s: J must be nonzero");
    auto entangled = [&](double s) {
        return concurrence(static_steady_state(J, B, env::SpinGasBath{gamma, s})) > 0.0;
    };
    if (!entangled(0.0)) return 0.0;
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (entangled(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double heat_current(const ComplexMatrix& H, const ComplexMatrix& rho,
                    const dyn::LindbladSet& lindblads) {
    H.check_same_dim(rho, "heat_current");
    const Complex val = (H * dyn::dissipator(rho, lindblads)).trace();
    if (std::abs(val.imag()) > 1e-8 * std::max(H.max_abs(), DBL_MIN))
        throw NumericalError("heat_current: imaginary part " + std::to_string(val.imag()) +
                             " exceeds tolerance");
    return val.real();
}

double ground_state_population(const ComplexMatrix& rho, const ComplexMatrix& H) {
    rho.check_same_dim(H, "ground_state_population");
    const la::EigenDecomposition e = la::eigh(H);
    const double gap = e.eigenvalues[1] - e.eigenvalues[0];
    if (gap <= 1e-9)
        throw NumericalError("ground_state_population: degenerate ground level (gap " +
                             std::to_string(gap) + ")");
    Complex p{};
    for (int i = 0; i < e.dim; ++i)
        for (int j = 0; j < e.dim; ++j)
            p += std::conj(e.eigenvectors(i, 0)) * rho(i, j) * e.eigenvectors(j, 0);
    return p.real();
}

double von_neumann_entropy(const ComplexMatrix& rho) {
    const la::EigenDecomposition e = la::eigh(rho);
    double s = 0.0;
    for (int i = 0; i < e.dim; ++i) {
        const double p = e.eigenvalues[i];
        if (p < -1e-9)
            throw NumericalError("von_neumann_entropy: negative eigenvalue " + std::to_string(p));
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

std::optional<double> spectral_temperature(const ComplexMatrix& rho, const ComplexMatrix& H) {
    rho.check_same_dim(H, "spectral_temperature");
    const la::EigenDecomposition e = la::eigh(H);
    const int n = e.dim;

    std::array<double, ComplexMatrix::kMaxDim> p{};
    for (int k = 0; k < n; ++k) {
        Complex acc{};
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                acc += std::conj(e.eigenvectors(i, k)) * rho(i, j) * e.eigenvectors(j, k);
        p[k] = acc.real();
    }

    double num = 0.0, den = 0.0;
    bool any = false;
    for (int i = 1; i < n; ++i) {
        const double gap = e.eigenvalues[i] - e.eigenvalues[i - 1];
        if (gap <= 1e-9) continue; // degenerate pair: no defined two-level temperature
        if (p[i] <= 0.0 || p[i - 1] <= 0.0) return std::nullopt;
        const double w = 0.5 * (p[i] + p[i - 1]);
        num += w * (std::log(p[i]) - std::log(p[i - 1])) / gap;
        den += w;
        any = true;
    }
    if (!any || den <= 0.0) return std::nullopt;
    const double inv_t = -num / den;
    if (inv_t == 0.0) return std::nullopt; // uniform populations: infinite temperature
    return 1.0 / inv_t;
}

ObservableRecord observe(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                         const ComplexMatrix& rho) {
    const mol::Configuration c = model.config_at(t);
    const ComplexMatrix H = mol::hamiltonian(c);
    const dyn::LindbladSet set = dyn::lindblad_set(model, bath, t);

    ObservableRecord rec;
    rec.t = t;
    rec.d = c.d;
    rec.J = c.J;
    rec.B = c.B;
    rec.p_g = ground_state_population(rho, H);
    rec.C = concurrence(rho);
    rec.J_h = heat_current(H, rho, set);
    rec.S = von_neumann_entropy(rho);
    rec.T_spec = spectral_temperature(rho, H);
    return rec;
}

} // namespace oscimol::obs
