#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "oscimol/dynamics.hpp"
#include "oscimol/observables.hpp"

using namespace oscimol;
using la::Complex;
using la::ComplexMatrix;
using mol::FieldProfile;
using mol::HarmonicTrajectory;
using mol::MoleculeModel;

namespace {

const FieldProfile kFig3Field{1.3, 2.4, 120.0, 1e4};
const HarmonicTrajectory kFig3Traj{-20.0, 20.0, 5.0, 100.0};

MoleculeModel fig3_model() { return MoleculeModel(kFig3Traj, kFig3Field); }

// a = 0: frozen at the distant fig3 configuration
MoleculeModel fig3_static_model() {
    return MoleculeModel(HarmonicTrajectory{-20.0, 20.0, 0.0, 100.0}, kFig3Field);
}

ComplexMatrix static_h(double J, double B) {
    mol::Configuration c;
    c.J = J;
    c.B = B;
    return mol::hamiltonian(c);
}

ComplexMatrix maximally_mixed() {
    ComplexMatrix m = ComplexMatrix::identity(4);
    m *= 0.25;
    return m;
}

double frobenius(const ComplexMatrix& m) {
    double s = 0;
    for (int i = 0; i < m.dim(); ++i)
        for (int j = 0; j < m.dim(); ++j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

const ComplexMatrix& sigma_x_pair(int spin) {
    static const ComplexMatrix sx1 = la::kron(la::pauli_x(), ComplexMatrix::identity(2));
    static const ComplexMatrix sx2 = la::kron(ComplexMatrix::identity(2), la::pauli_x());
    return spin == 1 ? sx1 : sx2;
}

} // namespace

TEST_CASE("transition operators at J=0, B=1: two rank-2 operators per spin") {
    const auto ops = dyn::transition_operators(static_h(0.0, 1.0));
    int count[3] = {0, 0, 0};
    for (const auto& op : ops) {
        count[op.spin]++;
        CHECK(std::abs(std::abs(op.omega) - 2.0) < 1e-12);
        // rank 2: two nonzero singular values
        const auto sv = oracles::eigvalsh(op.matrix.adjoint() * op.matrix);
        int nonzero = 0;
        for (double v : sv)
            if (v > 1e-12) ++nonzero;
        CHECK(nonzero == 2);
    }
    CHECK(count[1] == 2);
    CHECK(count[2] == 2);
}

TEST_CASE("degenerate grouping at B=0 yields a Hermitian omega=0 operator") {
    // At B = 0 the eigenbasis is the sigma_x product basis, where sigma_x of
    // either spin is diagonal: everything lands in the omega = 0 group.
    const auto ops = dyn::transition_operators(static_h(2.0, 0.0));
    REQUIRE(ops.size() == 2);
    for (const auto& op : ops) {
        CHECK(std::abs(op.omega) < 1e-12);
        CHECK(op.matrix.hermiticity_defect() < 1e-12);
        CHECK((op.matrix - sigma_x_pair(op.spin)).max_abs() < 1e-12);
    }
}

TEST_CASE("transition operators reassemble sigma_x exactly") {
    oracles::Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const double J = rng.uniform(-3.0, 3.0);
        const double B = rng.uniform(-2.0, 2.0);
        const auto ops = dyn::transition_operators(static_h(J, B));
        ComplexMatrix sum[3] = {ComplexMatrix(4), ComplexMatrix(4), ComplexMatrix(4)};
        for (const auto& op : ops) sum[op.spin] += op.matrix;
        CHECK((sum[1] - sigma_x_pair(1)).max_abs() < 1e-12);
        CHECK((sum[2] - sigma_x_pair(2)).max_abs() < 1e-12);
    }
}

TEST_CASE("omega and -omega transition operators are adjoints") {
    const auto ops = dyn::transition_operators(static_h(1.7, 0.9));
    for (const auto& a : ops) {
        if (a.omega <= 0) continue;
        bool found = false;
        for (const auto& b : ops) {
            if (b.spin != a.spin || std::abs(b.omega + a.omega) > 1e-9) continue;
            found = true;
            CHECK((a.matrix.adjoint() - b.matrix).max_abs() < 1e-12);
        }
        CHECK(found);
    }
}

TEST_CASE("spin-gas lindblad set is time independent") {
    const MoleculeModel model = fig3_model();
    const env::BathSpec bath = env::SpinGasBath{0.1, 0.2};
    const auto s1 = dyn::lindblad_set(model, bath, 0.0);
    const auto s2 = dyn::lindblad_set(model, bath, 37.5);
    REQUIRE(s1.generators.size() == s2.generators.size());
    REQUIRE(s1.generators.size() == 4);
    for (std::size_t k = 0; k < s1.generators.size(); ++k)
        CHECK((s1.generators[k].op - s2.generators[k].op).max_abs() == 0.0);
}

TEST_CASE("bosonic generators pair up with KMS-balanced rates") {
    const MoleculeModel model = fig3_model();
    const double beta = 1.0;
    const env::BathSpec bath = env::BosonicBath{0.01, beta};
    const auto set = dyn::lindblad_set(model, bath, 0.0);
    CHECK(set.generators.size() >= 8);

    int paired = 0;
    for (const auto& a : set.generators) {
        if (a.omega <= 1e-9) continue;
        for (const auto& b : set.generators) {
            if (b.spin != a.spin || std::abs(b.omega + a.omega) > 1e-9) continue;
            ++paired;
            // L(w)^dag = L(-w) * sqrt(rate(w)/rate(-w))
            const auto& bos = std::get<env::BosonicBath>(bath);
            const double ratio = std::sqrt(env::rate(bos, a.omega) / env::rate(bos, b.omega));
            CHECK((a.op.adjoint() - ratio * b.op).max_abs() < 1e-10);
            // downward/upward squared-amplitude ratio is the Boltzmann factor
            const double f2 = std::pow(frobenius(a.op) / frobenius(b.op), 2.0);
            CHECK(f2 == doctest::Approx(std::exp(beta * a.omega)).epsilon(1e-9));
        }
    }
    CHECK(paired >= 4);
}

TEST_CASE("dissipator is trace free") {
    oracles::Rng rng(88);
    const MoleculeModel model = fig3_model();
    const auto set = dyn::lindblad_set(model, env::BathSpec(env::BosonicBath{0.01, 1.0}), 12.0);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix rho = rng.density(4);
        CHECK(std::abs(dyn::dissipator(rho, set).trace()) < 1e-13);
    }
}

TEST_CASE("thermal state is a fixed point of the bosonic dissipator") {
    const MoleculeModel model = fig3_static_model();
    const double beta = 1.0;
    const auto set = dyn::lindblad_set(model, env::BathSpec(env::BosonicBath{0.01, beta}), 0.0);
    const auto c = model.config_at(0.0);
    const ComplexMatrix rho_th = obs::thermal_state(c.J, c.B, beta).rho;
    CHECK(dyn::dissipator(rho_th, set).max_abs() < 1e-8);

    // also at a generic configuration
    const MoleculeModel m2(HarmonicTrajectory{-10.0, 10.0, 0.0, 100.0}, FieldProfile{1.0, 0.0, 120.0, 1.6e3});
    const auto c2 = m2.config_at(0.0);
    const auto set2 = dyn::lindblad_set(m2, env::BathSpec(env::BosonicBath{0.05, 0.8}), 0.0);
    const ComplexMatrix rho2 = obs::thermal_state(c2.J, c2.B, 0.8).rho;
    CHECK(dyn::dissipator(rho2, set2).max_abs() < 1e-8);
}

TEST_CASE("spin-gas product steady state is a fixed point of the dissipator") {
    const double s = 0.2;
    dyn::LindbladSet set;
    for (const auto& g : env::spin_gas_generators(env::SpinGasBath{0.1, s}))
        set.generators.push_back({g.op, g.spin, 0.0});

    ComplexMatrix local(2);
    local(0, 0) = s;
    local(1, 1) = 1.0 - s;
    const ComplexMatrix rho = la::kron(local, local);
    CHECK(dyn::dissipator(rho, set).max_abs() < 1e-14);
}

TEST_CASE("rhs of the maximally mixed state vanishes without a bath") {
    const MoleculeModel model(HarmonicTrajectory{-20.0, 20.0, 0.0, 100.0},
                              FieldProfile{0.9, 0.0, 120.0, 1e4});
    const env::BathSpec off = env::BosonicBath{0.0, 1.0};
    CHECK(dyn::rhs(model, off, 0.0, maximally_mixed()).max_abs() < 1e-15);
}

TEST_CASE("rhs is trace free and Hermiticity preserving") {
    oracles::Rng rng(1312);
    const MoleculeModel model = fig3_model();
    const env::BathSpec bath = env::BosonicBath{0.01, 1.0};
    for (int trial = 0; trial < 25; ++trial) {
        const ComplexMatrix rho = rng.density(4);
        const ComplexMatrix r = dyn::rhs(model, bath, rng.uniform(0.0, 100.0), rho);
        CHECK(std::abs(r.trace()) < 1e-13);
        CHECK(r.hermiticity_defect() < 1e-13);
    }
}

TEST_CASE("closed-system propagation matches the exact unitary") {
    const MoleculeModel model = fig3_static_model();
    const env::BathSpec off = env::BosonicBath{0.0, 1.0};
    oracles::Rng rng(55);
    const ComplexMatrix rho0 = rng.density(4);

    const double T = 10.0;
    const auto samples = dyn::propagate(model, off, rho0, 0.0, T, {4000}, 4000);
    const ComplexMatrix rho_T = samples.back().rho;

    // U = V e^{-i eps T} V^dag via the spectral decomposition
    const auto e = la::eigh(model.hamiltonian_at(0.0));
    ComplexMatrix u(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Complex acc{};
            for (int k = 0; k < 4; ++k)
                acc += e.eigenvectors(i, k) * std::exp(Complex(0.0, -e.eigenvalues[k] * T)) *
                       std::conj(e.eigenvectors(j, k));
            u(i, j) = acc;
        }
    const ComplexMatrix expect = u * rho0 * u.adjoint();
    CHECK((rho_T - expect).max_abs() < 1e-8);
}

TEST_CASE("closed-system propagation preserves the spectrum") {
    const MoleculeModel model = fig3_model(); // time dependent, kappa = 0
    const env::BathSpec off = env::BosonicBath{0.0, 1.0};
    oracles::Rng rng(77);
    const ComplexMatrix rho0 = rng.density(4);
    const auto init = la::eigh(rho0);
    const auto samples = dyn::propagate(model, off, rho0, 0.0, 50.0, {20000}, 2000);
    for (const auto& s : samples) {
        const auto spec = la::eigh(s.rho);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(spec.eigenvalues[k] - init.eigenvalues[k]) < 1e-8);
    }
}

TEST_CASE("static bosonic propagation thermalizes from the maximally mixed state") {
    const MoleculeModel model = fig3_static_model();
    const double kappa = 0.01, beta = 1.0;
    const env::BathSpec bath = env::BosonicBath{kappa, beta};
    const auto c = model.config_at(0.0);
    const ComplexMatrix rho_th = obs::thermal_state(c.J, c.B, beta).rho;

    const double T = 10.0 / kappa;
    const auto samples = dyn::propagate(model, bath, maximally_mixed(), 0.0, T, {20000}, 20000);
    CHECK(la::trace_distance(samples.back().rho, rho_th) < 1e-6);
}

TEST_CASE("RK4 step-halving error ratio is fourth order") {
    const MoleculeModel model = fig3_model();
    const env::BathSpec bath = env::BosonicBath{0.01, 1.0};
    const auto c = model.config_at(0.0);
    const ComplexMatrix rho0 = obs::thermal_state(c.J, c.B, 1.0).rho;

    // crossing the closest approach, where the drive is strongest
    auto end_state = [&](int n) {
        return dyn::propagate(model, bath, rho0, 30.0, 70.0, {n}, n).back().rho;
    };
    const ComplexMatrix a = end_state(400);
    const ComplexMatrix b = end_state(800);
    const ComplexMatrix d = end_state(1600);
    const double e1 = (a - b).max_abs();
    const double e2 = (b - d).max_abs();
    CHECK(e1 / e2 > 12.0);
    CHECK(e1 / e2 < 20.0);
}

TEST_CASE("propagate rejects unphysical initial states") {
    const MoleculeModel model = fig3_static_model();
    const env::BathSpec bath = env::BosonicBath{0.01, 1.0};

    ComplexMatrix bad_trace = ComplexMatrix::identity(4); // trace 4
    CHECK_THROWS_AS((void)dyn::propagate(model, bath, bad_trace, 0.0, 1.0, {100}), InputError);

    ComplexMatrix neg(4);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS((void)dyn::propagate(model, bath, neg, 0.0, 1.0, {100}), InputError);

    oracles::Rng rng(3);
    ComplexMatrix nonherm = rng.density(4);
    nonherm(0, 1) += Complex(0.0, 1e-3);
    CHECK_THROWS_AS((void)dyn::propagate(model, bath, nonherm, 0.0, 1.0, {100}), InputError);
}

TEST_CASE("a static trajectory converges to a constant thermal cycle") {
    const MoleculeModel model = fig3_static_model();
    const double beta = 1.0;
    const env::BathSpec bath = env::BosonicBath{0.01, beta};
    const auto c = model.config_at(0.0);
    const ComplexMatrix rho_th = obs::thermal_state(c.J, c.B, beta).rho;

    dyn::CycleOptions opt;
    opt.tau = 100.0;
    opt.steps_per_period = 2000;
    opt.cycle_tol = 1e-6;
    opt.max_cycles = 60;
    opt.stride = 200;
    const auto report = dyn::find_asymptotic_cycle(model, bath, maximally_mixed(), opt);
    CHECK(report.converged);
    CHECK(report.residual < 1e-6);
    for (const auto& s : report.cycle_states)
        CHECK(la::trace_distance(s.rho, rho_th) < 1e-4);
    // the frozen trajectory has no drive at all
    CHECK(report.max_adiabaticity_ratio == 0.0);
}

TEST_CASE("exhausting max_cycles reports unconverged without throwing") {
    const MoleculeModel model = fig3_model();
    const env::BathSpec bath = env::BosonicBath{0.01, 1.0};
    dyn::CycleOptions opt;
    opt.tau = 100.0;
    opt.steps_per_period = 500;
    opt.cycle_tol = 1e-12; // unreachable in one cycle
    opt.max_cycles = 1;
    opt.stride = 100;
    const auto report = dyn::find_asymptotic_cycle(model, bath, maximally_mixed(), opt);
    CHECK_FALSE(report.converged);
    CHECK(report.n_cycles == 1);
    CHECK(report.residual > 1e-12);
    CHECK(report.cycle_states.size() == 5);
}

TEST_CASE("spin-gas local steady state has excited population s") {
    // distant configuration, J ~ 1e-4: effectively independent spins
    const MoleculeModel model(HarmonicTrajectory{-20.0, 20.0, 0.0, 100.0},
                              FieldProfile{1.2, 0.0, 120.0, 10.0});
    const double s = 0.2;
    const env::BathSpec bath = env::SpinGasBath{0.1, s};
    const auto samples = dyn::propagate(model, bath, maximally_mixed(), 0.0, 400.0, {8000}, 8000);
    const ComplexMatrix& rho = samples.back().rho;
    // reduced spin-1 excited population: rows uu, ud
    const double p_up = rho(0, 0).real() + rho(1, 1).real();
    CHECK(p_up == doctest::Approx(s).epsilon(1e-6));
}

TEST_CASE("frequency-group completeness along the fig3 path") {
    const MoleculeModel model = fig3_model();
    for (int k = 0; k < 20; ++k) {
        const double t = 5.0 * k;
        const auto ops = dyn::transition_operators(model.hamiltonian_at(t));
        ComplexMatrix sum[3] = {ComplexMatrix(4), ComplexMatrix(4), ComplexMatrix(4)};
        for (const auto& op : ops) sum[op.spin] += op.matrix;
        CHECK((sum[1] - sigma_x_pair(1)).max_abs() < 1e-12);
        CHECK((sum[2] - sigma_x_pair(2)).max_abs() < 1e-12);
    }
}

TEST_CASE("lindblad sets are nonempty whenever the bath couples") {
    oracles::Rng rng(606);
    const MoleculeModel model = fig3_model();
    for (int trial = 0; trial < 20; ++trial) {
        const double t = rng.uniform(0.0, 100.0);
        const auto bos = dyn::lindblad_set(model, env::BathSpec(env::BosonicBath{0.03, 0.9}), t);
        CHECK_FALSE(bos.generators.empty());
        const auto sg = dyn::lindblad_set(
            model, env::BathSpec(env::SpinGasBath{0.2, rng.uniform(0.0, 0.5)}), t);
        CHECK_FALSE(sg.generators.empty());
    }
    // bath off: no generators
    CHECK(dyn::lindblad_set(model, env::BathSpec(env::BosonicBath{0.0, 1.0}), 3.0)
              .generators.empty());
}

TEST_CASE("observable records stay within their bounds along a run") {
    const MoleculeModel model = fig3_model();
    const env::BathSpec bath = env::BosonicBath{0.01, 1.0};
    const auto c = model.config_at(0.0);
    const auto samples =
        dyn::propagate(model, bath, obs::thermal_state(c.J, c.B, 1.0).rho, 0.0, 100.0, {2000}, 100);
    for (const auto& s : samples) {
        const auto rec = obs::observe(model, bath, s.t, s.rho);
        CHECK(rec.p_g >= 0.0);
        CHECK(rec.p_g <= 1.0);
        CHECK(rec.C >= 0.0);
        CHECK(rec.C <= 1.0);
        CHECK(rec.S >= 0.0);
        CHECK(rec.S <= std::log(4.0) + 1e-12);
        CHECK(rec.d > 0.0);
    }
}

TEST_CASE("adiabaticity diagnostic is small for the fig3 drive") {
    const MoleculeModel model = fig3_model();
    double worst = 0.0;
    for (int k = 0; k <= 100; ++k)
        worst = std::max(worst, dyn::adiabaticity_ratio(model, k, 1e-3));
    CHECK(worst < dyn::kAdiabaticWarnLevel);
    CHECK(worst > 0.0);
}
