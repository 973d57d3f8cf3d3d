#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "oscimol/molecule.hpp"

using namespace oscimol;
using la::ComplexMatrix;
using mol::ConstantSpeedTrajectory;
using mol::FieldProfile;
using mol::HarmonicTrajectory;
using mol::MoleculeModel;
using mol::SampledTrajectory;

namespace {

const FieldProfile kFig3Field{1.3, 2.4, 120.0, 1e4};
const HarmonicTrajectory kFig3Traj{-20.0, 20.0, 5.0, 100.0};

} // namespace

TEST_CASE("harmonic positions at the reference times") {
    const mol::Trajectory traj = kFig3Traj;

    auto [x1, x2] = mol::positions(traj, 0.0);
    CHECK(x1 == -20.0);
    CHECK(x2 == 20.0);

    std::tie(x1, x2) = mol::positions(traj, 50.0);
    CHECK(x1 == doctest::Approx(-10.0).epsilon(1e-14));
    CHECK(x2 == doctest::Approx(10.0).epsilon(1e-14));

    std::tie(x1, x2) = mol::positions(traj, 100.0);
    CHECK(x1 == doctest::Approx(-20.0).epsilon(1e-14));
    CHECK(x2 == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("harmonic positions are exactly periodic") {
    const mol::Trajectory traj = kFig3Traj;
    for (double t : {0.0, 12.5, 33.25, 99.0}) {
        const auto a = mol::positions(traj, t);
        const auto b = mol::positions(traj, t + 100.0);
        CHECK(a.first == b.first);
        CHECK(a.second == b.second);
    }
}

TEST_CASE("config_at reproduces the reference field and coupling values") {
    const MoleculeModel model(kFig3Traj, kFig3Field);
    CHECK(model.period() == 100.0);

    const mol::Configuration c0 = model.config_at(0.0);
    CHECK(c0.d == doctest::Approx(40.0).epsilon(1e-14));
    CHECK(c0.J == doctest::Approx(1e4 / (40.0 * 40.0 * 40.0)).epsilon(1e-14)); // 0.15625
    CHECK(c0.B == doctest::Approx(1.3 - 2.4 * std::exp(-400.0 / 120.0)).epsilon(1e-14));
    CHECK(c0.B == doctest::Approx(1.21438).epsilon(1e-5));

    const mol::Configuration ch = model.config_at(50.0);
    CHECK(ch.d == doctest::Approx(20.0).epsilon(1e-13));
    CHECK(ch.J == doctest::Approx(1.25).epsilon(1e-13));
    CHECK(ch.B == doctest::Approx(1.3 - 2.4 * std::exp(-100.0 / 120.0)).epsilon(1e-12));

    // J = J0/d^3 spot value
    const MoleculeModel cube(HarmonicTrajectory{-1.0, 1.0, 0.0, 10.0}, FieldProfile{0, 0, 1, 8});
    CHECK(cube.config_at(3.0).J == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("omega0 = 2B for every emitted configuration") {
    const MoleculeModel model(kFig3Traj, kFig3Field);
    for (int k = 0; k <= 40; ++k) {
        const auto c = model.config_at(2.5 * k);
        CHECK(c.omega0 == 2.0 * c.B);
    }
}

TEST_CASE("hamiltonian limiting cases") {
    mol::Configuration c;
    c.J = 0;
    c.B = 1;
    ComplexMatrix expect(4);
    expect(0, 0) = 2;
    expect(3, 3) = -2;
    CHECK((mol::hamiltonian(c) - expect).max_abs() == 0.0);

    c.J = 1;
    c.B = 0;
    ComplexMatrix anti(4);
    anti(0, 3) = anti(1, 2) = anti(2, 1) = anti(3, 0) = 1;
    CHECK((mol::hamiltonian(c) - anti).max_abs() == 0.0);
}

TEST_CASE("hamiltonian spectrum is {+-J, +-sqrt(4B^2+J^2)}") {
    oracles::Rng rng(321);
    for (int trial = 0; trial < 60; ++trial) {
        mol::Configuration c;
        c.J = rng.uniform(-3.0, 3.0);
        c.B = rng.uniform(-2.0, 2.0);
        const auto e = la::eigh(mol::hamiltonian(c));
        double expect[4] = {-std::hypot(2 * c.B, c.J), -std::abs(c.J), std::abs(c.J),
                            std::hypot(2 * c.B, c.J)};
        std::sort(expect, expect + 4);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(e.eigenvalues[k] - expect[k]) < 1e-10);
    }
}

TEST_CASE("hamiltonian is real symmetric and swap invariant") {
    const MoleculeModel model(kFig3Traj, kFig3Field);
    ComplexMatrix swap(4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
    for (double t : {0.0, 17.0, 42.5, 80.0}) {
        const ComplexMatrix h = model.hamiltonian_at(t);
        CHECK(h.hermiticity_defect() == 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(h(i, j).imag() == 0.0);
        CHECK(la::commutator(h, swap).max_abs() == 0.0);
    }
}

TEST_CASE("hamiltonian_rate vanishes for static and turning-point configurations") {
    const MoleculeModel still(HarmonicTrajectory{-10.0, 10.0, 0.0, 50.0}, kFig3Field);
    CHECK(mol::hamiltonian_rate(still, 13.0, 1e-4).max_abs() == 0.0);

    const MoleculeModel osc(kFig3Traj, kFig3Field);
    CHECK(mol::hamiltonian_rate(osc, 0.0, 1e-5).max_abs() < 1e-9);
}

TEST_CASE("hamiltonian_rate self-converges at second order") {
    const MoleculeModel model(kFig3Traj, kFig3Field);
    const double t = 25.0; // quarter period: maximal velocity
    const ComplexMatrix r1 = mol::hamiltonian_rate(model, t, 0.02);
    const ComplexMatrix r2 = mol::hamiltonian_rate(model, t, 0.01);
    const ComplexMatrix r3 = mol::hamiltonian_rate(model, t, 0.005);
    const double d12 = (r1 - r2).max_abs();
    const double d23 = (r2 - r3).max_abs();
    CHECK(d12 / d23 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("constant-speed schedule hits its phase boundaries") {
    const ConstantSpeedTrajectory cs{-20.0, 20.0, 0.2, 20.0, 5.0};
    const mol::Trajectory traj = cs;
    // travel time per leg: (40-20)/(2*0.2) = 50; period = 2*50 + 2*5 = 110
    CHECK(mol::trajectory_period(traj) == doctest::Approx(110.0).epsilon(1e-14));

    auto d_at = [&](double t) {
        const auto [x1, x2] = mol::positions(traj, t);
        return std::abs(x1 - x2);
    };
    CHECK(d_at(0.0) == doctest::Approx(40.0));
    CHECK(d_at(25.0) == doctest::Approx(30.0)); // halfway in
    CHECK(d_at(50.0) == doctest::Approx(20.0));
    CHECK(d_at(52.0) == doctest::Approx(20.0)); // dwell at closest approach
    CHECK(d_at(80.0) == doctest::Approx(30.0));
    CHECK(d_at(105.0) == doctest::Approx(40.0)); // dwell at the far end
    CHECK(d_at(110.0) == doctest::Approx(40.0));
    CHECK(d_at(135.0) == doctest::Approx(30.0)); // periodic wrap
}

TEST_CASE("sampled trajectory replays a harmonic one") {
    SampledTrajectory st;
    const int n = 2000;
    for (int k = 0; k <= n; ++k) {
        const double t = 100.0 * k / n;
        const auto [x1, x2] = mol::positions(mol::Trajectory(kFig3Traj), t);
        st.samples.push_back({t, x1, x2});
    }
    const MoleculeModel model(st, kFig3Field);
    CHECK(model.period() == 100.0);
    for (double t : {3.14, 47.0, 81.9}) {
        const auto [x1, x2] = mol::positions(model.trajectory(), t);
        const auto [y1, y2] = mol::positions(mol::Trajectory(kFig3Traj), t);
        CHECK(x1 == doctest::Approx(y1).epsilon(1e-6));
        CHECK(x2 == doctest::Approx(y2).epsilon(1e-6));
    }
}

TEST_CASE("validation rejects bad inputs") {
    CHECK_THROWS_AS(MoleculeModel(kFig3Traj, FieldProfile{1, 1, -5.0, 1e4}), InputError);
    CHECK_THROWS_AS(MoleculeModel(kFig3Traj, FieldProfile{1, 1, 120.0, 0.0}), InputError);

    // asymmetric start
    CHECK_THROWS_AS(MoleculeModel(HarmonicTrajectory{-20, 25, 5, 100}, kFig3Field), InputError);
    // spins cross: x1 sweeps [-20, 10]
    CHECK_THROWS_AS(MoleculeModel(HarmonicTrajectory{-20, 20, 15, 100}, kFig3Field), InputError);
    // nonpositive period
    CHECK_THROWS_AS(MoleculeModel(HarmonicTrajectory{-20, 20, 5, 0}, kFig3Field), InputError);

    CHECK_THROWS_AS(MoleculeModel(ConstantSpeedTrajectory{-10, 10, 0.2, 25.0, 0.0}, kFig3Field),
                    InputError); // d_min above initial distance

    SampledTrajectory bad;
    bad.samples = {{0, -1, 1}, {1, -2, 2}, {2, -1.5, 1.5}};
    CHECK_THROWS_AS(MoleculeModel(bad, kFig3Field), InputError); // not periodic

    SampledTrajectory asym;
    asym.samples = {{0, -1, 1}, {1, -2, 2.5}, {2, -1, 1}};
    CHECK_THROWS_AS(MoleculeModel(asym, kFig3Field), InputError);
}
