#include "oscimol/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace oscimol::dyn {

using la::Complex;
using la::ComplexMatrix;

namespace {

struct IndexedFrequency {
    double omega;
    int i, j;
};

// sigma_x acting on one spin of the pair, in the fixed product basis
const ComplexMatrix& sigma_x_of(int spin) {
    static const ComplexMatrix sx1 = la::kron(la::pauli_x(), ComplexMatrix::identity(2));
    static const ComplexMatrix sx2 = la::kron(ComplexMatrix::identity(2), la::pauli_x());
    return spin == 1 ? sx1 : sx2;
}

void transition_operators_into(std::vector<TransitionOperator>& out, const ComplexMatrix& H,
                               double deg_tol) {
    if (H.dim() != 4) throw InputError("transition_operators: expected a 4x4 Hamiltonian");
    const la::EigenDecomposition e = la::eigh(H);
    const ComplexMatrix& V = e.eigenvectors;

    out.clear();
    std::array<IndexedFrequency, 16> freqs;
    for (int spin = 1; spin <= 2; ++spin) {
        // S_ij = <e_i| sigma_x |e_j>
        const ComplexMatrix sel = V.adjoint() * sigma_x_of(spin) * V;

        int nf = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                freqs[nf++] = {e.eigenvalues[j] - e.eigenvalues[i], i, j};
        std::sort(freqs.begin(), freqs.end(), [](const IndexedFrequency& a, const IndexedFrequency& b) {
            if (a.omega != b.omega) return a.omega < b.omega;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });

        int k = 0;
        while (k < nf) {
            int k2 = k + 1;
            double sum = freqs[k].omega;
            while (k2 < nf && freqs[k2].omega - freqs[k2 - 1].omega < deg_tol) {
                sum += freqs[k2].omega;
                ++k2;
            }
            ComplexMatrix m(4);
            for (int p = k; p < k2; ++p) {
                const int i = freqs[p].i, j = freqs[p].j;
                const Complex s = sel(i, j);
                if (s == Complex{}) continue;
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) m(r, c) += s * V(r, i) * std::conj(V(c, j));
            }
            if (m.max_abs() > 0.0) out.push_back({spin, sum / (k2 - k), m});
            k = k2;
        }
    }
}

// One Lindblad generator with its precomputed adjoint products.
struct PreparedGenerator {
    ComplexMatrix L;
    ComplexMatrix Ldag;
    ComplexMatrix gram; // L^dag L
    int spin;
    double omega;
};

void prepare_generator(PreparedGenerator& g, const ComplexMatrix& L, int spin, double omega) {
    g.L = L;
    g.Ldag = L.adjoint();
    multiply_into(g.gram, g.Ldag, g.L);
    g.spin = spin;
    g.omega = omega;
}

// Builds H(t) and the generator set once per evaluation time; spin-gas
// generators are time independent and built a single time.
class LiouvilleEvaluator {
public:
    LiouvilleEvaluator(const mol::MoleculeModel& model, const env::BathSpec& bath, double deg_tol)
        : model_(model), bath_(bath), deg_tol_(deg_tol) {
        env::validate_bath(bath_);
        if (const auto* sg = std::get_if<env::SpinGasBath>(&bath_)) {
            for (const auto& g : env::spin_gas_generators(*sg)) {
                if (g.op.max_abs() == 0.0) continue;
                gens_.emplace_back();
                prepare_generator(gens_.back(), g.op, g.spin, 0.0);
            }
            fixed_generators_ = true;
        }
    }

    void prepare(double t) {
        const mol::Configuration cfg = model_.config_at(t);
        if (have_cache_ && cfg.x1 == cached_x1_ && cfg.x2 == cached_x2_) return;
        cached_x1_ = cfg.x1;
        cached_x2_ = cfg.x2;
        have_cache_ = true;

        H_ = mol::hamiltonian(cfg);
        if (fixed_generators_) return;
        const auto& bos = std::get<env::BosonicBath>(bath_);
        gens_.clear();
        if (bos.kappa == 0.0) return;
        transition_operators_into(ops_scratch_, H_, deg_tol_);
        for (const auto& op : ops_scratch_) {
            const double r = env::rate(bos, op.omega);
            if (r <= 0.0) continue;
            gens_.emplace_back();
            prepare_generator(gens_.back(), std::sqrt(r) * op.matrix, op.spin, op.omega);
        }
    }

    // out = -i[H, rho] + D rho at the prepared time
    void apply(const ComplexMatrix& rho, ComplexMatrix& out) {
        multiply_into(t1_, H_, rho);
        multiply_into(t2_, rho, H_);
        t1_ -= t2_;
        t1_ *= Complex(0.0, -1.0);
        out = t1_;
        for (const auto& g : gens_) {
            multiply_into(t1_, g.L, rho);
            multiply_into(t2_, t1_, g.Ldag);
            t2_ *= 2.0;
            out += t2_;
            multiply_into(t1_, g.gram, rho);
            out -= t1_;
            multiply_into(t1_, rho, g.gram);
            out -= t1_;
        }
    }

    const ComplexMatrix& hamiltonian() const { return H_; }
    const std::vector<PreparedGenerator>& generators() const { return gens_; }

private:
    const mol::MoleculeModel& model_;
    const env::BathSpec& bath_;
    double deg_tol_;
    bool fixed_generators_ = false;
    bool have_cache_ = false;
    double cached_x1_ = 0.0, cached_x2_ = 0.0;
    ComplexMatrix H_;
    std::vector<PreparedGenerator> gens_;
    std::vector<TransitionOperator> ops_scratch_;
    ComplexMatrix t1_, t2_;
};

void check_physical_initial_state(const ComplexMatrix& rho0) {
    if (rho0.dim() != 4) throw InputError("propagate: rho0 must be 4x4");
    if (rho0.hermiticity_defect() > 1e-9)
        throw InputError("propagate: rho0 is not Hermitian within 1e-9");
    if (std::abs(rho0.trace() - Complex(1.0)) > 1e-9)
        throw InputError("propagate: rho0 trace differs from 1 beyond 1e-9");
    const la::EigenDecomposition e = la::eigh(rho0);
    if (e.eigenvalues[0] < -1e-9)
        throw InputError("propagate: rho0 has negative eigenvalue " +
                         std::to_string(e.eigenvalues[0]));
}

double min_eigenvalue(const ComplexMatrix& rho) {
    return la::eigh(rho).eigenvalues[0];
}

// Fixed-step RK4 over a window of length T. The molecule is evaluated at
// eval_t0 + local time (cycles pass local time to keep trig arguments small);
// samples are reported at report_t0 + local time.
void integrate_window(LiouvilleEvaluator& lv, ComplexMatrix& rho, double eval_t0, double report_t0,
                      double T, int n_steps, int stride, bool include_endpoint,
                      const std::function<void(double, const ComplexMatrix&)>& on_sample) {
    const double h = T / n_steps;
    ComplexMatrix k1, k2, k3, k4, work;

    auto check_and_sample = [&](int n) {
        const double drift = std::abs(rho.trace() - Complex(1.0));
        if (drift > kTraceTol)
            throw NumericalError("propagate: trace drift " + std::to_string(drift) + " at t = " +
                                 std::to_string(report_t0 + n * h) + " exceeds " +
                                 std::to_string(kTraceTol));
        const bool at_sample =
            (n < n_steps && n % stride == 0) || (n == n_steps && include_endpoint);
        if (!at_sample) return;
        const double mineig = min_eigenvalue(rho);
        if (mineig < -kPositivityTol)
            throw NumericalError("propagate: negative eigenvalue " + std::to_string(mineig) +
                                 " at t = " + std::to_string(report_t0 + n * h) +
                                 " (step size too large?)");
        if (on_sample) on_sample(report_t0 + n * h, rho);
    };

    for (int n = 0; n < n_steps; ++n) {
        check_and_sample(n);
        const double t = eval_t0 + n * h;

        lv.prepare(t);
        lv.apply(rho, k1);

        work = k1;
        work *= 0.5 * h;
        work += rho;
        lv.prepare(t + 0.5 * h);
        lv.apply(work, k2);

        work = k2;
        work *= 0.5 * h;
        work += rho;
        lv.apply(work, k3); // same evaluation time as k2

        work = k3;
        work *= h;
        work += rho;
        lv.prepare(t + h);
        lv.apply(work, k4);

        k2 += k3;
        k2 *= 2.0;
        k1 += k2;
        k1 += k4;
        k1 *= h / 6.0;
        rho += k1;
        rho.symmetrize();
    }
    check_and_sample(n_steps);
}

} // namespace

std::vector<TransitionOperator> transition_operators(const ComplexMatrix& H, double deg_tol) {
    std::vector<TransitionOperator> out;
    transition_operators_into(out, H, deg_tol);
    return out;
}

LindbladSet lindblad_set(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                         double deg_tol) {
    env::validate_bath(bath);
    LindbladSet set;
    set.t = t;
    if (const auto* sg = std::get_if<env::SpinGasBath>(&bath)) {
        for (const auto& g : env::spin_gas_generators(*sg))
            if (g.op.max_abs() > 0.0) set.generators.push_back({g.op, g.spin, 0.0});
        return set;
    }
    const auto& bos = std::get<env::BosonicBath>(bath);
    if (bos.kappa == 0.0) return set;
    const ComplexMatrix H = model.hamiltonian_at(t);
    for (const auto& op : transition_operators(H, deg_tol)) {
        const double r = env::rate(bos, op.omega);
        if (r <= 0.0) continue;
        set.generators.push_back({std::sqrt(r) * op.matrix, op.spin, op.omega});
    }
    return set;
}

ComplexMatrix dissipator(const ComplexMatrix& rho, const LindbladSet& lindblads) {
    ComplexMatrix out(rho.dim());
    for (const auto& g : lindblads.generators) {
        rho.check_same_dim(g.op, "dissipator");
        const ComplexMatrix Ldag = g.op.adjoint();
        const ComplexMatrix gram = Ldag * g.op;
        out += 2.0 * (g.op * rho * Ldag);
        out -= gram * rho;
        out -= rho * gram;
    }
    return out;
}

ComplexMatrix rhs(const mol::MoleculeModel& model, const env::BathSpec& bath, double t,
                  const ComplexMatrix& rho) {
    LiouvilleEvaluator lv(model, bath, kDegTol);
    lv.prepare(t);
    ComplexMatrix out;
    lv.apply(rho, out);
    return out;
}

std::vector<Sample> propagate(const mol::MoleculeModel& model, const env::BathSpec& bath,
                              const ComplexMatrix& rho0, double t0, double t1,
                              StepControl step_control, int stride) {
    if (step_control.n_steps < 1) throw InputError("propagate: n_steps must be >= 1");
    if (stride < 1) throw InputError("propagate: stride must be >= 1");
    if (!(t1 > t0)) throw InputError("propagate: need t1 > t0");
    check_physical_initial_state(rho0);

    LiouvilleEvaluator lv(model, bath, kDegTol);
    ComplexMatrix rho = rho0;
    std::vector<Sample> samples;
    samples.reserve(static_cast<std::size_t>(step_control.n_steps / stride) + 2);
    integrate_window(lv, rho, t0, t0, t1 - t0, step_control.n_steps, stride, true,
                     [&](double t, const ComplexMatrix& r) { samples.push_back({t, r}); });
    return samples;
}

CycleReport find_asymptotic_cycle(const mol::MoleculeModel& model, const env::BathSpec& bath,
                                  const ComplexMatrix& rho0, const CycleOptions& options,
                                  const SampleSink& sink) {
    if (!(options.tau > 0.0)) throw InputError("find_asymptotic_cycle: tau must be > 0");
    if (options.steps_per_period < 100)
        throw InputError("find_asymptotic_cycle: steps_per_period must be >= 100");
    if (!(options.cycle_tol > 0.0 && options.cycle_tol < 1.0))
        throw InputError("find_asymptotic_cycle: cycle_tol must be in (0, 1)");
    if (options.max_cycles < 1) throw InputError("find_asymptotic_cycle: max_cycles must be >= 1");
    if (options.stride < 1) throw InputError("find_asymptotic_cycle: stride must be >= 1");
    check_physical_initial_state(rho0);

    LiouvilleEvaluator lv(model, bath, options.deg_tol);
    ComplexMatrix rho = rho0;
    const double h = options.tau / options.steps_per_period;

    CycleReport report;
    for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
        const ComplexMatrix cycle_start = rho;
        report.cycle_states.clear();
        integrate_window(lv, rho, 0.0, cycle * options.tau, options.tau, options.steps_per_period,
                         options.stride, false, [&](double t, const ComplexMatrix& r) {
                             report.cycle_states.push_back({t, r});
                             const double local = t - cycle * options.tau;
                             report.max_adiabaticity_ratio =
                                 std::max(report.max_adiabaticity_ratio,
                                          adiabaticity_ratio(model, local, h, options.deg_tol));
                             if (sink) sink(cycle, report.cycle_states.back());
                         });
        report.n_cycles = cycle + 1;
        report.residual = la::trace_distance(rho, cycle_start);
        if (report.residual < options.cycle_tol) {
            report.converged = true;
            break;
        }
    }
    return report;
}

double adiabaticity_ratio(const mol::MoleculeModel& model, double t, double dt, double deg_tol) {
    const la::EigenDecomposition e = la::eigh(model.hamiltonian_at(t));
    const ComplexMatrix hdot = mol::hamiltonian_rate(model, t, dt);
    const ComplexMatrix m = e.eigenvectors.adjoint() * hdot * e.eigenvectors;
    double worst = 0.0;
    for (int i = 0; i < e.dim; ++i) {
        for (int j = 0; j < e.dim; ++j) {
            if (i == j) continue;
            const double gap = std::abs(e.eigenvalues[i] - e.eigenvalues[j]);
            if (gap <= deg_tol) continue;
            worst = std::max(worst, std::abs(m(i, j)) / (gap * gap));
        }
    }
    return worst;
}

} // namespace oscimol::dyn
