#include "oscimol/qlinalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

namespace oscimol::la {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > ComplexMatrix::kMaxDim)
        throw InputError("ComplexMatrix: dim must be in [1, " +
                         std::to_string(ComplexMatrix::kMaxDim) + "], got " +
                         std::to_string(dim));
}

} // namespace

ComplexMatrix::ComplexMatrix(int dim) : dim_(dim) {
    check_dim(dim);
    std::fill_n(a_.begin(), size(), Complex{});
}

ComplexMatrix::ComplexMatrix(int dim, std::initializer_list<Complex> entries) : dim_(dim) {
    check_dim(dim);
    if (static_cast<int>(entries.size()) != size())
        throw InputError("ComplexMatrix: initializer has " + std::to_string(entries.size()) +
                         " entries, expected " + std::to_string(size()));
    std::copy(entries.begin(), entries.end(), a_.begin());
}

void ComplexMatrix::assign(const ComplexMatrix& other) {
    dim_ = other.dim_;
    std::copy_n(other.a_.begin(), other.size(), a_.begin());
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

void ComplexMatrix::check_same_dim(const ComplexMatrix& other, const char* op) const {
    if (dim_ != other.dim_)
        throw InputError(std::string(op) + ": dimension mismatch (" + std::to_string(dim_) +
                         " vs " + std::to_string(other.dim_) + ")");
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
    check_same_dim(rhs, "operator+=");
    const int n = size();
    for (int k = 0; k < n; ++k) a_[k] += rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
    check_same_dim(rhs, "operator-=");
    const int n = size();
    for (int k = 0; k < n; ++k) a_[k] -= rhs.a_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    const int n = size();
    for (int k = 0; k < n; ++k) a_[k] *= s;
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(double s) {
    const int n = size();
    for (int k = 0; k < n; ++k) a_[k] *= s;
    return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out;
    out.dim_ = dim_;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) out(i, j) = std::conj((*this)(j, i));
    return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix out;
    out.dim_ = dim_;
    const int n = size();
    for (int k = 0; k < n; ++k) out.a_[k] = std::conj(a_[k]);
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t{};
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    const int n = size();
    for (int k = 0; k < n; ++k) m = std::max(m, std::abs(a_[k]));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    double m = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return m;
}

void ComplexMatrix::symmetrize() {
    for (int i = 0; i < dim_; ++i) {
        (*this)(i, i) = Complex((*this)(i, i).real(), 0.0);
        for (int j = i + 1; j < dim_; ++j) {
            const Complex v = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = v;
            (*this)(j, i) = std::conj(v);
        }
    }
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

void multiply_into(ComplexMatrix& out, const ComplexMatrix& a, const ComplexMatrix& b) {
    a.check_same_dim(b, "operator*");
    const int n = a.dim();
    if (out.dim() != n) out = ComplexMatrix(n);
    if (n == 4) {
        // dominant case: unrolled 4x4 (called several hundred times per step)
        const Complex* pa = a.data();
        const Complex* pb = b.data();
        Complex* po = out.data();
        for (int i = 0; i < 4; ++i) {
            const Complex a0 = pa[4 * i], a1 = pa[4 * i + 1], a2 = pa[4 * i + 2],
                          a3 = pa[4 * i + 3];
            po[4 * i + 0] = a0 * pb[0] + a1 * pb[4] + a2 * pb[8] + a3 * pb[12];
            po[4 * i + 1] = a0 * pb[1] + a1 * pb[5] + a2 * pb[9] + a3 * pb[13];
            po[4 * i + 2] = a0 * pb[2] + a1 * pb[6] + a2 * pb[10] + a3 * pb[14];
            po[4 * i + 3] = a0 * pb[3] + a1 * pb[7] + a2 * pb[11] + a3 * pb[15];
        }
        return;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc{};
            for (int k = 0; k < n; ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out;
    multiply_into(out, a, b);
    return out;
}

ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(double s, ComplexMatrix a) { return a *= s; }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int na = a.dim(), nb = b.dim();
    if (na * nb > ComplexMatrix::kMaxDim)
        throw InputError("kron: product dimension " + std::to_string(na * nb) + " exceeds " +
                         std::to_string(ComplexMatrix::kMaxDim));
    ComplexMatrix out(na * nb);
    for (int ia = 0; ia < na; ++ia)
        for (int ja = 0; ja < na; ++ja)
            for (int ib = 0; ib < nb; ++ib)
                for (int jb = 0; jb < nb; ++jb)
                    out(ia * nb + ib, ja * nb + jb) = a(ia, ja) * b(ib, jb);
    return out;
}

ComplexMatrix pauli_x() { return ComplexMatrix(2, {0, 1, 1, 0}); }
ComplexMatrix pauli_y() { return ComplexMatrix(2, {0, Complex(0, -1), Complex(0, 1), 0}); }
ComplexMatrix pauli_z() { return ComplexMatrix(2, {1, 0, 0, -1}); }
ComplexMatrix pauli_plus() { return ComplexMatrix(2, {0, 1, 0, 0}); }
ComplexMatrix pauli_minus() { return ComplexMatrix(2, {0, 0, 1, 0}); }

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition: cyclic complex Jacobi.
//
// Each rotation annihilates one off-diagonal pair (p,q). The 2x2 Hermitian
// block [[a, b f],[b conj(f), d]] (a,d real, b = |A_pq|, f its phase) is
// diagonalized by W = diag(1, conj(f)) * G(theta), with the classic stable
// tangent t = sign(zeta)/(|zeta| + sqrt(1+zeta^2)), zeta = (d-a)/(2b).
// Quadratic convergence; a handful of sweeps at these dimensions.
// ---------------------------------------------------------------------------

EigenDecomposition eigh(const ComplexMatrix& H) {
    const int n = H.dim();
    if (n < 1) throw InputError("eigh: empty matrix");

    const double scale = std::max(1.0, H.max_abs());
    if (H.hermiticity_defect() > 1e-10 * scale)
        throw InputError("eigh: matrix is not Hermitian within tolerance (defect " +
                         std::to_string(H.hermiticity_defect()) + ")");

    ComplexMatrix A = H;
    A.symmetrize();
    ComplexMatrix V = ComplexMatrix::identity(n);

    const double off_tol = 1e-15 * scale;
    const int max_sweeps = 40;
    bool converged = false;

    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double off_max = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off_max = std::max(off_max, std::abs(A(p, q)));
        if (off_max <= off_tol) {
            converged = true;
            break;
        }

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex apq = A(p, q);
                const double b = std::abs(apq);
                if (b <= off_tol * 1e-2) continue;

                const Complex f = apq / b;
                const double a = A(p, p).real();
                const double d = A(q, q).real();
                const double zeta = (d - a) / (2.0 * b);
                const double t =
                    (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex fc = std::conj(f);

                // A <- W^dag A W: columns then rows
                for (int k = 0; k < n; ++k) {
                    const Complex akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * fc * akq;
                    A(k, q) = s * akp + c * fc * akq;
                }
                for (int j = 0; j < n; ++j) {
                    const Complex apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj - s * f * aqj;
                    A(q, j) = s * apj + c * f * aqj;
                }
                A(p, q) = 0.0;
                A(q, p) = 0.0;
                A(p, p) = Complex(A(p, p).real(), 0.0);
                A(q, q) = Complex(A(q, q).real(), 0.0);

                for (int k = 0; k < n; ++k) {
                    const Complex vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * fc * vkq;
                    V(k, q) = s * vkp + c * fc * vkq;
                }
            }
        }
    }

    if (!converged) {
        double off_max = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off_max = std::max(off_max, std::abs(A(p, q)));
        if (off_max > off_tol)
            throw NumericalError("eigh: Jacobi sweeps did not converge (residual " +
                                 std::to_string(off_max) + ")");
    }

    std::array<int, ComplexMatrix::kMaxDim> order{};
    std::iota(order.begin(), order.begin() + n, 0);
    std::stable_sort(order.begin(), order.begin() + n,
                     [&](int i, int j) { return A(i, i).real() < A(j, j).real(); });

    EigenDecomposition out;
    out.dim = n;
    out.eigenvectors = ComplexMatrix(n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.eigenvalues[j] = A(src, src).real();
        int kmax = 0;
        double vmax = -1.0;
        for (int k = 0; k < n; ++k) {
            const double v = std::abs(V(k, src));
            if (v > vmax + 1e-15) {
                vmax = v;
                kmax = k;
            }
        }
        const Complex piv = V(kmax, src);
        const Complex phase = (std::abs(piv) > 0.0) ? std::conj(piv) / std::abs(piv) : Complex(1.0);
        for (int k = 0; k < n; ++k) out.eigenvectors(k, j) = V(k, src) * phase;
    }
    return out;
}

ComplexMatrix expm_hermitian(const ComplexMatrix& H, double scale) {
    const EigenDecomposition e = eigh(H);
    const int n = e.dim;
    ComplexMatrix out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex acc{};
            for (int k = 0; k < n; ++k)
                acc += e.eigenvectors(i, k) * std::exp(scale * e.eigenvalues[k]) *
                       std::conj(e.eigenvectors(j, k));
            out(i, j) = acc;
        }
    }
    return out;
}

double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
    rho1.check_same_dim(rho2, "trace_distance");
    const EigenDecomposition e = eigh(rho1 - rho2);
    double s = 0.0;
    for (int i = 0; i < e.dim; ++i) s += std::abs(e.eigenvalues[i]);
    return 0.5 * s;
}

} // namespace oscimol::la
