// qlinalg.hpp — Small dense complex linear algebra: fixed-capacity matrices,
// Hermitian eigendecomposition (cyclic complex Jacobi), matrix exponential of
// Hermitian matrices, tensor products, trace distance.
//
// Everything here is sized for the two-spin problem: dimensions up to 16
// (4x4 states, 16x16 vectorized Liouvillians), stored inline with no heap
// allocation. eigh runs at every integrator substep, so matrices are packed
// row-major and copies touch only the active dim*dim block.

#pragma once

#include <array>
#include <complex>
#include <initializer_list>

#include "oscimol/errors.hpp"

namespace oscimol::la {

using Complex = std::complex<double>;

class ComplexMatrix {
public:
    static constexpr int kMaxDim = 16;

    ComplexMatrix() = default;
    explicit ComplexMatrix(int dim);
    ComplexMatrix(int dim, std::initializer_list<Complex> entries); // row-major

    ComplexMatrix(const ComplexMatrix& other) { assign(other); }
    ComplexMatrix& operator=(const ComplexMatrix& other) {
        if (this != &other) assign(other);
        return *this;
    }

    static ComplexMatrix identity(int dim);

    int dim() const { return dim_; }
    int size() const { return dim_ * dim_; }

    Complex& operator()(int i, int j) { return a_[i * dim_ + j]; }
    const Complex& operator()(int i, int j) const { return a_[i * dim_ + j]; }

    Complex* data() { return a_.data(); }
    const Complex* data() const { return a_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& rhs);
    ComplexMatrix& operator-=(const ComplexMatrix& rhs);
    ComplexMatrix& operator*=(Complex s);
    ComplexMatrix& operator*=(double s);

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    Complex trace() const;
    double max_abs() const;

    // largest |(A - A^dag)_{ij}|
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-10) const { return hermiticity_defect() <= tol; }

    // A <- (A + A^dag)/2
    void symmetrize();

    void check_same_dim(const ComplexMatrix& other, const char* op) const;

private:
    void assign(const ComplexMatrix& other);

    int dim_ = 0;
    std::array<Complex, kMaxDim * kMaxDim> a_; // packed, only dim_*dim_ used
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(double s, ComplexMatrix a);

// C = A*B without constructing a temporary in the caller
void multiply_into(ComplexMatrix& out, const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// Tensor product; the left factor is spin 1. With the global basis ordering
// (uu, ud, du, dd), kron(A, I2) acts on spin 1 and kron(I2, A) on spin 2.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// 2x2 building blocks. Basis: index 0 = up (sigma_z eigenvalue +1), 1 = down.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix pauli_plus();  // |up><down|
ComplexMatrix pauli_minus(); // |down><up|

struct EigenDecomposition {
    int dim = 0;
    std::array<double, ComplexMatrix::kMaxDim> eigenvalues{}; // ascending
    ComplexMatrix eigenvectors; // orthonormal columns, phase-fixed so the
                                // largest-magnitude component is real positive
};

// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
// H is symmetrized internally; throws InputError if the Hermiticity defect
// exceeds 1e-10 * max(1, |H|_max), NumericalError if sweeps fail to converge.
EigenDecomposition eigh(const ComplexMatrix& H);

// V diag(exp(scale * eps_i)) V^dag
ComplexMatrix expm_hermitian(const ComplexMatrix& H, double scale);

// (1/2) sum_i |eig_i(rho1 - rho2)|, in [0,1] for density matrices
double trace_distance(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

} // namespace oscimol::la
