#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qgs/errors.hpp"

namespace qgs {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Plain value type: cheap to copy at the
/// sizes this library works with, immutable-by-convention once handed to a
/// computation. Zero-sized dimensions are legal and all operations treat
/// them as empty sums/products.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);
    static ComplexMatrix diagonal(std::span<const cplx> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> entries() const { return data_; }

    ComplexMatrix transpose() const;
    ComplexMatrix conjugate() const;
    ComplexMatrix adjoint() const;

    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    void set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b);
    ComplexMatrix column(std::size_t j) const;

    double norm_max() const;
    double norm_fro() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;

    void check_finite() const;
};

/// Full SVD, m = u * diag(sigma) * v_adj with u, v_adj unitary and sigma
/// descending (length min(rows, cols)).
struct SvdResult {
    ComplexMatrix u;
    std::vector<double> sigma;
    ComplexMatrix v_adj;

    double sigma_max() const { return sigma.empty() ? 0.0 : sigma.front(); }
    double sigma_min() const { return sigma.empty() ? 0.0 : sigma.back(); }
};

/// Solves m * x = rhs by Gaussian elimination with partial pivoting.
/// Throws SingularMatrix when a pivot falls below 1e-12 * max|m|.
ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs);

/// Inverse via solve_linear against the identity.
ComplexMatrix inverse(const ComplexMatrix& m);

/// One-sided Jacobi SVD (rotations applied to column pairs until the Gram
/// matrix is diagonal). Provably convergent for the cyclic ordering used
/// here; throws ConvergenceFailure after 100 * max(rows, cols) sweeps.
SvdResult svd(const ComplexMatrix& m);

/// Descending singular values only; skips assembling the unitary factors.
std::vector<double> singular_values(const ComplexMatrix& m);

/// Orthonormal basis of the numerical kernel: right singular vectors with
/// sigma <= tol * sigma_max, returned as columns. A numerically zero matrix
/// yields the full space.
ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol);

/// Numerical rank: number of singular values above tol * sigma_max.
std::size_t rank(const ComplexMatrix& m, double tol);

/// Moore-Penrose pseudoinverse; singular values <= tol * sigma_max are
/// treated as exactly zero.
ComplexMatrix pseudoinverse(const ComplexMatrix& m, double tol);

bool is_unitary(const ComplexMatrix& m, double tol);
bool is_hermitian(const ComplexMatrix& m, double tol);

/// Determinant via pivoted LU. det of the empty matrix is 1.
cplx det(const ComplexMatrix& m);

/// Extends the orthonormal columns of `basis` (dim x k) to an orthonormal
/// basis of C^dim; returns the dim x (dim - k) complement.
ComplexMatrix orthonormal_complement(const ComplexMatrix& basis, std::size_t dim);

double unitarity_defect(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

} // namespace qgs
