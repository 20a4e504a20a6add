#include "qgs/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "qgs/tolerance.hpp"

namespace qgs {

Tolerance Tolerance::from_env() {
    Tolerance t;
    if (const char* s = std::getenv("QGS_TOLERANCE")) {
        char* end = nullptr;
        const double v = std::strtod(s, &end);
        if (end != s && v > 0.0) t.rank_rel = v;
    }
    return t;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionMismatch("entry count does not match rows * cols");
    check_finite();
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite();
}

void ComplexMatrix::check_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("non-finite matrix entry");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) { return {rows, cols}; }

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix c = *this;
    for (cplx& z : c.data_) z = std::conj(z);
    return c;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw IndexOutOfRange("block out of range");
    ComplexMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void ComplexMatrix::set_block(std::size_t r0, std::size_t c0, const ComplexMatrix& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
        throw IndexOutOfRange("block out of range");
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

ComplexMatrix ComplexMatrix::column(std::size_t j) const { return block(0, j, rows_, 1); }

double ComplexMatrix::norm_max() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

double ComplexMatrix::norm_fro() const {
    double s = 0.0;
    for (const cplx& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix add");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
    for (cplx& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product");
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

namespace {

// LU with partial pivoting, in place. Returns the pivot row permutation sign,
// or 0 if a pivot collapses below the singularity cutoff.
int lu_decompose(ComplexMatrix& a, std::vector<std::size_t>& perm, double pivot_floor) {
    const std::size_t n = a.rows();
    perm.resize(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best <= pivot_floor) return 0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(perm[k], perm[piv]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const cplx f = a(i, k) / a(k, k);
            a(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return sign;
}

} // namespace

ComplexMatrix solve_linear(const ComplexMatrix& m, const ComplexMatrix& rhs) {
    if (!m.square()) throw DimensionMismatch("solve_linear needs a square matrix");
    if (m.rows() != rhs.rows()) throw DimensionMismatch("solve_linear size mismatch");
    const std::size_t n = m.rows();
    if (n == 0) return ComplexMatrix(0, rhs.cols());

    ComplexMatrix lu = m;
    std::vector<std::size_t> perm;
    const double floor = 1e-12 * m.norm_max();
    if (lu_decompose(lu, perm, floor) == 0)
        throw SingularMatrix("pivot below 1e-12 * max|m|");

    ComplexMatrix x(n, rhs.cols());
    for (std::size_t c = 0; c < rhs.cols(); ++c) {
        // forward substitution on the permuted right-hand side
        std::vector<cplx> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            cplx v = rhs(perm[i], c);
            for (std::size_t j = 0; j < i; ++j) v -= lu(i, j) * y[j];
            y[i] = v;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            cplx v = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j) v -= lu(ii, j) * x(j, c);
            x(ii, c) = v / lu(ii, ii);
        }
    }
    return x;
}

ComplexMatrix inverse(const ComplexMatrix& m) {
    return solve_linear(m, ComplexMatrix::identity(m.rows()));
}

cplx det(const ComplexMatrix& m) {
    if (!m.square()) throw DimensionMismatch("det needs a square matrix");
    if (m.rows() == 0) return 1.0;
    ComplexMatrix lu = m;
    std::vector<std::size_t> perm;
    const int sign = lu_decompose(lu, perm, 0.0);
    if (sign == 0) return 0.0;
    cplx d = static_cast<double>(sign);
    for (std::size_t i = 0; i < m.rows(); ++i) d *= lu(i, i);
    return d;
}

namespace {

// One-sided Jacobi on the columns of `work` (rows >= cols assumed by caller).
// Accumulates the applied rotations into `v` so that original = work_out * v^*.
void jacobi_sweeps(ComplexMatrix& work, ComplexMatrix& v) {
    const std::size_t n = work.cols();
    const std::size_t rows = work.rows();
    if (n < 2) return;
    const double eps = 1e-15;
    const std::size_t max_sweeps = 100 * std::max(rows, n);
    // columns below roundoff of the overall scale carry no direction and are
    // treated as converged (their sigma is zero)
    const double fro2 = work.norm_fro() * work.norm_fro();
    const double dead = fro2 * 1e-30;

    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0;
                cplx apq{0.0, 0.0};
                for (std::size_t i = 0; i < rows; ++i) {
                    app += std::norm(work(i, p));
                    aqq += std::norm(work(i, q));
                    apq += std::conj(work(i, p)) * work(i, q);
                }
                const double off = std::abs(apq);
                if (app <= dead || aqq <= dead) continue;
                if (off <= eps * std::sqrt(app * aqq) || off == 0.0) continue;
                rotated = true;

                // Phase out apq, then a real Jacobi rotation on the 2x2 Gram
                // block [[app, |apq|], [|apq|, aqq]].
                const cplx phase = apq / off;
                const double tau = (aqq - app) / (2.0 * off);
                const double t =
                    (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < rows; ++i) {
                    const cplx wp = work(i, p);
                    const cplx wq = std::conj(phase) * work(i, q);
                    work(i, p) = c * wp - s * wq;
                    work(i, q) = s * wp + c * wq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vp = v(i, p);
                    const cplx vq = std::conj(phase) * v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) return;
    }
    throw ConvergenceFailure("jacobi SVD did not converge within the sweep cap (" + std::to_string(rows) + "x" + std::to_string(n) + ", scale " + std::to_string(std::sqrt(fro2)) + ")");
}

// Completion: fills columns [k, dim) of u with an orthonormal complement of
// its first k columns. Each new column starts from the standard basis vector
// with the largest residual against the columns accepted so far.
void complete_basis(ComplexMatrix& u, std::size_t k) {
    const std::size_t dim = u.rows();
    std::vector<cplx> cand(dim), best(dim);
    for (std::size_t col = k; col < dim; ++col) {
        double best_norm = -1.0;
        for (std::size_t seed = 0; seed < dim; ++seed) {
            std::fill(cand.begin(), cand.end(), cplx{0.0, 0.0});
            cand[seed] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < col; ++j) {
                    cplx proj{0.0, 0.0};
                    for (std::size_t i = 0; i < dim; ++i) proj += std::conj(u(i, j)) * cand[i];
                    for (std::size_t i = 0; i < dim; ++i) cand[i] -= proj * u(i, j);
                }
            }
            double nrm = 0.0;
            for (const cplx& z : cand) nrm += std::norm(z);
            nrm = std::sqrt(nrm);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = cand;
            }
            if (best_norm > 0.9) break; // good enough, skip the remaining seeds
        }
        if (best_norm <= 1e-7) throw Error("orthonormal completion failed");
        for (std::size_t i = 0; i < dim; ++i) u(i, col) = best[i] / best_norm;
    }
}

// Rotated columns (work = U * Sigma), accumulated right factor and sorted
// sigma, without forming the full left unitary. rows >= cols assumed.
struct JacobiCore {
    ComplexMatrix work; // columns are u_j * sigma_j, sorted descending
    ComplexMatrix v;    // right singular vectors as columns, same order
    std::vector<double> sigma;
};

JacobiCore jacobi_core(const ComplexMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    JacobiCore c{m, ComplexMatrix::identity(cols), {}};
    jacobi_sweeps(c.work, c.v);

    std::vector<double> sig(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += std::norm(c.work(i, j));
        sig[j] = std::sqrt(s);
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });

    ComplexMatrix ws(rows, cols), vs(cols, cols);
    c.sigma.resize(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        const std::size_t src = order[j];
        c.sigma[j] = sig[src];
        for (std::size_t i = 0; i < rows; ++i) ws(i, j) = c.work(i, src);
        for (std::size_t i = 0; i < cols; ++i) vs(i, j) = c.v(i, src);
    }
    c.work = std::move(ws);
    c.v = std::move(vs);
    return c;
}

SvdResult svd_tall(const ComplexMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    JacobiCore c = jacobi_core(m);

    SvdResult r;
    r.sigma = c.sigma;
    ComplexMatrix u(rows, rows);
    const double smax = r.sigma.empty() ? 0.0 : r.sigma.front();
    std::size_t good = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        // Columns whose norm is at rounding level carry no usable direction;
        // they are regenerated by basis completion below.
        if (c.sigma[j] > smax * 1e-14 && c.sigma[j] > 0.0) {
            for (std::size_t i = 0; i < rows; ++i) u(i, j) = c.work(i, j) / c.sigma[j];
            good = j + 1;
        }
    }
    complete_basis(u, good);
    r.u = std::move(u);
    r.v_adj = c.v.adjoint();
    return r;
}

} // namespace

SvdResult svd(const ComplexMatrix& m) {
    if (m.rows() >= m.cols()) return svd_tall(m);
    SvdResult t = svd_tall(m.adjoint());
    SvdResult r;
    r.sigma = std::move(t.sigma);
    r.u = t.v_adj.adjoint();
    r.v_adj = t.u.adjoint();
    return r;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    if (m.empty()) return {};
    if (m.rows() >= m.cols()) return jacobi_core(m).sigma;
    return jacobi_core(m.adjoint()).sigma;
}

ComplexMatrix kernel_basis(const ComplexMatrix& m, double tol) {
    if (tol <= 0.0) throw Error("kernel_basis requires tol > 0");
    if (m.cols() == 0) return ComplexMatrix(0, 0);
    if (m.rows() == 0) return ComplexMatrix::identity(m.cols());
    // right singular vectors only; wide inputs get their missing directions
    // as exact kernel members
    const bool wide = m.rows() < m.cols();
    const JacobiCore c = jacobi_core(wide ? m.adjoint() : m);
    const ComplexMatrix v_right = wide ? [&] {
        ComplexMatrix u(m.cols(), m.cols());
        const double smax = c.sigma.empty() ? 0.0 : c.sigma.front();
        std::size_t good = 0;
        for (std::size_t j = 0; j < c.sigma.size(); ++j) {
            if (c.sigma[j] > smax * 1e-14 && c.sigma[j] > 0.0) {
                for (std::size_t i = 0; i < m.cols(); ++i)
                    u(i, j) = c.work(i, j) / c.sigma[j];
                good = j + 1;
            }
        }
        complete_basis(u, good);
        return u;
    }()
                                        : c.v;
    const double smax = c.sigma.empty() ? 0.0 : c.sigma.front();
    const double cut = tol * smax;
    std::size_t keep = 0; // number of singular values above the cutoff
    for (double s : c.sigma)
        if (s > cut) ++keep;
    const std::size_t dim = m.cols() - keep;
    ComplexMatrix basis(m.cols(), dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < m.cols(); ++i) basis(i, j) = v_right(i, keep + j);
    return basis;
}

std::size_t rank(const ComplexMatrix& m, double tol) {
    if (m.empty()) return 0;
    const std::vector<double> sigma = singular_values(m);
    const double cut = tol * (sigma.empty() ? 0.0 : sigma.front());
    std::size_t r = 0;
    for (double v : sigma)
        if (v > cut) ++r;
    return r;
}

ComplexMatrix pseudoinverse(const ComplexMatrix& m, double tol) {
    if (tol <= 0.0) throw Error("pseudoinverse requires tol > 0");
    if (m.empty()) return m.adjoint();
    // only the directions above the cutoff contribute, so the rotated
    // columns u_t sigma_t suffice and no basis completion is needed
    const bool wide = m.rows() < m.cols();
    const JacobiCore c = jacobi_core(wide ? m.adjoint() : m);
    const double cut = tol * (c.sigma.empty() ? 0.0 : c.sigma.front());
    ComplexMatrix p(m.cols(), m.rows());
    for (std::size_t t = 0; t < c.sigma.size(); ++t) {
        if (c.sigma[t] <= cut) continue;
        const double inv2 = 1.0 / (c.sigma[t] * c.sigma[t]);
        // p += v_t u_t^* / sigma_t with u_t = work_t / sigma_t
        for (std::size_t i = 0; i < m.cols(); ++i) {
            const cplx vi = (wide ? c.work(i, t) : c.v(i, t)) * inv2;
            for (std::size_t j = 0; j < m.rows(); ++j)
                p(i, j) += vi * std::conj(wide ? c.v(j, t) : c.work(j, t));
        }
    }
    return p;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (!m.square()) throw DimensionMismatch("is_unitary needs a square matrix");
    return unitarity_defect(m) <= tol;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (!m.square()) throw DimensionMismatch("is_hermitian needs a square matrix");
    return hermiticity_defect(m) <= tol;
}

double unitarity_defect(const ComplexMatrix& m) {
    return (m.adjoint() * m - ComplexMatrix::identity(m.cols())).norm_max();
}

double hermiticity_defect(const ComplexMatrix& m) { return (m - m.adjoint()).norm_max(); }

ComplexMatrix orthonormal_complement(const ComplexMatrix& basis, std::size_t dim) {
    if (basis.rows() != dim && !basis.empty())
        throw DimensionMismatch("basis rows must equal dim");
    ComplexMatrix u(dim, dim);
    if (!basis.empty()) u.set_block(0, 0, basis);
    complete_basis(u, basis.empty() ? 0 : basis.cols());
    const std::size_t k = basis.empty() ? 0 : basis.cols();
    return u.block(0, k, dim, dim - k);
}

} // namespace qgs
