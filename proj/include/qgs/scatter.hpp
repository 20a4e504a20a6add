#pragma once

#include <cstddef>
#include <vector>

#include "qgs/cmatrix.hpp"
#include "qgs/exec.hpp"
#include "qgs/graphs.hpp"
#include "qgs/tolerance.hpp"

namespace qgs {

/// Scattering data at one energy. s is the n x n scattering matrix; alpha
/// and beta are the m x n internal amplitudes. At an exceptional point
/// (singular boundary system) s is still unique but (alpha, beta) are the
/// minimum-norm representatives and kernel_dim records the ambiguity.
struct ScatteringResult {
    double lambda = 0.0;
    ComplexMatrix s;
    ComplexMatrix alpha;
    ComplexMatrix beta;
    bool exceptional = false;
    std::size_t kernel_dim = 0;
};

/// Boundary system matrix Z(lambda) = A X_a(lambda) + i sqrt(lambda) B Y_a(lambda).
ComplexMatrix build_z(const MetricGraph& g, double lambda);

/// Right-hand side -(A - i sqrt(lambda) B) restricted to the external columns.
ComplexMatrix build_z_rhs(const MetricGraph& g, double lambda);

double sigma_min_z(const MetricGraph& g, double lambda);

/// Solves the boundary system for S(lambda), alpha, beta. Regular points use
/// the pivoted direct solve; exceptional points fall back to the minimum-norm
/// least-squares solution through the pseudoinverse.
ScatteringResult scattering_matrix(const MetricGraph& g, double lambda,
                                   const Tolerance& tol = {});

namespace detail {
/// Same solve without the self-adjointness check; for grid kernels that
/// validate the graph once up front.
ScatteringResult scattering_matrix_prevalidated(const MetricGraph& g, double lambda,
                                                const Tolerance& tol);
} // namespace detail

struct SymmetryReport {
    double transposition_defect = 0.0;  // || S(conj A, conj B)^T - S(A, B) ||_max
    double self_transpose_defect = 0.0; // || S - S^T ||_max, meaningful when real_operator
    bool real_operator = false;
};

SymmetryReport check_transposition_symmetry(const MetricGraph& g, double lambda,
                                            const Tolerance& tol = {});

/// Max defect of alpha = conj(beta~) S^T and beta = conj(alpha~) S^T where
/// the tilde quantities belong to the conjugated boundary conditions.
/// Throws ExceptionalPoint at energies where the amplitudes are not unique.
double check_alpha_beta_relations(const MetricGraph& g, double lambda,
                                  const Tolerance& tol = {});

struct EigenvalueHit {
    double lambda = 0.0;
    std::size_t multiplicity = 0;
    std::size_t overlap_dim = 0; // filled in by a gluing context, 0 otherwise
};

/// Scans sigma_min(Z(lambda)) over a uniform grid on [lo, hi], brackets the
/// local minima and refines each by golden-section search down to a width of
/// 1e-10 * lambda. Minima that reach the tolerance cutoff are reported with
/// multiplicity dim Ker Z. Hits closer than the grid step may be missed.
std::vector<EigenvalueHit> find_embedded_eigenvalues(const MetricGraph& g, double lo, double hi,
                                                     std::size_t grid,
                                                     const Tolerance& tol = {},
                                                     ExecMode mode = ExecMode::Parallel);

} // namespace qgs
