#pragma once

#include <cstdint>
#include <random>

#include "qgs/cmatrix.hpp"
#include "qgs/graphs.hpp"

namespace qgs::rng {

using Engine = std::mt19937_64;

cplx gaussian(Engine& eng);
ComplexMatrix gaussian_matrix(Engine& eng, std::size_t rows, std::size_t cols);

/// Haar-adequate random unitary: Gram-Schmidt on a matrix of independent
/// standard complex Gaussians.
ComplexMatrix random_unitary(Engine& eng, std::size_t n);

ComplexMatrix random_hermitian(Engine& eng, std::size_t n);

/// Random invertible matrix with condition number bounded by roughly 3
/// (unitary * diagonal in [0.5, 1.5] * unitary).
ComplexMatrix random_invertible(Engine& eng, std::size_t n);

/// Random member of U(p, p): exp(i J H) with H Hermitian and
/// J = diag(I_p, -I_p).
ComplexMatrix random_pseudo_unitary(Engine& eng, std::size_t p);

/// Random 2p x 2p unitary resampled until both off-diagonal p x p blocks
/// have sigma_min above the floor.
ComplexMatrix random_unitary_strong_offdiag(Engine& eng, std::size_t p, double floor = 0.1);

/// Matrix exponential by scaling and squaring (Taylor tail); a test-support
/// utility for generating structured group elements.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// Random self-adjoint graph with bc_a = random Hermitian, bc_b = identity,
/// and internal lengths drawn uniformly from [len_lo, len_hi].
MetricGraph random_selfadjoint_graph(Engine& eng, std::size_t n, std::size_t m,
                                     double len_lo = 0.5, double len_hi = 2.0);

/// Same construction with a real symmetric bc_a, so the operator is real.
MetricGraph random_real_graph(Engine& eng, std::size_t n, std::size_t m, double len_lo = 0.5,
                              double len_hi = 2.0);

/// Random vertex-local graph containing at least one tadpole (an internal
/// edge with both endpoints at the same vertex). Kirchhoff/delta couplings.
MetricGraph random_loop_graph(Engine& eng);

/// Contraction of norm exactly 1 with a known unit fixed vector c (A c = c),
/// built as W diag(1, s_2, ...) R^* W^* with s_k < 1 and R block-fixing e_1.
struct ContractionWithFixedPoint {
    ComplexMatrix a;
    ComplexMatrix c; // n x 1 unit vector
};
ContractionWithFixedPoint random_contraction_with_fixed_point(Engine& eng, std::size_t n);

/// Pair of contractions with A B b = b for the returned unit vector b.
struct ContractionFactorPair {
    ComplexMatrix a;
    ComplexMatrix b_mat;
    ComplexMatrix b; // n x 1 unit vector
};
ContractionFactorPair random_contraction_factor_pair(Engine& eng, std::size_t n);

} // namespace qgs::rng
