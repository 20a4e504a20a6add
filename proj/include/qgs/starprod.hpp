#pragma once

#include <cstddef>

#include "qgs/cmatrix.hpp"
#include "qgs/tolerance.hpp"

namespace qgs {

/// Operands of the generalized star product: unitaries u1 (n1 x n1) and
/// u2 (n2 x n2) contracted over p channels through the p x p unitary v.
/// Block convention: the trailing p x p block of u1 meets the leading
/// p x p block of u2.
struct StarOperands {
    ComplexMatrix u1;
    ComplexMatrix u2;
    std::size_t p = 0;
    ComplexMatrix v; // empty means identity

    ComplexMatrix coupling() const {
        return v.empty() ? ComplexMatrix::identity(p) : v;
    }
};

/// Compatibility analysis of a star-product pair. The pair is compatible
/// when V U1_22 V^* U2_11 has no eigenvalue 1; otherwise the four kernel
/// subspaces are reported and k1/k2 carry the projected inverses (inverted
/// on the kernel complement, zero on the kernel).
struct CompatibilityReport {
    bool compatible = true;
    double sigma_min = 0.0; // of I - V U1_22 V^* U2_11
    ComplexMatrix c_basis;
    ComplexMatrix b_basis;
    ComplexMatrix c_tilde_basis;
    ComplexMatrix b_tilde_basis;
    ComplexMatrix k1;
    ComplexMatrix k2;
};

/// Throws unless the operands satisfy the size and unitarity requirements
/// (unitarity checked at 1e-9; 1 <= p <= min(n1, n2), p < (n1 + n2) / 2).
void validate_operands(const StarOperands& ops, const Tolerance& tol = {});

CompatibilityReport analyze_compatibility(const StarOperands& ops, const Tolerance& tol = {});

struct StarResult {
    ComplexMatrix u;
    CompatibilityReport compat;
    bool ill_conditioned = false; // compatible but sigma_min below 1e-6
};

/// The generalized star product, defined for every pair of unitaries:
/// compatible pairs use the true inverses, non-compatible ones the projected
/// extension. The result is unitary up to roundoff; defects are reported by
/// the caller's tests, never repaired here.
StarResult star_full(const StarOperands& ops, const Tolerance& tol = {});

ComplexMatrix star(const StarOperands& ops, const Tolerance& tol = {});

/// star with V = identity (the *_p product used by graph composition).
ComplexMatrix star(const ComplexMatrix& u1, const ComplexMatrix& u2, std::size_t p,
                   const Tolerance& tol = {});

/// The 2p x 2p unit [[0, I], [I, 0]] of the *_p product.
ComplexMatrix star_unit(std::size_t p);

/// Unique two-sided *_p inverse of a 2p x 2p unitary whose off-diagonal
/// blocks have maximal rank. Throws RankDeficientBlock otherwise.
ComplexMatrix star_inverse(const ComplexMatrix& u, const Tolerance& tol = {});

/// || (u1 *_v u2) *_v' u3 - u1 *_v (u2 *_v' u3) ||_max. The first contraction
/// consumes u1's trailing p indices against u2's leading p; the second the
/// trailing p' of the remaining index set against u3's leading p'.
double check_associativity(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& u3, const ComplexMatrix& v,
                           const ComplexMatrix& v_prime, std::size_t p, std::size_t p_prime,
                           const Tolerance& tol = {});

/// Bounded-ratio continuity diagnostic ||u1 *_v u2 - u1 *_v u3|| / ||u2 - u3||
/// in the max norm; 0/0 reported as 0.
double check_continuity(const ComplexMatrix& u1, const ComplexMatrix& u2,
                        const ComplexMatrix& u3, const ComplexMatrix& v, std::size_t p,
                        const Tolerance& tol = {});

} // namespace qgs
