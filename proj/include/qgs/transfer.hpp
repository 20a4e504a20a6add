#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qgs/cmatrix.hpp"
#include "qgs/graphs.hpp"
#include "qgs/tolerance.hpp"

namespace qgs {

/// Transfer matrix of a 2p-channel scatterer: maps (a_1..a_p, b_1..b_p) wave
/// amplitudes on the left channels to (b_{p+1}..b_n, a_{p+1}..a_n) on the
/// right ones. Non-degenerate transfers are pseudo-unitary with respect to
/// J = diag(I_p, -I_p); degenerate ones (singular right-going S block) act
/// only on the subspace recorded in s12_kernel and have det = 0.
struct TransferMatrix {
    std::size_t p = 0;
    ComplexMatrix lam;
    bool degenerate = false;
    ComplexMatrix s12_kernel; // basis of Ker S12 when degenerate, else empty
};

/// The pseudo-unitarity metric J = diag(I_p, -I_p).
ComplexMatrix pseudo_metric(std::size_t p);

double pseudo_unitarity_defect(const TransferMatrix& t);

/// Builds the transfer matrix from a 2p x 2p unitary scattering matrix.
/// When sigma_min(S12) <= tol the Moore-Penrose pseudoinverse replaces the
/// inverse throughout and the result is flagged degenerate.
TransferMatrix transfer_from_smatrix(const ComplexMatrix& s, double tol = 1e-10);

/// Inverse map; throws DegenerateTransfer for degenerate inputs (no
/// scattering matrix reconstruction exists there).
ComplexMatrix smatrix_from_transfer(const TransferMatrix& t, double tol = 1e-10);

/// Chain composition across p new lines of the given lengths: the wave hits
/// t1 first, propagates, then hits t2. Throws DegenerateTransfer unless both
/// factors are non-degenerate.
TransferMatrix compose_transfer(const TransferMatrix& t1, const TransferMatrix& t2,
                                std::span<const double> lengths, double lambda);

/// Applies the transfer matrix to an amplitude vector (a_1..a_p, b_1..b_p).
/// Degenerate transfers are defined only for b in the orthogonal complement
/// of Ker S12; outside it a DomainViolation is thrown.
std::vector<cplx> apply_transfer(const TransferMatrix& t, std::span<const cplx> amplitudes,
                                 double tol = 1e-8);

struct PointTransfer {
    ComplexMatrix m_matrix; // e^{i mu} [[a, b], [c, d]]
    ComplexMatrix lam;      // 2 x 2 transfer matrix
};

/// Scattering matrix of a point interaction in closed form.
ComplexMatrix point_smatrix(const PointInteraction& pi, double lambda);

PointTransfer point_transfer(const PointInteraction& pi, double lambda);

/// Returns (det Lambda, det S21 / det S12); equal for every unitary S with
/// invertible S12. Throws RankDeficientBlock when S12 is singular.
std::pair<cplx, cplx> block_det_identity(const ComplexMatrix& s, double tol = 1e-10);

} // namespace qgs
