#include "qgs/transfer.hpp"

#include <cmath>
#include <complex>

namespace qgs {

namespace {

struct SBlocks {
    std::size_t p;
    ComplexMatrix s11, s12, s21, s22;
};

SBlocks split_s(const ComplexMatrix& s) {
    if (!s.square() || s.rows() % 2 != 0 || s.rows() == 0)
        throw DimensionMismatch("need a 2p x 2p scattering matrix");
    const std::size_t p = s.rows() / 2;
    return {p, s.block(0, 0, p, p), s.block(0, p, p, p), s.block(p, 0, p, p),
            s.block(p, p, p, p)};
}

} // namespace

ComplexMatrix pseudo_metric(std::size_t p) {
    ComplexMatrix j(2 * p, 2 * p);
    for (std::size_t i = 0; i < p; ++i) {
        j(i, i) = 1.0;
        j(p + i, p + i) = -1.0;
    }
    return j;
}

double pseudo_unitarity_defect(const TransferMatrix& t) {
    const ComplexMatrix j = pseudo_metric(t.p);
    return (t.lam.adjoint() * j * t.lam - j).norm_max();
}

TransferMatrix transfer_from_smatrix(const ComplexMatrix& s, double tol) {
    const SBlocks b = split_s(s);
    TransferMatrix t;
    t.p = b.p;

    const std::vector<double> sv = singular_values(b.s12);
    t.degenerate = sv.back() <= tol;

    ComplexMatrix s12i;
    if (!t.degenerate) {
        s12i = inverse(b.s12);
    } else {
        s12i = pseudoinverse(b.s12, tol);
        t.s12_kernel = kernel_basis(b.s12, tol);
    }
    ComplexMatrix lam(2 * b.p, 2 * b.p);
    lam.set_block(0, 0, s12i);
    lam.set_block(0, b.p, cplx{-1.0, 0.0} * (s12i * b.s11));
    lam.set_block(b.p, 0, b.s22 * s12i);
    lam.set_block(b.p, b.p, b.s21 - b.s22 * s12i * b.s11);
    t.lam = std::move(lam);
    return t;
}

ComplexMatrix smatrix_from_transfer(const TransferMatrix& t, double tol) {
    if (t.degenerate)
        throw DegenerateTransfer("no scattering matrix reconstruction for a degenerate transfer");
    const std::size_t p = t.p;
    const ComplexMatrix l11 = t.lam.block(0, 0, p, p);
    const ComplexMatrix l12 = t.lam.block(0, p, p, p);
    const ComplexMatrix l21 = t.lam.block(p, 0, p, p);
    const ComplexMatrix l22 = t.lam.block(p, p, p, p);
    const std::vector<double> sv = singular_values(l11);
    if (sv.back() <= tol * std::max(1.0, sv.front()))
        throw DegenerateTransfer("Lambda_11 is singular");
    const ComplexMatrix l11i = inverse(l11);

    ComplexMatrix s(2 * p, 2 * p);
    s.set_block(0, 0, cplx{-1.0, 0.0} * (l11i * l12));
    s.set_block(0, p, l11i);
    s.set_block(p, 0, l22 - l21 * l11i * l12);
    s.set_block(p, p, l21 * l11i);
    return s;
}

TransferMatrix compose_transfer(const TransferMatrix& t1, const TransferMatrix& t2,
                                std::span<const double> lengths, double lambda) {
    if (t1.degenerate || t2.degenerate)
        throw DegenerateTransfer("degenerate transfers do not compose");
    if (t1.p != t2.p) throw DimensionMismatch("transfer sizes differ");
    if (lengths.size() != t1.p) throw DimensionMismatch("need one length per channel");
    if (!(lambda > 0.0)) throw Error("lambda must be strictly positive");

    const double k = std::sqrt(lambda);
    const std::size_t p = t1.p;
    ComplexMatrix u(2 * p, 2 * p);
    for (std::size_t i = 0; i < p; ++i) {
        u(i, i) = std::polar(1.0, -k * lengths[i]);
        u(p + i, p + i) = std::polar(1.0, k * lengths[i]);
    }
    // wave traverses t1, then the phase frame shift across the new lines,
    // then t2
    TransferMatrix out;
    out.p = p;
    out.degenerate = false;
    out.lam = t2.lam * u * t1.lam;
    return out;
}

std::vector<cplx> apply_transfer(const TransferMatrix& t, std::span<const cplx> amplitudes,
                                 double tol) {
    if (amplitudes.size() != 2 * t.p) throw DimensionMismatch("amplitude vector size");
    ComplexMatrix x(2 * t.p, 1);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) x(i, 0) = amplitudes[i];
    if (t.degenerate && !t.s12_kernel.empty()) {
        // admissible vectors have their b-part orthogonal to Ker S12
        ComplexMatrix b(t.p, 1);
        for (std::size_t i = 0; i < t.p; ++i) b(i, 0) = amplitudes[t.p + i];
        const double overlap = (t.s12_kernel.adjoint() * b).norm_max();
        if (overlap > tol * std::max(1.0, b.norm_max()))
            throw DomainViolation("amplitude outside the degenerate transfer domain");
    }
    const ComplexMatrix y = t.lam * x;
    std::vector<cplx> out(2 * t.p);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = y(i, 0);
    return out;
}

ComplexMatrix point_smatrix(const PointInteraction& pi, double lambda) {
    if (!(lambda > 0.0)) throw Error("lambda must be strictly positive");
    const double k = std::sqrt(lambda);
    const cplx denom = pi.a + pi.d + cplx{0.0, 1.0} * (pi.c / k - pi.b * k);
    const cplx t1 = 2.0 * std::polar(1.0, pi.mu) / denom;
    const cplx t2 = 2.0 * std::polar(1.0, -pi.mu) / denom;
    const cplx refl1 = (pi.d - pi.a - cplx{0.0, 1.0} * (pi.b * k + pi.c / k)) / denom;
    const cplx refl2 = (pi.a - pi.d - cplx{0.0, 1.0} * (pi.b * k + pi.c / k)) / denom;
    // channel 1 reflects with refl1, transmits to channel 2 with t1 (phase
    // e^{+i mu}); channel 2 reflects with refl2, transmits with t2
    return ComplexMatrix{{refl1, t2}, {t1, refl2}};
}

PointTransfer point_transfer(const PointInteraction& pi, double lambda) {
    PointTransfer out;
    const cplx em = std::polar(1.0, pi.mu);
    out.m_matrix = ComplexMatrix{{em * pi.a, em * pi.b}, {em * pi.c, em * pi.d}};
    out.lam = transfer_from_smatrix(point_smatrix(pi, lambda)).lam;
    return out;
}

std::pair<cplx, cplx> block_det_identity(const ComplexMatrix& s, double tol) {
    const SBlocks b = split_s(s);
    const std::vector<double> sv = singular_values(b.s12);
    if (sv.back() <= tol * std::max(1.0, sv.front()))
        throw RankDeficientBlock("S12 is singular");
    const TransferMatrix t = transfer_from_smatrix(s, tol);
    return {det(t.lam), det(b.s21) / det(b.s12)};
}

} // namespace qgs
