#include "qgs/starprod.hpp"

#include <algorithm>
#include <cmath>

namespace qgs {

namespace {

struct Blocks {
    // u1 = [[a11, a12], [a21, a22]] with a22 of size p x p
    // u2 = [[b11, b12], [b21, b22]] with b11 of size p x p
    ComplexMatrix a11, a12, a21, a22;
    ComplexMatrix b11, b12, b21, b22;
};

Blocks split(const StarOperands& ops) {
    const std::size_t n1 = ops.u1.rows(), n2 = ops.u2.rows(), p = ops.p;
    Blocks b;
    b.a11 = ops.u1.block(0, 0, n1 - p, n1 - p);
    b.a12 = ops.u1.block(0, n1 - p, n1 - p, p);
    b.a21 = ops.u1.block(n1 - p, 0, p, n1 - p);
    b.a22 = ops.u1.block(n1 - p, n1 - p, p, p);
    b.b11 = ops.u2.block(0, 0, p, p);
    b.b12 = ops.u2.block(0, p, p, n2 - p);
    b.b21 = ops.u2.block(p, 0, n2 - p, p);
    b.b22 = ops.u2.block(p, p, n2 - p, n2 - p);
    return b;
}

// Inverse of t restricted to the complement of `kernel`, extended by zero on
// the kernel itself.
ComplexMatrix projected_inverse(const ComplexMatrix& t, const ComplexMatrix& kernel) {
    const std::size_t p = t.rows();
    const ComplexMatrix q = orthonormal_complement(kernel, p);
    const ComplexMatrix tq = q.adjoint() * t * q;
    return q * inverse(tq) * q.adjoint();
}

} // namespace

void validate_operands(const StarOperands& ops, const Tolerance&) {
    if (!ops.u1.square() || !ops.u2.square()) throw DimensionMismatch("operands must be square");
    const std::size_t n1 = ops.u1.rows(), n2 = ops.u2.rows(), p = ops.p;
    if (p < 1 || p > std::min(n1, n2) || 2 * p >= n1 + n2)
        throw DimensionMismatch("need 1 <= p <= min(n1, n2) and p < (n1 + n2) / 2");
    if (!ops.v.empty() && (ops.v.rows() != p || ops.v.cols() != p))
        throw DimensionMismatch("coupling must be p x p");
    if (unitarity_defect(ops.u1) > 1e-9 || unitarity_defect(ops.u2) > 1e-9)
        throw Error("star operands must be unitary to 1e-9");
    if (!ops.v.empty() && unitarity_defect(ops.v) > 1e-9)
        throw Error("coupling must be unitary to 1e-9");
}

CompatibilityReport analyze_compatibility(const StarOperands& ops, const Tolerance& tol) {
    validate_operands(ops, tol);
    const Blocks bl = split(ops);
    const ComplexMatrix v = ops.coupling();
    const ComplexMatrix vh = v.adjoint();
    const ComplexMatrix eye = ComplexMatrix::identity(ops.p);

    const ComplexMatrix tc = eye - v * bl.a22 * vh * bl.b11;
    const ComplexMatrix tb = eye - vh * bl.b11 * v * bl.a22;
    const ComplexMatrix tct = eye - bl.a22 * vh * bl.b11 * v;
    const ComplexMatrix tbt = eye - bl.b11 * v * bl.a22 * vh;

    CompatibilityReport r;
    const std::vector<double> s = singular_values(tc);
    r.sigma_min = s.empty() ? 0.0 : s.back();
    r.compatible = r.sigma_min > tol.rank_rel * (s.empty() ? 0.0 : s.front());

    if (r.compatible) {
        r.k1 = solve_linear(tc, v);
        r.k2 = solve_linear(tb, vh);
        return r;
    }
    r.c_basis = kernel_basis(tc, tol.rank_rel);
    r.b_basis = kernel_basis(tb, tol.rank_rel);
    r.c_tilde_basis = kernel_basis(tct, tol.rank_rel);
    r.b_tilde_basis = kernel_basis(tbt, tol.rank_rel);
    r.k1 = projected_inverse(tc, r.c_basis) * v;
    r.k2 = projected_inverse(tb, r.b_basis) * vh;
    return r;
}

StarResult star_full(const StarOperands& ops, const Tolerance& tol) {
    StarResult out;
    out.compat = analyze_compatibility(ops, tol);
    out.ill_conditioned = out.compat.compatible && out.compat.sigma_min < 1e-6;

    const Blocks bl = split(ops);
    const ComplexMatrix v = ops.coupling();
    const ComplexMatrix vh = v.adjoint();
    const ComplexMatrix& k1 = out.compat.k1;
    const ComplexMatrix& k2 = out.compat.k2;

    const std::size_t n1 = ops.u1.rows(), n2 = ops.u2.rows(), p = ops.p;
    ComplexMatrix u(n1 + n2 - 2 * p, n1 + n2 - 2 * p);
    u.set_block(0, 0, bl.a11 + bl.a12 * k2 * bl.b11 * v * bl.a21);
    u.set_block(0, n1 - p, bl.a12 * k2 * bl.b12);
    u.set_block(n1 - p, 0, bl.b21 * k1 * bl.a21);
    u.set_block(n1 - p, n1 - p, bl.b22 + bl.b21 * k1 * bl.a22 * vh * bl.b12);
    out.u = std::move(u);
    return out;
}

ComplexMatrix star(const StarOperands& ops, const Tolerance& tol) {
    return star_full(ops, tol).u;
}

ComplexMatrix star(const ComplexMatrix& u1, const ComplexMatrix& u2, std::size_t p,
                   const Tolerance& tol) {
    return star(StarOperands{u1, u2, p, {}}, tol);
}

ComplexMatrix star_unit(std::size_t p) {
    if (p < 1) throw Error("star_unit needs p >= 1");
    ComplexMatrix e(2 * p, 2 * p);
    for (std::size_t i = 0; i < p; ++i) {
        e(i, p + i) = 1.0;
        e(p + i, i) = 1.0;
    }
    return e;
}

ComplexMatrix star_inverse(const ComplexMatrix& u, const Tolerance& tol) {
    if (!u.square() || u.rows() % 2 != 0) throw DimensionMismatch("star_inverse needs 2p x 2p");
    const std::size_t p = u.rows() / 2;
    const ComplexMatrix u11 = u.block(0, 0, p, p);
    const ComplexMatrix u12 = u.block(0, p, p, p);
    const ComplexMatrix u21 = u.block(p, 0, p, p);
    const ComplexMatrix u22 = u.block(p, p, p, p);

    // the off-diagonal blocks are singular or regular together; check both
    for (const ComplexMatrix* blk : {&u12, &u21}) {
        const std::vector<double> s = singular_values(*blk);
        if (s.back() <= std::max(tol.rank_rel * s.front(), 1e-14))
            throw RankDeficientBlock("off-diagonal block is rank deficient");
    }

    const ComplexMatrix u12i = inverse(u12);
    const ComplexMatrix w = u21 - u22 * u12i * u11; // invertible given Ker u12 = 0
    const ComplexMatrix wi = inverse(w);

    const ComplexMatrix p11 = cplx{-1.0, 0.0} * (u12i * u11 * wi);
    const ComplexMatrix p12 = u12i + u12i * u11 * wi * u22 * u12i;
    const ComplexMatrix p21 = wi;
    const ComplexMatrix p22 =
        cplx{-1.0, 0.0} *
        (p21 * solve_linear(ComplexMatrix::identity(p) - u22 * p11, u22 * p12));

    ComplexMatrix out(2 * p, 2 * p);
    out.set_block(0, 0, p11);
    out.set_block(0, p, p12);
    out.set_block(p, 0, p21);
    out.set_block(p, p, p22);
    return out;
}

double check_associativity(const ComplexMatrix& u1, const ComplexMatrix& u2,
                           const ComplexMatrix& u3, const ComplexMatrix& v,
                           const ComplexMatrix& v_prime, std::size_t p, std::size_t p_prime,
                           const Tolerance& tol) {
    const std::size_t n1 = u1.rows(), n2 = u2.rows(), n3 = u3.rows();
    if (p > std::min(n1, n2) || p_prime > std::min(n2, n3) || p + p_prime > std::min(n1, n2))
        throw DimensionMismatch("associativity sizes: need p + p' within both u1 and u2");
    const ComplexMatrix left =
        star(StarOperands{star(StarOperands{u1, u2, p, v}, tol), u3, p_prime, v_prime}, tol);
    const ComplexMatrix right =
        star(StarOperands{u1, star(StarOperands{u2, u3, p_prime, v_prime}, tol), p, v}, tol);
    return (left - right).norm_max();
}

double check_continuity(const ComplexMatrix& u1, const ComplexMatrix& u2,
                        const ComplexMatrix& u3, const ComplexMatrix& v, std::size_t p,
                        const Tolerance& tol) {
    if (u2.rows() != u3.rows() || u2.cols() != u3.cols())
        throw DimensionMismatch("u2 and u3 must have equal size");
    const double denom = (u2 - u3).norm_max();
    if (denom == 0.0) return 0.0;
    const ComplexMatrix a = star(StarOperands{u1, u2, p, v}, tol);
    const ComplexMatrix b = star(StarOperands{u1, u3, p, v}, tol);
    return (a - b).norm_max() / denom;
}

} // namespace qgs
