#include <doctest.h>

#include <cmath>

#include "qgs/random.hpp"
#include "qgs/starprod.hpp"
#include "test_support.hpp"

using namespace qgs;

namespace {

ComplexMatrix example42_smatrix(double a, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e = std::polar(1.0, k * a);
    const cplx em = std::conj(e);
    const cplx dd = e - 9.0 * em;
    const cplx d = (e + 3.0 * em) / dd;
    const cplx t = 2.0 * (e - 3.0 * em) / dd;
    const cplx f = -4.0 / dd;
    return ComplexMatrix{{d, f, t, f}, {f, d, f, t}, {t, f, d, f}, {f, t, f, d}};
}

ComplexMatrix glue_phases(const ComplexMatrix& s, std::size_t p, double length,
                          double lambda) {
    ComplexMatrix v = ComplexMatrix::identity(s.rows());
    for (std::size_t i = 0; i < p; ++i) v(i, i) = std::polar(1.0, std::sqrt(lambda) * length);
    return v * s * v;
}

} // namespace

TEST_CASE("operand validation") {
    rng::Engine eng(67);
    const ComplexMatrix u = rng::random_unitary(eng, 3);
    CHECK_THROWS_AS(validate_operands({u, u, 3, {}}), DimensionMismatch); // p >= (n1+n2)/2
    CHECK_THROWS_AS(validate_operands({u, u, 0, {}}), DimensionMismatch);
    ComplexMatrix not_unitary = u;
    not_unitary(0, 0) += 1e-6;
    CHECK_THROWS_AS(validate_operands({not_unitary, u, 1, {}}), Error);
}

TEST_CASE("compatibility analysis") {
    rng::Engine eng(71);
    // E has a zero contraction block, so every coupling is compatible
    const ComplexMatrix e = star_unit(2);
    for (int it = 0; it < 5; ++it) {
        const CompatibilityReport r =
            analyze_compatibility({e, e, 2, rng::random_unitary(eng, 2)});
        CHECK(r.compatible);
        // K1 = V and K2 = V^* when the contraction product vanishes
    }
    const CompatibilityReport r = analyze_compatibility({e, e, 2, {}});
    CHECK(r.compatible);
    CHECK((r.k1 - ComplexMatrix::identity(2)).norm_max() < 1e-12);
    CHECK((r.k2 - ComplexMatrix::identity(2)).norm_max() < 1e-12);

    // resonant worked example: non-compatible with the printed kernel
    const ComplexMatrix s = example42_smatrix(M_PI, 4.0);
    const CompatibilityReport rr = analyze_compatibility({s, glue_phases(s, 2, M_PI, 4.0), 2, {}});
    CHECK_FALSE(rr.compatible);
    REQUIRE(rr.c_basis.cols() == 1);
    CHECK(testing::subspace_distance(rr.c_basis, testing::unit_column({1.0, -1.0})) < 1e-8);
    CHECK(rr.b_basis.cols() == 1);
    CHECK(rr.c_tilde_basis.cols() == 1);
    CHECK(rr.b_tilde_basis.cols() == 1);
}

TEST_CASE("K identities in the compatible case") {
    rng::Engine eng(73);
    for (int it = 0; it < 10; ++it) {
        const std::size_t n1 = 3, n2 = 4, p = 2;
        const ComplexMatrix u1 = rng::random_unitary(eng, n1);
        const ComplexMatrix u2 = rng::random_unitary(eng, n2);
        const ComplexMatrix v = rng::random_unitary(eng, p);
        const CompatibilityReport r = analyze_compatibility({u1, u2, p, v});
        REQUIRE(r.compatible);
        const ComplexMatrix a22 = u1.block(n1 - p, n1 - p, p, p);
        const ComplexMatrix b11 = u2.block(0, 0, p, p);
        const ComplexMatrix vh = v.adjoint();
        CHECK((r.k1 - (v + v * a22 * vh * b11 * r.k1)).norm_max() <= 1e-8);
        CHECK((r.k1 - (v + v * a22 * r.k2 * b11 * v)).norm_max() <= 1e-8);
        CHECK((r.k1 - (v + r.k1 * a22 * vh * b11 * v)).norm_max() <= 1e-8);
        CHECK((r.k2 - (vh + vh * b11 * v * a22 * r.k2)).norm_max() <= 1e-8);
        CHECK((r.k2 - (vh + vh * b11 * r.k1 * a22 * vh)).norm_max() <= 1e-8);
        CHECK((r.k2 - (vh + r.k2 * b11 * v * a22 * vh)).norm_max() <= 1e-8);
    }
}

TEST_CASE("units act as identities") {
    rng::Engine eng(79);
    const ComplexMatrix u = rng::random_unitary(eng, 4);
    for (std::size_t p : {1, 2, 3}) {
        const ComplexMatrix e = star_unit(p);
        CHECK((star(e, u, p) - u).norm_max() <= 1e-12);
        CHECK((star(u, e, p) - u).norm_max() <= 1e-12);
    }
    const ComplexMatrix e2 = star_unit(2);
    CHECK((star(e2, e2, 2) - e2).norm_max() <= 1e-14);
    CHECK(is_unitary(e2, 1e-14));
    CHECK(is_hermitian(e2, 1e-14));
}

TEST_CASE("free gluing accumulates the propagation phase") {
    const double lambda = 2.3, a = 1.1;
    const ComplexMatrix e = star_unit(1);
    const ComplexMatrix s2 = glue_phases(e, 1, a, lambda);
    const ComplexMatrix out = star(e, s2, 1);
    const cplx ph = std::polar(1.0, std::sqrt(lambda) * a);
    CHECK(std::abs(out(0, 1) - ph) < 1e-14);
    CHECK(std::abs(out(1, 0) - ph) < 1e-14);
    CHECK(std::abs(out(0, 0)) < 1e-14);
}

TEST_CASE("full-contraction star is coupling conjugation") {
    // contracting every channel of the second operand with the 2n-channel
    // unit: E *_V S = V^* S V
    rng::Engine eng(83);
    for (std::size_t n : {1, 2, 3}) {
        const ComplexMatrix s = rng::random_unitary(eng, n);
        const ComplexMatrix v = rng::random_unitary(eng, n);
        const ComplexMatrix lhs = star(StarOperands{star_unit(n), s, n, v});
        CHECK((lhs - v.adjoint() * s * v).norm_max() < 1e-12);
        // and with the unit on the right: S *_V E = V S V^*
        const ComplexMatrix rhs = star(StarOperands{s, star_unit(n), n, v});
        CHECK((rhs - v * s * v.adjoint()).norm_max() < 1e-12);
    }
}

TEST_CASE("maximal-rank off-diagonal blocks force compatibility") {
    rng::Engine eng(211);
    for (int it = 0; it < 50; ++it) {
        const std::size_t n1 = 3 + it % 2, n2 = 3 + (it / 2) % 2, p = 1 + it % 2;
        const ComplexMatrix u1 = rng::random_unitary(eng, n1);
        const ComplexMatrix u2 = rng::random_unitary(eng, n2);
        // generic unitaries have full-rank off-diagonal blocks
        REQUIRE(rank(u1.block(0, n1 - p, n1 - p, p), 1e-10) == std::min(n1 - p, p));
        const CompatibilityReport r =
            analyze_compatibility({u1, u2, p, rng::random_unitary(eng, p)});
        CHECK(r.compatible);
    }
}

TEST_CASE("near-resonant pairs are flagged but still computed") {
    const double lam = 4.0 + 1e-8;
    const ComplexMatrix s = example42_smatrix(M_PI, lam);
    const StarResult r = star_full({s, glue_phases(s, 2, M_PI, lam), 2, {}});
    CHECK(r.compat.compatible);
    CHECK(r.ill_conditioned); // sigma_min ~ pi * 1e-8 < 1e-6
    CHECK(unitarity_defect(r.u) <= 1e-8);
}

TEST_CASE("resonant star output stays unitary") {
    const ComplexMatrix s = example42_smatrix(M_PI, 1.0); // e^{ika} = -1
    const StarResult r = star_full({s, glue_phases(s, 2, M_PI, 1.0), 2, {}});
    CHECK_FALSE(r.compat.compatible);
    CHECK(unitarity_defect(r.u) <= 1e-8);
}

TEST_CASE("unitarity of random star products") {
    rng::Engine eng(89);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n1 = 2 + it % 3, n2 = 2 + (it / 3) % 3;
        std::size_t p = 1 + it % std::min(n1, n2);
        while (2 * p >= n1 + n2) --p;
        const StarOperands ops{rng::random_unitary(eng, n1), rng::random_unitary(eng, n2), p,
                               rng::random_unitary(eng, p)};
        CHECK(unitarity_defect(star(ops)) <= 1e-8);
    }
}

TEST_CASE("star inverse") {
    const ComplexMatrix e = star_unit(2);
    CHECK((star_inverse(e) - e).norm_max() < 1e-12);

    // phase-shifted unit inverts by the opposite phase
    const cplx ph = std::polar(1.0, 0.8);
    ComplexMatrix u(4, 4);
    for (std::size_t i = 0; i < 2; ++i) {
        u(i, 2 + i) = ph;
        u(2 + i, i) = ph;
    }
    const ComplexMatrix ui = star_inverse(u);
    CHECK((star(u, ui, 2) - e).norm_max() < 1e-12);
    CHECK((star(ui, u, 2) - e).norm_max() < 1e-12);
    CHECK(std::abs(ui(0, 2) - std::conj(ph)) < 1e-12);

    // the permuted example has singular off-diagonal blocks at every energy
    const double lambda = 2.9, k = std::sqrt(lambda);
    const cplx ee = std::polar(1.0, k * 1.3), em = std::conj(ee);
    const cplx dd = ee - 9.0 * em;
    const cplx d = (ee + 3.0 * em) / dd, t = 2.0 * (ee - 3.0 * em) / dd, f = -4.0 / dd;
    const ComplexMatrix s43{{d, t, f, f}, {t, d, f, f}, {f, f, d, t}, {f, f, t, d}};
    CHECK_THROWS_AS(star_inverse(s43), RankDeficientBlock);
}

TEST_CASE("associativity") {
    rng::Engine eng(97);
    // unit sandwiches collapse to the first factor
    const ComplexMatrix u1 = rng::random_unitary(eng, 4);
    const ComplexMatrix e = star_unit(1);
    const ComplexMatrix eye1 = ComplexMatrix::identity(1);
    CHECK(check_associativity(u1, e, e, eye1, eye1, 1, 1) <= 1e-12);

    for (int it = 0; it < 10; ++it) {
        const ComplexMatrix a = rng::random_unitary(eng, 4);
        const ComplexMatrix b = rng::random_unitary(eng, 2);
        const ComplexMatrix c = rng::random_unitary(eng, 2);
        CHECK(check_associativity(a, b, c, rng::random_unitary(eng, 1),
                                  rng::random_unitary(eng, 1), 1, 1) <= 1e-8);
    }
    CHECK_THROWS_AS(check_associativity(u1, rng::random_unitary(eng, 2),
                                        rng::random_unitary(eng, 2), eye1, eye1, 2, 1),
                    DimensionMismatch);
}

TEST_CASE("continuity diagnostic") {
    rng::Engine eng(101);
    const ComplexMatrix u1 = rng::random_unitary(eng, 3);
    const ComplexMatrix u2 = rng::random_unitary(eng, 3);
    CHECK(check_continuity(u1, u2, u2, ComplexMatrix::identity(1), 1) == 0.0);

    // small perturbation: finite ratio
    rng::Engine eng2(103);
    const ComplexMatrix h = rng::random_hermitian(eng2, 3);
    const ComplexMatrix u3 = rng::matrix_exp(cplx{0.0, 1e-4} * h) * u2;
    const double ratio = check_continuity(u1, u2, u3, ComplexMatrix::identity(1), 1);
    CHECK(ratio > 0.0);
    CHECK(ratio < 1e3);

    // family approaching a resonance stays bounded
    double worst = 0.0;
    const ComplexMatrix res = example42_smatrix(M_PI, 4.0);
    const ComplexMatrix res2 = glue_phases(res, 2, M_PI, 4.0);
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double lam = 4.0 + eps;
        const ComplexMatrix near = glue_phases(example42_smatrix(M_PI, lam), 2, M_PI, lam);
        worst = std::max(worst, check_continuity(res, near, res2, ComplexMatrix::identity(2), 2));
    }
    CHECK(worst < 1e2);
}
