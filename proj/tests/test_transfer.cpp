#include <doctest.h>

#include <cmath>

#include "qgs/glue.hpp"
#include "qgs/random.hpp"
#include "qgs/scatter.hpp"
#include "qgs/starprod.hpp"
#include "qgs/transfer.hpp"
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

ComplexMatrix example43_smatrix(double a, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e = std::polar(1.0, k * a);
    const cplx em = std::conj(e);
    const cplx dd = e - 9.0 * em;
    const cplx d = (e + 3.0 * em) / dd;
    const cplx t = 2.0 * (e - 3.0 * em) / dd;
    const cplx f = -4.0 / dd;
    return ComplexMatrix{{d, t, f, f}, {t, d, f, f}, {f, f, d, t}, {f, f, t, d}};
}

} // namespace

TEST_CASE("free scatterer maps to the identity transfer") {
    const TransferMatrix t = transfer_from_smatrix(star_unit(1));
    CHECK_FALSE(t.degenerate);
    CHECK((t.lam - ComplexMatrix::identity(2)).norm_max() < 1e-14);
    CHECK(pseudo_unitarity_defect(t) < 1e-14);
}

TEST_CASE("delta coupling transfer entries") {
    const double c = 2.0, lambda = 4.0;
    const ComplexMatrix s = scattering_matrix(delta_graph(c), lambda).s;
    const TransferMatrix t = transfer_from_smatrix(s);
    // Lambda_11 = 1/T = (2 sqrt(lambda) + i c) / (2 sqrt(lambda)) = 1 + i/2
    CHECK(std::abs(t.lam(0, 0) - cplx{1.0, 0.5}) < 1e-12);
    CHECK(std::abs(t.lam(0, 1) - cplx{0.0, 0.5}) < 1e-12);
    CHECK(std::abs(t.lam(1, 0) - cplx{0.0, -0.5}) < 1e-12);
    CHECK(std::abs(t.lam(1, 1) - cplx{1.0, -0.5}) < 1e-12);
    CHECK(pseudo_unitarity_defect(t) < 1e-12);
}

TEST_CASE("point interaction closed forms") {
    rng::Engine eng(107);
    std::uniform_real_distribution<double> par(-1.2, 1.2);
    for (int it = 0; it < 12; ++it) {
        PointInteraction pi;
        pi.a = 1.0 + 0.4 * par(eng);
        pi.b = par(eng);
        pi.c = par(eng);
        pi.d = (1.0 + pi.b * pi.c) / pi.a;
        pi.mu = 0.4 * par(eng);
        const double lambda = 1.5 + it * 0.6;

        // closed-form S against the direct boundary solve
        const ComplexMatrix s = point_smatrix(pi, lambda);
        const ComplexMatrix solved = scattering_matrix(point_interaction_graph(pi), lambda).s;
        CHECK((s - solved).norm_max() < 1e-12);

        const PointTransfer pt = point_transfer(pi, lambda);
        // |det M| = 1 on the U(1) x SL(2, R) family
        CHECK(std::abs(std::abs(det(pt.m_matrix)) - 1.0) <= 1e-10);
        // transfer agrees with the generic construction
        CHECK((pt.lam - transfer_from_smatrix(s).lam).norm_max() <= 1e-9);

        // wave-basis conjugation: W Lambda W^{-1} = D M D with D = diag(1, -1)
        const double k = std::sqrt(lambda);
        const ComplexMatrix w{{1.0, 1.0}, {cplx{0.0, k}, cplx{0.0, -k}}};
        const ComplexMatrix lhs = w * pt.lam * inverse(w);
        const ComplexMatrix dmd{{pt.m_matrix(0, 0), -pt.m_matrix(0, 1)},
                                {-pt.m_matrix(1, 0), pt.m_matrix(1, 1)}};
        CHECK((lhs - dmd).norm_max() <= 1e-10);

        // transmission amplitudes carry opposite coupling phases
        const cplx denom = pi.a + pi.d + cplx{0.0, 1.0} * (pi.c / k - pi.b * k);
        CHECK(std::abs(s(1, 0) - 2.0 * std::polar(1.0, pi.mu) / denom) < 1e-12);
        CHECK(std::abs(s(0, 1) - 2.0 * std::polar(1.0, -pi.mu) / denom) < 1e-12);
    }

    // trivial interaction
    const PointTransfer id = point_transfer({1.0, 0.0, 0.0, 1.0, 0.0}, 2.0);
    CHECK((id.lam - ComplexMatrix::identity(2)).norm_max() < 1e-14);
    // delta: equal transmission in both directions
    const ComplexMatrix sd = point_smatrix({1.0, 0.0, 1.4, 1.0, 0.0}, 3.0);
    CHECK(std::abs(sd(0, 1) - sd(1, 0)) < 1e-14);
}

TEST_CASE("real point interactions are unimodular") {
    const PointTransfer t = point_transfer({2.0, 1.0, 1.0, 1.0, 0.0}, 1.7);
    CHECK(std::abs(det(t.lam) - cplx{1.0, 0.0}) <= 1e-10);
}

TEST_CASE("round trip through the transfer representation") {
    rng::Engine eng(109);
    for (int it = 0; it < 10; ++it) {
        const std::size_t p = 1 + it % 2;
        const ComplexMatrix s = rng::random_unitary_strong_offdiag(eng, p);
        const TransferMatrix t = transfer_from_smatrix(s);
        CHECK_FALSE(t.degenerate);
        CHECK(pseudo_unitarity_defect(t) <= 1e-8);
        CHECK((smatrix_from_transfer(t) - s).norm_max() <= 1e-8);
    }
    for (int it = 0; it < 10; ++it) {
        const std::size_t p = 1 + it % 2;
        TransferMatrix t;
        t.p = p;
        t.lam = rng::random_pseudo_unitary(eng, p);
        const ComplexMatrix s = smatrix_from_transfer(t);
        CHECK(unitarity_defect(s) <= 1e-8);
        CHECK((transfer_from_smatrix(s).lam - t.lam).norm_max() <= 1e-8);
    }
}

TEST_CASE("degenerate scattering matrices") {
    // the permuted example ordering is degenerate at every energy
    const TransferMatrix t43 = transfer_from_smatrix(example43_smatrix(1.3, 2.9));
    CHECK(t43.degenerate);
    CHECK(std::abs(det(t43.lam)) <= 1e-10);
    CHECK_THROWS_AS(smatrix_from_transfer(t43), DegenerateTransfer);
    CHECK_THROWS_AS(compose_transfer(t43, t43, std::vector<double>{1.0, 1.0}, 2.9),
                    DegenerateTransfer);

    // the two-vertex ordering degenerates exactly at the resonant energies
    CHECK_FALSE(transfer_from_smatrix(example42_smatrix(M_PI, 2.0)).degenerate);
    const TransferMatrix t42 = transfer_from_smatrix(example42_smatrix(M_PI, 4.0));
    CHECK(t42.degenerate);
    CHECK(std::abs(det(t42.lam)) <= 1e-10);

    // Lambda annihilates (c, 0) for c in Ker S12 and rejects data outside
    // the admissible subspace
    REQUIRE(t42.s12_kernel.cols() == 1);
    std::vector<cplx> cvec(4, cplx{0.0, 0.0});
    cvec[0] = t42.s12_kernel(0, 0);
    cvec[1] = t42.s12_kernel(1, 0);
    const auto image = apply_transfer(t42, cvec);
    double nrm = 0.0;
    for (const cplx& z : image) nrm = std::max(nrm, std::abs(z));
    CHECK(nrm <= 1e-10);

    // e^{ika} = +1 at lambda = 4, so the kernel direction is (1, -1)
    const std::vector<cplx> outside{0.0, 0.0, 1.0, -1.0};
    CHECK_THROWS_AS(apply_transfer(t42, outside), DomainViolation);
    const std::vector<cplx> inside{0.3, -0.8, 1.0, 1.0};
    CHECK_NOTHROW(apply_transfer(t42, inside));
}

TEST_CASE("transfer maps scattering-solution amplitudes across the graph") {
    // columns of [[S11, S12], [I, 0]] must map to those of [[0, I], [S21, S22]]
    rng::Engine eng(199);
    const std::size_t p = 2;
    const ComplexMatrix s = rng::random_unitary_strong_offdiag(eng, p);
    const TransferMatrix t = transfer_from_smatrix(s);
    for (std::size_t k = 0; k < 2 * p; ++k) {
        std::vector<cplx> in(2 * p), expect(2 * p);
        for (std::size_t i = 0; i < p; ++i) {
            in[i] = s(i, k);                                    // outgoing a_1..a_p
            in[p + i] = (k < p && i == k) ? 1.0 : 0.0;          // incoming b_1..b_p
            expect[i] = (k >= p && i + p == k) ? 1.0 : 0.0;
            expect[p + i] = s(p + i, k);
        }
        const auto out = apply_transfer(t, in);
        double defect = 0.0;
        for (std::size_t i = 0; i < 2 * p; ++i) defect = std::max(defect, std::abs(out[i] - expect[i]));
        CHECK(defect <= 1e-10);
    }
}

TEST_CASE("chain composition equals the star composition") {
    rng::Engine eng(113);
    std::uniform_real_distribution<double> pick_len(0.5, 2.0);
    for (int it = 0; it < 10; ++it) {
        const std::size_t p = 1 + it % 2;
        const double lambda = 0.7 + 0.9 * it;
        const ComplexMatrix s1 = rng::random_unitary_strong_offdiag(eng, p);
        const ComplexMatrix s2 = rng::random_unitary_strong_offdiag(eng, p);
        std::vector<double> lengths;
        for (std::size_t i = 0; i < p; ++i) lengths.push_back(pick_len(eng));

        ComplexMatrix v = ComplexMatrix::identity(2 * p);
        for (std::size_t i = 0; i < p; ++i)
            v(i, i) = std::polar(1.0, std::sqrt(lambda) * lengths[i]);
        const ComplexMatrix composed = star(s1, v * s2 * v, p);
        if (svd(composed.block(0, p, p, p)).sigma_min() < 0.05) continue;

        const TransferMatrix chained = compose_transfer(transfer_from_smatrix(s1),
                                                        transfer_from_smatrix(s2), lengths,
                                                        lambda);
        CHECK((transfer_from_smatrix(composed).lam - chained.lam).norm_max() <= 1e-7);
        CHECK(pseudo_unitarity_defect(chained) <= 1e-8);
    }

    // two free lines compose to the identity at zero separation
    const TransferMatrix free1 = transfer_from_smatrix(star_unit(1));
    const TransferMatrix joined =
        compose_transfer(free1, free1, std::vector<double>{0.0}, 1.0);
    CHECK((joined.lam - ComplexMatrix::identity(2)).norm_max() < 1e-14);

    // two delta couplings against the glued-graph oracle
    const double c1 = 1.4, c2 = -0.8, a = 1.1, lambda = 2.7;
    const MetricGraph chain = merge_graphs(delta_graph(c1), delta_graph(c2),
                                           GlueSpec{{1}, {0}, {a}});
    const ComplexMatrix s_direct = scattering_matrix(chain, lambda).s;
    const TransferMatrix t_chain = compose_transfer(
        transfer_from_smatrix(scattering_matrix(delta_graph(c1), lambda).s),
        transfer_from_smatrix(scattering_matrix(delta_graph(c2), lambda).s),
        std::vector<double>{a}, lambda);
    CHECK((transfer_from_smatrix(s_direct).lam - t_chain.lam).norm_max() <= 1e-9);
}

TEST_CASE("block determinant identity") {
    const auto [lhs_e, rhs_e] = block_det_identity(star_unit(2));
    CHECK(std::abs(lhs_e - cplx{1.0, 0.0}) < 1e-12);
    CHECK(std::abs(rhs_e - cplx{1.0, 0.0}) < 1e-12);

    rng::Engine eng(127);
    for (int it = 0; it < 10; ++it) {
        const std::size_t p = 1 + it % 2;
        const ComplexMatrix s = rng::random_unitary_strong_offdiag(eng, p);
        const auto [lhs, rhs] = block_det_identity(s);
        CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
    }

    // symmetric S forces det Lambda = 1
    rng::Engine eng2(131);
    const MetricGraph real = rng::random_real_graph(eng2, 2, 1);
    const ComplexMatrix s = scattering_matrix(real, 1.9).s;
    const auto [lhs, rhs] = block_det_identity(s);
    CHECK(std::abs(lhs - cplx{1.0, 0.0}) <= 1e-9);
    CHECK(std::abs(rhs - cplx{1.0, 0.0}) <= 1e-9);

    CHECK_THROWS_AS(block_det_identity(example43_smatrix(1.3, 2.9)), RankDeficientBlock);
}

TEST_CASE("dirichlet decoupling has a scattering matrix but no transfer") {
    const MetricGraph g = dirichlet_pair_graph();
    const ComplexMatrix s = scattering_matrix(g, 2.0).s;
    CHECK(std::abs(s(0, 0) - cplx{-1.0, 0.0}) < 1e-12); // total reflection
    CHECK(std::abs(s(0, 1)) < 1e-12);
    const TransferMatrix t = transfer_from_smatrix(s);
    CHECK(t.degenerate);
}
