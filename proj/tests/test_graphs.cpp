#include <doctest.h>

#include <cmath>

#include "qgs/graphs.hpp"
#include "qgs/random.hpp"
#include "qgs/scatter.hpp"
#include "test_support.hpp"

using namespace qgs;

TEST_CASE("validate_self_adjoint accepts the standard pairs") {
    // Neumann on two half lines
    MetricGraph g;
    g.n_external = 2;
    g.bc_a = ComplexMatrix::zero(2, 2);
    g.bc_b = ComplexMatrix::identity(2);
    CHECK(validate_self_adjoint(g).pass());

    g.bc_a = ComplexMatrix::identity(2);
    CHECK(validate_self_adjoint(g).pass()); // A = B = I

    g.n_external = 1;
    g.bc_a = ComplexMatrix::identity(1);
    g.bc_b = cplx{0.0, 1.0} * ComplexMatrix::identity(1);
    const ValidationReport r = validate_self_adjoint(g);
    CHECK_FALSE(r.pass()); // A B^* = -i not Hermitian
    CHECK(r.hermiticity_defect > 1.0);
}

TEST_CASE("validate_self_adjoint flags rank deficiency and bad sizes") {
    MetricGraph g;
    g.n_external = 2;
    g.bc_a = ComplexMatrix::zero(2, 2);
    g.bc_b = ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}};
    CHECK_FALSE(validate_self_adjoint(g).pass());

    g.bc_b = ComplexMatrix::identity(1);
    CHECK_THROWS_AS(validate_self_adjoint(g), DimensionMismatch);
}

TEST_CASE("constructors produce self-adjoint graphs") {
    rng::Engine eng(31);
    CHECK(validate_self_adjoint(kirchhoff_star_graph(1)).pass());
    CHECK(validate_self_adjoint(kirchhoff_star_graph(3)).pass());
    CHECK(validate_self_adjoint(example42_vertex(1.7)).pass());
    CHECK(validate_self_adjoint(example43_vertex(0.4)).pass());
    CHECK(validate_self_adjoint(delta_graph(2.5)).pass());
    CHECK(validate_self_adjoint(dirichlet_pair_graph()).pass());
    CHECK(validate_self_adjoint(tadpole_graph(2, 1.1, -0.7)).pass());
    CHECK(validate_self_adjoint(point_interaction_graph({2.0, 1.0, 1.0, 1.0, 0.7})).pass());
    for (int i = 0; i < 5; ++i)
        CHECK(validate_self_adjoint(rng::random_loop_graph(eng)).pass());
}

TEST_CASE("point interaction requires the determinant normalization") {
    CHECK_THROWS_AS(point_interaction_graph({2.0, 0.5, 1.0, 1.0, 0.0}), Error);
}

TEST_CASE("is_real_operator") {
    rng::Engine eng(37);
    const MetricGraph real = rng::random_real_graph(eng, 2, 1);
    CHECK(is_real_operator(real));

    CHECK(is_real_operator(point_interaction_graph({1.0, 0.0, 0.5, 1.0, 0.0})));  // mu = 0
    CHECK(is_real_operator(point_interaction_graph({1.0, 0.0, 0.5, 1.0, M_PI}))); // e^{2imu}=1
    CHECK_FALSE(is_real_operator(point_interaction_graph({1.0, 0.0, 0.5, 1.0, M_PI / 4})));

    // gauge invariance of reality
    const ComplexMatrix c = rng::random_invertible(eng, real.boundary_dim());
    CHECK(is_real_operator(gauge_transform(real, c)));
}

TEST_CASE("gauge transforms leave the scattering matrix unchanged") {
    rng::Engine eng(41);
    for (int it = 0; it < 10; ++it) {
        const MetricGraph g = rng::random_selfadjoint_graph(eng, 2 + it % 2, it % 3);
        const ComplexMatrix c = rng::random_invertible(eng, g.boundary_dim());
        const MetricGraph t = gauge_transform(g, c);
        CHECK(validate_self_adjoint(t).pass());
        for (double lambda : {0.9, 4.2}) {
            const ComplexMatrix s0 = scattering_matrix(g, lambda).s;
            const ComplexMatrix s1 = scattering_matrix(t, lambda).s;
            CHECK((s0 - s1).norm_max() < 1e-9);
        }
    }
}

TEST_CASE("free point interaction transmits perfectly") {
    const MetricGraph g = point_interaction_graph({1.0, 0.0, 0.0, 1.0, 0.0});
    for (double lambda : {0.3, 1.0, 5.5}) {
        const ComplexMatrix s = scattering_matrix(g, lambda).s;
        CHECK(std::abs(s(0, 0)) < 1e-12);
        CHECK(std::abs(s(0, 1) - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(s(1, 0) - cplx{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(s(1, 1)) < 1e-12);
    }
}

TEST_CASE("delta coupling reflection") {
    const double c = 1.8, lambda = 2.2;
    const ComplexMatrix s = scattering_matrix(delta_graph(c), lambda).s;
    const double k = std::sqrt(lambda);
    const cplx expect = -cplx{0.0, c} / (cplx{2.0 * k, 0.0} + cplx{0.0, c});
    CHECK(std::abs(s(0, 0) - expect) < 1e-12);
    CHECK(std::abs(s(1, 1) - expect) < 1e-12);
}

TEST_CASE("kirchhoff stars") {
    // two lines joined by a trivial vertex: a free line
    const ComplexMatrix s2 = scattering_matrix(kirchhoff_star_graph(2), 1.7).s;
    CHECK((s2 - ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}}).norm_max() < 1e-12);

    // three-way star: diagonal -1/3, off-diagonal 2/3, energy independent
    for (double lambda : {0.4, 1.0, 8.8}) {
        const ComplexMatrix s3 = scattering_matrix(kirchhoff_star_graph(3), lambda).s;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                const double expect = i == j ? -1.0 / 3.0 : 2.0 / 3.0;
                CHECK(std::abs(s3(i, j) - cplx{expect, 0.0}) < 1e-12);
            }
        CHECK(unitarity_defect(s3) < 1e-12);
        CHECK((s3 - s3.transpose()).norm_max() < 1e-12);
    }
}

TEST_CASE("example graph at the resonant energy") {
    // e^{i sqrt(lambda) a} = 1: diagonal -1/2, off-diagonal +1/2
    const double a = 2.0 * M_PI; // lambda = 1
    const ComplexMatrix s = scattering_matrix(example42_vertex(a), 1.0).s;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const double expect = i == j ? -0.5 : 0.5;
            CHECK(std::abs(s(i, j) - cplx{expect, 0.0}) < 1e-10);
        }
}

TEST_CASE("vertex builder rejects double-used and uncovered slots") {
    CHECK_THROWS_AS(
        build_vertex_graph(1, {}, {Vertex{{{Slot::External, 0}, {Slot::External, 0}}, 0.0}}),
        Error);
    CHECK_THROWS_AS(build_vertex_graph(2, {}, {Vertex{{{Slot::External, 0}}, 0.0}}), Error);
    CHECK_THROWS_AS(
        build_vertex_graph(
            0, {0.0}, {Vertex{{{Slot::InternalStart, 0}, {Slot::InternalEnd, 0}}, 0.0}}),
        Error);
}
