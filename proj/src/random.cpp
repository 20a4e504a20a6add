#include "qgs/random.hpp"

#include <cmath>

#include "qgs/transfer.hpp"

namespace qgs::rng {

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    const std::size_t n = a.rows();
    int scale = 0;
    double nrm = a.norm_max() * static_cast<double>(n);
    while (nrm > 0.5) {
        nrm /= 2.0;
        ++scale;
    }
    ComplexMatrix x = a;
    x *= cplx{std::ldexp(1.0, -scale), 0.0};
    ComplexMatrix sum = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = term * x;
        term *= cplx{1.0 / k, 0.0};
        sum += term;
    }
    for (int s = 0; s < scale; ++s) sum = sum * sum;
    return sum;
}

ComplexMatrix random_pseudo_unitary(Engine& eng, std::size_t p) {
    const ComplexMatrix h = random_hermitian(eng, 2 * p);
    return matrix_exp(cplx{0.0, 1.0} * (pseudo_metric(p) * h));
}

ComplexMatrix random_unitary_strong_offdiag(Engine& eng, std::size_t p, double floor) {
    for (;;) {
        const ComplexMatrix u = random_unitary(eng, 2 * p);
        const double s12 = singular_values(u.block(0, p, p, p)).back();
        const double s21 = singular_values(u.block(p, 0, p, p)).back();
        if (std::min(s12, s21) > floor) return u;
    }
}

cplx gaussian(Engine& eng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return {n(eng), n(eng)};
}

ComplexMatrix gaussian_matrix(Engine& eng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian(eng);
    return m;
}

ComplexMatrix random_unitary(Engine& eng, std::size_t n) {
    ComplexMatrix g = gaussian_matrix(eng, n, n);
    // modified Gram-Schmidt with one re-orthogonalization pass
    for (std::size_t j = 0; j < n; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t k = 0; k < j; ++k) {
                cplx proj{0.0, 0.0};
                for (std::size_t i = 0; i < n; ++i) proj += std::conj(g(i, k)) * g(i, j);
                for (std::size_t i = 0; i < n; ++i) g(i, j) -= proj * g(i, k);
            }
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-8) return random_unitary(eng, n); // astronomically unlikely
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

ComplexMatrix random_hermitian(Engine& eng, std::size_t n) {
    const ComplexMatrix g = gaussian_matrix(eng, n, n);
    return 0.5 * (g + g.adjoint());
}

ComplexMatrix random_invertible(Engine& eng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.5, 1.5);
    std::vector<cplx> d(n);
    for (auto& v : d) v = u(eng);
    return random_unitary(eng, n) * ComplexMatrix::diagonal(d) * random_unitary(eng, n);
}

MetricGraph random_selfadjoint_graph(Engine& eng, std::size_t n, std::size_t m, double len_lo,
                                     double len_hi) {
    std::uniform_real_distribution<double> len(len_lo, len_hi);
    MetricGraph g;
    g.n_external = n;
    for (std::size_t i = 0; i < m; ++i) g.internal_lengths.push_back(len(eng));
    const std::size_t dim = g.boundary_dim();
    g.bc_a = random_hermitian(eng, dim);
    g.bc_b = ComplexMatrix::identity(dim);
    return g;
}

MetricGraph random_real_graph(Engine& eng, std::size_t n, std::size_t m, double len_lo,
                              double len_hi) {
    MetricGraph g = random_selfadjoint_graph(eng, n, m, len_lo, len_hi);
    const std::size_t dim = g.boundary_dim();
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) g.bc_a(i, j) = g.bc_a(i, j).real();
    // symmetrize the real part so A stays Hermitian
    g.bc_a = 0.5 * (g.bc_a + g.bc_a.transpose());
    return g;
}

MetricGraph random_loop_graph(Engine& eng) {
    std::uniform_int_distribution<int> nv(1, 2);
    std::uniform_int_distribution<int> ne(1, 3);
    std::uniform_real_distribution<double> len(0.5, 2.0);
    std::uniform_real_distribution<double> strength(-2.0, 2.0);
    std::uniform_int_distribution<int> coin(0, 1);

    const std::size_t vertices = static_cast<std::size_t>(nv(eng));
    const std::size_t n = static_cast<std::size_t>(ne(eng));
    std::vector<Vertex> vs(vertices);
    for (auto& v : vs) v.delta = strength(eng);

    std::uniform_int_distribution<std::size_t> pick(0, vertices - 1);
    for (std::size_t e = 0; e < n; ++e) vs[pick(eng)].slots.push_back({Slot::External, e});

    std::vector<double> lengths;
    std::size_t edge = 0;
    // one guaranteed loop
    {
        const std::size_t at = pick(eng);
        vs[at].slots.push_back({Slot::InternalStart, edge});
        vs[at].slots.push_back({Slot::InternalEnd, edge});
        lengths.push_back(len(eng));
        ++edge;
    }
    // possibly one more edge, loop or link
    if (coin(eng) == 1) {
        const std::size_t s = pick(eng);
        const std::size_t t = pick(eng);
        vs[s].slots.push_back({Slot::InternalStart, edge});
        vs[t].slots.push_back({Slot::InternalEnd, edge});
        lengths.push_back(len(eng));
        ++edge;
    }
    // every vertex needs at least one slot; give lonely vertices a loop
    for (auto& v : vs) {
        if (v.slots.empty()) {
            v.slots.push_back({Slot::InternalStart, edge});
            v.slots.push_back({Slot::InternalEnd, edge});
            lengths.push_back(len(eng));
            ++edge;
        }
    }
    return build_vertex_graph(n, lengths, vs);
}

ContractionWithFixedPoint random_contraction_with_fixed_point(Engine& eng, std::size_t n) {
    std::uniform_real_distribution<double> s(0.1, 0.9);
    const ComplexMatrix w = random_unitary(eng, n);
    std::vector<cplx> d(n);
    d[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) d[i] = s(eng);
    // R fixes e_1 and mixes the rest, so W D R^* W^* has W e_1 as a fixed point
    ComplexMatrix r = ComplexMatrix::identity(n);
    if (n > 1) r.set_block(1, 1, random_unitary(eng, n - 1));
    ContractionWithFixedPoint out;
    out.a = w * ComplexMatrix::diagonal(d) * r.adjoint() * w.adjoint();
    out.c = w.column(0);
    return out;
}

ContractionFactorPair random_contraction_factor_pair(Engine& eng, std::size_t n) {
    std::uniform_real_distribution<double> s(0.1, 0.9);
    const ComplexMatrix wb = random_unitary(eng, n); // first column is b
    const ComplexMatrix ub = random_unitary(eng, n); // first column is u = B b

    std::vector<cplx> db(n), da(n);
    db[0] = 1.0;
    da[0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        db[i] = s(eng);
        da[i] = s(eng);
    }
    // B maps b -> u with singular value one and contracts the rest;
    // A maps u back to b the same way, so A B b = b with ||A||, ||B|| = 1.
    ContractionFactorPair out;
    out.b_mat = ub * ComplexMatrix::diagonal(db) * wb.adjoint();
    ComplexMatrix wa(n, n);
    wa.set_block(0, 0, wb.column(0));
    wa.set_block(0, 1, orthonormal_complement(wb.column(0), n));
    out.a = wa * ComplexMatrix::diagonal(da) * ub.adjoint();
    out.b = wb.column(0);
    return out;
}

} // namespace qgs::rng
