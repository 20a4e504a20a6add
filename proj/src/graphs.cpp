#include "qgs/graphs.hpp"

#include <cmath>
#include <complex>
#include <utility>

namespace qgs {

namespace {

std::size_t slot_column(const MetricGraph& g, const Slot& s) {
    switch (s.kind) {
        case Slot::External:
            if (s.index >= g.n_external) throw IndexOutOfRange("external slot");
            return g.external_slot(s.index);
        case Slot::InternalStart:
            if (s.index >= g.m_internal()) throw IndexOutOfRange("internal slot");
            return g.start_slot(s.index);
        case Slot::InternalEnd:
            if (s.index >= g.m_internal()) throw IndexOutOfRange("internal slot");
            return g.end_slot(s.index);
    }
    throw IndexOutOfRange("slot kind");
}

} // namespace

ValidationReport validate_self_adjoint(const MetricGraph& g, const Tolerance& tol) {
    const std::size_t dim = g.boundary_dim();
    ValidationReport r;
    r.required_rank = dim;
    r.dims_ok = g.bc_a.rows() == dim && g.bc_a.cols() == dim && g.bc_b.rows() == dim &&
                g.bc_b.cols() == dim;
    if (!r.dims_ok) throw DimensionMismatch("boundary matrices must be (n+2m) x (n+2m)");
    for (double a : g.internal_lengths)
        if (!(a > 0.0)) return r; // dims ok but lengths invalid -> fail via rank_ok=false

    const ComplexMatrix ab = g.bc_a * g.bc_b.adjoint();
    r.hermiticity_defect = hermiticity_defect(ab);
    const double scale = std::max(1.0, std::max(g.bc_a.norm_max(), g.bc_b.norm_max()));
    r.hermitian_ok = r.hermiticity_defect <= 1e-9 * scale * scale;

    ComplexMatrix juxt(dim, 2 * dim);
    juxt.set_block(0, 0, g.bc_a);
    juxt.set_block(0, dim, g.bc_b);
    r.rank = rank(juxt, tol.rank_rel);
    r.rank_ok = r.rank == dim;
    return r;
}

void require_self_adjoint(const MetricGraph& g, const Tolerance& tol) {
    if (!validate_self_adjoint(g, tol).pass())
        throw NotSelfAdjoint("boundary conditions do not define a self-adjoint operator");
}

bool is_real_operator(const MetricGraph& g, const Tolerance& tol) {
    const std::size_t dim = g.boundary_dim();
    ComplexMatrix juxt(dim, 2 * dim);
    juxt.set_block(0, 0, g.bc_a);
    juxt.set_block(0, dim, g.bc_b);
    const ComplexMatrix k1 = kernel_basis(juxt, tol.rank_rel);
    const ComplexMatrix k2 = kernel_basis(juxt.conjugate(), tol.rank_rel);
    if (k1.cols() != k2.cols()) return false;
    // mutual projection residuals
    const double r1 = (k1 - k2 * (k2.adjoint() * k1)).norm_max();
    const double r2 = (k2 - k1 * (k1.adjoint() * k2)).norm_max();
    return std::max(r1, r2) <= 1e-8;
}

MetricGraph point_interaction_graph(const PointInteraction& p) {
    if (std::abs(p.a * p.d - p.b * p.c - 1.0) > 1e-12)
        throw Error("point interaction requires ad - bc = 1");
    const cplx em = std::polar(1.0, p.mu);
    MetricGraph g;
    g.n_external = 2;
    g.bc_a = ComplexMatrix{{em * p.a, -1.0}, {em * p.c, 0.0}};
    g.bc_b = ComplexMatrix{{-em * p.b, 0.0}, {-em * p.d, -1.0}};
    return g;
}

MetricGraph kirchhoff_star_graph(std::size_t n) {
    if (n < 1) throw Error("kirchhoff_star_graph needs n >= 1");
    std::vector<Slot> slots;
    for (std::size_t e = 0; e < n; ++e) slots.push_back({Slot::External, e});
    return build_vertex_graph(n, {}, {Vertex{slots, 0.0}});
}

MetricGraph delta_graph(double c) { return point_interaction_graph({1.0, 0.0, c, 1.0, 0.0}); }

MetricGraph dirichlet_pair_graph() {
    MetricGraph g;
    g.n_external = 2;
    g.bc_a = ComplexMatrix::identity(2);
    g.bc_b = ComplexMatrix::zero(2, 2);
    return g;
}

MetricGraph example42_vertex(double a) {
    // externals (0,1) on the left, (2,3) on the right; vertex 0 joins
    // {e0, edge start, e2}, vertex 1 joins {e1, edge end, e3}
    return build_vertex_graph(
        4, {a},
        {Vertex{{{Slot::External, 0}, {Slot::InternalStart, 0}, {Slot::External, 2}}, 0.0},
         Vertex{{{Slot::External, 1}, {Slot::InternalEnd, 0}, {Slot::External, 3}}, 0.0}});
}

MetricGraph example43_vertex(double a) {
    // both lines of vertex 0 first: vertex 0 joins {e0, e1, edge start},
    // vertex 1 joins {edge end, e2, e3}
    return build_vertex_graph(
        4, {a},
        {Vertex{{{Slot::External, 0}, {Slot::External, 1}, {Slot::InternalStart, 0}}, 0.0},
         Vertex{{{Slot::InternalEnd, 0}, {Slot::External, 2}, {Slot::External, 3}}, 0.0}});
}

MetricGraph build_vertex_graph(std::size_t n_external, std::vector<double> lengths,
                               const std::vector<Vertex>& vertices) {
    MetricGraph g;
    g.n_external = n_external;
    g.internal_lengths = std::move(lengths);
    for (double a : g.internal_lengths)
        if (!(a > 0.0)) throw Error("internal lengths must be positive");
    const std::size_t dim = g.boundary_dim();
    g.bc_a = ComplexMatrix(dim, dim);
    g.bc_b = ComplexMatrix(dim, dim);

    std::vector<bool> used(dim, false);
    std::size_t row = 0;
    for (const Vertex& v : vertices) {
        if (v.slots.empty()) throw Error("vertex without slots");
        std::vector<std::size_t> cols;
        for (const Slot& s : v.slots) {
            const std::size_t c = slot_column(g, s);
            if (used[c]) throw Error("boundary slot used twice");
            used[c] = true;
            cols.push_back(c);
        }
        for (std::size_t j = 0; j + 1 < cols.size(); ++j) {
            g.bc_a(row, cols[j]) = 1.0;
            g.bc_a(row, cols[j + 1]) = -1.0;
            ++row;
        }
        // sum of outward derivatives = delta * value; the stored derivative
        // entries already point outward, so the B row is all ones
        g.bc_a(row, cols[0]) = -v.delta;
        for (std::size_t c : cols) g.bc_b(row, c) = 1.0;
        ++row;
    }
    if (row != dim) throw Error("vertex conditions do not cover all boundary slots");
    return g;
}

MetricGraph tadpole_graph(std::size_t n_external, double length, double delta) {
    std::vector<Slot> slots;
    for (std::size_t e = 0; e < n_external; ++e) slots.push_back({Slot::External, e});
    slots.push_back({Slot::InternalStart, 0});
    slots.push_back({Slot::InternalEnd, 0});
    return build_vertex_graph(n_external, {length}, {Vertex{slots, delta}});
}

MetricGraph conjugate_graph(const MetricGraph& g) {
    MetricGraph c = g;
    c.bc_a = g.bc_a.conjugate();
    c.bc_b = g.bc_b.conjugate();
    return c;
}

MetricGraph gauge_transform(const MetricGraph& g, const ComplexMatrix& c) {
    if (!c.square() || c.rows() != g.boundary_dim())
        throw DimensionMismatch("gauge matrix size");
    MetricGraph t = g;
    t.bc_a = c * g.bc_a;
    t.bc_b = c * g.bc_b;
    return t;
}

} // namespace qgs
