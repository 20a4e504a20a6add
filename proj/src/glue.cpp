#include "qgs/glue.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qgs/starprod.hpp"

namespace qgs {

namespace {

void validate_spec(const GlueSpec& spec, std::size_t n1, std::size_t n2) {
    const std::size_t p = spec.p();
    if (p < 1 || spec.right_ports.size() != p || spec.lengths.size() != p)
        throw PortCollision("port and length lists must have equal positive size");
    if (p > std::min(n1, n2)) throw PortCollision("more ports than external lines");
    for (std::size_t k = 0; k < p; ++k) {
        if (spec.left_ports[k] >= n1 || spec.right_ports[k] >= n2)
            throw PortCollision("port index out of range");
        if (k > 0 && spec.left_ports[k] <= spec.left_ports[k - 1])
            throw PortCollision("left ports must be strictly increasing");
        if (!(spec.lengths[k] > 0.0)) throw PortCollision("glue lengths must be positive");
    }
    std::vector<std::size_t> r = spec.right_ports;
    std::sort(r.begin(), r.end());
    if (std::adjacent_find(r.begin(), r.end()) != r.end())
        throw PortCollision("duplicate right port");
}

// permutation[i] = source channel of new channel i; conjugates s accordingly
ComplexMatrix permute_channels(const ComplexMatrix& s, const std::vector<std::size_t>& perm) {
    ComplexMatrix out(s.rows(), s.cols());
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j) out(i, j) = s(perm[i], perm[j]);
    return out;
}

std::vector<std::size_t> kept_channels(std::size_t n, const std::vector<std::size_t>& ports) {
    std::vector<std::size_t> kept;
    for (std::size_t e = 0; e < n; ++e)
        if (std::find(ports.begin(), ports.end(), e) == ports.end()) kept.push_back(e);
    return kept;
}

ComplexMatrix phase_matrix(const GlueSpec& spec, std::size_t n2, double lambda) {
    const double k = std::sqrt(lambda);
    ComplexMatrix v = ComplexMatrix::identity(n2);
    for (std::size_t i = 0; i < spec.p(); ++i) v(i, i) = std::polar(1.0, k * spec.lengths[i]);
    return v;
}

std::size_t kernel_dim_z(const MetricGraph& g, double lambda, const Tolerance& tol) {
    const std::vector<double> sigma = singular_values(build_z(g, lambda));
    const double cut = tol.rank_rel * (sigma.empty() ? 0.0 : sigma.front());
    std::size_t d = 0;
    for (double v : sigma)
        if (v <= cut) ++d;
    return d;
}

} // namespace

CompositionResult compose_smatrices(const ComplexMatrix& s1, const ComplexMatrix& s2,
                                    const GlueSpec& spec, double lambda, const Tolerance& tol) {
    if (!s1.square() || !s2.square()) throw DimensionMismatch("scattering matrices");
    const std::size_t n1 = s1.rows(), n2 = s2.rows();
    validate_spec(spec, n1, n2);
    const std::size_t p = spec.p();

    // left ports go last in s1, right ports come first in s2
    std::vector<std::size_t> perm1 = kept_channels(n1, spec.left_ports);
    perm1.insert(perm1.end(), spec.left_ports.begin(), spec.left_ports.end());
    std::vector<std::size_t> perm2 = spec.right_ports;
    const std::vector<std::size_t> kept2 = kept_channels(n2, spec.right_ports);
    perm2.insert(perm2.end(), kept2.begin(), kept2.end());

    const ComplexMatrix s1p = permute_channels(s1, perm1);
    const ComplexMatrix v = phase_matrix(spec, n2, lambda);
    const ComplexMatrix s2p = v * permute_channels(s2, perm2) * v;

    const StarResult res = star_full(StarOperands{s1p, s2p, p, {}}, tol);
    CompositionResult out;
    out.s_composed = res.u;
    out.compatible = res.compat.compatible;
    out.resonance_dim = res.compat.compatible ? 0 : res.compat.c_basis.cols();
    return out;
}

MetricGraph merge_graphs(const MetricGraph& g1, const MetricGraph& g2, const GlueSpec& spec) {
    validate_spec(spec, g1.n_external, g2.n_external);
    require_self_adjoint(g1);
    require_self_adjoint(g2);

    const std::size_t p = spec.p();
    const std::size_t n1 = g1.n_external, n2 = g2.n_external;
    const std::size_t m1 = g1.m_internal(), m2 = g2.m_internal();
    const std::size_t n = n1 + n2 - 2 * p;
    const std::size_t m = m1 + m2 + p;

    MetricGraph g;
    g.n_external = n;
    g.internal_lengths = g1.internal_lengths;
    g.internal_lengths.insert(g.internal_lengths.end(), g2.internal_lengths.begin(),
                              g2.internal_lengths.end());
    g.internal_lengths.insert(g.internal_lengths.end(), spec.lengths.begin(),
                              spec.lengths.end());

    const std::vector<std::size_t> kept1 = kept_channels(n1, spec.left_ports);
    const std::vector<std::size_t> kept2 = kept_channels(n2, spec.right_ports);

    // Boundary column maps. Glued first-graph ports become new-edge starts,
    // second-graph ports become new-edge ends; the outward-derivative
    // convention keeps every entry sign-free under the identification.
    auto map1 = [&](std::size_t col) -> std::size_t {
        if (col < n1) {
            const auto it = std::find(spec.left_ports.begin(), spec.left_ports.end(), col);
            if (it != spec.left_ports.end())
                return g.start_slot(m1 + m2 + static_cast<std::size_t>(
                                                  it - spec.left_ports.begin()));
            const auto kt = std::find(kept1.begin(), kept1.end(), col);
            return static_cast<std::size_t>(kt - kept1.begin());
        }
        if (col < n1 + m1) return g.start_slot(col - n1);
        return g.end_slot(col - n1 - m1);
    };
    auto map2 = [&](std::size_t col) -> std::size_t {
        if (col < n2) {
            const auto it = std::find(spec.right_ports.begin(), spec.right_ports.end(), col);
            if (it != spec.right_ports.end())
                return g.end_slot(m1 + m2 + static_cast<std::size_t>(
                                                it - spec.right_ports.begin()));
            const auto kt = std::find(kept2.begin(), kept2.end(), col);
            return kept1.size() + static_cast<std::size_t>(kt - kept2.begin());
        }
        if (col < n2 + m2) return g.start_slot(m1 + (col - n2));
        return g.end_slot(m1 + (col - n2 - m2));
    };

    const std::size_t dim = g.boundary_dim();
    const std::size_t dim1 = g1.boundary_dim(), dim2 = g2.boundary_dim();
    g.bc_a = ComplexMatrix(dim, dim);
    g.bc_b = ComplexMatrix(dim, dim);
    for (std::size_t r = 0; r < dim1; ++r)
        for (std::size_t c = 0; c < dim1; ++c) {
            g.bc_a(r, map1(c)) = g1.bc_a(r, c);
            g.bc_b(r, map1(c)) = g1.bc_b(r, c);
        }
    for (std::size_t r = 0; r < dim2; ++r)
        for (std::size_t c = 0; c < dim2; ++c) {
            g.bc_a(dim1 + r, map2(c)) = g2.bc_a(r, c);
            g.bc_b(dim1 + r, map2(c)) = g2.bc_b(r, c);
        }
    return g;
}

CompositionResult compose_graphs(const MetricGraph& g1, const MetricGraph& g2,
                                 const GlueSpec& spec, double lambda, const Tolerance& tol) {
    const ScatteringResult s1 = scattering_matrix(g1, lambda, tol);
    const ScatteringResult s2 = scattering_matrix(g2, lambda, tol);
    CompositionResult out = compose_smatrices(s1.s, s2.s, spec, lambda, tol);
    out.merged = merge_graphs(g1, g2, spec);
    return out;
}

double verify_composition(const MetricGraph& g1, const MetricGraph& g2, const GlueSpec& spec,
                          double lambda, const Tolerance& tol) {
    const CompositionResult c = compose_graphs(g1, g2, spec, lambda, tol);
    const ScatteringResult direct = scattering_matrix(*c.merged, lambda, tol);
    return (c.s_composed - direct.s).norm_max();
}

MultiplicityReport multiplicity_accounting(const MetricGraph& g1, const MetricGraph& g2,
                                           const GlueSpec& spec, double lambda,
                                           const Tolerance& tol) {
    MultiplicityReport r;
    r.lambda = lambda;
    const CompositionResult c = compose_graphs(g1, g2, spec, lambda, tol);
    r.resonance_dim = c.resonance_dim;
    r.merged_multiplicity = kernel_dim_z(*c.merged, lambda, tol);
    r.part1_multiplicity = kernel_dim_z(g1, lambda, tol);
    r.part2_multiplicity = kernel_dim_z(g2, lambda, tol);
    r.overlap_dim = r.merged_multiplicity - std::min(r.merged_multiplicity,
                                                     r.part1_multiplicity + r.part2_multiplicity);
    r.identity_holds =
        r.merged_multiplicity == r.part1_multiplicity + r.part2_multiplicity + r.resonance_dim;
    return r;
}

void annotate_overlap(std::vector<EigenvalueHit>& hits, const MetricGraph& g1,
                      const MetricGraph& g2, const GlueSpec& spec, const Tolerance& tol) {
    for (EigenvalueHit& h : hits) {
        const MultiplicityReport r = multiplicity_accounting(g1, g2, spec, h.lambda, tol);
        h.overlap_dim = r.overlap_dim;
    }
}

MetricGraph split_tadpole(const MetricGraph& g, std::size_t edge) {
    if (edge >= g.m_internal()) throw IndexOutOfRange("edge index");
    const std::size_t n = g.n_external, m = g.m_internal();
    const double half = g.internal_lengths[edge] / 2.0;

    MetricGraph out;
    out.n_external = n;
    out.internal_lengths = g.internal_lengths;
    out.internal_lengths[edge] = half;
    out.internal_lengths.push_back(half); // second half, appended as edge m

    const std::size_t dim = out.boundary_dim();
    out.bc_a = ComplexMatrix(dim, dim);
    out.bc_b = ComplexMatrix(dim, dim);

    // old columns, with the split edge's far end re-routed to the new edge
    auto remap = [&](std::size_t col) -> std::size_t {
        if (col < n + m) return col; // externals and starts keep their slots
        const std::size_t i = col - n - m;
        if (i == edge) return out.end_slot(m); // old end now ends the new edge
        return out.end_slot(i);
    };
    const std::size_t old_dim = g.boundary_dim();
    for (std::size_t r = 0; r < old_dim; ++r)
        for (std::size_t c = 0; c < old_dim; ++c) {
            out.bc_a(r, remap(c)) = g.bc_a(r, c);
            out.bc_b(r, remap(c)) = g.bc_b(r, c);
        }
    // midpoint vertex: continuous value and derivative between the halves
    const std::size_t mid_end = out.end_slot(edge);    // x = a/2 on the first half
    const std::size_t mid_start = out.start_slot(m);   // x = 0 on the second half
    out.bc_a(old_dim, mid_end) = 1.0;
    out.bc_a(old_dim, mid_start) = -1.0;
    out.bc_b(old_dim + 1, mid_end) = 1.0; // outward derivatives cancel
    out.bc_b(old_dim + 1, mid_start) = 1.0;
    return out;
}

MetricGraph self_glue(const MetricGraph& g, std::size_t port_a, std::size_t port_b,
                      double length) {
    const std::size_t n = g.n_external, m = g.m_internal();
    if (port_a >= n || port_b >= n || port_a == port_b)
        throw PortCollision("self_glue needs two distinct external lines");
    if (!(length > 0.0)) throw PortCollision("glue length must be positive");

    MetricGraph out;
    out.n_external = n - 2;
    out.internal_lengths = g.internal_lengths;
    out.internal_lengths.push_back(length);

    std::vector<std::size_t> kept;
    for (std::size_t e = 0; e < n; ++e)
        if (e != port_a && e != port_b) kept.push_back(e);

    auto remap = [&](std::size_t col) -> std::size_t {
        if (col < n) {
            if (col == port_a) return out.start_slot(m);
            if (col == port_b) return out.end_slot(m);
            const auto kt = std::find(kept.begin(), kept.end(), col);
            return static_cast<std::size_t>(kt - kept.begin());
        }
        if (col < n + m) return out.start_slot(col - n);
        return out.end_slot(col - n - m);
    };
    const std::size_t dim = out.boundary_dim();
    out.bc_a = ComplexMatrix(dim, dim);
    out.bc_b = ComplexMatrix(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            out.bc_a(r, remap(c)) = g.bc_a(r, c);
            out.bc_b(r, remap(c)) = g.bc_b(r, c);
        }
    return out;
}

} // namespace qgs
