#include "qgs/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "qgs/sweep.hpp"

namespace qgs {

namespace {

void check_lambda(double lambda) {
    if (!(lambda > 0.0)) throw Error("lambda must be strictly positive");
}

} // namespace

ComplexMatrix build_z(const MetricGraph& g, double lambda) {
    check_lambda(lambda);
    const std::size_t n = g.n_external;
    const std::size_t m = g.m_internal();
    const std::size_t dim = n + 2 * m;
    const double k = std::sqrt(lambda);

    ComplexMatrix x = ComplexMatrix::zero(dim, dim);
    ComplexMatrix y = ComplexMatrix::zero(dim, dim);
    for (std::size_t e = 0; e < n; ++e) {
        x(e, e) = 1.0;
        y(e, e) = 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
        const cplx ep = std::polar(1.0, k * g.internal_lengths[i]);
        const cplx em = std::conj(ep);
        const std::size_t s = g.start_slot(i), t = g.end_slot(i);
        x(s, s) = 1.0;
        x(s, t) = 1.0;
        x(t, s) = ep;
        x(t, t) = em;
        y(s, s) = 1.0;
        y(s, t) = -1.0;
        y(t, s) = -ep;
        y(t, t) = em;
    }
    return g.bc_a * x + cplx{0.0, k} * (g.bc_b * y);
}

ComplexMatrix build_z_rhs(const MetricGraph& g, double lambda) {
    check_lambda(lambda);
    const double k = std::sqrt(lambda);
    const ComplexMatrix w = g.bc_a - cplx{0.0, k} * g.bc_b;
    return cplx{-1.0, 0.0} * w.block(0, 0, g.boundary_dim(), g.n_external);
}

double sigma_min_z(const MetricGraph& g, double lambda) {
    const std::vector<double> sigma = singular_values(build_z(g, lambda));
    return sigma.empty() ? 0.0 : sigma.back();
}

ScatteringResult scattering_matrix(const MetricGraph& g, double lambda, const Tolerance& tol) {
    require_self_adjoint(g, tol);
    return detail::scattering_matrix_prevalidated(g, lambda, tol);
}

ScatteringResult detail::scattering_matrix_prevalidated(const MetricGraph& g, double lambda,
                                                        const Tolerance& tol) {
    check_lambda(lambda);
    if (g.n_external == 0) throw NoChannels("graph has no external lines");

    const std::size_t n = g.n_external;
    const std::size_t m = g.m_internal();
    const ComplexMatrix z = build_z(g, lambda);
    const ComplexMatrix rhs = build_z_rhs(g, lambda);

    const std::vector<double> zs = singular_values(z);
    const double cut = tol.rank_rel * (zs.empty() ? 0.0 : zs.front());
    std::size_t kernel_dim = 0;
    for (double s : zs)
        if (s <= cut) ++kernel_dim;

    ScatteringResult r;
    r.lambda = lambda;
    r.exceptional = kernel_dim > 0;
    r.kernel_dim = kernel_dim;

    ComplexMatrix sol;
    if (!r.exceptional) {
        sol = solve_linear(z, rhs);
    } else {
        // the system stays solvable at eigenvalues; take the minimum-norm
        // least-squares solution
        sol = pseudoinverse(z, tol.rank_rel) * rhs;
    }
    r.s = sol.block(0, 0, n, n);
    r.alpha = sol.block(n, 0, m, n);
    r.beta = sol.block(n + m, 0, m, n);
    return r;
}

SymmetryReport check_transposition_symmetry(const MetricGraph& g, double lambda,
                                            const Tolerance& tol) {
    const ScatteringResult s = scattering_matrix(g, lambda, tol);
    const ScatteringResult sc = scattering_matrix(conjugate_graph(g), lambda, tol);
    SymmetryReport r;
    r.transposition_defect = (sc.s.transpose() - s.s).norm_max();
    r.real_operator = is_real_operator(g, tol);
    r.self_transpose_defect = (s.s - s.s.transpose()).norm_max();
    return r;
}

double check_alpha_beta_relations(const MetricGraph& g, double lambda, const Tolerance& tol) {
    const ScatteringResult s = scattering_matrix(g, lambda, tol);
    if (s.exceptional)
        throw ExceptionalPoint("internal amplitudes are not unique at an eigenvalue");
    if (g.m_internal() == 0) return 0.0;
    const ScatteringResult sc = scattering_matrix(conjugate_graph(g), lambda, tol);
    // amplitudes of the conjugated problem times S(conj A, conj B)^T, and the
    // latter equals S(A, B) under conjugation of the boundary pair
    const double d1 = (s.alpha - sc.beta.conjugate() * s.s).norm_max();
    const double d2 = (s.beta - sc.alpha.conjugate() * s.s).norm_max();
    return std::max(d1, d2);
}

namespace {

// golden-section minimization of sigma_min(Z) on [lo, hi]
double golden_refine(const MetricGraph& g, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = sigma_min_z(g, c);
    double fd = sigma_min_z(g, d);
    while (b - a > 1e-10 * std::max(1.0, a)) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sigma_min_z(g, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sigma_min_z(g, d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::vector<EigenvalueHit> find_embedded_eigenvalues(const MetricGraph& g, double lo, double hi,
                                                     std::size_t grid, const Tolerance& tol,
                                                     ExecMode mode) {
    if (!(0.0 < lo && lo < hi)) throw Error("need 0 < lo < hi");
    if (grid < 2) throw Error("need grid >= 2");
    require_self_adjoint(g, tol);
    if (g.m_internal() == 0) return {}; // eigenfunctions live on internal lines

    const std::vector<double> lambdas = sweep::linspace(lo, hi, grid);
    const std::vector<double> smin = sweep::sigma_min_scan(g, lambdas, mode);

    const double step = lambdas.size() > 1 ? lambdas[1] - lambdas[0] : hi - lo;
    std::vector<EigenvalueHit> hits;
    for (std::size_t i = 1; i + 1 < lambdas.size(); ++i) {
        if (!(smin[i] <= smin[i - 1] && smin[i] <= smin[i + 1])) continue;
        const double lam = golden_refine(g, lambdas[i - 1], lambdas[i + 1]);
        const std::vector<double> zs = singular_values(build_z(g, lam));
        const std::vector<double> zref = singular_values(build_z(g, lambdas[i + 1]));
        // the refinement stops at a finite width, so a true zero still shows
        // sigma ~ slope * width; anything below that floor counts as zero.
        // sigma_max at the refined point can itself vanish (a fully resonant
        // closed graph), hence the neighboring grid point sets the scale.
        const double slope = std::max(smin[i - 1], smin[i + 1]) / step;
        const double width = 1e-10 * std::max(1.0, lam);
        const double scale = std::max(zs.empty() ? 0.0 : zs.front(),
                                      zref.empty() ? 0.0 : zref.front());
        const double cut = std::max(tol.rank_rel * scale, 2.0 * slope * width);
        std::size_t kdim = 0;
        for (double s : zs)
            if (s <= cut) ++kdim;
        if (kdim == 0) continue;
        if (!hits.empty() && std::abs(hits.back().lambda - lam) <= 1e-8 * std::max(1.0, lam))
            continue; // same minimum bracketed twice
        hits.push_back({lam, kdim, 0});
    }
    return hits;
}

} // namespace qgs
