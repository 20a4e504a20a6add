#include "qgs/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "qgs/glue.hpp"
#include "qgs/random.hpp"
#include "qgs/starprod.hpp"
#include "qgs/sweep.hpp"
#include "qgs/transfer.hpp"

namespace qgs::verify {

namespace {

using clock_type = std::chrono::steady_clock;

struct Timer {
    clock_type::time_point t0 = clock_type::now();
    double seconds() const {
        return std::chrono::duration<double>(clock_type::now() - t0).count();
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2e", v);
    return buf;
}

// ---- closed forms of the worked examples -------------------------------

cplx phase(double x) { return std::polar(1.0, x); }

ComplexMatrix example42_smatrix(double a, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e = phase(k * a), em = std::conj(e);
    const cplx dd = e - 9.0 * em;
    const cplx d = (e + 3.0 * em) / dd;
    const cplx t = 2.0 * (e - 3.0 * em) / dd;
    const cplx f = -4.0 / dd;
    return ComplexMatrix{{d, f, t, f}, {f, d, f, t}, {t, f, d, f}, {f, t, f, d}};
}

ComplexMatrix example43_smatrix(double a, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e = phase(k * a), em = std::conj(e);
    const cplx dd = e - 9.0 * em;
    const cplx d = (e + 3.0 * em) / dd;
    const cplx t = 2.0 * (e - 3.0 * em) / dd;
    const cplx f = -4.0 / dd;
    return ComplexMatrix{{d, t, f, f}, {t, d, f, f}, {f, f, d, t}, {f, f, t, d}};
}

cplx detk_example42(double a, double b, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e = phase(k * a);
    const cplx dd = e - 9.0 * std::conj(e);
    const cplx xi = phase(2.0 * k * a) - 1.0;
    const cplx eta = phase(2.0 * k * b) - 1.0;
    const cplx bracket =
        xi * (xi * eta * eta - 64.0) * (xi - 8.0) * (xi - 8.0) +
        16.0 * eta * (-256.0 - 128.0 * xi + 44.0 * xi * xi - 3.0 * xi * xi * xi);
    return bracket * phase(-4.0 * k * a) / (dd * dd * dd * dd);
}

cplx detk_example43(double a, double b, double lambda) {
    const double k = std::sqrt(lambda);
    const cplx e2a = phase(2.0 * k * a), e2b = phase(2.0 * k * b);
    const cplx e = phase(k * a);
    const cplx dd = e - 9.0 * std::conj(e);
    const cplx bracket = e2a * e2a * (1.0 - 10.0 * e2b + 9.0 * e2b * e2b) +
                         729.0 / (e2a * e2a) * (9.0 - 10.0 * e2b + e2b * e2b) -
                         36.0 * e2a * (1.0 - 6.0 * e2b + 5.0 * e2b * e2b) -
                         324.0 / e2a * (9.0 - 14.0 * e2b + 5.0 * e2b * e2b) +
                         18.0 * (27.0 - 86.0 * e2b + 59.0 * e2b * e2b);
    return bracket / (dd * dd * dd * dd);
}

// V(a) S V(a) with V(a) = diag(phases on the first p channels, identity)
ComplexMatrix conjugate_by_glue_phases(const ComplexMatrix& s, std::size_t p, double length,
                                       double lambda) {
    const double k = std::sqrt(lambda);
    ComplexMatrix v = ComplexMatrix::identity(s.rows());
    for (std::size_t i = 0; i < p; ++i) v(i, i) = phase(k * length);
    return v * s * v;
}

ComplexMatrix unit_column(std::initializer_list<double> entries) {
    ComplexMatrix c(entries.size(), 1);
    double nrm = 0.0;
    std::size_t i = 0;
    for (double v : entries) {
        c(i++, 0) = v;
        nrm += v * v;
    }
    return c * cplx{1.0 / std::sqrt(nrm), 0.0};
}

double span_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    const double r1 = (a - b * (b.adjoint() * a)).norm_max();
    const double r2 = (b - a * (a.adjoint() * b)).norm_max();
    return std::max(r1, r2);
}

GlueSpec example_glue(double b) { return GlueSpec{{2, 3}, {0, 1}, {b, b}}; }

} // namespace

// ---- 1: unitarity -------------------------------------------------------

CriterionResult unitarity_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed);
    std::uniform_int_distribution<std::size_t> pick_n(1, 4), pick_m(0, 2);
    double worst = 0.0;
    for (int it = 0; it < 200; ++it) {
        const MetricGraph g = rng::random_selfadjoint_graph(eng, pick_n(eng), pick_m(eng));
        for (double lambda : {0.3, 1.0, 7.7}) {
            const ScatteringResult r = scattering_matrix(g, lambda);
            worst = std::max(worst, unitarity_defect(r.s));
        }
    }
    CriterionResult res{"unitarity suite (200 graphs x 3 energies)", false, worst, 1e-8, 0.0,
                        "runtime limit 10 s"};
    res.seconds = timer.seconds();
    res.pass = worst <= res.bound && res.seconds < 10.0;
    return res;
}

// ---- 2: composition oracle ----------------------------------------------

CriterionResult composition_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 1);
    std::uniform_int_distribution<std::size_t> pick_n(2, 4), pick_m(0, 2);
    std::uniform_real_distribution<double> pick_lambda(0.3, 8.0), pick_len(0.5, 2.0);

    double worst_regular = 0.0, worst_exceptional = 0.0;
    int exceptional_count = 0;

    auto run_instance = [&](const MetricGraph& g1, const MetricGraph& g2, const GlueSpec& spec,
                            double lambda) {
        const CompositionResult c = compose_graphs(g1, g2, spec, lambda);
        const ScatteringResult direct = scattering_matrix(*c.merged, lambda);
        const double defect = (c.s_composed - direct.s).norm_max();
        if (direct.exceptional || !c.compatible) {
            worst_exceptional = std::max(worst_exceptional, defect);
            ++exceptional_count;
        } else {
            worst_regular = std::max(worst_regular, defect);
        }
    };

    for (int it = 0; it < 100; ++it) {
        const std::size_t n1 = pick_n(eng), n2 = pick_n(eng);
        std::uniform_int_distribution<std::size_t> pick_p(
            1, std::min<std::size_t>(2, std::min(n1, n2)));
        std::size_t p = pick_p(eng);
        if (2 * p >= n1 + n2) p = 1;
        const MetricGraph g1 = rng::random_selfadjoint_graph(eng, n1, pick_m(eng));
        const MetricGraph g2 = rng::random_selfadjoint_graph(eng, n2, pick_m(eng));

        GlueSpec spec;
        std::vector<std::size_t> left(n1), right(n2);
        for (std::size_t i = 0; i < n1; ++i) left[i] = i;
        for (std::size_t i = 0; i < n2; ++i) right[i] = i;
        std::shuffle(left.begin(), left.end(), eng);
        std::shuffle(right.begin(), right.end(), eng);
        spec.left_ports.assign(left.begin(), left.begin() + p);
        std::sort(spec.left_ports.begin(), spec.left_ports.end());
        spec.right_ports.assign(right.begin(), right.begin() + p);
        for (std::size_t i = 0; i < p; ++i) spec.lengths.push_back(pick_len(eng));

        run_instance(g1, g2, spec, pick_lambda(eng));
    }
    // pinned resonant instances exercising the exceptional branch
    const MetricGraph v42 = example42_vertex(M_PI);
    for (double lambda : {1.0, 4.0, 9.0}) run_instance(v42, v42, example_glue(M_PI), lambda);

    CriterionResult res{"composition oracle (100 random + resonant gluings)", false,
                        std::max(worst_regular, worst_exceptional), 1e-7, 0.0, ""};
    res.seconds = timer.seconds();
    res.pass = worst_regular <= 1e-7 && worst_exceptional <= 1e-6 && res.seconds < 30.0;
    res.detail = "regular " + fmt(worst_regular) + " <= 1e-7, exceptional " +
                 fmt(worst_exceptional) + " <= 1e-6 (" + std::to_string(exceptional_count) +
                 " exceptional), runtime limit 30 s";
    return res;
}

// ---- 3: built-in example regression ---------------------------------------

CriterionResult example_regression_suite() {
    Timer timer;
    bool pass = true;
    std::ostringstream detail;

    // scattering matrices against the closed forms at 10 energies
    double s_defect = 0.0;
    const double a0 = 1.3;
    const MetricGraph g42 = example42_vertex(a0);
    const MetricGraph g43 = example43_vertex(a0);
    for (double lambda : {0.3, 0.7, 1.1, 1.9, 2.7, 3.6, 4.8, 6.2, 7.9, 9.4}) {
        s_defect = std::max(
            s_defect,
            (scattering_matrix(g42, lambda).s - example42_smatrix(a0, lambda)).norm_max());
        s_defect = std::max(
            s_defect,
            (scattering_matrix(g43, lambda).s - example43_smatrix(a0, lambda)).norm_max());
    }
    pass = pass && s_defect <= 1e-10;
    detail << "S defect " << fmt(s_defect) << " <= 1e-10";

    // det K against the printed closed forms, 10 parameter triples
    rng::Engine eng(424242);
    std::uniform_real_distribution<double> pick_len(0.6, 2.4), pick_lambda(0.3, 9.0);
    double detk_defect = 0.0;
    for (int it = 0; it < 10; ++it) {
        const double a = pick_len(eng), b = pick_len(eng), lambda = pick_lambda(eng);
        {
            const ComplexMatrix s = example42_smatrix(a, lambda);
            const ComplexMatrix s2 = conjugate_by_glue_phases(s, 2, b, lambda);
            const ComplexMatrix kinv =
                ComplexMatrix::identity(2) - s.block(2, 2, 2, 2) * s2.block(0, 0, 2, 2);
            const cplx reference = detk_example42(a, b, lambda);
            detk_defect =
                std::max(detk_defect, std::abs(det(kinv) - reference) / std::abs(reference));
        }
        {
            const ComplexMatrix s = example43_smatrix(a, lambda);
            const ComplexMatrix s2 = conjugate_by_glue_phases(s, 2, b, lambda);
            const ComplexMatrix kinv =
                ComplexMatrix::identity(2) - s.block(2, 2, 2, 2) * s2.block(0, 0, 2, 2);
            const cplx reference = detk_example43(a, b, lambda);
            detk_defect =
                std::max(detk_defect, std::abs(det(kinv) - reference) / std::abs(reference));
        }
    }
    pass = pass && detk_defect <= 1e-8;
    detail << ", det K defect " << fmt(detk_defect) << " <= 1e-8 rel";

    // resonant kernels and star unitarity
    double kernel_angle = 0.0, star_defect = 0.0;
    for (double lambda : {1.0, 4.0}) { // e^{i k pi} = -1, +1
        const ComplexMatrix s = example42_smatrix(M_PI, lambda);
        const ComplexMatrix s2 = conjugate_by_glue_phases(s, 2, M_PI, lambda);
        const StarResult sr = star_full({s, s2, 2, {}});
        if (sr.compat.compatible || sr.compat.c_basis.cols() != 1) {
            pass = false;
            detail << ", expected a one-dimensional example42 resonance kernel";
            continue;
        }
        const ComplexMatrix expect =
            lambda == 4.0 ? unit_column({1.0, -1.0}) : unit_column({1.0, 1.0});
        kernel_angle = std::max(kernel_angle, span_distance(sr.compat.c_basis, expect));
        star_defect = std::max(star_defect, unitarity_defect(sr.u));
    }
    {
        // the permuted ordering resonates whenever e^{2 i k b} = 1
        const ComplexMatrix s = example43_smatrix(a0, 4.0);
        const ComplexMatrix s2 = conjugate_by_glue_phases(s, 2, M_PI, 4.0);
        const StarResult sr = star_full({s, s2, 2, {}});
        if (sr.compat.compatible || sr.compat.c_basis.cols() != 1) {
            pass = false;
            detail << ", expected an example43 resonance kernel";
        } else {
            kernel_angle = std::max(kernel_angle,
                                    span_distance(sr.compat.c_basis, unit_column({1.0, -1.0})));
            star_defect = std::max(star_defect, unitarity_defect(sr.u));
        }
    }
    pass = pass && kernel_angle <= 1e-6 && star_defect <= 1e-8;
    detail << ", kernel angle " << fmt(kernel_angle) << " <= 1e-6, resonant star unitarity "
           << fmt(star_defect) << " <= 1e-8";

    return {"built-in example regression (example42 / example43)", pass,
            std::max({s_defect, detk_defect, star_defect}), 1e-8, timer.seconds(),
            detail.str()};
}

// ---- 4: star algebra -----------------------------------------------------

namespace {

// swap diagonal and off-diagonal blocks; q is the leading block size
ComplexMatrix block_swap(const ComplexMatrix& u, std::size_t q) {
    const std::size_t p = u.rows() - q;
    ComplexMatrix t(u.rows(), u.rows());
    t.set_block(0, 0, u.block(q, q, p, p));
    t.set_block(0, p, u.block(q, 0, p, q));
    t.set_block(p, 0, u.block(0, q, q, p));
    t.set_block(p, p, u.block(0, 0, q, q));
    return t;
}

} // namespace

CriterionResult star_algebra_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 2);
    bool pass = true;
    std::ostringstream detail;

    double unit_defect = 0.0;
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 3 + it % 3;
        const std::size_t p = 1 + it % std::min<std::size_t>(n - 1, 3);
        const ComplexMatrix u = rng::random_unitary(eng, n);
        const ComplexMatrix e = star_unit(p);
        unit_defect = std::max(unit_defect, (star(e, u, p) - u).norm_max());
        unit_defect = std::max(unit_defect, (star(u, e, p) - u).norm_max());
    }
    pass = pass && unit_defect <= 1e-12;
    detail << "unit law " << fmt(unit_defect) << " <= 1e-12";

    double assoc_defect = 0.0;
    int assoc_count = 0;
    while (assoc_count < 50) {
        const std::size_t n2 = 2 + assoc_count % 2;
        const std::size_t p = 1;
        const std::size_t pp = (n2 > 2 && assoc_count % 3 == 0) ? 2 : 1;
        const std::size_t n1 = std::max<std::size_t>(p + pp, 2 + assoc_count % 3);
        const std::size_t n3 = std::max<std::size_t>(pp, 2 + (assoc_count / 2) % 2);
        if (p + pp > std::min(n1, n2) || pp > std::min(n2, n3)) {
            ++assoc_count;
            continue;
        }
        const ComplexMatrix u1 = rng::random_unitary(eng, n1);
        const ComplexMatrix u2 = rng::random_unitary(eng, n2);
        const ComplexMatrix u3 = rng::random_unitary(eng, n3);
        const ComplexMatrix v = rng::random_unitary(eng, p);
        const ComplexMatrix vp = rng::random_unitary(eng, pp);
        assoc_defect = std::max(assoc_defect, check_associativity(u1, u2, u3, v, vp, p, pp));
        ++assoc_count;
    }
    pass = pass && assoc_defect <= 1e-8;
    detail << ", associativity " << fmt(assoc_defect) << " <= 1e-8";

    double tau_defect = 0.0;
    for (int it = 0; it < 50; ++it) {
        const std::size_t n1 = 2 + it % 3, n2 = 2 + (it / 3) % 3;
        std::size_t p = 1 + it % std::min(n1, n2);
        while (p > 1 && 2 * p >= n1 + n2) --p;
        const ComplexMatrix u1 = rng::random_unitary(eng, n1);
        const ComplexMatrix u2 = rng::random_unitary(eng, n2);
        const ComplexMatrix v = rng::random_unitary(eng, p);
        const ComplexMatrix lhs = block_swap(star(StarOperands{u1, u2, p, v}), n1 - p);
        const ComplexMatrix rhs =
            star(StarOperands{block_swap(u2, p), block_swap(u1, n1 - p), p, v.adjoint()});
        tau_defect = std::max(tau_defect, (lhs - rhs).norm_max());
    }
    pass = pass && tau_defect <= 1e-8;
    detail << ", transposition law " << fmt(tau_defect) << " <= 1e-8";

    double inv_defect = 0.0;
    for (int it = 0; it < 50; ++it) {
        const std::size_t p = 1 + it % 3;
        const ComplexMatrix u = rng::random_unitary_strong_offdiag(eng, p);
        const ComplexMatrix ui = star_inverse(u);
        const ComplexMatrix e = star_unit(p);
        inv_defect = std::max(inv_defect, (star(ui, u, p) - e).norm_max());
        inv_defect = std::max(inv_defect, (star(u, ui, p) - e).norm_max());
    }
    pass = pass && inv_defect <= 1e-8;
    detail << ", star inverse " << fmt(inv_defect) << " <= 1e-8";

    double group_defect = 0.0;
    for (int it = 0; it < 20; ++it) {
        const std::size_t p = 1 + it % 2;
        const ComplexMatrix u = rng::random_unitary_strong_offdiag(eng, p);
        const ComplexMatrix w = rng::random_unitary_strong_offdiag(eng, p);
        const ComplexMatrix uw = star(u, w, p);
        const ComplexMatrix lhs = star_inverse(uw); // throws if uw leaves the class
        const ComplexMatrix rhs = star(star_inverse(w), star_inverse(u), p);
        group_defect = std::max(group_defect, (lhs - rhs).norm_max());
    }
    pass = pass && group_defect <= 1e-7;
    detail << ", group law " << fmt(group_defect) << " <= 1e-7";

    return {"star algebra suite", pass,
            std::max({unit_defect, assoc_defect, tau_defect, inv_defect, group_defect}), 1e-7,
            timer.seconds(), detail.str()};
}

// ---- 5: transfer matrices -------------------------------------------------

CriterionResult transfer_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 3);
    bool pass = true;
    std::ostringstream detail;
    std::uniform_real_distribution<double> pick_len(0.5, 2.0), pick_lambda(0.3, 8.0);

    double j_defect = 0.0, round_defect = 0.0, blockdet_defect = 0.0;
    for (int it = 0; it < 50; ++it) {
        const std::size_t p = 1 + it % 2;
        const ComplexMatrix s = rng::random_unitary_strong_offdiag(eng, p);
        const TransferMatrix t = transfer_from_smatrix(s);
        j_defect = std::max(j_defect, pseudo_unitarity_defect(t));
        round_defect = std::max(round_defect, (smatrix_from_transfer(t) - s).norm_max());
        const auto [lhs, rhs] = block_det_identity(s);
        blockdet_defect = std::max(blockdet_defect, std::abs(lhs - rhs) / std::abs(rhs));
    }
    for (int it = 0; it < 20; ++it) {
        const std::size_t p = 1 + it % 2;
        TransferMatrix t;
        t.p = p;
        t.lam = rng::random_pseudo_unitary(eng, p);
        t.degenerate = false;
        const ComplexMatrix s = smatrix_from_transfer(t);
        j_defect = std::max(j_defect, unitarity_defect(s)); // S unitary iff Lambda in U(p,p)
        round_defect =
            std::max(round_defect, (transfer_from_smatrix(s).lam - t.lam).norm_max());
    }
    pass = pass && j_defect <= 1e-8 && round_defect <= 1e-8 && blockdet_defect <= 1e-8;
    detail << "pseudo-unitarity " << fmt(j_defect) << " <= 1e-8, round trips "
           << fmt(round_defect) << " <= 1e-8, block det " << fmt(blockdet_defect)
           << " <= 1e-8 rel";

    double compose_defect = 0.0;
    int composed = 0;
    while (composed < 50) {
        const std::size_t p = 1 + composed % 2;
        const ComplexMatrix s1 = rng::random_unitary_strong_offdiag(eng, p);
        const ComplexMatrix s2 = rng::random_unitary_strong_offdiag(eng, p);
        const double lambda = pick_lambda(eng);
        std::vector<double> lengths;
        for (std::size_t i = 0; i < p; ++i) lengths.push_back(pick_len(eng));

        ComplexMatrix v = ComplexMatrix::identity(2 * p);
        for (std::size_t i = 0; i < p; ++i) v(i, i) = phase(std::sqrt(lambda) * lengths[i]);
        const ComplexMatrix composed_s = star(s1, v * s2 * v, p);
        if (svd(composed_s.block(0, p, p, p)).sigma_min() < 0.05) continue; // keep in class
        ++composed;

        const TransferMatrix direct = transfer_from_smatrix(composed_s);
        const TransferMatrix chained = compose_transfer(transfer_from_smatrix(s1),
                                                        transfer_from_smatrix(s2), lengths,
                                                        lambda);
        compose_defect = std::max(compose_defect, (direct.lam - chained.lam).norm_max());
    }
    pass = pass && compose_defect <= 1e-7;
    detail << ", chain rule vs star " << fmt(compose_defect) << " <= 1e-7";

    double det_defect = 0.0;
    std::uniform_real_distribution<double> par(-1.5, 1.5);
    for (int it = 0; it < 20; ++it) {
        PointInteraction pi;
        pi.a = 1.0 + 0.5 * par(eng);
        pi.b = par(eng);
        pi.c = par(eng);
        pi.d = (1.0 + pi.b * pi.c) / pi.a;
        pi.mu = (it % 2) ? M_PI : 0.0; // e^{2 i mu} = 1 keeps the operator real
        const PointTransfer t = point_transfer(pi, pick_lambda(eng));
        det_defect = std::max(det_defect, std::abs(det(t.lam) - cplx{1.0, 0.0}));
    }
    pass = pass && det_defect <= 1e-10;
    detail << ", real point det " << fmt(det_defect) << " <= 1e-10";

    return {"transfer suite", pass,
            std::max({j_defect, round_defect, blockdet_defect, compose_defect, det_defect}),
            1e-7, timer.seconds(), detail.str()};
}

// ---- 6: symmetry ----------------------------------------------------------

CriterionResult symmetry_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 4);
    std::uniform_int_distribution<std::size_t> pick_n(1, 4), pick_m(0, 2);
    bool pass = true;

    double transp = 0.0, self_transp = 0.0, cross = 0.0;
    for (int it = 0; it < 100; ++it) {
        const bool real_case = it % 2 == 0;
        const std::size_t n = pick_n(eng);
        const std::size_t m = std::max<std::size_t>(pick_m(eng), it % 3 == 0 ? 1 : 0);
        const MetricGraph g = real_case ? rng::random_real_graph(eng, n, m)
                                        : rng::random_selfadjoint_graph(eng, n, m);
        const double lambda = (it % 2) ? 0.7 : 3.3;
        const SymmetryReport r = check_transposition_symmetry(g, lambda);
        transp = std::max(transp, r.transposition_defect);
        if (real_case) {
            if (!r.real_operator) pass = false;
            self_transp = std::max(self_transp, r.self_transpose_defect);
        }
        if (m >= 1) cross = std::max(cross, check_alpha_beta_relations(g, lambda));
    }
    pass = pass && transp <= 1e-9 && self_transp <= 1e-9 && cross <= 1e-8;

    std::ostringstream detail;
    detail << "transposition " << fmt(transp) << " <= 1e-9, real self-transpose "
           << fmt(self_transp) << " <= 1e-9, amplitude cross relations " << fmt(cross)
           << " <= 1e-8";
    return {"symmetry suite (100 graphs)", pass, std::max({transp, self_transp, cross}), 1e-8,
            timer.seconds(), detail.str()};
}

// ---- 7: embedded eigenvalues ----------------------------------------------

CriterionResult eigenvalue_suite() {
    Timer timer;
    bool pass = true;
    std::ostringstream detail;
    double worst_gap = 0.0;

    struct Case {
        const char* name;
        MetricGraph part;
        GlueSpec spec;
    };
    const Case cases[] = {
        {"example42", example42_vertex(M_PI), example_glue(M_PI)},
        {"example43", example43_vertex(1.0), example_glue(M_PI)},
    };
    for (const Case& c : cases) {
        const MetricGraph merged = merge_graphs(c.part, c.part, c.spec);
        std::vector<EigenvalueHit> hits = find_embedded_eigenvalues(merged, 0.5, 10.0, 2000);
        annotate_overlap(hits, c.part, c.part, c.spec);
        if (hits.size() != 3) {
            pass = false;
            detail << c.name << ": expected 3 hits, got " << hits.size() << "; ";
            continue;
        }
        const double expected[] = {1.0, 4.0, 9.0};
        for (std::size_t i = 0; i < 3; ++i) {
            worst_gap = std::max(worst_gap, std::abs(hits[i].lambda - expected[i]));
            const MultiplicityReport r =
                multiplicity_accounting(c.part, c.part, c.spec, expected[i]);
            if (!r.identity_holds || r.resonance_dim == 0) pass = false;
            if (hits[i].overlap_dim == 0) pass = false; // eigenfunctions cross the new lines
        }
        detail << c.name << ": hits near {1, 4, 9}; ";
    }
    pass = pass && worst_gap <= 1e-6;

    CriterionResult res{"embedded eigenvalue suite", false, worst_gap, 1e-6, 0.0, ""};
    res.seconds = timer.seconds();
    res.pass = pass && res.seconds < 20.0;
    detail << "accounting identities exact, runtime limit 20 s";
    res.detail = detail.str();
    return res;
}

// ---- 8: contraction fixed points -------------------------------------------

CriterionResult lemma_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 5);
    bool pass = true;

    double fixed_defect = 0.0, factor_defect = 0.0;
    for (int it = 0; it < 100; ++it) {
        const std::size_t n = 2 + it % 5;
        const auto fp = rng::random_contraction_with_fixed_point(eng, n);
        fixed_defect = std::max(fixed_defect, (fp.a.adjoint() * fp.c - fp.c).norm_max());
        fixed_defect =
            std::max(fixed_defect, (fp.a.adjoint() * fp.a * fp.c - fp.c).norm_max());
        fixed_defect =
            std::max(fixed_defect, (fp.a * fp.a.adjoint() * fp.c - fp.c).norm_max());
        const auto pair = rng::random_contraction_factor_pair(eng, n);
        factor_defect =
            std::max(factor_defect,
                     (pair.b_mat.adjoint() * pair.b_mat * pair.b - pair.b).norm_max());
    }
    pass = pass && fixed_defect <= 1e-9 && factor_defect <= 1e-9;

    // annihilation relations on the resonant example operands
    double annihilation = 0.0;
    double restricted_sigma = 1.0;
    struct Operands {
        ComplexMatrix u1, u2;
    };
    std::vector<Operands> resonant;
    for (double lambda : {1.0, 4.0}) {
        const ComplexMatrix s = example42_smatrix(M_PI, lambda);
        resonant.push_back({s, conjugate_by_glue_phases(s, 2, M_PI, lambda)});
    }
    {
        const ComplexMatrix s = example43_smatrix(1.3, 4.0);
        resonant.push_back({s, conjugate_by_glue_phases(s, 2, M_PI, 4.0)});
    }
    for (const Operands& op : resonant) {
        const CompatibilityReport rep = analyze_compatibility({op.u1, op.u2, 2, {}});
        if (rep.compatible) {
            pass = false;
            continue;
        }
        const std::size_t n1 = op.u1.rows(), n2 = op.u2.rows();
        const ComplexMatrix u1_12 = op.u1.block(0, n1 - 2, n1 - 2, 2);
        const ComplexMatrix u1_21 = op.u1.block(n1 - 2, 0, 2, n1 - 2);
        const ComplexMatrix u2_21 = op.u2.block(2, 0, n2 - 2, 2);
        const ComplexMatrix u2_12 = op.u2.block(0, 2, 2, n2 - 2);
        annihilation = std::max(annihilation, (u2_21 * rep.c_basis).norm_max());
        annihilation = std::max(annihilation, (u1_12 * rep.b_basis).norm_max());
        annihilation =
            std::max(annihilation, (u1_21.adjoint() * rep.c_tilde_basis).norm_max());
        annihilation =
            std::max(annihilation, (u2_12.adjoint() * rep.b_tilde_basis).norm_max());

        // bijectivity on the kernel complement
        const ComplexMatrix t = ComplexMatrix::identity(2) -
                                op.u1.block(n1 - 2, n1 - 2, 2, 2) * op.u2.block(0, 0, 2, 2);
        const ComplexMatrix q = orthonormal_complement(rep.c_basis, 2);
        restricted_sigma = std::min(restricted_sigma, svd(q.adjoint() * t * q).sigma_min());
    }
    pass = pass && annihilation <= 1e-8 && restricted_sigma > 1e-6;

    std::ostringstream detail;
    detail << "fixed point " << fmt(fixed_defect) << " <= 1e-9, factor " << fmt(factor_defect)
           << " <= 1e-9, annihilation " << fmt(annihilation) << " <= 1e-8, restricted sigma_min "
           << fmt(restricted_sigma) << " > 1e-6";
    return {"contraction fixed-point suite", pass,
            std::max({fixed_defect, factor_defect, annihilation}), 1e-8, timer.seconds(),
            detail.str()};
}

// ---- 9: tadpole splitting ---------------------------------------------------

CriterionResult tadpole_suite(std::uint64_t seed) {
    Timer timer;
    rng::Engine eng(seed + 6);
    double worst = 0.0;
    int with_channels = 0;
    while (with_channels < 20) {
        const MetricGraph g = rng::random_loop_graph(eng);
        if (g.n_external == 0) continue;
        ++with_channels;
        const MetricGraph once = split_tadpole(g, 0); // edge 0 is always a loop
        const MetricGraph twice = split_tadpole(once, 0);
        for (double lambda : {0.4, 0.9, 1.7, 3.1, 6.3}) {
            const ComplexMatrix s = scattering_matrix(g, lambda).s;
            worst = std::max(worst, (scattering_matrix(once, lambda).s - s).norm_max());
            worst = std::max(worst, (scattering_matrix(twice, lambda).s - s).norm_max());
        }
    }
    return {"tadpole splitting invariance (20 loop graphs x 5 energies)", worst <= 1e-9, worst,
            1e-9, timer.seconds(), "split once and twice"};
}

std::vector<CriterionResult> run_suite(const std::string& which, std::uint64_t seed) {
    std::vector<CriterionResult> out;
    const bool all = which == "all";
    if (all) {
        out.push_back(unitarity_suite(seed));
        out.push_back(symmetry_suite(seed));
    }
    if (all || which == "compose") {
        out.push_back(composition_suite(seed));
        out.push_back(example_regression_suite());
        out.push_back(eigenvalue_suite());
        out.push_back(tadpole_suite(seed));
    }
    if (all || which == "star") {
        out.push_back(star_algebra_suite(seed));
        out.push_back(lemma_suite(seed));
    }
    if (all || which == "transfer") {
        out.push_back(transfer_suite(seed));
    }
    if (out.empty())
        throw Error("unknown suite: " + which + " (star, compose, transfer, all)");
    return out;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": max defect " << fmt(r.max_defect)
       << " (bound " << fmt(r.bound) << ")";
    char buf[32];
    std::snprintf(buf, sizeof buf, " [%.2f s]", r.seconds);
    os << buf;
    if (!r.detail.empty()) os << " - " << r.detail;
    return os.str();
}

} // namespace qgs::verify
