#include "qgs/sweep.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qgs::sweep {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + step * static_cast<double>(i);
    return v;
}

namespace {

// Runs fn over every index. The OpenMP path must not let exceptions cross
// the parallel region; the first one is stashed and rethrown afterwards.
template <typename Fn>
void run_grid(std::size_t count, ExecMode mode, Fn&& fn) {
#ifdef _OPENMP
    if (mode == ExecMode::Parallel) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

} // namespace

std::vector<ScatteringResult> scattering_sweep(const MetricGraph& g,
                                               const std::vector<double>& lambdas,
                                               const Tolerance& tol, ExecMode mode) {
    require_self_adjoint(g, tol); // validate once, not per grid point
    std::vector<ScatteringResult> out(lambdas.size());
    run_grid(lambdas.size(), mode, [&](std::size_t i) {
        out[i] = detail::scattering_matrix_prevalidated(g, lambdas[i], tol);
    });
    return out;
}

std::vector<double> sigma_min_scan(const MetricGraph& g, const std::vector<double>& lambdas,
                                   ExecMode mode) {
    std::vector<double> out(lambdas.size());
    run_grid(lambdas.size(), mode, [&](std::size_t i) { out[i] = sigma_min_z(g, lambdas[i]); });
    return out;
}

} // namespace qgs::sweep
