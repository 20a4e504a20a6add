#pragma once

#include <vector>

#include "qgs/exec.hpp"
#include "qgs/graphs.hpp"
#include "qgs/scatter.hpp"
#include "qgs/tolerance.hpp"

namespace qgs::sweep {

std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Scattering matrices over a lambda grid. Grid points are independent, so
/// the parallel path distributes them across OpenMP threads; output order is
/// the grid order either way and the two modes produce identical bits.
std::vector<ScatteringResult> scattering_sweep(const MetricGraph& g,
                                               const std::vector<double>& lambdas,
                                               const Tolerance& tol = {},
                                               ExecMode mode = ExecMode::Parallel);

/// sigma_min(Z(lambda)) over a lambda grid; the eigenvalue scan kernel.
std::vector<double> sigma_min_scan(const MetricGraph& g, const std::vector<double>& lambdas,
                                   ExecMode mode = ExecMode::Parallel);

} // namespace qgs::sweep
