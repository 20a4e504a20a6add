#pragma once

#include <string>
#include <vector>

#include "qgs/graphs.hpp"
#include "qgs/scatter.hpp"

namespace qgs::io {

/// Graph file format: JSON object with fields
///   external: integer n
///   internal: array of positive lengths
///   A, B:     row-major arrays of [re, im] pairs, (n+2m)^2 entries each
/// Parsing validates self-adjointness and throws ParseError / NotSelfAdjoint.
MetricGraph parse_graph(const std::string& text, const Tolerance& tol = {});
std::string graph_to_json(const MetricGraph& g);

MetricGraph load_graph(const std::string& path, const Tolerance& tol = {});
void save_graph(const MetricGraph& g, const std::string& path);

/// Fixed %.17g formatting so identical runs emit identical bytes.
std::string format_double(double v);

/// CSV sweep output: header row, then one row per grid point with lambda,
/// the S entries as re/im pairs in row-major order, and the exceptional
/// flag and kernel dimension.
std::string sweep_to_csv(const std::vector<ScatteringResult>& rows);

} // namespace qgs::io
