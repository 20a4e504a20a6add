#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qgs/cmatrix.hpp"
#include "qgs/graphs.hpp"
#include "qgs/scatter.hpp"
#include "qgs/tolerance.hpp"

namespace qgs {

/// Gluing plan: connect left_ports[k] of the first graph to right_ports[k]
/// of the second by a new internal line of length lengths[k]. left_ports
/// must be strictly increasing; right_ports is order-matched to it.
struct GlueSpec {
    std::vector<std::size_t> left_ports;
    std::vector<std::size_t> right_ports;
    std::vector<double> lengths;

    std::size_t p() const { return left_ports.size(); }
};

struct CompositionResult {
    ComplexMatrix s_composed;
    bool compatible = true;
    std::size_t resonance_dim = 0;
    std::optional<MetricGraph> merged; // filled by the graph-level path
};

/// Star-product composition of two scattering matrices across the glued
/// ports. Channel order of the result: the first graph's kept channels in
/// their original order, then the second's.
CompositionResult compose_smatrices(const ComplexMatrix& s1, const ComplexMatrix& s2,
                                    const GlueSpec& spec, double lambda,
                                    const Tolerance& tol = {});

/// Builds the glued graph: n1 + n2 - 2p external lines, the new internal
/// lines appended after those of the two parts, boundary pair assembled as
/// the permuted block-diagonal sum. Each new line runs from its first-graph
/// vertex (x = 0) to its second-graph vertex (x = a_k).
MetricGraph merge_graphs(const MetricGraph& g1, const MetricGraph& g2, const GlueSpec& spec);

/// compose_smatrices on the two part scattering matrices, with the merged
/// graph attached to the result.
CompositionResult compose_graphs(const MetricGraph& g1, const MetricGraph& g2,
                                 const GlueSpec& spec, double lambda,
                                 const Tolerance& tol = {});

/// Max-norm defect between the star composition and the direct solve on the
/// merged graph; the factorization oracle.
double verify_composition(const MetricGraph& g1, const MetricGraph& g2, const GlueSpec& spec,
                          double lambda, const Tolerance& tol = {});

struct MultiplicityReport {
    double lambda = 0.0;
    std::size_t merged_multiplicity = 0;
    std::size_t part1_multiplicity = 0;
    std::size_t part2_multiplicity = 0;
    std::size_t resonance_dim = 0;
    std::size_t overlap_dim = 0; // merged minus both parts
    bool identity_holds = false;
};

/// Eigenvalue bookkeeping at one energy: merged kernel dimension versus the
/// parts plus the resonance kernel of the contracted product.
MultiplicityReport multiplicity_accounting(const MetricGraph& g1, const MetricGraph& g2,
                                           const GlueSpec& spec, double lambda,
                                           const Tolerance& tol = {});

/// Fills each hit's overlap_dim with merged-minus-parts kernel dimensions.
void annotate_overlap(std::vector<EigenvalueHit>& hits, const MetricGraph& g1,
                      const MetricGraph& g2, const GlueSpec& spec, const Tolerance& tol = {});

/// Replaces internal edge `edge` (length a) by two edges of length a / 2
/// joined by continuity of value and derivative; leaves the operator, and
/// hence S(lambda), unchanged. The second half is appended as the last edge.
MetricGraph split_tadpole(const MetricGraph& g, std::size_t edge);

/// Connects two external lines of the same graph with a new internal edge
/// (port_a end at x = 0). Produces a loop when both ports sit at one vertex.
MetricGraph self_glue(const MetricGraph& g, std::size_t port_a, std::size_t port_b,
                      double length);

} // namespace qgs
