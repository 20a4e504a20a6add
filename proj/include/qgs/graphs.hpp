#pragma once

#include <cstddef>
#include <vector>

#include "qgs/cmatrix.hpp"
#include "qgs/tolerance.hpp"

namespace qgs {

/// Metric graph with n half-infinite external lines, m internal lines of
/// finite length, and one global boundary-condition pair (A, B) acting on
/// the boundary vector.
///
/// Boundary ordering (columns of A and B): external values psi_e(0) first,
/// then internal left values psi_i(0), then internal right values psi_i(a_i).
/// The derivative vector uses the same ordering with the outward sign
/// convention psi'_e(0), psi'_i(0), -psi'_i(a_i) - i.e. every stored
/// derivative points from the vertex into its edge.
struct MetricGraph {
    std::size_t n_external = 0;
    std::vector<double> internal_lengths;
    ComplexMatrix bc_a;
    ComplexMatrix bc_b;

    std::size_t m_internal() const { return internal_lengths.size(); }
    std::size_t boundary_dim() const { return n_external + 2 * internal_lengths.size(); }

    // column index of a boundary slot
    std::size_t external_slot(std::size_t e) const { return e; }
    std::size_t start_slot(std::size_t i) const { return n_external + i; }
    std::size_t end_slot(std::size_t i) const { return n_external + m_internal() + i; }
};

/// Two-channel point coupling psi_2(0) = e^{i mu}(a psi_1(0) - b psi_1'(0)),
/// psi_2'(0) = e^{i mu}(c psi_1(0) - d psi_1'(0)) with ad - bc = 1.
struct PointInteraction {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double d = 1.0;
    double mu = 0.0;
};

struct ValidationReport {
    double hermiticity_defect = 0.0;
    std::size_t rank = 0;
    std::size_t required_rank = 0;
    bool hermitian_ok = false;
    bool rank_ok = false;
    bool dims_ok = false;

    bool pass() const { return dims_ok && hermitian_ok && rank_ok; }
};

/// Self-adjointness test: A B^* Hermitian and the juxtaposition (A, B) of
/// maximal rank. Throws DimensionMismatch on malformed sizes.
ValidationReport validate_self_adjoint(const MetricGraph& g, const Tolerance& tol = {});

/// Throws NotSelfAdjoint unless validate_self_adjoint passes.
void require_self_adjoint(const MetricGraph& g, const Tolerance& tol = {});

/// True iff Ker(A, B) = Ker(conj A, conj B), i.e. the operator commutes
/// with complex conjugation. Compared via mutual projection residuals.
bool is_real_operator(const MetricGraph& g, const Tolerance& tol = {});

MetricGraph point_interaction_graph(const PointInteraction& p);

/// Single vertex, n external lines, continuity of values plus vanishing sum
/// of outward derivatives.
MetricGraph kirchhoff_star_graph(std::size_t n);

/// Delta coupling of strength c on the line: point_interaction_graph with
/// (a, b, c, d, mu) = (1, 0, c, 1, 0).
MetricGraph delta_graph(double c);

/// Dirichlet decoupling of two half lines (A = I, B = 0); has a scattering
/// matrix but no transfer-matrix representation.
MetricGraph dirichlet_pair_graph();

/// Two three-way Kirchhoff vertices joined by one internal edge of length a;
/// four external lines ordered so that the two left lines come first.
MetricGraph example42_vertex(double a);

/// Same graph with the external lines reordered per vertex (both lines of
/// the first vertex first); its right off-diagonal S block is singular at
/// every energy.
MetricGraph example43_vertex(double a);

// ---- structured construction -------------------------------------------

struct Slot {
    enum Kind { External, InternalStart, InternalEnd };
    Kind kind;
    std::size_t index;
};

/// Vertex with value continuity across its slots and sum of outward
/// derivatives equal to delta * (common value).
struct Vertex {
    std::vector<Slot> slots;
    double delta = 0.0;
};

/// Assembles the global (A, B) pair from vertex-local delta couplings. Every
/// boundary slot must appear in exactly one vertex.
MetricGraph build_vertex_graph(std::size_t n_external, std::vector<double> lengths,
                               const std::vector<Vertex>& vertices);

/// One vertex with n external lines and a single loop edge of the given
/// length attached twice, delta coupling at the vertex.
MetricGraph tadpole_graph(std::size_t n_external, double length, double delta = 0.0);

/// (A, B) -> (conj A, conj B); same operator iff the original is real.
MetricGraph conjugate_graph(const MetricGraph& g);

/// Gauge transform (A, B) -> (C A, C B); represents the same operator for
/// any invertible C.
MetricGraph gauge_transform(const MetricGraph& g, const ComplexMatrix& c);

} // namespace qgs
