#include "qgs/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qgs::io {

namespace {

using nlohmann::json;

ComplexMatrix parse_matrix(const json& arr, std::size_t dim, const char* name) {
    if (!arr.is_array() || arr.size() != dim * dim)
        throw ParseError(std::string(name) + " must hold (n+2m)^2 [re, im] pairs");
    std::vector<cplx> entries;
    entries.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw ParseError(std::string(name) + " entries must be [re, im] pairs");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return {dim, dim, std::move(entries)};
}

json matrix_to_json(const ComplexMatrix& m) {
    json arr = json::array();
    for (const cplx& z : m.entries()) arr.push_back({z.real(), z.imag()});
    return arr;
}

// RFC-4180 style: quote when the field contains a comma, quote or newline
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

} // namespace

MetricGraph parse_graph(const std::string& text, const Tolerance& tol) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("external") || !j.contains("internal") ||
        !j.contains("A") || !j.contains("B"))
        throw ParseError("graph file needs fields external, internal, A, B");
    if (!j["external"].is_number_unsigned())
        throw ParseError("external must be a non-negative integer");

    MetricGraph g;
    g.n_external = j["external"].get<std::size_t>();
    if (!j["internal"].is_array()) throw ParseError("internal must be an array of lengths");
    for (const auto& a : j["internal"]) {
        if (!a.is_number() || !(a.get<double>() > 0.0))
            throw ParseError("internal lengths must be positive numbers");
        g.internal_lengths.push_back(a.get<double>());
    }
    const std::size_t dim = g.boundary_dim();
    g.bc_a = parse_matrix(j["A"], dim, "A");
    g.bc_b = parse_matrix(j["B"], dim, "B");

    const ValidationReport r = validate_self_adjoint(g, tol);
    if (!r.pass()) {
        std::ostringstream msg;
        msg << "graph rejected: hermiticity defect " << r.hermiticity_defect << ", rank "
            << r.rank << " of " << r.required_rank;
        throw NotSelfAdjoint(msg.str());
    }
    return g;
}

std::string graph_to_json(const MetricGraph& g) {
    json j;
    j["external"] = g.n_external;
    j["internal"] = g.internal_lengths;
    j["A"] = matrix_to_json(g.bc_a);
    j["B"] = matrix_to_json(g.bc_b);
    return j.dump(2) + "\n";
}

MetricGraph load_graph(const std::string& path, const Tolerance& tol) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), tol);
}

void save_graph(const MetricGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << graph_to_json(g);
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sweep_to_csv(const std::vector<ScatteringResult>& rows) {
    std::ostringstream out;
    const std::size_t n = rows.empty() ? 0 : rows.front().s.rows();
    out << "lambda";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out << "," << "s_" << i << "_" << j << "_re," << "s_" << i << "_" << j << "_im";
    out << ",exceptional,kernel_dim\n";
    for (const ScatteringResult& r : rows) {
        out << csv_field(format_double(r.lambda));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                out << "," << csv_field(format_double(r.s(i, j).real())) << ","
                    << csv_field(format_double(r.s(i, j).imag()));
            }
        out << "," << (r.exceptional ? 1 : 0) << "," << r.kernel_dim << "\n";
    }
    return out.str();
}

} // namespace qgs::io
