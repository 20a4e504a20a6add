// Command-line front end: graph files in, scattering sweeps, composition
// pipelines, transfer matrices and the verification suites out.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgs/glue.hpp"
#include "qgs/io.hpp"
#include "qgs/starprod.hpp"
#include "qgs/sweep.hpp"
#include "qgs/transfer.hpp"
#include "qgs/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitSelfAdjoint = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitPorts = 5;

struct BuiltinFlags {
    std::optional<double> a, b, c1, c2;
};

std::vector<double> split_params(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw qgs::ParseError("bad number: " + item);
        } catch (const std::exception&) {
            throw qgs::ParseError("bad number in builtin parameters: " + item);
        }
    }
    return out;
}

qgs::MetricGraph example41_graph(double c1, double c2, double a) {
    using qgs::Slot;
    return qgs::build_vertex_graph(
        2, {a},
        {qgs::Vertex{{{Slot::External, 0}, {Slot::InternalStart, 0}}, c1},
         qgs::Vertex{{{Slot::InternalEnd, 0}, {Slot::External, 1}}, c2}});
}

qgs::MetricGraph example4x_graph(bool variant43, double a, std::optional<double> b) {
    const qgs::MetricGraph vertex =
        variant43 ? qgs::example43_vertex(a) : qgs::example42_vertex(a);
    if (!b) return vertex;
    const qgs::GlueSpec spec{{2, 3}, {0, 1}, {*b, *b}};
    return qgs::merge_graphs(vertex, vertex, spec);
}

// name[:p1,p2,...] with flag fallbacks for the example graphs
qgs::MetricGraph resolve_builtin(const std::string& spec, const BuiltinFlags& flags) {
    std::string name = spec;
    std::vector<double> params;
    if (const auto colon = spec.find(':'); colon != std::string::npos) {
        name = spec.substr(0, colon);
        params = split_params(spec.substr(colon + 1));
    }
    auto param = [&](std::size_t i, const std::optional<double>& fallback,
                     const char* what) -> double {
        if (i < params.size()) return params[i];
        if (fallback) return *fallback;
        throw qgs::ParseError(std::string("builtin ") + name + " needs " + what);
    };
    if (name == "delta") return qgs::delta_graph(param(0, flags.c1, "c"));
    if (name == "pointint") {
        if (params.size() != 5) throw qgs::ParseError("pointint:a,b,c,d,mu");
        return qgs::point_interaction_graph({params[0], params[1], params[2], params[3],
                                             params[4]});
    }
    if (name == "kirchhoff") {
        const double n = param(0, std::nullopt, "n");
        if (n < 1 || n != std::floor(n)) throw qgs::ParseError("kirchhoff:n needs integer n >= 1");
        return qgs::kirchhoff_star_graph(static_cast<std::size_t>(n));
    }
    if (name == "example41")
        return example41_graph(param(0, flags.c1, "--c1"), param(1, flags.c2, "--c2"),
                               param(2, flags.a, "--a"));
    if (name == "example42" || name == "example43") {
        const double a = param(0, flags.a, "--a");
        std::optional<double> b = flags.b;
        if (params.size() > 1) b = params[1];
        return example4x_graph(name == "example43", a, b);
    }
    throw qgs::ParseError("unknown builtin graph: " + name);
}

qgs::MetricGraph load_input(const std::string& arg, const BuiltinFlags& flags,
                            const std::string& builtin, const qgs::Tolerance& tol) {
    if (!builtin.empty()) return resolve_builtin(builtin, flags);
    if (arg.empty()) throw qgs::ParseError("no graph given (file path or --builtin)");
    if (std::filesystem::exists(arg)) return qgs::io::load_graph(arg, tol);
    // allow inline builtin specs as positional arguments
    return resolve_builtin(arg, flags);
}

void print_matrix(std::ostream& os, const qgs::ComplexMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << "  ";
            os << qgs::io::format_double(m(i, j).real()) << (m(i, j).imag() < 0 ? "-" : "+")
               << qgs::io::format_double(std::abs(m(i, j).imag())) << "i";
        }
        os << "\n";
    }
}

void parse_ports(const std::string& s, qgs::GlueSpec& spec) {
    std::stringstream ss(s);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw qgs::PortCollision("ports must be L:R pairs");
        try {
            spec.left_ports.push_back(std::stoul(pair.substr(0, colon)));
            spec.right_ports.push_back(std::stoul(pair.substr(colon + 1)));
        } catch (const std::exception&) {
            throw qgs::PortCollision("bad port pair: " + pair);
        }
    }
}

void write_output(const std::string& out, const std::string& text) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw qgs::Error("cannot write " + out);
    f << text;
}

int run(int argc, char** argv) {
    const qgs::Tolerance tol = qgs::Tolerance::from_env();

    CLI::App app{"scattering matrices on metric graphs, star-product composition "
                 "and transfer matrices"};
    app.require_subcommand(1);

    BuiltinFlags flags;
    std::string builtin;

    // ---- smatrix ----
    auto* sm = app.add_subcommand("smatrix", "sweep S(lambda) over an energy grid");
    std::string sm_graph, sm_out;
    double sm_lo = 1.0, sm_hi = 1.0;
    std::size_t sm_grid = 1;
    bool sm_serial = false;
    sm->add_option("graph", sm_graph, "graph file or builtin spec");
    sm->add_option("--builtin", builtin, "builtin graph name");
    sm->add_option("--a", flags.a, "builtin length a");
    sm->add_option("--b", flags.b, "builtin length b");
    sm->add_option("--c1", flags.c1, "builtin coupling c1");
    sm->add_option("--c2", flags.c2, "builtin coupling c2");
    sm->add_option("--lambda-min", sm_lo, "first energy")->required();
    sm->add_option("--lambda-max", sm_hi, "last energy");
    sm->add_option("--grid", sm_grid, "number of grid points")->required();
    sm->add_option("--out", sm_out, "write CSV here instead of stdout");
    sm->add_flag("--serial", sm_serial, "use the serial reference sweep");

    // ---- compose ----
    auto* co = app.add_subcommand("compose", "star-compose two graphs across glued ports");
    std::string co_g1, co_g2, co_ports, co_lengths;
    double co_lambda = 1.0;
    bool co_verify = false;
    co->add_option("graph1", co_g1, "first graph (file or builtin spec)")->required();
    co->add_option("graph2", co_g2, "second graph (file or builtin spec)")->required();
    co->add_option("--ports", co_ports, "comma list of L:R port pairs")->required();
    co->add_option("--lengths", co_lengths, "comma list of new line lengths")->required();
    co->add_option("--lambda", co_lambda, "energy")->required();
    co->add_flag("--verify", co_verify, "also print the direct-solve oracle defect");

    // ---- eigs ----
    auto* ei = app.add_subcommand("eigs", "scan for embedded eigenvalues");
    std::string ei_graph;
    double ei_lo = 0.5, ei_hi = 10.0;
    std::size_t ei_grid = 1000;
    bool ei_serial = false;
    ei->add_option("graph", ei_graph, "graph file or builtin spec");
    ei->add_option("--builtin", builtin, "builtin graph name");
    ei->add_option("--a", flags.a, "builtin length a");
    ei->add_option("--b", flags.b, "builtin length b");
    ei->add_option("--c1", flags.c1, "builtin coupling c1");
    ei->add_option("--c2", flags.c2, "builtin coupling c2");
    ei->add_option("--lambda-min", ei_lo, "scan start")->required();
    ei->add_option("--lambda-max", ei_hi, "scan end")->required();
    ei->add_option("--grid", ei_grid, "scan grid points");
    ei->add_flag("--serial", ei_serial, "use the serial reference scan");

    // ---- transfer ----
    auto* tr = app.add_subcommand("transfer", "transfer matrix at one energy");
    std::string tr_graph;
    double tr_lambda = 1.0;
    tr->add_option("graph", tr_graph, "graph file or builtin spec");
    tr->add_option("--builtin", builtin, "builtin graph name");
    tr->add_option("--a", flags.a, "builtin length a");
    tr->add_option("--b", flags.b, "builtin length b");
    tr->add_option("--c1", flags.c1, "builtin coupling c1");
    tr->add_option("--c2", flags.c2, "builtin coupling c2");
    tr->add_option("--lambda", tr_lambda, "energy")->required();

    // ---- verify ----
    auto* ve = app.add_subcommand("verify", "run the verification suites");
    std::string ve_suite = "all";
    std::uint64_t ve_seed = 20240915;
    ve->add_option("--suite", ve_suite, "star | compose | transfer | all");
    ve->add_option("--seed", ve_seed, "random seed");

    // ---- graph ----
    auto* gr = app.add_subcommand("graph", "emit a builtin graph as a file");
    std::string gr_out;
    gr->add_option("--builtin", builtin, "builtin graph name")->required();
    gr->add_option("--a", flags.a, "builtin length a");
    gr->add_option("--b", flags.b, "builtin length b");
    gr->add_option("--c1", flags.c1, "builtin coupling c1");
    gr->add_option("--c2", flags.c2, "builtin coupling c2");
    gr->add_option("--out", gr_out, "output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitParse;
    }

    if (sm->parsed()) {
        if (!sm->count("--lambda-max")) sm_hi = sm_lo;
        if (!(sm_lo > 0.0) || sm_hi < sm_lo || sm_grid < 1 ||
            (sm_grid > 1 && !(sm_hi > sm_lo)))
            throw qgs::ParseError("need 0 < lambda-min <= lambda-max and grid >= 1");
        const qgs::MetricGraph g = load_input(sm_graph, flags, builtin, tol);
        const auto lambdas = qgs::sweep::linspace(sm_lo, sm_hi, sm_grid);
        const auto rows = qgs::sweep::scattering_sweep(
            g, lambdas, tol, sm_serial ? qgs::ExecMode::Serial : qgs::ExecMode::Parallel);
        for (const auto& r : rows)
            if (qgs::unitarity_defect(r.s) > 1e-6)
                throw qgs::ConvergenceFailure("scattering matrix lost unitarity");
        write_output(sm_out, qgs::io::sweep_to_csv(rows));
        return kExitOk;
    }

    if (co->parsed()) {
        qgs::GlueSpec spec;
        parse_ports(co_ports, spec);
        spec.lengths = split_params(co_lengths);
        const qgs::MetricGraph g1 = load_input(co_g1, flags, "", tol);
        const qgs::MetricGraph g2 = load_input(co_g2, flags, "", tol);
        const qgs::CompositionResult res = qgs::compose_graphs(g1, g2, spec, co_lambda, tol);
        std::cout << "composed S(" << qgs::io::format_double(co_lambda) << "), "
                  << res.s_composed.rows() << " channels\n";
        print_matrix(std::cout, res.s_composed);
        std::cout << "compatible: " << (res.compatible ? "yes" : "no")
                  << "  resonance_dim: " << res.resonance_dim << "\n";
        if (co_verify) {
            const double defect = qgs::verify_composition(g1, g2, spec, co_lambda, tol);
            std::cout << "oracle defect: " << qgs::io::format_double(defect) << "\n";
        }
        return kExitOk;
    }

    if (ei->parsed()) {
        const qgs::MetricGraph g = load_input(ei_graph, flags, builtin, tol);
        const auto hits = qgs::find_embedded_eigenvalues(
            g, ei_lo, ei_hi, ei_grid, tol,
            ei_serial ? qgs::ExecMode::Serial : qgs::ExecMode::Parallel);
        std::cout << "lambda,multiplicity\n";
        for (const auto& h : hits)
            std::cout << qgs::io::format_double(h.lambda) << "," << h.multiplicity << "\n";
        return kExitOk;
    }

    if (tr->parsed()) {
        const qgs::MetricGraph g = load_input(tr_graph, flags, builtin, tol);
        const qgs::ScatteringResult s = qgs::scattering_matrix(g, tr_lambda, tol);
        const qgs::TransferMatrix t = qgs::transfer_from_smatrix(s.s, tol.rank_rel);
        std::cout << "Lambda(" << qgs::io::format_double(tr_lambda) << "), p = " << t.p
                  << (t.degenerate ? " (degenerate)" : "") << "\n";
        print_matrix(std::cout, t.lam);
        if (t.degenerate)
            std::cout << "det: " << qgs::io::format_double(std::abs(qgs::det(t.lam))) << "\n";
        else
            std::cout << "J-defect: " << qgs::io::format_double(qgs::pseudo_unitarity_defect(t))
                      << "\n";
        return kExitOk;
    }

    if (ve->parsed()) {
        const auto results = qgs::verify::run_suite(ve_suite, ve_seed);
        bool all_pass = true;
        for (const auto& r : results) {
            std::cout << qgs::verify::format_result(r) << "\n";
            all_pass = all_pass && r.pass;
        }
        return all_pass ? kExitOk : kExitNumeric;
    }

    if (gr->parsed()) {
        const qgs::MetricGraph g = resolve_builtin(builtin, flags);
        write_output(gr_out, qgs::io::graph_to_json(g));
        return kExitOk;
    }

    return kExitParse;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qgs::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const qgs::NotSelfAdjoint& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSelfAdjoint;
    } catch (const qgs::PortCollision& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPorts;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
}
