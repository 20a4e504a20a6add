#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qgs/io.hpp"

namespace {

std::string cli_path() {
    const char* p = std::getenv("QGS_CLI");
    REQUIRE_MESSAGE(p != nullptr, "QGS_CLI must point at the built binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = "cli_test_output.tmp";
    const std::string cmd = cli_path() + " " + args + " > " + out_file + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_file.c_str());
#ifdef WEXITSTATUS
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#else
    const int code = status;
#endif
    return {code, ss.str()};
}

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("smatrix sweep of the free point coupling") {
    const auto r = run_cli("smatrix pointint:1,0,0,1,0 --lambda-min 0.5 --lambda-max 2.5 "
                           "--grid 3");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.output) == 4); // header + 3 rows
    CHECK(r.output.find("lambda,s_0_0_re") == 0);
    CHECK(r.output.find(",1,") != std::string::npos);  // unit transmission entries
    CHECK(r.output.find(",0,0\n") != std::string::npos); // regular point flags
}

TEST_CASE("single-point grid uses lambda-min") {
    const auto r = run_cli("smatrix delta:1.5 --lambda-min 1 --grid 1");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.output) == 2);
}

TEST_CASE("builtin example sweep matches the closed form") {
    const auto r = run_cli("smatrix --builtin example42 --a 3.14159265 --lambda-min 1 "
                           "--lambda-max 2 --grid 2");
    CHECK(r.exit_code == 0);
    REQUIRE(count_lines(r.output) == 3);

    // the first data row at lambda = 1, a ~ pi: e^{ika} = -1, so the leading
    // entry is (e + 3 conj(e)) / (e - 9 conj(e)) = (-4)/8 = -1/2
    std::stringstream ss(r.output);
    std::string line;
    std::getline(ss, line);
    std::getline(ss, line);
    std::vector<double> fields;
    std::stringstream parse(line);
    std::string item;
    while (std::getline(parse, item, ',') && fields.size() < 4)
        fields.push_back(std::stod(item));
    REQUIRE(fields.size() == 4);
    CHECK(fields[0] == 1.0);
    CHECK(std::abs(fields[1] + 0.5) < 1e-7); // re S_00 (a is pi to 8 digits)
    CHECK(std::abs(fields[2]) < 1e-7);       // im S_00
}

TEST_CASE("identical invocations emit identical bytes") {
    const std::string args = "smatrix --builtin example42 --a 1.3 --lambda-min 0.4 "
                             "--lambda-max 7.9 --grid 24";
    const auto r1 = run_cli(args);
    const auto r2 = run_cli(args + " --serial");
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(r1.output == r2.output);
}

TEST_CASE("graph files written by the tool parse back") {
    const auto emit = run_cli("graph --builtin example41 --c1 1.2 --c2 -0.4 --a 1.1 "
                              "--out cli_graph.tmp");
    REQUIRE(emit.exit_code == 0);
    const qgs::MetricGraph g = qgs::io::load_graph("cli_graph.tmp");
    CHECK(g.n_external == 2);
    CHECK(g.m_internal() == 1);
    const auto sweep = run_cli("smatrix cli_graph.tmp --lambda-min 1 --grid 1");
    CHECK(sweep.exit_code == 0);
    std::remove("cli_graph.tmp");
}

TEST_CASE("compose pipeline with verification") {
    const auto r = run_cli("compose delta:1.4 delta:-0.8 --ports 1:0 --lengths 1.1 "
                           "--lambda 2.7 --verify");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("oracle defect") != std::string::npos);
    CHECK(r.output.find("compatible: yes") != std::string::npos);

    const auto res = run_cli("compose --builtin-none example42:3.14159265358979 "
                             "example42:3.14159265358979 --ports 2:0,3:1 "
                             "--lengths 3.14159265358979,3.14159265358979 --lambda 4 --verify");
    // unknown flag -> parse error
    CHECK(res.exit_code == 2);

    const auto res2 = run_cli("compose example42:3.14159265358979 example42:3.14159265358979 "
                              "--ports 2:0,3:1 --lengths 3.14159265358979,3.14159265358979 "
                              "--lambda 4 --verify");
    CHECK(res2.exit_code == 0);
    CHECK(res2.output.find("compatible: no") != std::string::npos);
    CHECK(res2.output.find("resonance_dim: 1") != std::string::npos);
}

TEST_CASE("exit codes") {
    // parse failure
    CHECK(run_cli("smatrix no_such_file.json --lambda-min 1 --grid 1").exit_code == 2);
    // self-adjointness failure
    {
        std::ofstream f("bad_graph.tmp");
        f << R"({"external": 1, "internal": [], "A": [[1, 0]], "B": [[0, 1]]})";
    }
    CHECK(run_cli("smatrix bad_graph.tmp --lambda-min 1 --grid 1").exit_code == 3);
    std::remove("bad_graph.tmp");
    // port list mismatch
    CHECK(run_cli("compose delta:1 delta:1 --ports 1:0,0:1 --lengths 1.0 --lambda 1")
              .exit_code == 5);
    // bad lambda range
    CHECK(run_cli("smatrix delta:1 --lambda-min -1 --grid 1").exit_code == 2);
}

TEST_CASE("eigs finds the embedded spectrum of the merged example") {
    const auto r = run_cli("eigs --builtin example42 --a 3.141592653589793 "
                           "--b 3.141592653589793 --lambda-min 0.5 --lambda-max 10 "
                           "--grid 1200");
    CHECK(r.exit_code == 0);
    REQUIRE(count_lines(r.output) == 4); // header + three hits
    CHECK(r.output.find("lambda,multiplicity") == 0);
    std::stringstream ss(r.output);
    std::string line;
    std::getline(ss, line);
    const double expected[] = {1.0, 4.0, 9.0};
    for (double e : expected) {
        REQUIRE(static_cast<bool>(std::getline(ss, line)));
        CHECK(std::abs(std::stod(line) - e) < 1e-6);
        CHECK(line.substr(line.find(',') + 1) == "1");
    }
}

TEST_CASE("transfer reports the pseudo-unitarity defect") {
    const auto r = run_cli("transfer delta:2 --lambda 4");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("J-defect") != std::string::npos);

    const auto deg = run_cli("transfer --builtin example43 --a 1.3 --lambda 2.9");
    CHECK(deg.exit_code == 0);
    CHECK(deg.output.find("degenerate") != std::string::npos);
}

TEST_CASE("verify subcommand runs the transfer suite") {
    const auto r = run_cli("verify --suite transfer --seed 7");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[PASS] transfer suite") != std::string::npos);
}
