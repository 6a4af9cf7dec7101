#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <sys/wait.h>

#include "oblique/frame_core.hpp"
#include "oblique/io.hpp"

using namespace oblique;
using nlohmann::json;

namespace {

std::string g_cli_path;

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    REQUIRE_FALSE(g_cli_path.empty());
    const std::string cmd = g_cli_path + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

json pair_json() {
    // W = span{(1,0)}, V = span{(1,1)}: F = {(1,0)}, G = {(0.9,0.9)}
    json f;
    f["dim"] = 2;
    f["vectors"] = {{{1.0, 0.0}, {0.0, 0.0}}};
    json g;
    g["dim"] = 2;
    g["vectors"] = {{{0.9, 0.0}, {0.9, 0.0}}};
    return json{{"F", f}, {"G", g}};
}

} // namespace

TEST_CASE("frame JSON round trip") {
    Matrix t(2, 2);
    t << Complex(1.0, 2.0), Complex(0.0, -1.0), Complex(3.0, 0.0), Complex(0.5, 0.5);
    const FiniteFrame frame(t);
    Matrix b(2, 1);
    b << Complex(1.0), Complex(1.0);
    const Subspace sub(b);

    const json j = io::frame_to_json(frame, sub);
    const io::FrameRecord back = io::frame_from_json(j);
    CHECK((back.frame.synthesis() - t).norm() <= 1e-15);
    REQUIRE(back.subspace.has_value());
    CHECK((back.subspace->projector() - sub.projector()).norm() <= 1e-12);

    CHECK_THROWS_AS(io::frame_from_json(json{{"dim", 2}}), input_error);
    json mismatched = j;
    mismatched["dim"] = 5;
    CHECK_THROWS_AS(io::frame_from_json(mismatched), input_error);
}

TEST_CASE("periodic CSV round trip") {
    si::PeriodicFunction p{Vector(8), 3};
    for (int j = 0; j < 8; ++j)
        p.samples(j) = Complex(std::cos(0.7 * j), std::sin(0.3 * j));
    const std::string csv = io::periodic_to_csv(p);
    CHECK(csv.rfind("gamma,re,im\n", 0) == 0);
    const si::PeriodicFunction back = io::periodic_from_csv(csv);
    CHECK(back.grid_log2 == 3);
    CHECK((back.samples - p.samples).cwiseAbs().maxCoeff() <= 1e-14);

    CHECK_THROWS_AS(io::periodic_from_csv("gamma,re,im\n0,1,0\n"), input_error);
    CHECK_THROWS_AS(io::periodic_from_csv("gamma,re,im\nnot,a,number-x\n"),
                    input_error);
}

TEST_CASE("format_double and determinism") {
    CHECK(io::format_double(0.25) == "0.25");
    CHECK(io::format_double(1.0 / 3.0) == io::format_double(1.0 / 3.0));
    CHECK(io::format_double(0.003773541369707).size() >= 15);
}

TEST_CASE("parse_generator") {
    const si::GeneratorSpec b3 = io::parse_generator("bspline:3");
    CHECK(std::abs(b3.ft(0.0) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(io::parse_generator("bspline:x"), input_error);
    CHECK_THROWS_AS(io::parse_generator("nonsense"), input_error);

    const std::string path = temp_path("gen_tab.csv");
    io::write_file(path, "xi,re,im\n-1,0,0\n0,1,0\n1,0,0\n");
    const si::GeneratorSpec tab = io::parse_generator("csv:" + path + ":2.5");
    CHECK(std::abs(tab.ft(0.0) - 1.0) <= 1e-15);
    CHECK(std::abs(tab.ft(0.5) - 0.5) <= 1e-15);
    CHECK(std::abs(tab.ft(3.0)) == 0.0);
    CHECK_THROWS_AS(io::parse_generator("csv:" + path + ":0.5"), input_error);
}

TEST_CASE("cli bspline-table") {
    const CliResult res = run_cli("bspline-table --kmax 1 --grid-log2 12");
    CHECK(res.exit_code == 0);
    CHECK(res.output.rfind("K,support_lo,support_hi,eps\n", 0) == 0);
    double eps0 = 0.0, eps1 = 0.0;
    REQUIRE(std::sscanf(res.output.c_str(), "K,support_lo,support_hi,eps\n0,%*f,%*f,%lf\n1,%*f,%*f,%lf",
                        &eps0, &eps1) == 2);
    CHECK(std::abs(eps0 - (std::sqrt(3.0) - 1.0)) <= 1e-9);
    CHECK(std::abs(eps1 - 0.196152304804580) <= 5e-7);

    // determinism: identical invocations produce byte-identical output
    CHECK(run_cli("bspline-table --kmax 1 --grid-log2 12").output == res.output);
}

TEST_CASE("cli si-bracket closed form") {
    const CliResult res =
        run_cli("si-bracket --phi bspline:1 --psi bspline:3 --grid-log2 8");
    CHECK(res.exit_code == 0);
    const si::PeriodicFunction p = io::periodic_from_csv(res.output);
    REQUIRE(p.size() == 256);
    for (int j = 0; j < p.size(); ++j) {
        const double expect =
            (2.0 + std::cos(2.0 * std::numbers::pi * p.gamma(j))) / 3.0;
        CHECK(std::abs(p.samples(j) - expect) <= 1e-12);
    }
}

TEST_CASE("cli check-dual and refine round trip") {
    const std::string pair_path = temp_path("pair.json");
    io::write_file(pair_path, pair_json().dump());

    const CliResult check = run_cli("check-dual --pair " + pair_path);
    CHECK(check.exit_code == 0);
    const json rep = json::parse(check.output);
    CHECK(rep["direct_sum_ok"].get<bool>());
    CHECK(std::abs(rep["defect"].get<double>() - 0.1 * std::sqrt(2.0)) <= 1e-12);

    // exact pair reports defect 0
    json exact = pair_json();
    exact["G"]["vectors"] = {{{1.0, 0.0}, {1.0, 0.0}}};
    const std::string exact_path = temp_path("pair_exact.json");
    io::write_file(exact_path, exact.dump());
    const CliResult check_exact = run_cli("check-dual --pair " + exact_path);
    CHECK(check_exact.exit_code == 0);
    CHECK(json::parse(check_exact.output)["defect"].get<double>() <= 1e-12);

    const CliResult refined = run_cli("refine --pair " + pair_path + " -N 2");
    CHECK(refined.exit_code == 0);
    const json out = json::parse(refined.output);
    const io::FrameRecord f = io::frame_from_json(out["F"]);
    const io::FrameRecord g = io::frame_from_json(out["G"]);
    const double recomputed =
        duality_defect(f.frame, g.frame, f.space(), g.space());
    CHECK(std::abs(recomputed - out["measured_defect"].get<double>()) <= 1e-12);
    CHECK(out["measured_defect"].get<double>() <=
          out["predicted_bound"].get<double>() + 1e-10);

    const CliResult limit = run_cli("limit-dual --pair " + pair_path);
    CHECK(limit.exit_code == 0);
    CHECK(json::parse(limit.output)["measured_defect"].get<double>() <= 1e-10);
}

TEST_CASE("cli config precedence and output file") {
    const std::string cfg_path = temp_path("cfg.json");
    io::write_file(cfg_path, json{{"kmax", 0}, {"grid-log2", 10}}.dump());
    const CliResult from_cfg = run_cli("bspline-table --config " + cfg_path);
    CHECK(from_cfg.exit_code == 0);
    CHECK(from_cfg.output.find("\n1,") == std::string::npos);

    // explicit flag wins over the config value
    const CliResult overridden =
        run_cli("bspline-table --config " + cfg_path + " --kmax 1");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("\n1,") != std::string::npos);

    const std::string out_path = temp_path("table_out.csv");
    const CliResult to_file = run_cli("bspline-table --kmax 0 --grid-log2 10 --out " +
                                      out_path);
    CHECK(to_file.exit_code == 0);
    CHECK(io::read_file(out_path).rfind("K,support_lo,support_hi,eps\n", 0) == 0);
}

TEST_CASE("cli exit codes") {
    CHECK(run_cli("no-such-command").exit_code == 64);
    CHECK(run_cli("").exit_code == 64);
    CHECK(run_cli("check-dual --pair /does/not/exist.json").exit_code == 1);

    // orthogonal pair: direct sum fails -> numerical error
    json bad;
    bad["F"] = {{"dim", 2}, {"vectors", {{{1.0, 0.0}, {0.0, 0.0}}}}};
    bad["G"] = {{"dim", 2}, {"vectors", {{{0.0, 0.0}, {1.0, 0.0}}}}};
    const std::string bad_path = temp_path("pair_bad.json");
    io::write_file(bad_path, bad.dump());
    CHECK(run_cli("check-dual --pair " + bad_path).exit_code == 2);
}

int main(int argc, char** argv) {
    std::vector<const char*> passthrough;
    for (int i = 0; i < argc; ++i) {
        if (std::string(argv[i]) == "--cli" && i + 1 < argc) {
            g_cli_path = argv[++i];
            continue;
        }
        passthrough.push_back(argv[i]);
    }
    doctest::Context ctx(static_cast<int>(passthrough.size()),
                         const_cast<char**>(passthrough.data()));
    return ctx.run();
}
