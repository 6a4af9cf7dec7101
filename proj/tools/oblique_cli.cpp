#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <json.hpp>

#include "oblique/bspline.hpp"
#include "oblique/frame_core.hpp"
#include "oblique/io.hpp"
#include "oblique/refinement.hpp"
#include "oblique/shift_invariant.hpp"

namespace {

using nlohmann::json;
using namespace oblique;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_file(out_path, text);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct PairInputs {
    FiniteFrame f;
    FiniteFrame g;
    Subspace w;
    Subspace v;
};

PairInputs load_pair(const std::string& path) {
    const json j = json::parse(io::read_file(path));
    io::FramePairRecord rec = io::frame_pair_from_json(j);
    Subspace w = rec.f.space();
    Subspace v = rec.g.space();
    return {std::move(rec.f.frame), std::move(rec.g.frame), std::move(w), std::move(v)};
}

json report_json(const PairInputs& in, double defect) {
    const DualityReport rep = direct_sum_check(in.w, in.v, kDirectSumTol);
    json j;
    j["defect"] = defect;
    j["direct_sum_ok"] = rep.direct_sum_ok;
    j["cos_WV"] = rep.cos_WV;
    j["cos_VW"] = rep.cos_VW;
    j["gram_sigma_min"] = rep.gram_sigma_min;
    return j;
}

std::string table_csv(const std::vector<bspline::TableRow>& rows) {
    std::string out = "K,support_lo,support_hi,eps\n";
    for (const auto& r : rows) {
        out += std::to_string(r.truncation);
        out += ',';
        out += io::format_double(r.support_lo);
        out += ',';
        out += io::format_double(r.support_hi);
        out += ',';
        out += io::format_double(r.eps);
        out += '\n';
    }
    return out;
}

json table_json(const std::vector<bspline::TableRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"K", r.truncation},
                       {"support_lo", r.support_lo},
                       {"support_hi", r.support_hi},
                       {"eps", r.eps}});
    return arr;
}

/// Flags > config file > defaults: config keys are injected as trailing
/// arguments, which CLI11 lets explicit flags override.
std::vector<std::string> apply_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;

    const json cfg = json::parse(io::read_file(config_path));
    if (!cfg.is_object())
        throw input_error("config file must be a flat JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
        const std::string flag = "--" + it.key();
        bool overridden = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
        if (overridden) continue;
        args.push_back(flag);
        if (it.value().is_string())
            args.push_back(it.value().get<std::string>());
        else
            args.push_back(it.value().dump());
    }
    return args;
}

int run(std::vector<std::string> args) {
    CLI::App app{"approximate oblique dual frame toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    std::string pair_path, phi_spec, phi1_spec, psi_spec, f_spec;
    int grid_log2 = 16, kmax = 4, truncation = 0, order = 1, n_periods = 0;
    int n_samples = 512;
    double tol = kDirectSumTol;
    app.add_option("--config", config_path, "flat JSON config file");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat JSON config file");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--grid-log2", grid_log2, "log2 of the sample grid")
            ->check(CLI::Range(8, 22));
        cmd->add_option("--tol", tol, "direct-sum tolerance")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* check = app.add_subcommand("check-dual", "duality report for a frame pair");
    check->add_option("--pair", pair_path, "frame pair JSON")->required();
    add_common(check);

    CLI::App* refine = app.add_subcommand("refine", "Neumann refinement of the dual");
    refine->add_option("--pair", pair_path, "frame pair JSON")->required();
    refine->add_option("-N,--order", order, "refinement order");
    add_common(refine);

    CLI::App* limit = app.add_subcommand("limit-dual", "exact dual via dense solve");
    limit->add_option("--pair", pair_path, "frame pair JSON")->required();
    add_common(limit);

    CLI::App* sbr = app.add_subcommand("si-bracket", "bracket product of two generators");
    sbr->add_option("--phi", phi_spec, "generator spec")->required();
    sbr->add_option("--psi", psi_spec, "generator spec")->required();
    add_common(sbr);

    CLI::App* sdef = app.add_subcommand("si-defect", "shift-invariant duality defect");
    sdef->add_option("--phi", phi_spec, "generator spec")->required();
    sdef->add_option("--phit", psi_spec, "candidate dual generator spec")->required();
    add_common(sdef);

    CLI::App* seps = app.add_subcommand(
        "si-eps", "sufficient and necessary eps of the K-truncated dual symbol");
    seps->add_option("--phi", phi_spec, "generator spec")->required();
    seps->add_option("--phi1", phi1_spec, "generator spec")->required();
    seps->add_option("-K,--kmax", truncation, "symbol truncation order");
    add_common(seps);

    CLI::App* sproj = app.add_subcommand("si-project", "Fourier-domain oblique projection");
    sproj->add_option("--phi", phi_spec, "generator spec")->required();
    sproj->add_option("--phi1", phi1_spec, "generator spec")->required();
    sproj->add_option("--f", f_spec, "generator spec of the function to project")
        ->required();
    sproj->add_option("--periods", n_periods, "half-width of the period range")
        ->check(CLI::NonNegativeNumber);
    add_common(sproj);

    CLI::App* btab = app.add_subcommand("bspline-table", "truncated dual error table");
    btab->add_option("--kmax", kmax, "largest truncation order");
    add_common(btab);

    CLI::App* bpsi = app.add_subcommand("bspline-psi", "samples of the dual generator");
    bpsi->add_option("-K,--kmax", truncation, "truncation order");
    bpsi->add_option("--samples", n_samples, "number of samples");
    add_common(bpsi);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    if (check->parsed()) {
        const PairInputs in = load_pair(pair_path);
        const double defect = duality_defect(in.f, in.g, in.w, in.v);
        emit(dump(report_json(in, defect)), out_path);
    } else if (refine->parsed()) {
        const PairInputs in = load_pair(pair_path);
        const RefinementResult res = refine_dual(in.f, in.g, in.w, in.v, order);
        json j;
        j["F"] = io::frame_to_json(in.f, in.w);
        j["G"] = io::frame_to_json(res.refined, in.v);
        j["order"] = res.order;
        j["predicted_bound"] = res.predicted_bound;
        j["measured_defect"] = res.measured_defect;
        emit(dump(j), out_path);
    } else if (limit->parsed()) {
        const PairInputs in = load_pair(pair_path);
        const FiniteFrame g = limit_dual(in.f, in.g, in.w, in.v);
        json j;
        j["F"] = io::frame_to_json(in.f, in.w);
        j["G"] = io::frame_to_json(g, in.v);
        j["measured_defect"] = duality_defect(in.f, g, in.w, in.v);
        emit(dump(j), out_path);
    } else if (sbr->parsed()) {
        const si::PeriodicFunction b = si::bracket(
            io::parse_generator(phi_spec), io::parse_generator(psi_spec), grid_log2);
        emit(format == "json" ? dump(io::periodic_to_json(b)) : io::periodic_to_csv(b),
             out_path);
    } else if (sdef->parsed()) {
        const double defect = si::si_duality_defect(
            io::parse_generator(phi_spec), io::parse_generator(psi_spec), grid_log2);
        emit(dump(json{{"defect", defect}}), out_path);
    } else if (seps->parsed()) {
        const si::GeneratorSpec phi = io::parse_generator(phi_spec);
        const si::GeneratorSpec phi1 = io::parse_generator(phi1_spec);
        const si::TruncatedSymbol sym = si::fourier_coefficients(
            si::dual_symbol(phi, phi1, grid_log2), truncation);
        json j;
        j["K"] = truncation;
        j["sufficient_eps"] = si::sufficient_eps(phi, phi1, sym, grid_log2);
        j["necessary_eps"] = si::necessary_eps(phi, phi1, sym, grid_log2);
        emit(dump(j), out_path);
    } else if (sproj->parsed()) {
        const si::ProjectionResult res = si::project_fourier(
            io::parse_generator(phi_spec), io::parse_generator(phi1_spec),
            io::parse_generator(f_spec), grid_log2, n_periods);
        std::string out = "xi,re,im\n";
        for (size_t i = 0; i < res.xi.size(); ++i) {
            out += io::format_double(res.xi[i]);
            out += ',';
            out += io::format_double(res.values(static_cast<Eigen::Index>(i)).real());
            out += ',';
            out += io::format_double(res.values(static_cast<Eigen::Index>(i)).imag());
            out += '\n';
        }
        emit(out, out_path);
    } else if (btab->parsed()) {
        const auto rows = bspline::example_table(kmax, grid_log2);
        emit(format == "json" ? dump(table_json(rows)) : table_csv(rows), out_path);
    } else if (bpsi->parsed()) {
        const auto samples = bspline::emit_psi_samples(truncation, n_samples, grid_log2);
        std::string out = "x,psi\n";
        for (const auto& s : samples) {
            out += io::format_double(s.x);
            out += ',';
            out += io::format_double(s.value);
            out += '\n';
        }
        emit(out, out_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("OBLIQUE_FRAMES_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    static const std::vector<std::string> known = {
        "check-dual", "refine",       "limit-dual",  "si-bracket", "si-defect",
        "si-eps",     "si-project",   "bspline-table", "bspline-psi"};
    std::string first_positional;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config") {
            ++i;
            continue;
        }
        if (!a.empty() && a[0] != '-') {
            first_positional = a;
            break;
        }
    }
    if (first_positional.empty() ||
        std::find(known.begin(), known.end(), first_positional) == known.end()) {
        std::cerr << "usage: oblique <command> [options]\ncommands:";
        for (const auto& k : known) std::cerr << ' ' << k;
        std::cerr << "\n";
        return 64;
    }

    try {
        return run(apply_config(argc, argv));
    } catch (const oblique::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const oblique::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
