// plasmafb command line: solve / verify / oracle-compare / weiss / blowup.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "plasmafb/pipeline.hpp"
#include "plasmafb/plot.hpp"

namespace fs = std::filesystem;
using namespace pfb;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitVerification = 4;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    bool force = false;
    int n_override = 0;
    double p_override = 0.0;
};

ProblemConfig load_config(const CommonOpts& c) {
    ProblemConfig cfg = parse_config_file(c.config_path);
    if (c.n_override > 0) cfg.n = c.n_override;
    if (c.p_override > 0.0) cfg.p = c.p_override;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& c, bool need_out) {
    cmd->add_option("--config", c.config_path, "flat key=value config file")
        ->required();
    auto* out = cmd->add_option("--out", c.out_dir, "output directory");
    if (need_out) out->required();
    cmd->add_flag("--force", c.force, "overwrite an existing output directory");
    cmd->add_option("--n", c.n_override, "override grid resolution");
    cmd->add_option("--p", c.p_override, "override the exponent p");
}

void print_report_summary(const VerificationReport& rep) {
    for (const auto& [name, c] : rep.checks)
        std::printf("%-28s %s  value=%.6g tolerance=%s %.6g\n", name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.value, c.comparator.c_str(),
                    c.tolerance);
    std::printf("c_est=%.4g gamma_est=%.4g L=%.4g delta0=%.4g components=%d\n",
                rep.c_est, rep.gamma_est, rep.lipschitz, rep.delta0,
                rep.fb_components);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mountain-pass free boundary solver and verifier"};
    app.require_subcommand(1);

    CommonOpts c_solve, c_verify, c_oracle, c_weiss, c_blow;
    std::string field_path, blow_field;
    int blow_vertex = 0, blow_m = 65;
    double blow_r = 0.0;

    auto* cmd_solve = app.add_subcommand("solve", "run the continuation solve");
    add_common(cmd_solve, c_solve, true);

    auto* cmd_verify =
        app.add_subcommand("verify", "verify a stored field against the estimates");
    add_common(cmd_verify, c_verify, false);
    cmd_verify->add_option("--field", field_path, "u.csv to verify")->required();

    auto* cmd_oracle =
        app.add_subcommand("oracle-compare", "compare the solve with the 1-D oracle");
    add_common(cmd_oracle, c_oracle, false);

    auto* cmd_weiss = app.add_subcommand("weiss", "Weiss density tables for a field");
    add_common(cmd_weiss, c_weiss, true);
    cmd_weiss->add_option("--field", blow_field, "u.csv to analyze")->required();

    auto* cmd_blow = app.add_subcommand("blowup", "blow-up rescaling at a vertex");
    add_common(cmd_blow, c_blow, true);
    cmd_blow->add_option("--field", blow_field, "u.csv to analyze")->required();
    cmd_blow->add_option("--vertex", blow_vertex, "free boundary vertex index");
    cmd_blow->add_option("--r", blow_r, "blow-up radius (default delta0/2)");
    cmd_blow->add_option("--m", blow_m, "blow-up lattice resolution");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_solve->parsed()) {
            ProblemConfig cfg = load_config(c_solve);
            SolveArtifacts art = run_solve(cfg, c_solve.out_dir, c_solve.force);
            std::printf("wrote %s\n", art.report_json.string().c_str());
            return 0;
        }
        if (cmd_verify->parsed()) {
            ProblemConfig cfg = load_config(c_verify);
            VerificationReport rep = run_verify(field_path, cfg);
            print_report_summary(rep);
            if (!c_verify.out_dir.empty()) {
                fs::create_directories(c_verify.out_dir);
                write_text_atomic(fs::path(c_verify.out_dir) / "report.json",
                                  report_to_json(rep));
            }
            return rep.all_pass() ? 0 : kExitVerification;
        }
        if (cmd_oracle->parsed()) {
            ProblemConfig cfg = load_config(c_oracle);
            OracleComparison cmp = run_oracle_compare(cfg);
            std::printf("linf_discrepancy %.6g\n", cmp.linf);
            std::printf("fb_radius grid %.6g oracle %.6g diff %.6g\n", cmp.rho_grid,
                        cmp.rho_oracle, cmp.fb_radius_diff);
            std::printf("center grid %.6g oracle %.6g diff %.6g\n", cmp.m_grid,
                        cmp.m_oracle, cmp.center_diff);
            return 0;
        }
        if (cmd_weiss->parsed()) {
            ProblemConfig cfg = load_config(c_weiss);
            Grid g = grid_from_config(cfg);
            ScalarField u = read_field_csv(blow_field, g);
            VerificationReport rep = build_report(u, cfg, nullptr);
            fs::create_directories(c_weiss.out_dir);
            std::vector<CurveSeries> series;
            for (size_t i = 0; i < rep.weiss.size(); ++i) {
                CurveSeries s;
                s.label = "psi, center " + std::to_string(i);
                s.x = rep.weiss[i].radii;
                s.y = rep.weiss[i].psi;
                series.push_back(std::move(s));
                std::printf("center (%.4f, %.4f) pass=%d\n", rep.weiss[i].center.x,
                            rep.weiss[i].center.y, rep.weiss[i].pass ? 1 : 0);
                for (size_t k = 0; k < rep.weiss[i].radii.size(); ++k)
                    std::printf("  r=%.6g psi=%.6g\n", rep.weiss[i].radii[k],
                                rep.weiss[i].psi[k]);
            }
            write_curves_svg(fs::path(c_weiss.out_dir) / "weiss.svg",
                             "Weiss density psi(r)", series);
            return 0;
        }
        if (cmd_blow->parsed()) {
            ProblemConfig cfg = load_config(c_blow);
            Grid g = grid_from_config(cfg);
            ScalarField u = read_field_csv(blow_field, g);
            FreeBoundaryCurve fb = extract_free_boundary(u);
            if (blow_vertex < 0 ||
                blow_vertex >= static_cast<int>(fb.vertices.size()))
                throw ConfigError("blowup: vertex index out of range");
            Vec2 x0 = fb.vertices[blow_vertex].pos;
            double r = blow_r > 0.0 ? blow_r
                                    : plus_set_boundary_distance(u) / 2.0;
            BlowUpField bu = blow_up(u, x0, r, blow_m);
            fs::create_directories(c_blow.out_dir);
            write_field_csv(fs::path(c_blow.out_dir) / "blowup.csv", bu.w);
            std::printf("blow-up at (%.5f, %.5f), r=%.5g, homogeneity %.5g\n", x0.x,
                        x0.y, r, homogeneity_test(bu.w));
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return kExitConfig;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const TrivialSolutionError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return kExitSolver;
    } catch (const VerificationFailure& e) {
        std::fprintf(stderr, "verification failure: %s\n", e.what());
        return kExitVerification;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
