#include "plasmafb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "plasmafb/plot.hpp"

namespace pfb {

namespace fs = std::filesystem;

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

CheckResult make_check(double value, double tol, const std::string& cmp, bool pass) {
    return CheckResult{value, tol, cmp, pass};
}

std::vector<double> weiss_radii(double h, double delta0) {
    // dyadic radii in [8h, delta0/2], ascending
    std::vector<double> radii;
    for (double r = delta0 / 2.0; r >= 8.0 * h; r /= 2.0) radii.push_back(r);
    std::reverse(radii.begin(), radii.end());
    return radii;
}

}  // namespace

VerificationReport build_report(const ScalarField& u, const ProblemConfig& cfg,
                                const SolveTrace* trace) {
    const Grid& g = *u.grid;
    const double h = g.h();
    VerificationReport rep;
    if (trace) rep.trace = *trace;

    FreeBoundaryCurve fb = extract_free_boundary(u);
    rep.fb_length = fb.total_length;
    rep.fb_components = fb.component_count();

    rep.lipschitz = lipschitz_estimate(u).L;
    rep.delta0 = plus_set_boundary_distance(u);
    rep.c_est = nondegeneracy_constant(u);
    rep.gamma_est = sup_growth_constant(u, fb);
    rep.energy_identity_residual = energy_identity_check(u, cfg.p);
    rep.nehari_res = nehari_residual(u, cfg.p);

    DensityTable dens = density_ratios(u, fb);
    rep.density_min = std::numeric_limits<double>::infinity();
    rep.density_max = -rep.density_min;
    rep.perimeter_density_max = 0.0;
    for (const auto& row : dens) {
        rep.density_min = std::min(rep.density_min, row.plus_fraction);
        rep.density_max = std::max(rep.density_max, row.plus_fraction);
        rep.perimeter_density_max =
            std::max(rep.perimeter_density_max, row.perimeter_density);
    }

    std::vector<double> slope_errs;
    for (const auto& v : fb.vertices)
        if (v.slopes_valid)
            slope_errs.push_back(std::abs(v.alpha * v.alpha - v.beta * v.beta - 2.0));
    rep.slope_median_error = median(slope_errs);

    // Weiss profiles at 3 vertices spread along the extraction order
    std::vector<double> radii = weiss_radii(h, rep.delta0);
    if (radii.size() >= 2 && !fb.vertices.empty()) {
        size_t nv = fb.vertices.size();
        for (size_t pick : {size_t{0}, nv / 3, 2 * nv / 3}) {
            const FbVertex& v = fb.vertices[std::min(pick, nv - 1)];
            rep.weiss.push_back(monotonicity_report(u, v.pos, radii, cfg.p));
        }
    }

    bool weiss_ok = !rep.weiss.empty();
    for (const auto& w : rep.weiss) weiss_ok = weiss_ok && w.pass;

    double gamma_slack = 10.0 * h * std::max(1.0, rep.lipschitz);
    rep.checks["slope_condition_median"] = make_check(
        rep.slope_median_error, 0.1, "<=", rep.slope_median_error <= 0.1);
    rep.checks["nondegeneracy_c"] =
        make_check(rep.c_est, 0.05, ">", rep.c_est > 0.05);
    rep.checks["sup_growth_vs_c"] =
        make_check(rep.gamma_est - rep.c_est, -gamma_slack, ">=",
                   rep.gamma_est >= rep.c_est - gamma_slack);
    rep.checks["density_ratio_lower"] =
        make_check(rep.density_min, 0.1, ">=", rep.density_min >= 0.1);
    rep.checks["density_ratio_upper"] =
        make_check(rep.density_max, 0.9, "<=", rep.density_max <= 0.9);
    rep.checks["perimeter_density"] = make_check(
        rep.perimeter_density_max, 10.0, "<=", rep.perimeter_density_max <= 10.0);
    rep.checks["energy_identity"] =
        make_check(rep.energy_identity_residual, 0.02, "<=",
                   rep.energy_identity_residual <= 0.02);
    rep.checks["nehari_residual"] =
        make_check(rep.nehari_res, 1e-3, "<=", rep.nehari_res <= 1e-3);
    rep.checks["weiss_monotonicity"] =
        make_check(weiss_ok ? 1.0 : 0.0, 1.0, "==", weiss_ok);
    rep.checks["plasma_boundary_margin"] =
        make_check(rep.delta0, 4.0 * h, ">=", rep.delta0 >= 4.0 * h);
    if (trace && !trace->empty()) {
        double bv = 0.0;
        for (const auto& r : *trace) bv = std::max(bv, r.barrier_violation);
        rep.checks["barrier_violation"] =
            make_check(bv, 10.0 * h, "<=", bv <= 10.0 * h);
    }
    return rep;
}

SolveArtifacts run_solve(const ProblemConfig& cfg, const fs::path& out, bool force) {
    if (fs::exists(out) && !fs::is_directory(out))
        throw ConfigError("run_solve: output path is not a directory: " +
                          out.string());
    if (fs::exists(out) && !fs::is_empty(out) && !force)
        throw ConfigError("run_solve: output directory " + out.string() +
                          " is not empty (use --force to overwrite)");
    fs::create_directories(out);

    SolveArtifacts art{out / "u.csv",  out / "trace.csv", out / "report.json",
                       out / "u.svg",  out / "weiss.svg", out / "u.pgm"};

    Grid g = grid_from_config(cfg);
    // the per-level observer keeps the partial trace on disk, so a solver
    // failure still leaves trace.csv behind
    SolveTrace partial;
    ContinuationResult res = continuation_solve(g, cfg, [&](const SolveRecord& r) {
        partial.push_back(r);
        write_trace_csv(art.trace_csv, partial);
    });

    VerificationReport rep = build_report(res.u, cfg, &res.trace);

    write_field_csv(art.u_csv, res.u);
    write_trace_csv(art.trace_csv, res.trace);
    write_text_atomic(art.report_json, report_to_json(rep));

    FreeBoundaryCurve fb = extract_free_boundary(res.u);
    write_heatmap_svg(art.u_svg, res.u, &fb);
    write_heatmap_pgm(art.u_pgm, res.u);

    std::vector<CurveSeries> series;
    for (size_t i = 0; i < rep.weiss.size(); ++i) {
        CurveSeries s;
        char lbl[64];
        std::snprintf(lbl, sizeof lbl, "psi, center %zu", i);
        s.label = lbl;
        s.x = rep.weiss[i].radii;
        s.y = rep.weiss[i].psi;
        series.push_back(std::move(s));
    }
    write_curves_svg(art.weiss_svg, "Weiss density psi(r)", series);
    return art;
}

VerificationReport run_verify(const fs::path& field_csv, const ProblemConfig& cfg) {
    Grid g = grid_from_config(cfg);
    ScalarField u = read_field_csv(field_csv, g);
    return build_report(u, cfg, nullptr);
}

OracleComparison compare_with_oracle(const ScalarField& u, const ProblemConfig& cfg,
                                     const RadialProfile& prof) {
    const Grid& g = *u.grid;
    OracleComparison cmp;
    cmp.rho_oracle = prof.fb_radius;
    cmp.m_oracle = prof.center_value;

    for (int k : g.interior_nodes()) {
        Vec2 x = g.point(k % g.n(), k / g.n()) - g.center();
        cmp.linf = std::max(cmp.linf, std::abs(u.values[k] - prof.value(norm(x))));
    }

    FreeBoundaryCurve fb = extract_free_boundary(u);
    double acc = 0.0;
    for (const auto& v : fb.vertices) acc += norm(v.pos - g.center());
    cmp.rho_grid = acc / static_cast<double>(fb.vertices.size());
    cmp.fb_radius_diff = std::abs(cmp.rho_grid - cmp.rho_oracle);

    int c = (g.n() - 1) / 2;
    cmp.m_grid = u.values[g.index(c, c)];
    cmp.center_diff = std::abs(cmp.m_grid - cmp.m_oracle);
    (void)cfg;
    return cmp;
}

OracleComparison run_oracle_compare(const ProblemConfig& cfg) {
    if (cfg.shape != DomainShape::Disk)
        throw ConfigError("oracle comparison needs the radially symmetric disk");
    Grid g = grid_from_config(cfg);
    ContinuationResult res = continuation_solve(g, cfg);
    RadialProfile prof = radial_oracle(cfg.p, cfg.extent, 1e-8);
    return compare_with_oracle(res.u, cfg, prof);
}

}  // namespace pfb
