#include "plasmafb/report.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pfb {

namespace fs = std::filesystem;
using nlohmann::json;

bool VerificationReport::all_pass() const {
    for (const auto& [name, c] : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json check_to_json(const CheckResult& c) {
    return json{{"value", c.value},
                {"tolerance", c.tolerance},
                {"comparator", c.comparator},
                {"pass", c.pass}};
}

}  // namespace

std::string report_to_json(const VerificationReport& rep) {
    json j;
    j["c_est"] = rep.c_est;
    j["gamma_est"] = rep.gamma_est;
    j["lipschitz"] = rep.lipschitz;
    j["delta0"] = rep.delta0;
    j["density_ratio_min"] = rep.density_min;
    j["density_ratio_max"] = rep.density_max;
    j["perimeter_density_max"] = rep.perimeter_density_max;
    j["slope_condition_median_error"] = rep.slope_median_error;
    j["energy_identity_residual"] = rep.energy_identity_residual;
    j["nehari_residual"] = rep.nehari_res;
    j["free_boundary_length"] = rep.fb_length;
    j["free_boundary_components"] = rep.fb_components;

    json jw = json::array();
    for (const auto& w : rep.weiss) {
        json e;
        e["center"] = {w.center.x, w.center.y};
        e["radii"] = w.radii;
        e["psi"] = w.psi;
        e["deficits"] = w.deficits;
        e["slacks"] = w.slacks;
        e["c_slack"] = w.c_slack;
        e["pass"] = w.pass;
        jw.push_back(e);
    }
    j["weiss"] = jw;

    json jc;
    for (const auto& [name, c] : rep.checks) jc[name] = check_to_json(c);
    j["checks"] = jc;

    if (!rep.trace.empty()) {
        json jt = json::array();
        for (const auto& r : rep.trace) {
            jt.push_back(json{{"eps", r.eps},
                              {"iterations", r.outer_iterations},
                              {"c_eps", r.level},
                              {"residual_inf", r.residual_inf},
                              {"nehari_residual", r.nehari_res},
                              {"lipschitz", r.lipschitz},
                              {"max_u", r.max_u},
                              {"barrier_violation", r.barrier_violation},
                              {"delta0", r.plus_boundary_distance}});
        }
        j["trace"] = jt;
    }
    return j.dump(2) + "\n";
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open for writing: " + tmp.string());
        out << text;
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_field_csv(const fs::path& path, const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    std::string out;
    out.reserve(static_cast<size_t>(g.interior_count()) * 60 + 16);
    out += "x,y,u\n";
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            if (g.kind(i, j) == NodeKind::Exterior) continue;
            out += fmt17(g.x(i));
            out += ',';
            out += fmt17(g.y(j));
            out += ',';
            out += fmt17(u.values[g.index(i, j)]);
            out += '\n';
        }
    write_text_atomic(path, out);
}

ScalarField read_field_csv(const fs::path& path, const Grid& g) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open field file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line != "x,y,u")
        throw SchemaError("field file: missing 'x,y,u' header in " + path.string());
    ScalarField u(g);
    std::vector<bool> seen(static_cast<size_t>(g.n()) * g.n(), false);
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double x, y, v;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
            throw SchemaError("field file: bad row: " + line);
        double fi = (x - g.origin().x) / g.h();
        double fj = (y - g.origin().y) / g.h();
        int i = static_cast<int>(std::lround(fi));
        int j = static_cast<int>(std::lround(fj));
        if (i < 0 || j < 0 || i >= g.n() || j >= g.n() ||
            std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6)
            throw SchemaError("field file: node off the configured grid: " + line);
        if (g.kind(i, j) == NodeKind::Exterior)
            throw SchemaError("field file: exterior node present: " + line);
        u.values[g.index(i, j)] = v;
        seen[g.index(i, j)] = true;
        ++rows;
    }
    size_t expected = 0;
    for (int k = 0; k < g.n() * g.n(); ++k)
        if (g.kind(k) != NodeKind::Exterior) ++expected;
    if (rows != expected)
        throw SchemaError("field file: row count " + std::to_string(rows) +
                          " does not match grid (" + std::to_string(expected) + ")");
    return u;
}

void write_trace_csv(const fs::path& path, const SolveTrace& trace) {
    std::string out =
        "eps,iterations,c_eps,residual_inf,nehari_residual,lipschitz,max_u,"
        "barrier_violation,delta0\n";
    for (const auto& r : trace) {
        out += fmt17(r.eps);
        out += ',';
        out += std::to_string(r.outer_iterations);
        out += ',';
        out += fmt17(r.level);
        out += ',';
        out += fmt17(r.residual_inf);
        out += ',';
        out += fmt17(r.nehari_res);
        out += ',';
        out += fmt17(r.lipschitz);
        out += ',';
        out += fmt17(r.max_u);
        out += ',';
        out += fmt17(r.barrier_violation);
        out += ',';
        out += fmt17(r.plus_boundary_distance);
        out += '\n';
    }
    write_text_atomic(path, out);
}

}  // namespace pfb
