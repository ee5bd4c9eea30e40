#include "plasmafb/functional.hpp"

#include <cmath>

namespace pfb {

namespace {

// compensated accumulator; the Nehari ray algebra divides these sums, so
// plain summation noise would leak into the projection at ~1e-12
struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double beta_mollifier(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double s = 1.0 - t;
    return 30.0 * t * t * s * s;
}

double beta_mollifier_prime(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

double cap_b(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return 30.0 * (t * t * t / 3.0 - t * t * t * t / 2.0 + t * t * t * t * t / 5.0);
}

void ProblemConfig::validate(double h) const {
    if (!(p > 2.0)) throw ConfigError("p must be > 2");
    if (!(eps0 > 0.0) || !(factor > 0.0) || !(factor < 1.0))
        throw ConfigError("schedule: need eps0 > 0 and factor in (0,1)");
    double floor = resolved_eps_min(h);
    if (floor < 2.0 * h)
        throw ConfigError("schedule: eps_min below 2h, interface band unresolvable");
    if (!(eps0 > floor)) throw ConfigError("schedule: eps0 must exceed eps_min");
    if (!(solve_tol > 0.0)) throw ConfigError("solve_tol must be positive");
}

double ProblemConfig::resolved_eps_min(double h) const {
    if (eps_min > 0.0) return eps_min;
    return std::max(2.0 * h, 0.003);
}

double positive_part_power(double v, double p) {
    if (v <= 0.0) return 0.0;
    return std::pow(v, p);
}

SplitDirichlet split_dirichlet_energy(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    Kahan minus, plus;
    auto edge = [&](int ka, int kb) {
        double a = u.values[ka], b = u.values[kb];
        double dminus = std::min(a, 1.0) - std::min(b, 1.0);
        double dplus = std::max(a - 1.0, 0.0) - std::max(b - 1.0, 0.0);
        minus.add(dminus * dminus);
        plus.add(dplus * dplus);
    };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n - 1; ++i) {
            int ka = g.index(i, j), kb = g.index(i + 1, j);
            if (g.kind(ka) == NodeKind::Interior || g.kind(kb) == NodeKind::Interior)
                edge(ka, kb);
        }
    for (int j = 0; j < n - 1; ++j)
        for (int i = 0; i < n; ++i) {
            int ka = g.index(i, j), kb = g.index(i, j + 1);
            if (g.kind(ka) == NodeKind::Interior || g.kind(kb) == NodeKind::Interior)
                edge(ka, kb);
        }
    return SplitDirichlet{minus.sum, plus.sum};
}

double plus_measure(const ScalarField& u) {
    const Grid& g = *u.grid;
    long count = 0;
    for (int k : g.interior_nodes())
        if (u.values[k] > 1.0) ++count;
    return static_cast<double>(count) * g.cell_area();
}

double penalty_integral(const ScalarField& u, double p) {
    const Grid& g = *u.grid;
    Kahan s;
    for (int k : g.interior_nodes()) s.add(positive_part_power(u.values[k] - 1.0, p));
    return s.sum * g.cell_area();
}

double energy_J(const ScalarField& u, double p) {
    SplitDirichlet sd = split_dirichlet_energy(u);
    return 0.5 * sd.total() + plus_measure(u) - penalty_integral(u, p) / p;
}

double energy_Jeps(const ScalarField& u, double p, double eps) {
    if (!(eps > 0.0)) throw ConfigError("energy_Jeps: eps must be positive");
    SplitDirichlet sd = split_dirichlet_energy(u);
    const Grid& g = *u.grid;
    double bsum = 0.0;
    for (int k : g.interior_nodes()) bsum += cap_b((u.values[k] - 1.0) / eps);
    return 0.5 * sd.total() + bsum * g.cell_area() - penalty_integral(u, p) / p;
}

ScalarField residual_eps(const ScalarField& u, double p, double eps) {
    if (!(eps > 0.0)) throw ConfigError("residual_eps: eps must be positive");
    const Grid& g = *u.grid;
    const int n = g.n();
    const double ih2 = 1.0 / (g.h() * g.h());
    ScalarField out(g);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        double uc = u.values[k];
        double lap = 0.0;
        // neighbor values clamped to 1 across the u = 1 level (gradient of the
        // split quadrature)
        if (uc > 1.0) {
            lap = 4.0 * uc - std::max(u.values[g.index(i + 1, j)], 1.0) -
                  std::max(u.values[g.index(i - 1, j)], 1.0) -
                  std::max(u.values[g.index(i, j + 1)], 1.0) -
                  std::max(u.values[g.index(i, j - 1)], 1.0);
        } else {
            lap = 4.0 * uc - std::min(u.values[g.index(i + 1, j)], 1.0) -
                  std::min(u.values[g.index(i - 1, j)], 1.0) -
                  std::min(u.values[g.index(i, j + 1)], 1.0) -
                  std::min(u.values[g.index(i, j - 1)], 1.0);
        }
        out.values[k] = lap * ih2 + beta_mollifier((uc - 1.0) / eps) / eps -
                        positive_part_power(uc - 1.0, p - 1.0);
    }
    return out;
}

double domain_variation_residual(const ScalarField& u, double p,
                                 const VectorField& phi, VariationMode mode,
                                 double eps) {
    require_same_grid(u, phi.x);
    require_same_grid(u, phi.y);
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    if (mode == VariationMode::Eps && !(eps > 0.0))
        throw ConfigError("domain_variation_residual: eps mode needs eps > 0");

    for (int k : g.interior_nodes()) {
        if (phi.x.values[k] == 0.0 && phi.y.values[k] == 0.0) continue;
        int i = k % n, j = k / n;
        if (g.boundary_distance(g.point(i, j)) < 2.0 * h)
            throw ConfigError("domain_variation_residual: Phi support touches boundary");
    }

    double acc = 0.0;
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        Vec2 gu = node_gradient(u, i, j);
        auto cd = [&](const ScalarField& f, int di, int dj) {
            return (f.values[g.index(i + di, j + dj)] -
                    f.values[g.index(i - di, j - dj)]) /
                   (2.0 * h);
        };
        double dx_px = cd(phi.x, 1, 0), dy_px = cd(phi.x, 0, 1);
        double dx_py = cd(phi.y, 1, 0), dy_py = cd(phi.y, 0, 1);
        double div_phi = dx_px + dy_py;

        double uc = u.values[k];
        double ind = (mode == VariationMode::Eps) ? cap_b((uc - 1.0) / eps)
                                                  : (uc > 1.0 ? 1.0 : 0.0);
        double density = 0.5 * (gu.x * gu.x + gu.y * gu.y) + ind -
                         positive_part_power(uc - 1.0, p) / p;
        double quad = gu.x * (dx_px * gu.x + dx_py * gu.y) +
                      gu.y * (dy_px * gu.x + dy_py * gu.y);
        acc += density * div_phi - quad;
    }
    return acc * g.cell_area();
}

}  // namespace pfb
