#include "plasmafb/weiss.hpp"

#include <cmath>

namespace pfb {

namespace {
constexpr int kAngularSamples = 720;
}

double weiss_density(const ScalarField& u, Vec2 x0, double r) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    if (r < 8.0 * h) throw RangeError("weiss_density: r below 8h");
    if (g.boundary_distance(x0) <= r)
        throw RangeError("weiss_density: ball exits the domain");

    // volume term: nodal quadrature of |grad w|^2 / 2 + chi_{w > 0}
    double vol = 0.0;
    int i0 = std::max(0, static_cast<int>((x0.x - r - g.origin().x) / h));
    int i1 = std::min(n - 1, static_cast<int>((x0.x + r - g.origin().x) / h) + 1);
    int j0 = std::max(0, static_cast<int>((x0.y - r - g.origin().y) / h));
    int j1 = std::min(n - 1, static_cast<int>((x0.y + r - g.origin().y) / h) + 1);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            if (norm(g.point(i, j) - x0) > r) continue;
            Vec2 gr = node_gradient(u, i, j);
            double uc = u.values[g.index(i, j)];
            vol += 0.5 * (gr.x * gr.x + gr.y * gr.y) + (uc > 1.0 ? 1.0 : 0.0);
        }
    vol *= g.cell_area();

    // sphere term: trapezoid over equally spaced angles (periodic)
    double sph = 0.0;
    const double dtheta = 2.0 * M_PI / kAngularSamples;
    for (int a = 0; a < kAngularSamples; ++a) {
        double th = a * dtheta;
        double w = sample(u, {x0.x + r * std::cos(th), x0.y + r * std::sin(th)}) - 1.0;
        sph += w * w;
    }
    sph *= r * dtheta;

    return vol / (r * r) - 0.5 * sph / (r * r * r);
}

double weiss_deficit(const ScalarField& u, Vec2 x0, double r0, double r1) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    if (!(r0 < r1)) throw RangeError("weiss_deficit: need r0 < r1");
    if (r0 < 8.0 * h) throw RangeError("weiss_deficit: r0 below 8h");
    if (g.boundary_distance(x0) <= r1)
        throw RangeError("weiss_deficit: annulus exits the domain");

    double acc = 0.0;
    int i0 = std::max(0, static_cast<int>((x0.x - r1 - g.origin().x) / h));
    int i1 = std::min(n - 1, static_cast<int>((x0.x + r1 - g.origin().x) / h) + 1);
    int j0 = std::max(0, static_cast<int>((x0.y - r1 - g.origin().y) / h));
    int j1 = std::min(n - 1, static_cast<int>((x0.y + r1 - g.origin().y) / h) + 1);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            Vec2 x = g.point(i, j) - x0;
            double d = norm(x);
            // half-open shells make consecutive deficits add exactly
            if (d <= r0 || d > r1) continue;
            Vec2 gr = node_gradient(u, i, j);
            double w = u.values[g.index(i, j)] - 1.0;
            double q = x.x * gr.x + x.y * gr.y - w;
            acc += q * q / (d * d * d * d);
        }
    return acc * g.cell_area();
}

WeissProfile monotonicity_report(const ScalarField& u, Vec2 x0,
                                 const std::vector<double>& radii, double p,
                                 double c_slack) {
    if (radii.size() < 2)
        throw ConfigError("monotonicity_report: need at least two radii");
    for (size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] > radii[k - 1]))
            throw ConfigError("monotonicity_report: radii must be increasing");

    WeissProfile prof;
    prof.center = x0;
    prof.radii = radii;
    prof.c_slack = c_slack;
    for (double r : radii) prof.psi.push_back(weiss_density(u, x0, r));
    const double h = u.grid->h();
    prof.pass = true;
    for (size_t k = 0; k + 1 < radii.size(); ++k) {
        double deficit = weiss_deficit(u, x0, radii[k], radii[k + 1]);
        double slack = c_slack * (h / radii[k] + std::pow(radii[k + 1], p));
        bool ok = prof.psi[k + 1] - prof.psi[k] >= deficit - slack;
        prof.deficits.push_back(deficit);
        prof.slacks.push_back(slack);
        prof.step_pass.push_back(ok);
        prof.pass = prof.pass && ok;
    }
    return prof;
}

double homogeneity_test(const ScalarField& W) {
    const Grid& g = *W.grid;
    const int n = g.n();
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            Vec2 y = g.point(i, j);
            if (norm(y) > 1.0) continue;
            double wy = W.values[g.index(i, j)];
            for (double lambda : {0.5, 0.25}) {
                double wl = sample(W, lambda * y);
                worst = std::max(worst, std::abs(wl - lambda * wy));
            }
        }
    return worst;
}

}  // namespace pfb
