#include "plasmafb/nehari.hpp"

#include <cmath>
#include <limits>

namespace pfb {

RayDecomposition decompose(const ScalarField& v) {
    const Grid& g = *v.grid;
    RayDecomposition d{ScalarField(g), ScalarField(g)};
    for (int k = 0; k < g.n() * g.n(); ++k) {
        double x = v.values[k];
        d.v_minus.values[k] = std::min(x, 1.0);
        d.v_plus.values[k] = std::max(x - 1.0, 0.0);
    }
    return d;
}

NehariData nehari_data(const ScalarField& v, double p) {
    SplitDirichlet sd = split_dirichlet_energy(v);
    NehariData nd;
    nd.a = sd.plus;
    nd.b = penalty_integral(v, p);
    if (nd.a > 0.0 && nd.b > 0.0)
        nd.s_v = std::pow(nd.a / nd.b, 1.0 / (p - 2.0));
    nd.residual = std::abs(nd.a - nd.b);
    return nd;
}

double fibering_s(const ScalarField& v, double p) {
    NehariData nd = nehari_data(v, p);
    if (nd.a <= 0.0 || nd.b <= 0.0)
        throw NotInWError("fibering_s: v has no plus part (v not in W)");
    return nd.s_v;
}

ScalarField project_nehari(const ScalarField& v, double p) {
    double s = fibering_s(v, p);
    const Grid& g = *v.grid;
    ScalarField out(g);
    for (int k = 0; k < g.n() * g.n(); ++k) {
        double x = v.values[k];
        out.values[k] = std::min(x, 1.0) + s * std::max(x - 1.0, 0.0);
    }
    return out;
}

double energy_on_ray(const ScalarField& v, double p, double s) {
    if (s < -1.0) throw RangeError("energy_on_ray: s < -1");
    SplitDirichlet sd = split_dirichlet_energy(v);
    if (s <= 0.0) {
        double t = 1.0 + s;
        return 0.5 * t * t * sd.minus;
    }
    double b = penalty_integral(v, p);
    return 0.5 * sd.minus + 0.5 * s * s * sd.plus - std::pow(s, p) / p * b +
           plus_measure(v);
}

double projected_energy(const ScalarField& v, double p) {
    SplitDirichlet sd = split_dirichlet_energy(v);
    double b = penalty_integral(v, p);
    if (sd.plus <= 0.0 || b <= 0.0)
        throw NotInWError("projected_energy: v has no plus part (v not in W)");
    double s = std::pow(sd.plus / b, 1.0 / (p - 2.0));
    return 0.5 * sd.minus + (0.5 - 1.0 / p) * s * s * sd.plus + plus_measure(v);
}

double nehari_residual(const ScalarField& v, double p) {
    NehariData nd = nehari_data(v, p);
    if (nd.a <= 0.0 && nd.b <= 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(nd.a - nd.b) / std::max({nd.a, nd.b, 1e-300});
}

PathRecord mountain_pass_path(const ScalarField& v, double p, int samples) {
    if (samples < 2) throw ConfigError("mountain_pass_path: need >= 2 samples");
    if (nehari_residual(v, p) > 1e-6)
        throw NotInWError("mountain_pass_path: v is not on the Nehari set");

    double s_bar = 2.0;
    bool found = false;
    for (int k = 0; k < 60; ++k) {
        if (energy_on_ray(v, p, s_bar) < 0.0) {
            found = true;
            break;
        }
        s_bar *= 2.0;
    }
    if (!found)
        throw PathError("mountain_pass_path: no negative ray energy within 60 doublings");

    PathRecord rec;
    rec.s_bar = s_bar;
    rec.t.resize(samples);
    rec.energy.resize(samples);
    rec.max_energy = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double t = static_cast<double>(i) / (samples - 1);
        double s = (s_bar + 1.0) * t - 1.0;
        rec.t[i] = t;
        rec.energy[i] = energy_on_ray(v, p, s);
        rec.max_energy = std::max(rec.max_energy, rec.energy[i]);
    }
    return rec;
}

}  // namespace pfb
