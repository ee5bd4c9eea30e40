#include "plasmafb/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace pfb {

namespace {

double linf(const ScalarField& f) {
    return f.values.abs().maxCoeff();
}

double l2(const ScalarField& f) {
    return std::sqrt((f.values * f.values).sum());
}

bool has_plus_part(const ScalarField& u) {
    for (int k : u.grid->interior_nodes())
        if (u.values[k] > 1.0) return true;
    return false;
}

// ray energy of J_eps as a 1-D function of the plus-part scale; the minus
// part and the plus-node set are fixed along the ray
struct RayEnergy {
    double half_minus = 0.0;
    double a = 0.0;  // plus Dirichlet energy at s = 1
    double b = 0.0;  // penalty integral at s = 1
    double p = 0.0;
    double eps = 0.0;
    double cell = 0.0;
    std::vector<double> plus_values;  // (u_k - 1) over plus nodes

    double value(double s) const {
        double bsum = 0.0;
        for (double t : plus_values) bsum += cap_b(s * t / eps);
        return half_minus + 0.5 * s * s * a - std::pow(s, p) / p * b + cell * bsum;
    }
    double deriv(double s) const {
        double m = 0.0;
        for (double t : plus_values) m += beta_mollifier(s * t / eps) * t / eps;
        return s * a - std::pow(s, p - 1.0) * b + cell * m;
    }
    double deriv2(double s) const {
        double m = 0.0;
        for (double t : plus_values)
            m += beta_mollifier_prime(s * t / eps) * t * t / (eps * eps);
        return a - (p - 1.0) * std::pow(s, p - 2.0) * b + cell * m;
    }
};

RayEnergy make_ray_energy(const ScalarField& u, double p, double eps) {
    RayEnergy re;
    SplitDirichlet sd = split_dirichlet_energy(u);
    re.half_minus = 0.5 * sd.minus;
    re.a = sd.plus;
    re.b = penalty_integral(u, p);
    re.p = p;
    re.eps = eps;
    re.cell = u.grid->cell_area();
    for (int k : u.grid->interior_nodes()) {
        double t = u.values[k] - 1.0;
        if (t > 0.0) re.plus_values.push_back(t);
    }
    return re;
}

}  // namespace

ScalarField initial_guess(const Grid& g, double p) {
    (void)p;
    const double m0 = 3.0;
    const double rho0 = g.extent() / 2.0;
    Vec2 c = g.center();
    ScalarField u(g);
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        Vec2 d = g.point(i, j) - c;
        double q = 1.0 - dot(d, d) / (rho0 * rho0);
        if (q > 0.0) u.values[k] = m0 * q * q;
    }
    return u;
}

double ray_maximize(ScalarField& u, double p, double eps) {
    if (!has_plus_part(u))
        throw TrivialSolutionError("ray_maximize: plus part vanished (restart advised)");
    RayEnergy re = make_ray_energy(u, p, eps);
    double s_v = std::pow(re.a / re.b, 1.0 / (p - 2.0));

    // golden section on [0, 4 s_v]
    double lo = 0.0, hi = 4.0 * s_v;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = re.value(x1), f2 = re.value(x2);
    for (int it = 0; it < 90 && hi - lo > 1e-13 * (1.0 + s_v); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = re.value(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = re.value(x1);
        }
    }
    double s = 0.5 * (lo + hi);
    // Newton polish so a fixed point stays a fixed point to roundoff
    for (int it = 0; it < 8; ++it) {
        double d1 = re.deriv(s), d2 = re.deriv2(s);
        if (d2 >= 0.0 || !std::isfinite(d2)) break;
        double step = d1 / d2;
        double snew = s - step;
        if (snew <= 0.0) break;
        s = snew;
        if (std::abs(step) < 1e-15 * (1.0 + s)) break;
    }

    if (std::abs(s - 1.0) > 1e-14) {
        for (int k : u.grid->interior_nodes()) {
            double t = u.values[k] - 1.0;
            if (t > 0.0) u.values[k] = 1.0 + s * t;
        }
    }
    return s;
}

namespace {

// plain 5-point Laplacian over interior unknowns; used as the SPD metric for
// the descent phase
Eigen::SparseMatrix<double> assemble_laplacian(const Grid& g) {
    const int n = g.n();
    const int m = g.interior_count();
    const double ih2 = 1.0 / (g.h() * g.h());
    const auto& eq = g.equation_numbers();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 5);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        int row = eq[k];
        trip.emplace_back(row, row, 4.0 * ih2);
        auto nb = [&](int a, int c) {
            int col = eq[g.index(a, c)];
            if (col >= 0) trip.emplace_back(row, col, -ih2);
        };
        nb(i + 1, j);
        nb(i - 1, j);
        nb(i, j + 1);
        nb(i, j - 1);
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

// linearization of residual_eps; couplings across the u = 1 level are zero
Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& u, double p,
                                              double eps) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const int m = g.interior_count();
    const double ih2 = 1.0 / (g.h() * g.h());
    const auto& eq = g.equation_numbers();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 5);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        int row = eq[k];
        double uc = u.values[k];
        bool plus = uc > 1.0;
        double diag = 4.0 * ih2 +
                      beta_mollifier_prime((uc - 1.0) / eps) / (eps * eps);
        if (uc > 1.0) diag -= (p - 1.0) * positive_part_power(uc - 1.0, p - 2.0);
        trip.emplace_back(row, row, diag);
        auto nb = [&](int a, int c) {
            int kk = g.index(a, c);
            int col = eq[kk];
            if (col < 0) return;
            if ((u.values[kk] > 1.0) == plus) trip.emplace_back(row, col, -ih2);
        };
        nb(i + 1, j);
        nb(i - 1, j);
        nb(i, j + 1);
        nb(i, j - 1);
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());
    return A;
}

struct Candidate {
    ScalarField u;
    double energy = 0.0;
    ScalarField residual;
    double r2 = 0.0;
    double rinf = 0.0;
};

Candidate evaluate(ScalarField&& u, double p, double eps) {
    Candidate c;
    c.u = std::move(u);
    ray_maximize(c.u, p, eps);
    c.energy = energy_Jeps(c.u, p, eps);
    c.residual = residual_eps(c.u, p, eps);
    c.r2 = l2(c.residual);
    c.rinf = linf(c.residual);
    return c;
}

// a trial whose plus part collapsed is a rejected step, not a failure
std::optional<Candidate> try_evaluate(ScalarField&& u, double p, double eps) {
    try {
        return evaluate(std::move(u), p, eps);
    } catch (const TrivialSolutionError&) {
        return std::nullopt;
    }
}

}  // namespace

std::pair<ScalarField, SolveRecord> solve_eps(const ScalarField& u_init, double p,
                                              double eps, double tol, int max_outer) {
    const Grid& g = *u_init.grid;
    if (eps < 2.0 * g.h())
        throw ConfigError("solve_eps: eps below 2h, interface band unresolvable");
    if (!has_plus_part(u_init))
        throw TrivialSolutionError("solve_eps: initial guess has no plus part");

    ScalarField u0 = u_init;
    enforce_zero_trace(u0);
    Candidate cur = evaluate(std::move(u0), p, eps);

    SolveRecord rec;
    rec.eps = eps;
    const auto& eq = g.equation_numbers();
    const int m = g.interior_count();
    const double grad_step =
        1.0 / (8.0 / (g.h() * g.h()) + 2.0 / (eps * eps) * kBetaPrimeMax);

    // The discrete problem has spurious high critical points (unresolved-band
    // relatives of the interior equation), so residual-chasing Newton from a
    // fresh start can be captured above the mountain pass level.  Descend the
    // ray-projected energy in the H^1 metric first; once the level has
    // dropped and progress stalls, Newton polishing is safe because every
    // accepted step keeps J_eps nonincreasing.
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> metric;
    metric.compute(assemble_laplacian(g));
    bool metric_ok = metric.info() == Eigen::Success;

    bool polish = false;
    int stalled = 0;
    int outer = 0;
    for (; outer < max_outer && cur.rinf > tol; ++outer) {
        double mono_slack = 1e-12 * (1.0 + std::abs(cur.energy));
        bool accepted = false;

        if (!polish && metric_ok) {
            Eigen::VectorXd rhs(m);
            for (int k : g.interior_nodes()) rhs[eq[k]] = cur.residual.values[k];
            Eigen::VectorXd d = metric.solve(rhs);
            double slope = 0.0;  // <G, d> in the cell-weighted pairing
            for (int k : g.interior_nodes())
                slope += cur.residual.values[k] * d[eq[k]];
            slope *= g.cell_area();
            double tau = 1.0;
            for (int bt = 0; bt < 40 && !accepted; ++bt) {
                ScalarField trial(g);
                trial.values = cur.u.values;
                for (int k : g.interior_nodes())
                    trial.values[k] -= tau * d[eq[k]];
                auto cand = try_evaluate(std::move(trial), p, eps);
                if (cand && cand->energy <= cur.energy - 1e-4 * tau * slope) {
                    double gain = cur.energy - cand->energy;
                    stalled = gain <= 1e-10 * (1.0 + std::abs(cur.energy))
                                  ? stalled + 1
                                  : 0;
                    cur = std::move(*cand);
                    accepted = true;
                }
                tau *= 0.5;
            }
            if (!accepted || stalled >= 2) polish = true;
            if (accepted) {
                rec.energy_history.push_back(cur.energy);
                continue;
            }
        }

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(assemble_jacobian(cur.u, p, eps));
        if (lu.info() == Eigen::Success) {
            Eigen::VectorXd rhs(m);
            for (int k : g.interior_nodes()) rhs[eq[k]] = -cur.residual.values[k];
            Eigen::VectorXd d = lu.solve(rhs);
            double lambda = 1.0;
            for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
                ScalarField trial(g);
                trial.values = cur.u.values;
                for (int k : g.interior_nodes()) trial.values[k] += lambda * d[eq[k]];
                auto cand = try_evaluate(std::move(trial), p, eps);
                if (cand) {
                    bool armijo = cand->r2 <= (1.0 - 1e-4 * lambda) * cur.r2;
                    if (armijo && cand->energy <= cur.energy + mono_slack) {
                        cur = std::move(*cand);
                        accepted = true;
                    }
                }
                lambda *= 0.5;
            }
        }

        if (!accepted) {
            // gradient descent on J_eps with the conservative pinned step
            double tau = grad_step;
            for (int bt = 0; bt < 60 && !accepted; ++bt) {
                ScalarField trial(g);
                trial.values = cur.u.values;
                for (int k : g.interior_nodes())
                    trial.values[k] -= tau * cur.residual.values[k];
                auto cand = try_evaluate(std::move(trial), p, eps);
                if (cand && cand->energy <= cur.energy + mono_slack) {
                    cur = std::move(*cand);
                    accepted = true;
                }
                tau *= 0.5;
            }
            // a raw-gradient step means Newton is not trustworthy yet
            if (accepted) polish = false;
        }

        if (!accepted)
            throw SolverError("solve_eps: no acceptable step at eps=" +
                                  std::to_string(eps) + ", residual " +
                                  std::to_string(cur.rinf),
                              cur.rinf);
        rec.energy_history.push_back(cur.energy);
    }

    if (cur.rinf > tol)
        throw SolverError("solve_eps: iteration cap exceeded at eps=" +
                              std::to_string(eps) + ", best residual " +
                              std::to_string(cur.rinf),
                          cur.rinf);

    rec.outer_iterations = outer;
    rec.level = cur.energy;
    rec.residual_inf = cur.rinf;
    rec.nehari_res = nehari_residual(cur.u, p);
    rec.lipschitz = lipschitz_estimate(cur.u).L;
    rec.max_u = cur.u.values.maxCoeff();
    rec.barrier_violation = std::max(0.0, barrier_check(cur.u, p));
    rec.plus_boundary_distance = plus_set_boundary_distance(cur.u);
    return {std::move(cur.u), std::move(rec)};
}

std::vector<double> schedule_levels(double eps0, double factor, double eps_min) {
    std::vector<double> levels;
    double e = eps0;
    while (e > eps_min * (1.0 + 1e-12)) {
        levels.push_back(e);
        e *= factor;
    }
    levels.push_back(eps_min);
    return levels;
}

ContinuationResult continuation_solve(const Grid& g, const ProblemConfig& cfg,
                                      const TraceObserver& observer) {
    cfg.validate(g.h());
    double floor = cfg.resolved_eps_min(g.h());
    std::vector<double> levels = schedule_levels(cfg.eps0, cfg.factor, floor);

    ContinuationResult res;
    res.u = initial_guess(g, cfg.p);
    for (double eps : levels) {
        auto [u, rec] = solve_eps(res.u, cfg.p, eps, cfg.solve_tol, cfg.max_outer);
        res.u = std::move(u);
        if (observer) observer(rec);
        res.trace.push_back(std::move(rec));
    }

    double cmin = std::numeric_limits<double>::infinity(), cmax = 0.0;
    for (const auto& r : res.trace) {
        cmin = std::min(cmin, r.level);
        cmax = std::max(cmax, r.level);
    }
    if (!(cmin > 0.0) || (cmax - cmin) > 0.20 * cmax)
        throw SolverError("continuation_solve: levels c_eps drift beyond 20%", cmax);
    return res;
}

double barrier_check(const ScalarField& u, double p) {
    const Grid& g = *u.grid;
    double a0 = 0.0;
    for (int k : g.interior_nodes())
        a0 = std::max(a0, positive_part_power(u.values[k] - 1.0, p - 1.0));
    ScalarField rhs(g);
    for (int k : g.interior_nodes()) rhs.values[k] = a0;
    ScalarField phi0 = dirichlet_solve(rhs);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k : g.interior_nodes())
        worst = std::max(worst, u.values[k] - phi0.values[k]);
    return worst;
}

LipschitzReport lipschitz_estimate(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    LipschitzReport rep;
    std::vector<double> gradmag(static_cast<size_t>(n) * n, 0.0);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        Vec2 gr = node_gradient(u, i, j);
        gradmag[k] = std::hypot(gr.x, gr.y);
        rep.L = std::max(rep.L, gradmag[k]);
    }
    for (double r = g.extent() / 2.0; r >= 8.0 * g.h(); r /= 2.0) {
        double best = 0.0;
        for (int k : g.interior_nodes()) {
            int i = k % n, j = k / n;
            if (g.boundary_distance(g.point(i, j)) >= r / 2.0)
                best = std::max(best, gradmag[k] * r);
        }
        rep.interior_table.emplace_back(r, best);
    }
    return rep;
}

double energy_identity_check(const ScalarField& u, double p) {
    double lhs = split_dirichlet_energy(u).total();
    double rhs = penalty_integral(u, p) - boundary_flux(u);
    return std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

double plus_set_boundary_distance(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    double d = std::numeric_limits<double>::infinity();
    for (int k : g.interior_nodes())
        if (u.values[k] > 1.0)
            d = std::min(d, g.boundary_distance(g.point(k % n, k / n)));
    return d;
}

}  // namespace pfb
