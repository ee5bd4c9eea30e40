#pragma once

// Mountain-pass solves of J_eps by constrained minimization over the Nehari
// ray (golden-section ray maximization alternating with damped Newton steps
// on the residual), eps-continuation with warm starts, and the a priori
// bounds recorded as runtime monitors.

#include <functional>
#include <utility>
#include <vector>

#include "plasmafb/nehari.hpp"

namespace pfb {

struct SolveRecord {
    double eps = 0.0;
    int outer_iterations = 0;
    double level = 0.0;  // c_eps = J_eps(u_eps)
    double residual_inf = 0.0;
    double nehari_res = 0.0;
    double lipschitz = 0.0;
    double max_u = 0.0;
    double barrier_violation = 0.0;       // max(u - phi0)_+
    double plus_boundary_distance = 0.0;  // delta0 = dist({u>1}, boundary)
    std::vector<double> energy_history;   // J_eps after each accepted outer step
};

using SolveTrace = std::vector<SolveRecord>;

ScalarField initial_guess(const Grid& g, double p);

// maximize s -> J_eps(u^- + s u^+) and rescale u in place; returns s*
double ray_maximize(ScalarField& u, double p, double eps);

std::pair<ScalarField, SolveRecord> solve_eps(const ScalarField& u_init, double p,
                                              double eps, double tol,
                                              int max_outer = 500);

struct ContinuationResult {
    ScalarField u;
    SolveTrace trace;
};

std::vector<double> schedule_levels(double eps0, double factor, double eps_min);

using TraceObserver = std::function<void(const SolveRecord&)>;

ContinuationResult continuation_solve(const Grid& g, const ProblemConfig& cfg,
                                      const TraceObserver& observer = {});

double barrier_check(const ScalarField& u, double p);

struct LipschitzReport {
    double L = 0.0;
    // (r, max over balls B_{r/2} inside the domain of |grad u| * r)
    std::vector<std::pair<double, double>> interior_table;
};

LipschitzReport lipschitz_estimate(const ScalarField& u);

double energy_identity_check(const ScalarField& u, double p);

// distance from the nodal plus set to the domain boundary; +inf if empty
double plus_set_boundary_distance(const ScalarField& u);

}  // namespace pfb
