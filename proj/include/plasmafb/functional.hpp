#pragma once

// Mollifier pair (beta, B), the free-boundary energy J and its mollified
// companion J_eps, the nodal gradient of J_eps, and the domain-variation
// residual.
//
// The Dirichlet term of both energies is the split edge quadrature
//   sum_edges (delta min(u,1))^2 + (delta (u-1)_+)^2,
// which coincides with sum_edges (delta u)^2 except on edges crossing the
// u = 1 level.  Splitting makes the ray algebra of the nehari module exact
// in floating point: along v^- + s v^+ the minus part is fixed and the plus
// part scales linearly, so the fibering maximum and the projected energy are
// closed-form.  residual_eps is the exact nodal gradient of this quadrature.

#include <vector>

#include "plasmafb/grid.hpp"

namespace pfb {

// bump 30 t^2 (1-t)^2 on (0,1): range [0, 15/8] in [0,2], unit mass
double beta_mollifier(double t);
double beta_mollifier_prime(double t);
// primitive of beta_mollifier, clamped to [0,1] outside (0,1)
double cap_b(double t);

// max of beta_mollifier' over [0,1] (attained at t = (3 - sqrt 3)/6)
inline constexpr double kBetaPrimeMax = 5.773502691896258;

struct ProblemConfig {
    double p = 4.0;
    DomainShape shape = DomainShape::Disk;
    double extent = 1.0;
    int n = 129;
    double eps0 = 0.2;
    double factor = 0.5;
    double eps_min = 0.0;  // 0 = use max(2h, 0.003)
    double solve_tol = 1e-8;
    int max_outer = 500;

    void validate(double h) const;
    double resolved_eps_min(double h) const;
};

struct SplitDirichlet {
    double minus = 0.0;  // sum over edges of (delta min(u,1))^2
    double plus = 0.0;   // sum over edges of (delta (u-1)_+)^2
    double total() const { return minus + plus; }
};

SplitDirichlet split_dirichlet_energy(const ScalarField& u);

// h^2 * #{interior nodes with u > 1}
double plus_measure(const ScalarField& u);
// integral of (u-1)_+^p (exactly 0 where u <= 1, any real p)
double penalty_integral(const ScalarField& u, double p);
double positive_part_power(double v, double p);

double energy_J(const ScalarField& u, double p);
double energy_Jeps(const ScalarField& u, double p, double eps);

// nodal gradient of energy_Jeps divided by the cell area:
//   -Lap_h u + (1/eps) beta((u-1)/eps) - (u-1)_+^{p-1}
// where Lap_h is the Laplacian of the split quadrature (neighbor values are
// clamped to 1 across u = 1 crossings)
ScalarField residual_eps(const ScalarField& u, double p, double eps);

struct VectorField {
    ScalarField x;
    ScalarField y;
    explicit VectorField(const Grid& g) : x(g), y(g) {}
};

enum class VariationMode { Eps, Limit };

double domain_variation_residual(const ScalarField& u, double p,
                                 const VectorField& phi, VariationMode mode,
                                 double eps = 0.0);

}  // namespace pfb
