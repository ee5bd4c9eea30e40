#pragma once

// Extraction of F(u) = boundary of {u > 1} by marching squares, and the
// geometric verification quantities: one-sided slopes, nondegeneracy and sup
// growth constants, density ratios, perimeter densities, level-set energy,
// blow-up rescalings, and two-slope flatness fits.

#include <memory>
#include <vector>

#include "plasmafb/grid.hpp"

namespace pfb {

struct FbVertex {
    Vec2 pos;
    Vec2 normal;  // unit, pointing into {u > 1}
    double alpha = 0.0;
    double beta = 0.0;
    bool slopes_valid = false;
    int loop = 0;
};

struct FreeBoundaryCurve {
    std::vector<std::vector<Vec2>> loops;  // closed polylines, closing edge implied
    std::vector<FbVertex> vertices;
    double total_length = 0.0;
    int component_count() const { return static_cast<int>(loops.size()); }
};

FreeBoundaryCurve extract_free_boundary(const ScalarField& u);

// least-squares slopes of the difference quotients (u(x0 +- k h nu) - 1)/(kh),
// k = 1..4, extrapolated to the vertex; throws RangeError when the stencil
// leaves the domain
std::pair<double, double> one_sided_slopes(const ScalarField& u, Vec2 vertex,
                                           Vec2 nu);

double nondegeneracy_constant(const ScalarField& u, int max_samples = 1 << 22);

double sup_growth_constant(const ScalarField& u, const FreeBoundaryCurve& fb);

struct DensityRow {
    int vertex = 0;
    double r = 0.0;
    double plus_fraction = 0.0;
    double perimeter_density = 0.0;
};

using DensityTable = std::vector<DensityRow>;

DensityTable density_ratios(const ScalarField& u, const FreeBoundaryCurve& fb);
DensityTable perimeter_density(const ScalarField& u, const FreeBoundaryCurve& fb);

// (value, value / (tau r^{N-1}))
std::pair<double, double> level_set_energy(const ScalarField& u, Vec2 x0, double r,
                                           double tau);

struct BlowUpField {
    std::shared_ptr<const Grid> grid;  // lattice over [-1,1]^2
    ScalarField w;
};

BlowUpField blow_up(const ScalarField& u, Vec2 x0, double r, int m);

struct FlatnessRow {
    double r = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double angle = 0.0;
    double misfit = 0.0;  // sup norm on the unit ball
};

std::vector<FlatnessRow> flatness_profile(const ScalarField& u, Vec2 x0,
                                          const std::vector<double>& radii,
                                          int m = 64, int directions = 360);

}  // namespace pfb
