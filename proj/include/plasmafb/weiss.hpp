#pragma once

// Weiss density psi(r) = r^{-N} int_{B_r} [ |grad w|^2/2 + chi_{w>0} ]
//                        - r^{-1-N}/2 int_{dB_r} w^2,
// its deficit integral, the almost-monotonicity check, and the 1-homogeneity
// test on blow-up fields (N = 2, w = u - 1 recentered).

#include <vector>

#include "plasmafb/grid.hpp"

namespace pfb {

double weiss_density(const ScalarField& u, Vec2 x0, double r);

double weiss_deficit(const ScalarField& u, Vec2 x0, double r0, double r1);

struct WeissProfile {
    Vec2 center;
    std::vector<double> radii;
    std::vector<double> psi;
    std::vector<double> deficits;   // one per consecutive radius pair
    std::vector<double> slacks;     // c_slack * (h/r_k + r_{k+1}^p)
    std::vector<bool> step_pass;
    double c_slack = 5.0;
    bool pass = false;
};

WeissProfile monotonicity_report(const ScalarField& u, Vec2 x0,
                                 const std::vector<double>& radii, double p,
                                 double c_slack = 5.0);

// max over nodes y in the unit ball and lambda in {1/2, 1/4} of
// |W(lambda y) - lambda W(y)|
double homogeneity_test(const ScalarField& W);

}  // namespace pfb
