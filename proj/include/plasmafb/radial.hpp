#pragma once

// Independent 1-D shooting solution of the radial free boundary problem on a
// disk: integrate u'' + u'/r = -(u-1)_+^{p-1} outward from the center, match
// a harmonic log profile outside the u = 1 crossing, and bisect the center
// value until |g_in|^2 - |g_out|^2 = 2.

#include <vector>

#include "plasmafb/types.hpp"

namespace pfb {

struct RadialProfile {
    double center_value = 0.0;  // m = u(0)
    double fb_radius = 0.0;     // rho, where u = 1
    double slope_in = 0.0;      // u'(rho-) from the plasma side
    double slope_out = 0.0;     // u'(rho+) from the harmonic side
    double condition_residual = 0.0;
    double R = 1.0;
    std::vector<double> r;  // uniform sample radii, r[0] = 0, r.back() = R
    std::vector<double> u;

    double value(double rr) const;
};

struct RadialOracleOptions {
    double ode_step = 5e-6;  // RK4 step, in units of R
    int profile_samples = 10000;
    double m_lo = 1.0;
    double m_hi = 50.0;
};

RadialProfile radial_oracle(double p, double R, double tol,
                            const RadialOracleOptions& opts = {});

}  // namespace pfb
