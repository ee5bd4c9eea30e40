#include "plasmafb/radial.hpp"

#include <cmath>
#include <limits>

namespace pfb {

namespace {

struct ShotResult {
    bool crossed = false;
    double rho = 0.0;
    double slope_in = 0.0;
    // stored trajectory for profile extraction: (r, u) at every step
    std::vector<double> rs, us;
};

double source(double u, double p) {
    return u > 1.0 ? std::pow(u - 1.0, p - 1.0) : 0.0;
}

// RK4 on [u, v=u'] with v' = -source(u) - v/r (v'(0) = -source/2 by symmetry)
ShotResult shoot(double m, double p, double R, double hstep, bool keep_trajectory) {
    ShotResult out;
    auto rhs = [&](double r, double u, double v, double& du, double& dv) {
        du = v;
        dv = (r == 0.0) ? -0.5 * source(u, p) : -source(u, p) - v / r;
    };
    double r = 0.0, u = m, v = 0.0;
    if (keep_trajectory) {
        out.rs.reserve(static_cast<size_t>(R / hstep) + 2);
        out.us.reserve(out.rs.capacity());
        out.rs.push_back(r);
        out.us.push_back(u);
    }
    while (r < R) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        rhs(r, u, v, k1u, k1v);
        rhs(r + hstep / 2, u + hstep / 2 * k1u, v + hstep / 2 * k1v, k2u, k2v);
        rhs(r + hstep / 2, u + hstep / 2 * k2u, v + hstep / 2 * k2v, k3u, k3v);
        rhs(r + hstep, u + hstep * k3u, v + hstep * k3v, k4u, k4v);
        double un = u + hstep / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
        double vn = v + hstep / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        double rn = r + hstep;
        if (un <= 1.0) {
            // cubic Hermite crossing keeps the shooting function smooth in m
            double p0 = u - 1.0, p1 = un - 1.0;
            double d0 = hstep * v, d1 = hstep * vn;
            auto hval = [&](double t) {
                double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
                double h10 = t * (1 - t) * (1 - t);
                double h01 = t * t * (3 - 2 * t);
                double h11 = t * t * (t - 1);
                return h00 * p0 + h10 * d0 + h01 * p1 + h11 * d1;
            };
            auto hder = [&](double t) {
                double g00 = 6 * t * t - 6 * t;
                double g10 = 3 * t * t - 4 * t + 1;
                double g01 = 6 * t - 6 * t * t;
                double g11 = 3 * t * t - 2 * t;
                return g00 * p0 + g10 * d0 + g01 * p1 + g11 * d1;
            };
            double theta = p0 / (p0 - p1);
            for (int it = 0; it < 4; ++it) {
                double f = hval(theta), df = hder(theta);
                if (df == 0.0) break;
                theta -= f / df;
                theta = std::min(1.0, std::max(0.0, theta));
            }
            out.crossed = true;
            out.rho = r + theta * hstep;
            out.slope_in = hder(theta) / hstep;
            if (keep_trajectory) {
                out.rs.push_back(out.rho);
                out.us.push_back(1.0);
            }
            return out;
        }
        r = rn;
        u = un;
        v = vn;
        if (keep_trajectory) {
            out.rs.push_back(r);
            out.us.push_back(u);
        }
    }
    return out;
}

// |g_in|^2 - |g_out|^2 - 2; large negative when the crossing leaves the disk
double shoot_condition(double m, double p, double R, double hstep, ShotResult* keep) {
    ShotResult sr = shoot(m, p, R, hstep, keep != nullptr);
    if (keep) *keep = sr;
    if (!sr.crossed || sr.rho >= R * (1.0 - 1e-9))
        return -std::numeric_limits<double>::max();
    double g_out = -1.0 / (sr.rho * std::log(R / sr.rho));
    return sr.slope_in * sr.slope_in - g_out * g_out - 2.0;
}

}  // namespace

double RadialProfile::value(double rr) const {
    if (rr <= 0.0) return u.front();
    if (rr >= R) return u.back();
    double f = rr / R * (static_cast<double>(r.size()) - 1.0);
    size_t i = std::min(static_cast<size_t>(f), r.size() - 2);
    double t = f - static_cast<double>(i);
    return (1.0 - t) * u[i] + t * u[i + 1];
}

RadialProfile radial_oracle(double p, double R, double tol,
                            const RadialOracleOptions& opts) {
    if (!(p > 2.0)) throw ConfigError("radial_oracle: p must be > 2");
    if (!(R > 0.0) || !(tol > 0.0)) throw ConfigError("radial_oracle: bad R or tol");
    const double hstep = opts.ode_step * R;

    // bracket the root of the shooting condition over m
    const int scan = 98;
    double m_lo = 0.0, m_hi = 0.0;
    double f_prev = 0.0;
    bool have_prev = false, bracketed = false;
    for (int i = 1; i <= scan && !bracketed; ++i) {
        double m = opts.m_lo + (opts.m_hi - opts.m_lo) * i / scan;
        double f = shoot_condition(m, p, R, hstep, nullptr);
        if (have_prev && f_prev < 0.0 && f >= 0.0) {
            m_lo = opts.m_lo + (opts.m_hi - opts.m_lo) * (i - 1) / scan;
            m_hi = m;
            bracketed = true;
        }
        f_prev = f;
        have_prev = true;
    }
    if (!bracketed)
        throw OracleError("radial_oracle: no sign change of the shooting function "
                          "over the bracket");

    double m_mid = 0.5 * (m_lo + m_hi), f_mid = 0.0;
    for (int it = 0; it < 200; ++it) {
        m_mid = 0.5 * (m_lo + m_hi);
        f_mid = shoot_condition(m_mid, p, R, hstep, nullptr);
        if (std::abs(f_mid) <= tol) break;
        if (f_mid < 0.0)
            m_lo = m_mid;
        else
            m_hi = m_mid;
    }
    if (std::abs(f_mid) > tol)
        throw OracleError("radial_oracle: bisection stalled, condition residual " +
                          std::to_string(f_mid));

    ShotResult sr;
    shoot_condition(m_mid, p, R, hstep, &sr);

    RadialProfile prof;
    prof.center_value = m_mid;
    prof.fb_radius = sr.rho;
    prof.slope_in = sr.slope_in;
    prof.slope_out = -1.0 / (sr.rho * std::log(R / sr.rho));
    prof.condition_residual = f_mid;
    prof.R = R;
    prof.r.resize(opts.profile_samples);
    prof.u.resize(opts.profile_samples);
    size_t cursor = 0;
    for (int i = 0; i < opts.profile_samples; ++i) {
        double rr = R * i / (opts.profile_samples - 1.0);
        prof.r[i] = rr;
        if (rr <= sr.rho) {
            while (cursor + 1 < sr.rs.size() && sr.rs[cursor + 1] < rr) ++cursor;
            double r0 = sr.rs[cursor], r1 = sr.rs[cursor + 1];
            double t = (rr - r0) / (r1 - r0);
            prof.u[i] = (1.0 - t) * sr.us[cursor] + t * sr.us[cursor + 1];
        } else {
            prof.u[i] = std::log(R / rr) / std::log(R / sr.rho);
        }
    }
    return prof;
}

}  // namespace pfb
