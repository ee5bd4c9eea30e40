#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "plasmafb/grid.hpp"

namespace pfb::test {

// xorshift-based deterministic generator, independent of the library
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    std::uint64_t next() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return lo + (hi - lo) * (next() >> 11) * 0x1.0p-53;
    }
};

inline ScalarField fill(const Grid& g, const std::function<double(double, double)>& f) {
    ScalarField u(g);
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        u.values[k] = f(g.x(i), g.y(j));
    }
    return u;
}

// smooth random zero-trace field: a few random bumps, values straddling 1
inline ScalarField random_smooth_field(const Grid& g, Rng& rng, double amplitude = 2.5,
                                       int bumps = 6) {
    ScalarField u(g);
    double R = g.extent();
    Vec2 c = g.center();
    double halfspan = (g.shape() == DomainShape::Disk) ? R : R / 2.0;
    for (int b = 0; b < bumps; ++b) {
        Vec2 p{c.x + rng.uniform(-0.5, 0.5) * halfspan,
               c.y + rng.uniform(-0.5, 0.5) * halfspan};
        double w = rng.uniform(0.15, 0.45) * halfspan;
        double a = rng.uniform(-1.0, 1.0) * amplitude;
        for (int k : g.interior_nodes()) {
            int i = k % g.n(), j = k / g.n();
            Vec2 d = g.point(i, j) - p;
            u.values[k] += a * std::exp(-dot(d, d) / (2 * w * w));
        }
    }
    // taper to satisfy the zero-trace invariant smoothly
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        double d = g.boundary_distance(g.point(i, j));
        double t = std::min(1.0, d / (0.15 * halfspan));
        u.values[k] *= t * t * (3 - 2 * t);
    }
    return u;
}

// random field guaranteed to be in W (plus and minus parts both nonzero, the
// plus excess bounded away from zero so fibering scales stay moderate)
inline ScalarField random_w_field(const Grid& g, Rng& rng) {
    for (int tries = 0; tries < 256; ++tries) {
        ScalarField u = random_smooth_field(g, rng);
        double top = 0.0;
        bool minus = false;
        for (int k : g.interior_nodes()) {
            top = std::max(top, u.values[k]);
            if (u.values[k] < 1.0 && u.values[k] != 0.0) minus = true;
        }
        if (top >= 1.25 && minus) return u;
    }
    throw std::runtime_error("random_w_field: generator failed to hit W");
}

}  // namespace pfb::test
