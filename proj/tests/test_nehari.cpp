#include <doctest.h>

#include <cmath>
#include <functional>

#include "plasmafb/nehari.hpp"
#include "test_helpers.hpp"

using namespace pfb;

namespace {

// independent 1-D search oracle for the fibering maximum
double golden_argmax(const std::function<double(double)>& f, double lo, double hi,
                     double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE_BEGIN("nehari");

TEST_CASE("decompose splits and reconstructs exactly") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    ScalarField zero(g);
    RayDecomposition dz = decompose(zero);
    CHECK(dz.v_plus.values.abs().maxCoeff() == 0.0);
    CHECK((dz.v_minus.values - zero.values).abs().maxCoeff() == 0.0);

    test::Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        ScalarField v = test::random_smooth_field(g, rng, 3.0);
        RayDecomposition d = decompose(v);
        for (int k = 0; k < g.n() * g.n(); ++k) {
            REQUIRE(d.v_minus.values[k] + d.v_plus.values[k] == v.values[k]);
            REQUIRE(d.v_plus.values[k] >= 0.0);
            REQUIRE(d.v_minus.values[k] <= 1.0);
        }
    }
    // a single node at 3 splits into 1 + 2
    ScalarField spike(g);
    spike.values[g.index(32, 32)] = 3.0;
    RayDecomposition ds = decompose(spike);
    CHECK(ds.v_minus.values[g.index(32, 32)] == 1.0);
    CHECK(ds.v_plus.values[g.index(32, 32)] == 2.0);
}

TEST_CASE("fibering_s closed form and oracle agreement") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(37);

    // numerator 2A, denominator A, p = 4 -> sqrt 2
    CHECK(std::pow(2.0, 1.0 / (4.0 - 2.0)) == doctest::Approx(std::sqrt(2.0)));

    // golden-section oracle on the ray energy, p = 3.5
    for (int t = 0; t < 5; ++t) {
        ScalarField w = test::random_w_field(g, rng);
        double p = 3.5;
        double s_v = fibering_s(w, p);
        double s_gs = golden_argmax(
            [&](double s) { return energy_on_ray(w, p, s); }, 0.0, 8.0 * s_v, 1e-9);
        REQUIRE(std::abs(s_gs - s_v) < 1e-6);
    }

    ScalarField low = test::fill(g, [](double x, double) { return 0.5 * x; });
    CHECK_THROWS_AS(fibering_s(low, 4.0), NotInWError);
}

TEST_CASE("projection: fixed point on M, scale invariance, idempotence") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(41);
    for (int t = 0; t < 20; ++t) {
        ScalarField v = test::random_w_field(g, rng);
        double p = 2.6 + rng.uniform(0.0, 2.0);
        ScalarField pv = project_nehari(v, p);
        CHECK(nehari_residual(pv, p) <= 1e-10);
        double scale_ref = std::max(1.0, pv.values.abs().maxCoeff());

        // pi(pi(v)) = pi(v)
        ScalarField ppv = project_nehari(pv, p);
        REQUIRE((ppv.values - pv.values).abs().maxCoeff() <= 1e-12 * scale_ref);

        // pi(v^- + t v^+) = pi(v)
        for (double scale : {0.1, 1.0, 10.0}) {
            ScalarField vs(g);
            for (int k = 0; k < g.n() * g.n(); ++k) {
                double x = v.values[k];
                vs.values[k] = std::min(x, 1.0) + scale * std::max(x - 1.0, 0.0);
            }
            ScalarField pvs = project_nehari(vs, p);
            REQUIRE((pvs.values - pv.values).abs().maxCoeff() <= 1e-12 * scale_ref);
        }
    }
}

TEST_CASE("energy_on_ray: endpoints, jump at zero, value at one") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(43);
    ScalarField v = test::random_w_field(g, rng);
    double p = 4.0;

    CHECK(energy_on_ray(v, p, -1.0) == 0.0);
    CHECK_THROWS_AS(energy_on_ray(v, p, -1.5), RangeError);

    double at0 = energy_on_ray(v, p, 0.0);
    double just_above = energy_on_ray(v, p, 1e-300);
    CHECK(just_above - at0 == doctest::Approx(plus_measure(v)).epsilon(1e-12));

    CHECK(energy_on_ray(v, p, 1.0) == doctest::Approx(energy_J(v, p)).epsilon(1e-14));
}

TEST_CASE("fibering monotonicity along the ray") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(47);
    ScalarField v = test::random_w_field(g, rng);
    double p = 3.0;
    double s_v = fibering_s(v, p);
    double prev = energy_on_ray(v, p, s_v / 200.0);
    for (int i = 2; i <= 200; ++i) {
        double s = s_v * i / 200.0;
        double e = energy_on_ray(v, p, s);
        REQUIRE(e > prev);
        prev = e;
    }
    prev = energy_on_ray(v, p, s_v);
    for (int i = 1; i <= 200; ++i) {
        double s = s_v * (1.0 + 3.0 * i / 200.0);
        double e = energy_on_ray(v, p, s);
        REQUIRE(e < prev);
        prev = e;
    }
}

TEST_CASE("projected_energy equals the composition with the projection") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(53);
    for (int t = 0; t < 20; ++t) {
        ScalarField v = test::random_w_field(g, rng);
        double p = 2.7 + rng.uniform(0.0, 2.0);
        double pe = projected_energy(v, p);
        double je = energy_J(project_nehari(v, p), p);
        REQUIRE(std::abs(pe - je) <= 1e-10 * std::max(std::abs(pe), 1.0));
        REQUIRE(pe >= plus_measure(v));
        REQUIRE(pe > 0.0);
    }
    // v on M: projected energy is just J(v)
    ScalarField v = test::random_w_field(g, rng);
    ScalarField m = project_nehari(v, 4.0);
    CHECK(projected_energy(m, 4.0) ==
          doctest::Approx(energy_J(m, 4.0)).epsilon(1e-12));
}

TEST_CASE("nehari_residual values") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(59);
    ScalarField v = test::random_w_field(g, rng);
    ScalarField m = project_nehari(v, 4.0);
    CHECK(nehari_residual(m, 4.0) <= 1e-10);

    // scaling the plus part of a Nehari point by sqrt 2 gives a = 2b at p = 4
    ScalarField scaled(g);
    double t = std::sqrt(2.0);
    for (int k = 0; k < g.n() * g.n(); ++k) {
        double x = m.values[k];
        scaled.values[k] = std::min(x, 1.0) + t * std::max(x - 1.0, 0.0);
    }
    NehariData base = nehari_data(m, 4.0);
    NehariData ns = nehari_data(scaled, 4.0);
    CHECK(ns.a == doctest::Approx(2.0 * base.a).epsilon(1e-12));
    CHECK(ns.b == doctest::Approx(4.0 * base.b).epsilon(1e-12));
    CHECK(nehari_residual(scaled, 4.0) == doctest::Approx(0.5).epsilon(1e-9));

    ScalarField low(g);
    CHECK(std::isinf(nehari_residual(low, 4.0)));
}

TEST_CASE("mountain_pass_path through a Nehari point") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(61);
    ScalarField v = project_nehari(test::random_w_field(g, rng), 4.0);
    PathRecord rec = mountain_pass_path(v, 4.0, 801);
    CHECK(rec.energy.front() == 0.0);
    CHECK(rec.energy.back() < 0.0);
    double jv = energy_J(v, 4.0);
    CHECK(rec.max_energy <= jv + 1e-12);
    CHECK(rec.max_energy >= jv - jv * 0.02);  // sampling resolution

    ScalarField off = test::random_w_field(g, rng);
    if (nehari_residual(off, 4.0) > 1e-6)
        CHECK_THROWS_AS(mountain_pass_path(off, 4.0, 11), NotInWError);
}

TEST_CASE("ray energy turns negative within 60 doublings") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(67);
    for (int t = 0; t < 10; ++t) {
        ScalarField v = test::random_w_field(g, rng);
        double p = 2.5 + rng.uniform(0.0, 2.0);
        double s_v = fibering_s(v, p);
        bool negative = false;
        for (int k = 0; k <= 60 && !negative; ++k)
            negative = energy_on_ray(v, p, std::pow(2.0, k) * s_v) < 0.0;
        REQUIRE(negative);
    }
}

TEST_SUITE_END();
