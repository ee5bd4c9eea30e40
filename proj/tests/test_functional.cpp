#include <doctest.h>

#include <cmath>

#include "plasmafb/functional.hpp"
#include "test_helpers.hpp"

using namespace pfb;

namespace {

// adaptive Simpson, independent oracle for integrals of beta
double simpson(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double tol, int depth) {
    double c = 0.5 * (a + b);
    double left = simpson(f, a, c), right = simpson(f, c, b);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive(f, a, c, left, tol / 2, depth - 1) +
           adaptive(f, c, b, right, tol / 2, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-13) {
    return adaptive(f, a, b, simpson(f, a, b), tol, 40);
}

// energy terms that move when a single node value changes: the four incident
// edges plus the node's own cell terms (a global energy difference at step
// 1e-6 would drown in roundoff)
double local_energy(const ScalarField& u, int k, double p, double eps) {
    const Grid& g = *u.grid;
    const int n = g.n();
    int i = k % n, j = k / n;
    double acc = 0.0;
    auto edge = [&](int a, int b, int ka, int kb) {
        if (a < 0 || b < 0 || a >= n || b >= n) return;
        if (g.kind(ka) != NodeKind::Interior && g.kind(kb) != NodeKind::Interior)
            return;
        double va = u.values[ka], vb = u.values[kb];
        double dm = std::min(va, 1.0) - std::min(vb, 1.0);
        double dp = std::max(va - 1.0, 0.0) - std::max(vb - 1.0, 0.0);
        acc += 0.5 * (dm * dm + dp * dp);
    };
    edge(i + 1, j, k, g.index(i + 1, j));
    edge(i - 1, j, k, g.index(i - 1, j));
    edge(i, j + 1, k, g.index(i, j + 1));
    edge(i, j - 1, k, g.index(i, j - 1));
    double uc = u.values[k];
    acc += g.cell_area() * (cap_b((uc - 1.0) / eps) -
                            positive_part_power(uc - 1.0, p) / p);
    return acc;
}

}  // namespace

TEST_SUITE_BEGIN("functional");

TEST_CASE("beta: support, peak, range, unit mass") {
    CHECK(beta_mollifier(-1.0) == 0.0);
    CHECK(beta_mollifier(0.0) == 0.0);
    CHECK(beta_mollifier(1.0) == 0.0);
    CHECK(beta_mollifier(2.0) == 0.0);
    CHECK(beta_mollifier(0.5) == doctest::Approx(1.875).epsilon(1e-15));

    for (int i = 0; i <= 10000; ++i) {
        double t = static_cast<double>(i) / 10000.0;
        REQUIRE(beta_mollifier(t) >= 0.0);
        REQUIRE(beta_mollifier(t) <= 2.0);
    }
    double mass = integrate_1d([](double t) { return beta_mollifier(t); }, 0, 1);
    CHECK(std::abs(mass - 1.0) < 1e-10);
}

TEST_CASE("beta prime bound constant") {
    double worst = 0.0;
    for (int i = 0; i <= 100000; ++i)
        worst = std::max(worst, std::abs(beta_mollifier_prime(i / 100000.0)));
    CHECK(worst <= kBetaPrimeMax * (1 + 1e-12));
    CHECK(worst > kBetaPrimeMax - 1e-4);
}

TEST_CASE("cap_b: endpoints, symmetry point, quadrature oracle, monotone") {
    CHECK(cap_b(0.0) == 0.0);
    CHECK(cap_b(1.0) == 1.0);
    CHECK(cap_b(-3.0) == 0.0);
    CHECK(cap_b(7.0) == 1.0);
    CHECK(cap_b(0.5) == doctest::Approx(0.5).epsilon(1e-14));

    double q = integrate_1d([](double t) { return beta_mollifier(t); }, 0, 0.25);
    CHECK(std::abs(cap_b(0.25) - q) < 1e-10);

    double prev = -1.0;
    for (int i = 0; i <= 10000; ++i) {
        double t = -0.5 + 2.0 * i / 10000.0;
        double v = cap_b(t);
        REQUIRE(v >= prev - 1e-15);
        prev = v;
    }
}

TEST_CASE("energy_J on simple fields") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    ScalarField zero(g);
    CHECK(energy_J(zero, 4.0) == 0.0);

    // u <= 1 everywhere: both potential terms vanish
    ScalarField low = test::fill(g, [](double x, double y) {
        return 0.8 * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    CHECK(energy_J(low, 4.0) ==
          doctest::Approx(0.5 * split_dirichlet_energy(low).total()).epsilon(1e-14));
}

TEST_CASE("energy_J matches a per-node brute-force oracle") {
    Grid g = build_grid(DomainShape::Disk, 1.0, 65);
    double p = 3.2;
    ScalarField u = test::fill(g, [&](double x, double y) {
        double r2 = x * x + y * y;
        return 2.2 * std::max(0.0, 1.0 - r2 / 0.36) ;
    });
    // independent summation over every lattice edge and node
    const int n = g.n();
    double dir = 0.0;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            auto term = [&](int i2, int j2) {
                if (i2 >= n || j2 >= n) return;
                int ka = g.index(i, j), kb = g.index(i2, j2);
                if (g.kind(ka) != NodeKind::Interior &&
                    g.kind(kb) != NodeKind::Interior)
                    return;
                double va = u.values[ka], vb = u.values[kb];
                double dm = std::min(va, 1.0) - std::min(vb, 1.0);
                double dp = std::max(va - 1.0, 0.0) - std::max(vb - 1.0, 0.0);
                dir += dm * dm + dp * dp;
            };
            term(i + 1, j);
            term(i, j + 1);
        }
    double meas = 0.0, pen = 0.0;
    for (int k : g.interior_nodes()) {
        if (u.values[k] > 1.0) meas += g.cell_area();
        if (u.values[k] > 1.0) pen += std::pow(u.values[k] - 1.0, p) * g.cell_area();
    }
    double oracle = 0.5 * dir + meas - pen / p;
    CHECK(energy_J(u, p) == doctest::Approx(oracle).epsilon(1e-13));
}

TEST_CASE("energy_Jeps coincides with energy_J in the stated regimes") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    ScalarField low = test::fill(g, [](double x, double y) {
        return 0.9 * std::sin(M_PI * x) * std::sin(M_PI * y);
    });
    CHECK(energy_Jeps(low, 4.0, 0.1) == doctest::Approx(energy_J(low, 4.0)).epsilon(1e-14));

    // plateau field: u = 1.5 on its whole positivity set, eps below the gap
    ScalarField plateau = test::fill(g, [](double x, double y) {
        return (std::abs(x - 0.5) < 0.2 && std::abs(y - 0.5) < 0.2) ? 1.5 : 0.0;
    });
    CHECK(energy_Jeps(plateau, 4.0, 0.3) ==
          doctest::Approx(energy_J(plateau, 4.0)).epsilon(1e-14));

    CHECK_THROWS_AS(energy_Jeps(low, 4.0, 0.0), ConfigError);
    CHECK_THROWS_AS(energy_Jeps(low, 4.0, -1.0), ConfigError);
}

TEST_CASE("energy_Jeps <= energy_J for random zero-trace fields") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(101);
    for (int t = 0; t < 100; ++t) {
        ScalarField u = test::random_smooth_field(g, rng);
        double eps = rng.uniform(0.02, 0.5);
        double je = energy_Jeps(u, 4.0, eps);
        double j = energy_J(u, 4.0);
        REQUIRE(je <= j + 1e-12 * (1.0 + std::abs(j)));
    }
}

TEST_CASE("energy_Jeps converges to energy_J as eps drops") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(103);
    ScalarField u = test::random_w_field(g, rng);
    double J = energy_J(u, 4.0);
    double gap = std::numeric_limits<double>::infinity();
    for (int k : g.interior_nodes())
        if (u.values[k] > 1.0) gap = std::min(gap, u.values[k] - 1.0);
    REQUIRE(std::isfinite(gap));
    REQUIRE(gap > 0.0);
    double prev = std::abs(energy_Jeps(u, 4.0, 0.4) - J);
    for (double eps : {0.1, 0.01}) {
        double d = std::abs(energy_Jeps(u, 4.0, eps) - J);
        CHECK(d <= prev + 1e-14);
        prev = d;
    }
    // once eps is below the smallest plus excess, the B term saturates
    CHECK(energy_Jeps(u, 4.0, 0.5 * gap) == doctest::Approx(J).epsilon(1e-14));
}

TEST_CASE("residual_eps vanishes on the zero field and harmonic sublevels") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    ScalarField zero(g);
    ScalarField rz = residual_eps(zero, 4.0, 0.1);
    CHECK(rz.values.abs().maxCoeff() == 0.0);

    ScalarField lin = test::fill(g, [](double x, double) { return 0.9 * x; });
    ScalarField rl = residual_eps(lin, 4.0, 0.1);
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        bool away = i > 1 && j > 1 && i < g.n() - 2 && j < g.n() - 2;
        if (away) REQUIRE(rl.values[k] == doctest::Approx(0.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(residual_eps(zero, 4.0, -0.1), ConfigError);
}

TEST_CASE("residual_eps equals the finite-difference energy gradient") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    test::Rng rng(107);
    const double delta = 1e-6;
    for (int field = 0; field < 10; ++field) {
        ScalarField u = test::random_smooth_field(g, rng);
        double p = 2.5 + rng.uniform(0.0, 2.5);
        double eps = rng.uniform(0.05, 0.4);
        ScalarField G = residual_eps(u, p, eps);
        double gmax = G.values.abs().maxCoeff();
        REQUIRE(gmax > 0.0);
        int checked = 0;
        for (int t = 0; t < 200; ++t) {
            int k = g.interior_nodes()[rng.next() % g.interior_nodes().size()];
            if (std::abs(u.values[k] - 1.0) < 1e-4) continue;  // kink of (.)_+
            ScalarField up = u, um = u;
            up.values[k] += delta;
            um.values[k] -= delta;
            double fd = (local_energy(up, k, p, eps) - local_energy(um, k, p, eps)) /
                        (2.0 * delta * g.cell_area());
            REQUIRE(std::abs(fd - G.values[k]) <= 1e-6 * gmax);
            ++checked;
        }
        REQUIRE(checked > 100);
    }
}

TEST_CASE("domain variation residual: zero field and translation symmetry") {
    Grid g = build_grid(DomainShape::Square, 1.0, 65);
    VectorField phi(g);
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        Vec2 q = g.point(i, j);
        double d = g.boundary_distance(q);
        if (d <= 3.0 * g.h()) continue;
        phi.x.values[k] = std::sin(M_PI * q.x) * std::sin(M_PI * q.y);
        phi.y.values[k] = std::cos(M_PI * q.x) * std::sin(M_PI * q.y);
    }
    ScalarField zero(g);
    CHECK(domain_variation_residual(zero, 4.0, phi, VariationMode::Limit) == 0.0);
    CHECK(domain_variation_residual(zero, 4.0, phi, VariationMode::Eps, 0.1) == 0.0);

    // 1-D profile constant in y against a purely vertical variation: the
    // column sums of central differences of a compactly supported phi telescope
    ScalarField prof = test::fill(g, [](double x, double) {
        return 1.4 * std::sin(M_PI * x);
    });
    VectorField vert(g);
    for (int k : g.interior_nodes()) {
        int i = k % g.n(), j = k / g.n();
        Vec2 q = g.point(i, j);
        if (g.boundary_distance(q) <= 3.0 * g.h()) continue;
        vert.y.values[k] = std::sin(2 * M_PI * q.x) * std::sin(2 * M_PI * q.y);
    }
    double r = domain_variation_residual(prof, 4.0, vert, VariationMode::Limit);
    CHECK(std::abs(r) < 1e-11);

    // support touching the boundary is rejected
    VectorField bad(g);
    for (int k : g.interior_nodes()) bad.x.values[k] = 1.0;
    CHECK_THROWS_AS(
        domain_variation_residual(prof, 4.0, bad, VariationMode::Limit),
        ConfigError);
}

TEST_SUITE_END();
