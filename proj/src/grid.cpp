#include "plasmafb/grid.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

namespace pfb {

Grid Grid::build(DomainShape shape, double extent, int n) {
    if (n < 65 || n % 2 == 0)
        throw ConfigError("grid: n must be odd and >= 65, got " + std::to_string(n));
    if (extent <= 0.0)
        throw ConfigError("grid: extent must be positive");

    Grid g;
    g.shape_ = shape;
    g.extent_ = extent;
    g.n_ = n;
    if (shape == DomainShape::Square) {
        g.h_ = extent / (n - 1);
        g.x0_ = 0.0;
        g.y0_ = 0.0;
        g.center_ = {extent / 2, extent / 2};
    } else {
        g.h_ = 2 * extent / (n - 1);
        g.x0_ = -extent;
        g.y0_ = -extent;
        g.center_ = {0.0, 0.0};
    }

    g.mask_.assign(static_cast<size_t>(n) * n, NodeKind::Exterior);
    if (shape == DomainShape::Square) {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                bool edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
                g.mask_[g.index(i, j)] = edge ? NodeKind::Boundary : NodeKind::Interior;
            }
    } else {
        // cut-cell rule: interior iff |x| < R - h/2; nodes adjacent to an
        // interior node carry the Dirichlet value
        double rin = extent - g.h_ / 2;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                if (norm(g.point(i, j)) < rin)
                    g.mask_[g.index(i, j)] = NodeKind::Interior;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (g.mask_[g.index(i, j)] != NodeKind::Exterior) continue;
                auto adj = [&](int a, int b) {
                    return a >= 0 && b >= 0 && a < n && b < n &&
                           g.mask_[g.index(a, b)] == NodeKind::Interior;
                };
                if (adj(i + 1, j) || adj(i - 1, j) || adj(i, j + 1) || adj(i, j - 1))
                    g.mask_[g.index(i, j)] = NodeKind::Boundary;
            }
    }

    g.eq_.assign(g.mask_.size(), -1);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (g.is_interior(i, j)) {
                g.eq_[g.index(i, j)] = static_cast<int>(g.interior_.size());
                g.interior_.push_back(g.index(i, j));
            }
    return g;
}

Grid Grid::unit_square_centered(int n) {
    if (n < 3) throw ConfigError("blow-up grid: n must be >= 3");
    Grid g;
    g.shape_ = DomainShape::Square;
    g.extent_ = 2.0;
    g.n_ = n;
    g.h_ = 2.0 / (n - 1);
    g.x0_ = -1.0;
    g.y0_ = -1.0;
    g.center_ = {0.0, 0.0};
    g.mask_.assign(static_cast<size_t>(n) * n, NodeKind::Interior);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (i == 0 || j == 0 || i == n - 1 || j == n - 1)
                g.mask_[g.index(i, j)] = NodeKind::Boundary;
    g.eq_.assign(g.mask_.size(), -1);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (g.is_interior(i, j)) {
                g.eq_[g.index(i, j)] = static_cast<int>(g.interior_.size());
                g.interior_.push_back(g.index(i, j));
            }
    return g;
}

double Grid::boundary_distance(Vec2 p) const {
    if (shape_ == DomainShape::Disk) return extent_ - norm(p - center_);
    double lo = std::min(p.x - x0_, p.y - y0_);
    double hi = std::min(x0_ + extent_ - p.x, y0_ + extent_ - p.y);
    return std::min(lo, hi);
}

Grid build_grid(DomainShape shape, double extent, int n) {
    return Grid::build(shape, extent, n);
}

ScalarField make_field(const Grid& g) { return ScalarField(g); }

void enforce_zero_trace(ScalarField& u) {
    const Grid& g = *u.grid;
    for (int k = 0; k < g.n() * g.n(); ++k)
        if (g.kind(k) != NodeKind::Interior) u.values[k] = 0.0;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid != b.grid)
        throw DimensionError("fields live on different grids");
}

ScalarField laplacian(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double ih2 = 1.0 / (g.h() * g.h());
    ScalarField out(g);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        double c = u.values[k];
        out.values[k] = (u.values[g.index(i + 1, j)] + u.values[g.index(i - 1, j)] +
                         u.values[g.index(i, j + 1)] + u.values[g.index(i, j - 1)] -
                         4.0 * c) *
                        ih2;
    }
    return out;
}

Vec2 node_gradient(const ScalarField& u, int i, int j) {
    const Grid& g = *u.grid;
    const double h = g.h();
    auto axis = [&](int ip, int jp, int im, int jm, double uc) {
        bool pin = g.is_interior(ip, jp);
        bool min = g.is_interior(im, jm);
        double up = u.values[g.index(ip, jp)];
        double um = u.values[g.index(im, jm)];
        if (pin == min) return (up - um) / (2 * h);
        return pin ? (up - uc) / h : (uc - um) / h;
    };
    double uc = u.values[g.index(i, j)];
    return {axis(i + 1, j, i - 1, j, uc), axis(i, j + 1, i, j - 1, uc)};
}

ScalarField grad_sq(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    ScalarField out(g);
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        Vec2 gr = node_gradient(u, i, j);
        out.values[k] = gr.x * gr.x + gr.y * gr.y;
    }
    return out;
}

double integrate(const ScalarField& f) {
    const Grid& g = *f.grid;
    double s = 0.0;
    for (int k : g.interior_nodes()) s += f.values[k];
    return s * g.cell_area();
}

double boundary_flux(const ScalarField& u) {
    // one-sided outward differences over edges leaving the interior, each
    // weighted by the local boundary length element h; exact counterpart of
    // the discrete divergence theorem for the 5-point Laplacian
    const Grid& g = *u.grid;
    const int n = g.n();
    double s = 0.0;
    for (int k : g.interior_nodes()) {
        int i = k % n, j = k / n;
        double uc = u.values[k];
        auto edge = [&](int a, int b) {
            if (!g.is_interior(a, b)) s += u.values[g.index(a, b)] - uc;
        };
        edge(i + 1, j);
        edge(i - 1, j);
        edge(i, j + 1);
        edge(i, j - 1);
    }
    return s;
}

ScalarField dirichlet_solve(const ScalarField& rhs, const DirichletSolveOptions& opts) {
    const Grid& g = *rhs.grid;
    const int n = g.n();
    const int m = g.interior_count();
    const double ih2 = 1.0 / (g.h() * g.h());

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(m) * 5);
    Eigen::VectorXd b(m);
    const auto& eq = g.equation_numbers();
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
        b[row] = rhs.values[k];
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trip.begin(), trip.end());

    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(opts.rel_tol);
    cg.setMaxIterations(opts.max_iterations);
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(b);
    if (cg.info() != Eigen::Success)
        throw SolverError("dirichlet_solve: CG did not converge, residual " +
                              std::to_string(cg.error()),
                          cg.error());

    ScalarField out(g);
    for (int k : g.interior_nodes()) out.values[k] = x[eq[k]];
    return out;
}

double sample(const ScalarField& u, Vec2 p) {
    const Grid& g = *u.grid;
    const int n = g.n();
    double fx = (p.x - g.origin().x) / g.h();
    double fy = (p.y - g.origin().y) / g.h();
    if (fx < 0 || fy < 0 || fx > n - 1 || fy > n - 1)
        throw RangeError("sample: point outside grid bounding box");
    int i = std::min(static_cast<int>(fx), n - 2);
    int j = std::min(static_cast<int>(fy), n - 2);
    double tx = fx - i, ty = fy - j;
    double v00 = u.values[g.index(i, j)];
    double v10 = u.values[g.index(i + 1, j)];
    double v01 = u.values[g.index(i, j + 1)];
    double v11 = u.values[g.index(i + 1, j + 1)];
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 +
           tx * ty * v11;
}

}  // namespace pfb
