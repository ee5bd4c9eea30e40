#pragma once

// Masked 2-D lattice, nodal scalar fields, and the discrete operators
// (5-point Laplacian, gradient quadrature, midpoint integration,
// boundary flux, Dirichlet Poisson solve, bilinear sampling).

#include <Eigen/Core>
#include <vector>

#include "plasmafb/types.hpp"

namespace pfb {

using Array = Eigen::ArrayXd;

enum class DomainShape { Square, Disk };

enum class NodeKind : std::uint8_t { Interior = 0, Boundary = 1, Exterior = 2 };

class Grid {
  public:
    // squares span [x0, x0+extent]^2, disks have radius extent about the origin
    static Grid build(DomainShape shape, double extent, int n);

    // lattice over [-1,1]^2 used by blow-up fields; every node is treated as
    // interior except the outermost ring
    static Grid unit_square_centered(int n);

    int n() const { return n_; }
    double h() const { return h_; }
    DomainShape shape() const { return shape_; }
    double extent() const { return extent_; }
    Vec2 origin() const { return {x0_, y0_}; }
    Vec2 center() const { return center_; }
    double cell_area() const { return h_ * h_; }

    int index(int i, int j) const { return j * n_ + i; }
    double x(int i) const { return x0_ + i * h_; }
    double y(int j) const { return y0_ + j * h_; }
    Vec2 point(int i, int j) const { return {x(i), y(j)}; }

    NodeKind kind(int i, int j) const { return mask_[index(i, j)]; }
    NodeKind kind(int k) const { return mask_[k]; }
    bool is_interior(int i, int j) const { return kind(i, j) == NodeKind::Interior; }

    const std::vector<int>& interior_nodes() const { return interior_; }
    int interior_count() const { return static_cast<int>(interior_.size()); }
    // node index -> interior equation number, -1 outside
    const std::vector<int>& equation_numbers() const { return eq_; }

    // signed distance from p to the domain boundary (positive inside)
    double boundary_distance(Vec2 p) const;

    bool contains_ball(Vec2 center, double r) const {
        return boundary_distance(center) > r;
    }

  private:
    Grid() = default;

    DomainShape shape_ = DomainShape::Square;
    double extent_ = 1.0;
    int n_ = 0;
    double h_ = 0.0;
    double x0_ = 0.0, y0_ = 0.0;
    Vec2 center_;
    std::vector<NodeKind> mask_;
    std::vector<int> interior_;
    std::vector<int> eq_;
};

Grid build_grid(DomainShape shape, double extent, int n);

struct ScalarField {
    const Grid* grid = nullptr;
    Array values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid(&g), values(Array::Zero(g.n() * g.n())) {}

    double operator()(int i, int j) const { return values[grid->index(i, j)]; }
    double& operator()(int i, int j) { return values[grid->index(i, j)]; }
};

// zero out boundary/exterior nodes (the discrete H^1_0 trace condition)
void enforce_zero_trace(ScalarField& u);

ScalarField make_field(const Grid& g);

void require_same_grid(const ScalarField& a, const ScalarField& b);

ScalarField laplacian(const ScalarField& u);
ScalarField grad_sq(const ScalarField& u);
// central-difference gradient at an interior node, one-sided next to the boundary
Vec2 node_gradient(const ScalarField& u, int i, int j);

double integrate(const ScalarField& f);
double boundary_flux(const ScalarField& u);

struct DirichletSolveOptions {
    double rel_tol = 1e-10;
    int max_iterations = 100000;
};

ScalarField dirichlet_solve(const ScalarField& rhs,
                            const DirichletSolveOptions& opts = {});

double sample(const ScalarField& u, Vec2 p);

}  // namespace pfb
