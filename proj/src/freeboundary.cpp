#include "plasmafb/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>

#include "plasmafb/solver.hpp"

namespace pfb {

namespace {

constexpr double kLevel = 1.0;

// edge key: horizontal edges keyed by left node, vertical by bottom node
struct EdgeKey {
    int node;
    bool horizontal;
    bool operator<(const EdgeKey& o) const {
        return node != o.node ? node < o.node : horizontal < o.horizontal;
    }
    bool operator==(const EdgeKey& o) const {
        return node == o.node && horizontal == o.horizontal;
    }
};

Vec2 edge_crossing(const Grid& g, EdgeKey e, const Array& u) {
    int n = g.n();
    int i = e.node % n, j = e.node / n;
    double ua = u[e.node];
    int kb = e.horizontal ? g.index(i + 1, j) : g.index(i, j + 1);
    double ub = u[kb];
    double t = (kLevel - ua) / (ub - ua);
    Vec2 a = g.point(i, j);
    return e.horizontal ? Vec2{a.x + t * g.h(), a.y} : Vec2{a.x, a.y + t * g.h()};
}

}  // namespace

FreeBoundaryCurve extract_free_boundary(const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();

    bool any_plus = false;
    for (int k : g.interior_nodes())
        if (u.values[k] > kLevel) {
            any_plus = true;
            break;
        }
    if (!any_plus)
        throw TrivialSolutionError("extract_free_boundary: {u > 1} is empty");

    // marching squares: collect per-cell segments between edge crossings
    std::vector<std::pair<EdgeKey, EdgeKey>> segs;
    for (int j = 0; j < n - 1; ++j) {
        for (int i = 0; i < n - 1; ++i) {
            int k00 = g.index(i, j), k10 = g.index(i + 1, j);
            int k01 = g.index(i, j + 1), k11 = g.index(i + 1, j + 1);
            int code = (u.values[k00] > kLevel ? 1 : 0) |
                       (u.values[k10] > kLevel ? 2 : 0) |
                       (u.values[k11] > kLevel ? 4 : 0) |
                       (u.values[k01] > kLevel ? 8 : 0);
            if (code == 0 || code == 15) continue;
            EdgeKey bottom{k00, true}, top{k01, true};
            EdgeKey left{k00, false}, right{k10, false};
            auto add = [&](EdgeKey a, EdgeKey b) { segs.emplace_back(a, b); };
            switch (code) {
                case 1: add(left, bottom); break;
                case 2: add(bottom, right); break;
                case 3: add(left, right); break;
                case 4: add(right, top); break;
                case 5: {
                    double c = 0.25 * (u.values[k00] + u.values[k10] +
                                       u.values[k01] + u.values[k11]);
                    if (c > kLevel) {
                        add(left, top);
                        add(bottom, right);
                    } else {
                        add(left, bottom);
                        add(right, top);
                    }
                    break;
                }
                case 6: add(bottom, top); break;
                case 7: add(left, top); break;
                case 8: add(top, left); break;
                case 9: add(top, bottom); break;
                case 10: {
                    double c = 0.25 * (u.values[k00] + u.values[k10] +
                                       u.values[k01] + u.values[k11]);
                    if (c > kLevel) {
                        add(bottom, left);
                        add(top, right);
                    } else {
                        add(bottom, right);
                        add(top, left);
                    }
                    break;
                }
                case 11: add(top, right); break;
                case 12: add(right, left); break;
                case 13: add(right, bottom); break;
                case 14: add(bottom, left); break;
                default: break;
            }
        }
    }

    // stitch segments into closed loops by shared crossing edges
    std::multimap<EdgeKey, int> by_edge;
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        by_edge.emplace(segs[s].first, s);
        by_edge.emplace(segs[s].second, s);
    }
    std::vector<bool> used(segs.size(), false);
    FreeBoundaryCurve fb;
    for (int s0 = 0; s0 < static_cast<int>(segs.size()); ++s0) {
        if (used[s0]) continue;
        std::vector<EdgeKey> chain;
        used[s0] = true;
        chain.push_back(segs[s0].first);
        chain.push_back(segs[s0].second);
        bool closed = false;
        while (!closed) {
            EdgeKey tail = chain.back();
            int next = -1;
            auto [lo, hi] = by_edge.equal_range(tail);
            for (auto it = lo; it != hi; ++it)
                if (!used[it->second]) {
                    next = it->second;
                    break;
                }
            if (next < 0) break;
            used[next] = true;
            EdgeKey other =
                segs[next].first == tail ? segs[next].second : segs[next].first;
            if (other == chain.front())
                closed = true;
            else
                chain.push_back(other);
        }
        std::vector<Vec2> loop;
        loop.reserve(chain.size());
        for (EdgeKey e : chain) loop.push_back(edge_crossing(g, e, u.values));
        fb.loops.push_back(std::move(loop));
    }

    // lengths, normals (gradient direction points into {u > 1}), slopes
    double delta = g.h() / 2.0;
    for (int li = 0; li < static_cast<int>(fb.loops.size()); ++li) {
        const auto& loop = fb.loops[li];
        int m = static_cast<int>(loop.size());
        for (int vi = 0; vi < m; ++vi) {
            fb.total_length += norm(loop[(vi + 1) % m] - loop[vi]);
            FbVertex v;
            v.pos = loop[vi];
            v.loop = li;
            double gx = (sample(u, {v.pos.x + delta, v.pos.y}) -
                         sample(u, {v.pos.x - delta, v.pos.y})) /
                        (2 * delta);
            double gy = (sample(u, {v.pos.x, v.pos.y + delta}) -
                         sample(u, {v.pos.x, v.pos.y - delta})) /
                        (2 * delta);
            double gn = std::hypot(gx, gy);
            v.normal = gn > 0 ? Vec2{gx / gn, gy / gn} : Vec2{1.0, 0.0};
            try {
                auto [a, b] = one_sided_slopes(u, v.pos, v.normal);
                v.alpha = a;
                v.beta = b;
                v.slopes_valid = true;
            } catch (const RangeError&) {
                v.slopes_valid = false;  // stencil leaves the domain
            }
            fb.vertices.push_back(v);
        }
    }
    return fb;
}

std::pair<double, double> one_sided_slopes(const ScalarField& u, Vec2 x0, Vec2 nu) {
    const Grid& g = *u.grid;
    const double h = g.h();
    double vp[4], vm[4], d[4];
    for (int k = 1; k <= 4; ++k) {
        Vec2 pp = x0 + (k * h) * nu;
        Vec2 pm = x0 - (k * h) * nu;
        if (g.boundary_distance(pp) <= 0.0 || g.boundary_distance(pm) <= 0.0)
            throw RangeError("one_sided_slopes: sample stencil leaves the domain");
        vp[k - 1] = sample(u, pp) - kLevel;
        vm[k - 1] = kLevel - sample(u, pm);
        d[k - 1] = k * h;
    }
    // least-squares fit v = c + slope d + q d^2 of the four one-sided samples;
    // the intercept absorbs the sub-cell offset between the contour vertex and
    // the phase profile, the quadratic term the curvature of the profile
    auto slope_at_vertex = [&](const double* v) {
        double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double rhs[3] = {0, 0, 0};
        for (int k = 0; k < 4; ++k) {
            double b[3] = {1.0, d[k], d[k] * d[k]};
            for (int r = 0; r < 3; ++r) {
                rhs[r] += b[r] * v[k];
                for (int c = 0; c < 3; ++c) m[r][c] += b[r] * b[c];
            }
        }
        // 3x3 Gaussian elimination with partial pivoting
        int rows[3] = {0, 1, 2};
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(m[rows[r]][col]) > std::abs(m[rows[piv]][col])) piv = r;
            std::swap(rows[col], rows[piv]);
            for (int r = col + 1; r < 3; ++r) {
                double f = m[rows[r]][col] / m[rows[col]][col];
                for (int c = col; c < 3; ++c) m[rows[r]][c] -= f * m[rows[col]][c];
                rhs[rows[r]] -= f * rhs[rows[col]];
            }
        }
        double x[3];
        for (int r = 2; r >= 0; --r) {
            double acc = rhs[rows[r]];
            for (int c = r + 1; c < 3; ++c) acc -= m[rows[r]][c] * x[c];
            x[r] = acc / m[rows[r]][r];
        }
        return x[1];
    };
    return {slope_at_vertex(vp), slope_at_vertex(vm)};
}

double nondegeneracy_constant(const ScalarField& u, int max_samples) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();

    double delta0 = plus_set_boundary_distance(u);
    if (!std::isfinite(delta0))
        throw InsufficientResolutionError("nondegeneracy_constant: empty plus set");
    double r0 = delta0 / 2.0;

    // BFS lattice distance (in steps of h) from the nodal minus set {u <= 1}
    std::vector<int> dist(static_cast<size_t>(n) * n, -1);
    std::deque<int> queue;
    for (int k = 0; k < n * n; ++k)
        if (u.values[k] <= kLevel) {
            dist[k] = 0;
            queue.push_back(k);
        }
    while (!queue.empty()) {
        int k = queue.front();
        queue.pop_front();
        int i = k % n, j = k / n;
        auto visit = [&](int a, int b) {
            if (a < 0 || b < 0 || a >= n || b >= n) return;
            int kk = g.index(a, b);
            if (dist[kk] < 0) {
                dist[kk] = dist[k] + 1;
                queue.push_back(kk);
            }
        };
        visit(i + 1, j);
        visit(i - 1, j);
        visit(i, j + 1);
        visit(i, j - 1);
    }

    std::vector<int> candidates;
    for (int k : g.interior_nodes()) {
        if (u.values[k] <= kLevel || dist[k] < 0) continue;
        double r = dist[k] * h;
        if (r >= 2.0 * h && r <= r0) candidates.push_back(k);
    }
    if (candidates.empty())
        throw InsufficientResolutionError(
            "nondegeneracy_constant: no admissible sample nodes");
    int stride = std::max<size_t>(1, candidates.size() / max_samples);
    double c = std::numeric_limits<double>::infinity();
    for (size_t q = 0; q < candidates.size(); q += stride) {
        int k = candidates[q];
        c = std::min(c, (u.values[k] - kLevel) / (dist[k] * h));
    }
    return c;
}

double sup_growth_constant(const ScalarField& u, const FreeBoundaryCurve& fb) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    double delta0 = plus_set_boundary_distance(u);
    double gamma = std::numeric_limits<double>::infinity();
    for (const FbVertex& v : fb.vertices) {
        for (double r = delta0 / 2.0; r >= 4.0 * h; r /= 2.0) {
            double best = -std::numeric_limits<double>::infinity();
            int i0 = std::max(0, static_cast<int>((v.pos.x - r - g.origin().x) / h));
            int i1 = std::min(n - 1,
                              static_cast<int>((v.pos.x + r - g.origin().x) / h) + 1);
            int j0 = std::max(0, static_cast<int>((v.pos.y - r - g.origin().y) / h));
            int j1 = std::min(n - 1,
                              static_cast<int>((v.pos.y + r - g.origin().y) / h) + 1);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i)
                    if (norm(g.point(i, j) - v.pos) <= r)
                        best = std::max(best, u.values[g.index(i, j)]);
            if (best > -std::numeric_limits<double>::infinity())
                gamma = std::min(gamma, (best - kLevel) / r);
        }
    }
    return gamma;
}

namespace {

DensityTable density_table(const ScalarField& u, const FreeBoundaryCurve& fb) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    double delta0 = plus_set_boundary_distance(u);
    DensityTable table;
    for (int vi = 0; vi < static_cast<int>(fb.vertices.size()); ++vi) {
        const FbVertex& v = fb.vertices[vi];
        for (double r = delta0 / 2.0; r >= 4.0 * h; r /= 2.0) {
            DensityRow row;
            row.vertex = vi;
            row.r = r;
            long inside = 0, plus = 0;
            int i0 = std::max(0, static_cast<int>((v.pos.x - r - g.origin().x) / h));
            int i1 = std::min(n - 1,
                              static_cast<int>((v.pos.x + r - g.origin().x) / h) + 1);
            int j0 = std::max(0, static_cast<int>((v.pos.y - r - g.origin().y) / h));
            int j1 = std::min(n - 1,
                              static_cast<int>((v.pos.y + r - g.origin().y) / h) + 1);
            for (int j = j0; j <= j1; ++j)
                for (int i = i0; i <= i1; ++i)
                    if (norm(g.point(i, j) - v.pos) <= r) {
                        ++inside;
                        if (u.values[g.index(i, j)] > kLevel) ++plus;
                    }
            row.plus_fraction =
                inside > 0 ? static_cast<double>(plus) / inside : 0.0;

            double len = 0.0;
            for (const auto& loop : fb.loops) {
                int m = static_cast<int>(loop.size());
                for (int s = 0; s < m; ++s) {
                    Vec2 a = loop[s] - v.pos;
                    Vec2 b = loop[(s + 1) % m] - v.pos;
                    // clip segment [a,b] to the disk of radius r about origin
                    Vec2 dvec = b - a;
                    double A = dot(dvec, dvec);
                    if (A == 0.0) continue;
                    double B = 2.0 * dot(a, dvec);
                    double C = dot(a, a) - r * r;
                    double disc = B * B - 4 * A * C;
                    if (disc <= 0.0) {
                        if (C < 0.0) len += std::sqrt(A);
                        continue;
                    }
                    double sq = std::sqrt(disc);
                    double t0 = std::max(0.0, (-B - sq) / (2 * A));
                    double t1 = std::min(1.0, (-B + sq) / (2 * A));
                    if (t1 > t0) len += (t1 - t0) * std::sqrt(A);
                }
            }
            row.perimeter_density = len / r;
            table.push_back(row);
        }
    }
    return table;
}

}  // namespace

DensityTable density_ratios(const ScalarField& u, const FreeBoundaryCurve& fb) {
    return density_table(u, fb);
}

DensityTable perimeter_density(const ScalarField& u, const FreeBoundaryCurve& fb) {
    return density_table(u, fb);
}

std::pair<double, double> level_set_energy(const ScalarField& u, Vec2 x0, double r,
                                           double tau) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const double h = g.h();
    if (g.boundary_distance(x0) <= r)
        throw RangeError("level_set_energy: ball exits the domain");
    double value = 0.0;
    int i0 = std::max(0, static_cast<int>((x0.x - r - g.origin().x) / h));
    int i1 = std::min(n - 1, static_cast<int>((x0.x + r - g.origin().x) / h) + 1);
    int j0 = std::max(0, static_cast<int>((x0.y - r - g.origin().y) / h));
    int j1 = std::min(n - 1, static_cast<int>((x0.y + r - g.origin().y) / h) + 1);
    for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
            if (!g.is_interior(i, j)) continue;
            if (norm(g.point(i, j) - x0) > r) continue;
            double uc = u.values[g.index(i, j)];
            if (std::abs(uc - kLevel) >= tau) continue;
            Vec2 gr = node_gradient(u, i, j);
            value += gr.x * gr.x + gr.y * gr.y;
        }
    value *= g.cell_area();
    return {value, value / (tau * r)};
}

BlowUpField blow_up(const ScalarField& u, Vec2 x0, double r, int m) {
    const Grid& g = *u.grid;
    if (g.boundary_distance(x0) <= 2.0 * r)
        throw RangeError("blow_up: B_{2r}(x0) exits the domain");
    BlowUpField out;
    out.grid = std::make_shared<Grid>(Grid::unit_square_centered(m));
    out.w = ScalarField(*out.grid);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            Vec2 y = out.grid->point(i, j);
            out.w.values[out.grid->index(i, j)] =
                (sample(u, x0 + r * y) - kLevel) / r;
        }
    return out;
}

std::vector<FlatnessRow> flatness_profile(const ScalarField& u, Vec2 x0,
                                          const std::vector<double>& radii, int m,
                                          int directions) {
    std::vector<FlatnessRow> rows;
    for (double r : radii) {
        BlowUpField bu = blow_up(u, x0, r, m);
        const Grid& bg = *bu.grid;
        std::vector<std::pair<Vec2, double>> pts;
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i) {
                Vec2 y = bg.point(i, j);
                if (norm(y) <= 1.0)
                    pts.emplace_back(y, bu.w.values[bg.index(i, j)]);
            }
        FlatnessRow best;
        best.r = r;
        best.misfit = std::numeric_limits<double>::infinity();
        for (int dI = 0; dI < directions; ++dI) {
            double ang = 2.0 * M_PI * dI / directions;
            Vec2 nu{std::cos(ang), std::sin(ang)};
            double spp = 0, spw = 0, smm = 0, smw = 0;
            for (const auto& [y, w] : pts) {
                double t = dot(y, nu);
                if (t > 0) {
                    spp += t * t;
                    spw += t * w;
                } else if (t < 0) {
                    smm += t * t;
                    smw += t * w;
                }
            }
            // model w = alpha <y,nu>_+ - beta <y,nu>_-; the two supports are
            // disjoint so the least squares split into independent 1-D fits
            double alpha = spp > 0 ? std::max(0.0, spw / spp) : 0.0;
            double beta = smm > 0 ? std::max(0.0, smw / smm) : 0.0;
            double mis = 0.0;
            for (const auto& [y, w] : pts) {
                double t = dot(y, nu);
                double fit = t > 0 ? alpha * t : beta * t;
                mis = std::max(mis, std::abs(w - fit));
            }
            if (mis < best.misfit) {
                best.misfit = mis;
                best.alpha = alpha;
                best.beta = beta;
                best.angle = ang;
            }
        }
        rows.push_back(best);
    }
    return rows;
}

}  // namespace pfb
