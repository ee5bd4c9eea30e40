#include "plasmafb/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "plasmafb/report.hpp"

namespace pfb {

namespace {

struct Rgb {
    int r, g, b;
};

// blue -> white -> red through the value range
Rgb colormap(double t) {
    t = std::clamp(t, 0.0, 1.0);
    auto lerp = [](int a, int b, double s) {
        return static_cast<int>(a + (b - a) * s + 0.5);
    };
    if (t < 0.5) {
        double s = t / 0.5;
        return {lerp(33, 247, s), lerp(102, 247, s), lerp(172, 247, s)};
    }
    double s = (t - 0.5) / 0.5;
    return {lerp(247, 178, s), lerp(247, 24, s), lerp(247, 43, s)};
}

}  // namespace

void write_heatmap_svg(const std::filesystem::path& path, const ScalarField& u,
                       const FreeBoundaryCurve* fb) {
    const Grid& g = *u.grid;
    const int n = g.n();
    const int stride = std::max(1, (n - 1) / 128);
    const int cells = (n - 1) / stride;
    const double px = 4.0;  // pixels per displayed cell
    const double size = cells * px;

    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (int k = 0; k < n * n; ++k) {
        vmin = std::min(vmin, u.values[k]);
        vmax = std::max(vmax, u.values[k]);
    }
    if (vmax <= vmin) vmax = vmin + 1.0;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
      << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size
      << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    for (int cj = 0; cj < cells; ++cj) {
        for (int ci = 0; ci < cells; ++ci) {
            int i = ci * stride, j = cj * stride;
            if (g.kind(i, j) == NodeKind::Exterior) continue;
            Rgb c = colormap((u.values[g.index(i, j)] - vmin) / (vmax - vmin));
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\""
                          " fill=\"rgb(%d,%d,%d)\"/>\n",
                          ci * px, size - (cj + 1) * px, px, px, c.r, c.g, c.b);
            s << buf;
        }
    }
    if (fb) {
        double span = (n - 1) * g.h();
        auto to_px = [&](Vec2 p) {
            double x = (p.x - g.origin().x) / span * size;
            double y = size - (p.y - g.origin().y) / span * size;
            return Vec2{x, y};
        };
        for (const auto& loop : fb->loops) {
            s << "<polygon fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\" "
                 "points=\"";
            for (Vec2 p : loop) {
                Vec2 q = to_px(p);
                char buf[48];
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", q.x, q.y);
                s << buf;
            }
            s << "\"/>\n";
        }
    }
    s << "</svg>\n";
    write_text_atomic(path, s.str());
}

void write_heatmap_pgm(const std::filesystem::path& path, const ScalarField& u) {
    const Grid& g = *u.grid;
    const int n = g.n();
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (int k = 0; k < n * n; ++k) {
        vmin = std::min(vmin, u.values[k]);
        vmax = std::max(vmax, u.values[k]);
    }
    if (vmax <= vmin) vmax = vmin + 1.0;
    std::ostringstream s;
    s << "P2\n" << n << " " << n << "\n255\n";
    for (int j = n - 1; j >= 0; --j) {
        for (int i = 0; i < n; ++i) {
            int v = static_cast<int>(
                255.0 * (u.values[g.index(i, j)] - vmin) / (vmax - vmin) + 0.5);
            s << v << (i + 1 < n ? ' ' : '\n');
        }
    }
    write_text_atomic(path, s.str());
}

void write_curves_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<CurveSeries>& series) {
    const double W = 640, H = 420, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (size_t k = 0; k < s.x.size(); ++k) {
            xmin = std::min(xmin, s.x[k]);
            xmax = std::max(xmax, s.x[k]);
            ymin = std::min(ymin, s.y[k]);
            ymax = std::max(ymax, s.y[k]);
        }
    if (!(xmax > xmin)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (!(ymax > ymin)) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto X = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto Y = [&](double y) {
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
    };
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                            "#ff7f0e", "#8c564b"};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << title << "</text>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr
      << "\" y2=\"" << H - mb << "\" stroke=\"#000\"/>\n";
    s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << H - mb << "\" stroke=\"#000\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double xv = xmin + (xmax - xmin) * t / 4;
        double yv = ymin + (ymax - ymin) * t / 4;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                      "font-family=\"sans-serif\" font-size=\"11\">%.4g</text>\n",
                      X(xv), H - mb + 18.0, xv);
        s << buf;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                      "font-family=\"sans-serif\" font-size=\"11\">%.4g</text>\n",
                      ml - 6.0, Y(yv) + 4.0, yv);
        s << buf;
    }
    int ci = 0;
    for (const auto& ser : series) {
        s << "<polyline fill=\"none\" stroke=\"" << colors[ci % 6]
          << "\" stroke-width=\"1.6\" points=\"";
        for (size_t k = 0; k < ser.x.size(); ++k) {
            char buf[48];
            std::snprintf(buf, sizeof buf, "%.2f,%.2f ", X(ser.x[k]), Y(ser.y[k]));
            s << buf;
        }
        s << "\"/>\n";
        char buf[220];
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"sans-serif\" "
                      "font-size=\"12\" fill=\"%s\">%s</text>\n",
                      W - mr - 150.0, mt + 16.0 * (ci + 1), colors[ci % 6],
                      ser.label.c_str());
        s << buf;
        ++ci;
    }
    s << "</svg>\n";
    write_text_atomic(path, s.str());
}

}  // namespace pfb
