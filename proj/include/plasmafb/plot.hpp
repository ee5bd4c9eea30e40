#pragma once

// Self-contained SVG / PGM renderings of fields and curves.

#include <filesystem>
#include <string>
#include <vector>

#include "plasmafb/freeboundary.hpp"

namespace pfb {

void write_heatmap_svg(const std::filesystem::path& path, const ScalarField& u,
                       const FreeBoundaryCurve* fb);

void write_heatmap_pgm(const std::filesystem::path& path, const ScalarField& u);

struct CurveSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

void write_curves_svg(const std::filesystem::path& path, const std::string& title,
                      const std::vector<CurveSeries>& series);

}  // namespace pfb
