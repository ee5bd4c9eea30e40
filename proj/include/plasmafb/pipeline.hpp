#pragma once

// Orchestration: solve -> extract -> verify -> weiss -> report, file outputs,
// and the grid-versus-radial-oracle comparison.

#include <filesystem>
#include <functional>
#include <optional>

#include "plasmafb/config.hpp"
#include "plasmafb/radial.hpp"
#include "plasmafb/report.hpp"

namespace pfb {

VerificationReport build_report(const ScalarField& u, const ProblemConfig& cfg,
                                const SolveTrace* trace = nullptr);

struct SolveArtifacts {
    std::filesystem::path u_csv, trace_csv, report_json, u_svg, weiss_svg, u_pgm;
};

SolveArtifacts run_solve(const ProblemConfig& cfg, const std::filesystem::path& out,
                         bool force);

VerificationReport run_verify(const std::filesystem::path& field_csv,
                              const ProblemConfig& cfg);

struct OracleComparison {
    double linf = 0.0;
    double fb_radius_diff = 0.0;
    double center_diff = 0.0;
    double rho_grid = 0.0, rho_oracle = 0.0;
    double m_grid = 0.0, m_oracle = 0.0;
};

OracleComparison run_oracle_compare(const ProblemConfig& cfg);
OracleComparison compare_with_oracle(const ScalarField& u, const ProblemConfig& cfg,
                                     const RadialProfile& prof);

}  // namespace pfb
