#pragma once

// Verification report assembly, CSV field I/O (17 significant digits), and
// JSON serialization with stable key order.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plasmafb/freeboundary.hpp"
#include "plasmafb/solver.hpp"
#include "plasmafb/weiss.hpp"

namespace pfb {

struct CheckResult {
    double value = 0.0;
    double tolerance = 0.0;
    std::string comparator;  // "<=", ">=", "in [lo,hi]" rendered into the name
    bool pass = false;
};

struct VerificationReport {
    double c_est = 0.0;
    double gamma_est = 0.0;
    double lipschitz = 0.0;
    double delta0 = 0.0;
    double density_min = 0.0;
    double density_max = 0.0;
    double perimeter_density_max = 0.0;
    double slope_median_error = 0.0;
    double energy_identity_residual = 0.0;
    double nehari_res = 0.0;
    double fb_length = 0.0;
    int fb_components = 0;
    std::vector<WeissProfile> weiss;
    std::map<std::string, CheckResult> checks;
    SolveTrace trace;  // empty when verifying a stored field

    bool all_pass() const;
};

std::string report_to_json(const VerificationReport& rep);

void write_field_csv(const std::filesystem::path& path, const ScalarField& u);
ScalarField read_field_csv(const std::filesystem::path& path, const Grid& g);

void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace);

// temp-then-rename so partial writes never clobber outputs
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace pfb
