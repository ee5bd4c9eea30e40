#pragma once

// Ray decomposition v = v^- + v^+, the fibering maximum s_v, projection onto
// the Nehari set, ray energies, and the mountain-pass path through a Nehari
// point.

#include <vector>

#include "plasmafb/functional.hpp"

namespace pfb {

struct RayDecomposition {
    ScalarField v_minus;  // min(v, 1) nodally
    ScalarField v_plus;   // (v - 1)_+ nodally
};

RayDecomposition decompose(const ScalarField& v);

struct NehariData {
    double a = 0.0;    // Dirichlet energy of the plus part
    double b = 0.0;    // integral of (v-1)_+^p
    double s_v = 0.0;  // fibering maximum (a/b)^{1/(p-2)}
    double residual = 0.0;
};

NehariData nehari_data(const ScalarField& v, double p);

double fibering_s(const ScalarField& v, double p);
ScalarField project_nehari(const ScalarField& v, double p);
double energy_on_ray(const ScalarField& v, double p, double s);
double projected_energy(const ScalarField& v, double p);
double nehari_residual(const ScalarField& v, double p);

struct PathRecord {
    double s_bar = 0.0;
    std::vector<double> t;
    std::vector<double> energy;
    double max_energy = 0.0;
};

PathRecord mountain_pass_path(const ScalarField& v, double p, int samples);

}  // namespace pfb
