#pragma once

#include <vector>

#include "modrad/domain.hpp"
#include "modrad/modulus.hpp"
#include "modrad/radii.hpp"

namespace modrad {

struct RadiusEstimate {
    double value = 0.0;
    double error = 0.0;  // heuristic error bar (extrapolation / two-grid spread)
    // diagnostics of the modulus route
    std::vector<double> t_values;
    std::vector<double> phi_values;
    double fit_exponent = 0.0;
    double fit_offset = 0.0;
};

struct ModulusEstimatorOptions {
    int levels_per_octave = 24;  // radial resolution of the adapted grid
    int octaves = 4;             // t_j = t0 * 2^-j, j = 0..octaves
    int n_theta = 128;           // angular nodes, n = 2
    int n_lat = 18, n_lon = 36;  // angular nodes, n = 3
    double outer_cap_factor = 24.0;  // truncation radius for unbounded domains
    SolveOptions solve{1e-6, 1e-9, 4000, 20000, 256};
};

// Estimates R_p(a, D) from the moduli of the families joining small spheres
// around `a` to the domain boundary, extrapolating
//   phi(t) = lambda_n M^(1/(1-p)) - mu_p(t)  ->  phi0,   R = mu_inv(-phi0).
RadiusEstimate estimate_radius_modulus(const Domain& D, const Point& a, const PExponent& pe,
                                       const ModulusEstimatorOptions& opt = {});

struct PdeEstimatorOptions {
    double h = 1.0 / 32;
    double box_halfwidth = 4.0;  // truncation box for unbounded domains
    double cg_rel_tol = 1e-10;
    int cg_max_iter = 100000;
    bool two_grid_error = true;
};

// Harmonic (p = 2) estimator: solves the Dirichlet problem
//   Laplace h = 0 in D,  h = -mu_2(|x-a|) on the staircase boundary,
// and returns R = mu_inv(-h(a)).  Supports n = 2 and n = 3.
RadiusEstimate estimate_radius_pde(const Domain& D, const Point& a, const PdeEstimatorOptions& opt = {});

}  // namespace modrad
