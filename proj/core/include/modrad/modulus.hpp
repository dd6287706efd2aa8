#pragma once

#include <functional>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <variant>
#include <vector>

#include "modrad/grid.hpp"

namespace modrad {

// A discrete curve: a weighted set of edges.  Weight 1 means the curve
// traverses the whole edge; fractional weights account for partial edges
// (e.g. halves produced by cutting along a sector boundary).
struct Curve {
    std::vector<std::pair<int, double>> edges;
    bool connected = true;
};

struct ExplicitFamily {
    std::vector<Curve> curves;
};

// Curves joining `source` to `sink` through allowed nodes (all nodes when
// `allowed` is empty).
struct ConnectorFamily {
    std::vector<int> source;
    std::vector<int> sink;
    std::vector<char> allowed;  // per-node mask, optional
};

// Family of unions gamma* = U_k f_k(gamma) over base connector curves, where
// f_k are edge permutations induced by grid isometries (f_0 = identity is
// expected to be present).  Images of allowed base edges must be pairwise
// disjoint for the length bookkeeping to be exact.
struct SymmetrizedFamily {
    ConnectorFamily base;
    std::vector<std::vector<int>> edge_images;
};

using CurveFamily = std::variant<ExplicitFamily, ConnectorFamily, SymmetrizedFamily>;

struct ModulusResult {
    double value = 0.0;        // certified upper bound (energy of admissible density)
    double lower_bound = 0.0;  // dual lower bound
    std::vector<double> density;
    std::vector<Curve> active_curves;
    int iterations = 0;
    double certified_gap = 0.0;  // 1 - min rho-length before normalization
};

struct SolveOptions {
    double tol = 1e-6;          // separation tolerance on rho-lengths
    double inner_tol = 1e-9;    // relative primal-dual gap of the subproblem
    int max_outer = 4000;
    int max_sweeps = 20000;
    int batch = 64;             // violated paths added per separation round
};

// p-modulus  min sum sigma_e rho_e^p  s.t. every family curve has rho-length
// >= 1, by constraint generation with a dual coordinate-ascent subsolver.
ModulusResult solve_modulus(const GridGraph& g, const CurveFamily& family, double p,
                            const SolveOptions& opt = {});

double curve_length(const Curve& c, const GridGraph& g, const std::vector<double>& rho);
double density_energy(const GridGraph& g, const std::vector<double>& rho, double p);

// Node/edge permutations from a geometric isometry of the grid.  Throws if
// some image point is not a grid node.
std::vector<int> node_permutation(const GridGraph& g,
                                  const std::function<Point(const Point&)>& iso);
std::vector<int> edge_permutation(const GridGraph& g, const std::vector<int>& node_perm);

// The 2m dihedral isometries (rotations by 2pi k/m and reflections in the
// rays theta = pi k/m) as edge permutations of a cylindrical grid whose
// angular count is a multiple of 2m.
std::vector<std::vector<int>> dihedral_edge_images(const GridGraph& g, int m);

nlohmann::json family_to_json(const GridGraph& g, const CurveFamily& family);

}  // namespace modrad
