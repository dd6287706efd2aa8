#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "modrad/modulus.hpp"

namespace modrad {

// Rotation structure on the circle: closed sectors [t1, t2] (t2 > t1,
// angles mod 2pi) with rotation angles beta, partitioning the circle.
// Applying each rotation to its sector again partitions the circle and maps
// the symmetric ray set {2 pi l / m} onto prescribed target rays.
struct StructureSector {
    double t1 = 0.0, t2 = 0.0, beta = 0.0;
};

struct SymmetricStructure {
    int m = 1;
    std::vector<double> targets;  // theta_0 < ... < theta_{m-1}
    std::vector<StructureSector> sectors;
};

// Builds a rotation structure that moves the rays 2 pi l / m to the target
// rays while satisfying the partition and gluing conditions below.
// Supported: any m with equally spaced targets, and arbitrary targets for
// m <= 3.  Throws std::runtime_error otherwise.
SymmetricStructure build_structure(int m, const std::vector<double>& targets);

struct StructureCheck {
    bool ok = false;
    std::string failure;
    double cover_defect = 0.0;        // partition of the sectors (aP)
    double image_cover_defect = 0.0;  // partition of the rotated sectors (bP)
    double target_defect = 0.0;       // symmetric rays land on targets (aS)
    double gluing_defect = 0.0;       // touching images have equivalent cuts (bS)
};

// Checks the four structure conditions by angular probing; the programmatic
// source of truth for any construction.
StructureCheck verify_structure(const SymmetricStructure& s, double tol = 1e-9);

// Angle transport: rotates theta by the rotation of a sector containing it.
double dis_angle(const SymmetricStructure& s, double theta);

// Edge transport of a structure on a compatible cylindrical grid.  The grid
// is compatible when every sector boundary and every rotation is an integer
// multiple of the grid's angular step, so each sector rotation is a graph
// automorphism.
struct DisGridMap {
    const GridGraph* grid = nullptr;
    SymmetricStructure structure;
    std::vector<int> sector_of_edge;              // -1: edge lies on a cut ray
    std::vector<std::vector<int>> sector_perm;    // per-sector edge permutation

    Curve map_curve(const Curve& c) const;
    // Transported density (zero on cut-ray edges); preserves p-energy for
    // densities vanishing on cut rays.
    std::vector<double> map_density(const std::vector<double>& rho) const;
};

DisGridMap make_dis_grid_map(const GridGraph& g, const SymmetricStructure& s);

ExplicitFamily dis_family(const DisGridMap& map, const ExplicitFamily& family);

nlohmann::json structure_to_json(const SymmetricStructure& s);

}  // namespace modrad
