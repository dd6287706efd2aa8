#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modrad/dissymmetrization.hpp"
#include "modrad/domain.hpp"
#include "modrad/estimator.hpp"
#include "modrad/radii.hpp"

namespace modrad {

// ---------- extremal configurations ----------

// Perpendicular bisector of [a1, a2], oriented so a1 is on the positive side.
Hyperplane bisector_hyperplane(const Point& a1, const Point& a2);

// G split by the bisector hyperplane; first component contains a1.
std::pair<Domain, Domain> extremal_halfspace_pair(const Point& a1, const Point& a2,
                                                  const std::optional<Domain>& G = std::nullopt);

struct SectorDecomposition {
    std::vector<Point> points;    // a_l^* = [rho0, 2 pi l / m, 0]
    std::vector<Domain> domains;  // D_l^* = G cut to the sector around a_l^*
};
SectorDecomposition extremal_sectors(int m, const Domain& G, double rho0, int n);

// The two components of B(0,1) \ C(a1, a2); first contains a1.
std::pair<Domain, Domain> extremal_kufarev_split(const Point& a1, const Point& a2);

// The Dubinin-Prilepkina harmonic extremal domains D_1, D_2 (n >= 3).
std::pair<Domain, Domain> dp_extremal_domains(const Point& a1, const Point& a2, int n);

// General-position dihedral closed form for p = 2, n >= 3 by the method of
// images; the wedge is {theta1 < theta < theta2} with opening pi / k.
RadiusValue radius_dihedral_p2_general(const Point& a, double theta1, double theta2, int n);

// ---------- radius computation with source selection ----------

struct LabOptions {
    double grid_h = 1.0 / 24;
    int seed = 1;
    bool pde_crosscheck = true;  // also run the pde route when p = 2, n = 3
    double outer_cap_factor = 24.0;
    double pde_box_halfwidth = 4.0;
};

ModulusEstimatorOptions modulus_options_for(double grid_h, double outer_cap_factor = 24.0);

struct RadiusReport {
    double value = 0.0;
    double error = 0.0;          // 0 for closed forms
    std::string source;          // "closed-form:...", "modulus", "pde"
    double cross_value = 0.0;    // secondary route, when run
    double cross_error = 0.0;
    std::string cross_source;
};

RadiusReport compute_radius(const Domain& D, const Point& a, const PExponent& pe,
                            const LabOptions& opt = {});

// ---------- verification reports ----------

struct Verdict {
    std::string state;  // "holds" | "violated-within-error" | "violated"
    double margin = 0.0;
    double margin_lo = 0.0, margin_hi = 0.0;
};

struct DecompositionReport {
    nlohmann::json config;
    std::vector<RadiusReport> left_radii;
    std::vector<RadiusReport> right_radii;
    double left = 0.0, right = 0.0;
    Verdict verdict;
    nlohmann::json to_json() const;
    int exit_code() const { return verdict.state == "holds" ? 0 : 2; }
};

DecompositionReport verify_theorem1(const nlohmann::json& config);
DecompositionReport verify_theorem2(const nlohmann::json& config);
DecompositionReport verify_lavrentiev(const nlohmann::json& config);
DecompositionReport verify_kufarev(const nlohmann::json& config);
DecompositionReport verify_corollary3(const nlohmann::json& config);

// ---------- figure emission ----------

// CSV polylines "curve,x,y".  figure1_section: the DP implicit boundary and
// the separating hypersphere section in the (x1, x2) plane.
std::string figure1_section_csv(const Point& a1, const Point& a2, int n, double window = 1.1,
                                int samples = 400);
// Boundary of a configured domain in the (x1, x2) plane at x' = 0.
std::string config_section_csv(const Domain& D, double window, int samples,
                               const std::string& label = "boundary");

}  // namespace modrad
