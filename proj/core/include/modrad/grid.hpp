#pragma once

#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "modrad/domain.hpp"
#include "modrad/geometry.hpp"

namespace modrad {

// Weighted grid graph carrying a discretized domain.  Edges have a length
// l_e and a volume weight sigma_e (the dual-cell volume seen by the edge's
// direction).  Named node subsets ("tags") mark spheres and boundaries for
// connector families.
struct GridGraph {
    enum class Kind { Cartesian, Cylindrical, Spherical, Abstract };

    struct Edge {
        int u = -1, v = -1;
        double len = 0.0;
        double sigma = 0.0;
    };

    Kind kind = Kind::Abstract;
    int n = 2;
    std::vector<Point> nodes;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> incident;  // node -> incident edge ids
    std::map<std::string, std::vector<int>> tags;

    // Cylindrical bookkeeping: angular index per node and total angular count,
    // so that rotations/reflections by grid steps act as automorphisms.
    std::vector<int> theta_index;
    int n_theta = 0;
    double theta_step = 0.0;

    int add_node(Point p) {
        nodes.push_back(std::move(p));
        return static_cast<int>(nodes.size()) - 1;
    }
    void add_edge(int u, int v, double len, double sigma) {
        edges.push_back({u, v, len, sigma});
    }
    void finalize();

    int other_end(int edge_id, int node) const {
        const Edge& e = edges[static_cast<size_t>(edge_id)];
        return e.u == node ? e.v : e.u;
    }

    // Edge lookup by endpoint pair (built by finalize()).
    int find_edge(int u, int v) const;

    nlohmann::json to_json(const std::vector<double>* density = nullptr) const;

  private:
    std::map<std::pair<int, int>, int> edge_lookup_;
};

// Polar (n = 2) or cylindrical (n = 3) grid.  Angular nodes sit at integer
// multiples of 2pi/n_theta so that the dihedral symmetries used by the
// reflection and dissymmetrization lemmas act as graph automorphisms.
GridGraph make_cylindrical_grid(int n, const std::vector<double>& rho_levels, int n_theta,
                                const std::vector<double>& z_levels,
                                const std::optional<Domain>& trim = std::nullopt);

// Latitude/longitude spherical grid for n = 3, centered at `center`.
// Radial levels are arbitrary increasing radii; latitude nodes are offset by
// half a step so no node sits on the axis.
GridGraph make_spherical_grid(const Point& center, const std::vector<double>& radii, int n_lat,
                              int n_lon, const std::optional<Domain>& trim = std::nullopt);

// Axis-aligned cartesian grid with spacing h over [lo, hi], trimmed to the
// domain when given.
GridGraph make_cartesian_grid(const Point& lo, const Point& hi, double h,
                              const std::optional<Domain>& trim = std::nullopt);

// Geometric radius ladder: levels per octave between r_min and r_max
// (both included; r_max rounded up to the next level).
std::vector<double> geometric_levels(double r_min, double r_max, int per_octave);

// Tag all nodes within half a local grid step of the sphere S(center, t).
void tag_sphere(GridGraph& g, const std::string& name, const Point& center, double t);

}  // namespace modrad
