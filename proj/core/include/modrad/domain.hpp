#pragma once

#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <vector>

#include "modrad/geometry.hpp"
#include "modrad/moebius.hpp"

namespace modrad {

// Constructive-solid-geometry domain with a total, deterministic membership
// predicate.  Primitives follow the ring/cylinder/sector conventions
// K(r1,r2) = { r1 < |x| < r2 }, Z(r1,r2) = { r1 < rho < r2 },
// sector = { theta1 < theta < theta2 } (angles mod 2pi, theta2 may exceed 2pi).
class Domain {
  public:
    static Domain all(int n);
    static Domain halfspace(Hyperplane L, bool positive_side);
    static Domain ball(Point center, double radius);
    static Domain ring(int n, double r1, double r2);  // r1 may be 0, r2 may be +inf
    static Domain cylinder(int n, double rho1, double rho2);
    static Domain sector(int n, double theta1, double theta2);
    static Domain moebius_image(MoebiusMap map, Domain base);
    // D_l of the Dubinin--Prilepkina pair: the implicit-inequality region
    // inside B(0,1) defined by the two-pole expression, l = 1 or 2.
    static Domain dp_region(Point a1, Point a2, int n, int l);
    static Domain intersection(std::vector<Domain> parts);
    static Domain union_of(std::vector<Domain> parts);
    static Domain complement(Domain d);

    bool contains(const Point& x) const;
    int dim() const;

    // Value of the DP implicit expression when this node (or a descendant
    // intersection member) is a dp_region; used by the figure emitter.
    double dp_expression(const Point& x) const;

    // Shape introspection for closed-form radius selection; nullopt when the
    // tree is not literally that primitive.
    struct HalfspaceShape {
        Hyperplane plane;
        bool positive_side;
    };
    struct SectorShape {
        double theta1, theta2;
    };
    std::optional<HalfspaceShape> as_halfspace() const;
    std::optional<Ball> as_ball() const;
    std::optional<SectorShape> as_sector() const;

    nlohmann::json to_json() const;
    static Domain from_json(const nlohmann::json& j);

    // Distance from an interior point to the boundary, estimated by bisection
    // along sampled rays; exact for radially-visible boundaries.
    double boundary_distance(const Point& a, double max_radius, int directions_seed = 1) const;

  private:
    struct Node;
    std::shared_ptr<const Node> node_;
    explicit Domain(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

}  // namespace modrad
