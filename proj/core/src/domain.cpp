#include "modrad/domain.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

namespace modrad {

using nlohmann::json;

namespace {

double sector_gap(double theta, double t1, double t2) {
    // Membership of theta in the open arc (t1, t2) taken mod 2pi.
    double w = t2 - t1;
    double rel = wrap_angle(theta - t1);
    return (rel > 0.0 && rel < w) ? 1.0 : -1.0;
}

json point_to_json(const Point& p) { return json(p.c); }
Point point_from_json(const json& j) { return Point(j.get<std::vector<double>>()); }

}  // namespace

struct Domain::Node {
    enum class Kind {
        All,
        HalfSpace,
        Ball,
        Ring,
        Cylinder,
        Sector,
        MoebiusImage,
        DpRegion,
        Intersection,
        Union,
        Complement
    };

    Kind kind;
    int n = 0;
    // HalfSpace
    std::optional<Hyperplane> plane;
    bool positive_side = true;
    // Ball
    std::optional<Point> center;
    double radius = 0.0;
    // Ring / Cylinder
    double r1 = 0.0, r2 = 0.0;
    // Sector
    double theta1 = 0.0, theta2 = 0.0;
    // MoebiusImage
    std::optional<MoebiusMap> map;
    std::optional<MoebiusMap> inverse_map;
    // DpRegion
    std::optional<Point> a1, a2;
    int dp_l = 1;
    // Composite
    std::vector<Domain> children;
};

Domain Domain::all(int n) {
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::All;
    nd->n = n;
    return Domain(nd);
}

Domain Domain::halfspace(Hyperplane L, bool positive_side) {
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::HalfSpace;
    nd->n = L.normal.dim();
    nd->plane = std::move(L);
    nd->positive_side = positive_side;
    return Domain(nd);
}

Domain Domain::ball(Point center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be > 0");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Ball;
    nd->n = center.dim();
    nd->center = std::move(center);
    nd->radius = radius;
    return Domain(nd);
}

Domain Domain::ring(int n, double r1, double r2) {
    if (!(r1 >= 0.0) || !(r2 > r1)) throw std::invalid_argument("Domain::ring: need 0 <= r1 < r2");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Ring;
    nd->n = n;
    nd->r1 = r1;
    nd->r2 = r2;
    return Domain(nd);
}

Domain Domain::cylinder(int n, double rho1, double rho2) {
    if (!(rho1 >= 0.0) || !(rho2 > rho1))
        throw std::invalid_argument("Domain::cylinder: need 0 <= rho1 < rho2");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Cylinder;
    nd->n = n;
    nd->r1 = rho1;
    nd->r2 = rho2;
    return Domain(nd);
}

Domain Domain::sector(int n, double theta1, double theta2) {
    if (!(theta2 > theta1) || theta2 - theta1 > 2.0 * kPi + 1e-12)
        throw std::invalid_argument("Domain::sector: need theta1 < theta2 <= theta1 + 2pi");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Sector;
    nd->n = n;
    nd->theta1 = theta1;
    nd->theta2 = theta2;
    return Domain(nd);
}

Domain Domain::moebius_image(MoebiusMap map, Domain base) {
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::MoebiusImage;
    nd->n = base.dim();
    nd->inverse_map = map.inverse();
    nd->map = std::move(map);
    nd->children.push_back(std::move(base));
    return Domain(nd);
}

Domain Domain::dp_region(Point a1, Point a2, int n, int l) {
    if (n < 3) throw std::invalid_argument("Domain::dp_region: n must be >= 3");
    if (l != 1 && l != 2) throw std::invalid_argument("Domain::dp_region: l must be 1 or 2");
    if (norm(a1) < 1e-14 || norm(a2) < 1e-14)
        throw std::invalid_argument("Domain::dp_region: poles must be nonzero");
    if (!(norm(a1) < 1.0) || !(norm(a2) < 1.0))
        throw std::invalid_argument("Domain::dp_region: poles must lie in B(0,1)");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::DpRegion;
    nd->n = n;
    nd->a1 = std::move(a1);
    nd->a2 = std::move(a2);
    nd->dp_l = l;
    return Domain(nd);
}

Domain Domain::intersection(std::vector<Domain> parts) {
    if (parts.empty()) throw std::invalid_argument("Domain::intersection: empty");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Intersection;
    nd->n = parts.front().dim();
    nd->children = std::move(parts);
    return Domain(nd);
}

Domain Domain::union_of(std::vector<Domain> parts) {
    if (parts.empty()) throw std::invalid_argument("Domain::union_of: empty");
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Union;
    nd->n = parts.front().dim();
    nd->children = std::move(parts);
    return Domain(nd);
}

Domain Domain::complement(Domain d) {
    auto nd = std::make_shared<Node>();
    nd->kind = Node::Kind::Complement;
    nd->n = d.dim();
    nd->children.push_back(std::move(d));
    return Domain(nd);
}

int Domain::dim() const { return node_->n; }


std::optional<Domain::HalfspaceShape> Domain::as_halfspace() const {
    if (node_->kind != Node::Kind::HalfSpace) return std::nullopt;
    return HalfspaceShape{*node_->plane, node_->positive_side};
}

std::optional<Ball> Domain::as_ball() const {
    if (node_->kind != Node::Kind::Ball) return std::nullopt;
    return Ball(*node_->center, node_->radius);
}

std::optional<Domain::SectorShape> Domain::as_sector() const {
    if (node_->kind != Node::Kind::Sector) return std::nullopt;
    return SectorShape{node_->theta1, node_->theta2};
}

double Domain::dp_expression(const Point& x) const {
    const Node& nd = *node_;
    if (nd.kind == Node::Kind::Intersection || nd.kind == Node::Kind::Union) {
        for (const Domain& ch : nd.children) {
            try {
                return ch.dp_expression(x);
            } catch (const std::logic_error&) {
            }
        }
        throw std::logic_error("dp_expression: no dp_region node");
    }
    if (nd.kind != Node::Kind::DpRegion) throw std::logic_error("dp_expression: no dp_region node");
    double s = 0.0;
    const Point* as[2] = {&*nd.a1, &*nd.a2};
    for (int k = 1; k <= 2; ++k) {
        const Point& ak = *as[k - 1];
        const double akn = norm(ak);
        const double d1 = dist(x, ak);
        // | |a_k| x - a_k/|a_k| |
        const Point q = sub(scale(x, akn), scale(ak, 1.0 / akn));
        const double d2 = norm(q);
        const double sign = ((k + nd.dp_l) % 2 == 0) ? 1.0 : -1.0;  // (-1)^{k+l}
        s += sign * (std::pow(d1, 2.0 - nd.n) - std::pow(d2, 2.0 - nd.n));
    }
    return s;
}

bool Domain::contains(const Point& x) const {
    const Node& nd = *node_;
    switch (nd.kind) {
        case Node::Kind::All:
            return true;
        case Node::Kind::HalfSpace: {
            const double s = dot(x, nd.plane->normal) - nd.plane->offset;
            return nd.positive_side ? s > 0.0 : s < 0.0;
        }
        case Node::Kind::Ball:
            return dist(x, *nd.center) < nd.radius;
        case Node::Kind::Ring: {
            const double r = norm(x);
            return r > nd.r1 && r < nd.r2;
        }
        case Node::Kind::Cylinder: {
            const double rho = std::hypot(x[0], x[1]);
            return rho > nd.r1 && rho < nd.r2;
        }
        case Node::Kind::Sector: {
            const double rho = std::hypot(x[0], x[1]);
            if (rho == 0.0) return false;
            return sector_gap(std::atan2(x[1], x[0]), nd.theta1, nd.theta2) > 0.0;
        }
        case Node::Kind::MoebiusImage: {
            try {
                return nd.children.front().contains(nd.inverse_map->apply(x));
            } catch (const std::domain_error&) {
                return false;  // pole of the inverse map
            }
        }
        case Node::Kind::DpRegion:
            return norm(x) < 1.0 && dp_expression(x) > 0.0;
        case Node::Kind::Intersection:
            for (const Domain& ch : nd.children)
                if (!ch.contains(x)) return false;
            return true;
        case Node::Kind::Union:
            for (const Domain& ch : nd.children)
                if (ch.contains(x)) return true;
            return false;
        case Node::Kind::Complement:
            return !nd.children.front().contains(x);
    }
    return false;
}

double Domain::boundary_distance(const Point& a, double max_radius, int directions_seed) const {
    if (!contains(a)) throw std::invalid_argument("boundary_distance: point not in domain");
    std::mt19937_64 rng(static_cast<uint64_t>(directions_seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = a.dim();
    const int ndirs = 64 * n;
    double best = max_radius;
    for (int d = 0; d < ndirs; ++d) {
        Point dir = Point::zero(n);
        double nn = 0.0;
        do {
            for (int i = 0; i < n; ++i) dir[i] = gauss(rng);
            nn = norm(dir);
        } while (nn < 1e-12);
        dir = scale(dir, 1.0 / nn);
        // Bracket the first exit along the ray, then bisect.
        double lo = 0.0, hi = -1.0;
        const int steps = 256;
        for (int s = 1; s <= steps; ++s) {
            const double t = best * s / steps;
            if (!contains(add(a, scale(dir, t)))) {
                hi = t;
                lo = best * (s - 1) / steps;
                break;
            }
        }
        if (hi < 0.0) continue;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (contains(add(a, scale(dir, mid))) ? lo : hi) = mid;
        }
        best = std::min(best, hi);
    }
    return best;
}

json Domain::to_json() const {
    const Node& nd = *node_;
    json j;
    switch (nd.kind) {
        case Node::Kind::All:
            j["type"] = "all";
            j["n"] = nd.n;
            break;
        case Node::Kind::HalfSpace:
            j["type"] = "halfspace";
            j["normal"] = point_to_json(nd.plane->normal);
            j["offset"] = nd.plane->offset;
            j["positive_side"] = nd.positive_side;
            break;
        case Node::Kind::Ball:
            j["type"] = "ball";
            j["center"] = point_to_json(*nd.center);
            j["radius"] = nd.radius;
            break;
        case Node::Kind::Ring:
            j["type"] = "ring";
            j["n"] = nd.n;
            j["r1"] = nd.r1;
            j["r2"] = std::isinf(nd.r2) ? json("inf") : json(nd.r2);
            break;
        case Node::Kind::Cylinder:
            j["type"] = "cylinder";
            j["n"] = nd.n;
            j["rho1"] = nd.r1;
            j["rho2"] = std::isinf(nd.r2) ? json("inf") : json(nd.r2);
            break;
        case Node::Kind::Sector:
            j["type"] = "sector";
            j["n"] = nd.n;
            j["theta1"] = nd.theta1;
            j["theta2"] = nd.theta2;
            break;
        case Node::Kind::DpRegion:
            j["type"] = "dp_region";
            j["n"] = nd.n;
            j["a1"] = point_to_json(*nd.a1);
            j["a2"] = point_to_json(*nd.a2);
            j["l"] = nd.dp_l;
            break;
        case Node::Kind::MoebiusImage:
            throw std::logic_error("Domain::to_json: moebius_image nodes are not serializable");
        case Node::Kind::Intersection:
        case Node::Kind::Union: {
            j["type"] = nd.kind == Node::Kind::Intersection ? "intersection" : "union";
            json parts = json::array();
            for (const Domain& ch : nd.children) parts.push_back(ch.to_json());
            j["parts"] = parts;
            break;
        }
        case Node::Kind::Complement:
            j["type"] = "complement";
            j["of"] = nd.children.front().to_json();
            break;
    }
    return j;
}

Domain Domain::from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    auto radius_field = [&](const char* key) {
        const json& v = j.at(key);
        if (v.is_string()) return std::numeric_limits<double>::infinity();
        return v.get<double>();
    };
    if (type == "all") return all(j.at("n").get<int>());
    if (type == "halfspace")
        return halfspace(Hyperplane(point_from_json(j.at("normal")), j.at("offset").get<double>()),
                         j.value("positive_side", true));
    if (type == "ball") return ball(point_from_json(j.at("center")), j.at("radius").get<double>());
    if (type == "ring")
        return ring(j.at("n").get<int>(), j.at("r1").get<double>(), radius_field("r2"));
    if (type == "cylinder")
        return cylinder(j.at("n").get<int>(), j.at("rho1").get<double>(), radius_field("rho2"));
    if (type == "sector")
        return sector(j.at("n").get<int>(), j.at("theta1").get<double>(),
                      j.at("theta2").get<double>());
    if (type == "dp_region")
        return dp_region(point_from_json(j.at("a1")), point_from_json(j.at("a2")),
                         j.at("n").get<int>(), j.at("l").get<int>());
    if (type == "intersection" || type == "union") {
        std::vector<Domain> parts;
        for (const json& p : j.at("parts")) parts.push_back(from_json(p));
        return type == "intersection" ? intersection(std::move(parts))
                                      : union_of(std::move(parts));
    }
    if (type == "complement") return complement(from_json(j.at("of")));
    throw std::invalid_argument("Domain::from_json: unknown type " + type);
}

}  // namespace modrad
