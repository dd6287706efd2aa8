#include "modrad/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <unordered_map>

namespace modrad {

void GridGraph::finalize() {
    incident.assign(nodes.size(), {});
    edge_lookup_.clear();
    for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        const Edge& e = edges[static_cast<size_t>(i)];
        if (e.u < 0 || e.v < 0 || e.u >= static_cast<int>(nodes.size()) ||
            e.v >= static_cast<int>(nodes.size()) || e.u == e.v)
            throw std::invalid_argument("grid edge with bad endpoints");
        if (!(e.len > 0.0) || !(e.sigma > 0.0))
            throw std::invalid_argument("grid edge needs positive length and weight");
        incident[static_cast<size_t>(e.u)].push_back(i);
        incident[static_cast<size_t>(e.v)].push_back(i);
        edge_lookup_[{std::min(e.u, e.v), std::max(e.u, e.v)}] = i;
    }
}

int GridGraph::find_edge(int u, int v) const {
    auto it = edge_lookup_.find({std::min(u, v), std::max(u, v)});
    return it == edge_lookup_.end() ? -1 : it->second;
}

nlohmann::json GridGraph::to_json(const std::vector<double>* density) const {
    nlohmann::json j;
    j["schema"] = "modrad.grid.v1";
    switch (kind) {
        case Kind::Cartesian: j["kind"] = "cartesian"; break;
        case Kind::Cylindrical: j["kind"] = "cylindrical"; break;
        case Kind::Spherical: j["kind"] = "spherical"; break;
        case Kind::Abstract: j["kind"] = "abstract"; break;
    }
    j["dimension"] = n;
    nlohmann::json jn = nlohmann::json::array();
    for (const Point& p : nodes) jn.push_back(p.c);
    j["nodes"] = std::move(jn);
    nlohmann::json je = nlohmann::json::array();
    for (size_t i = 0; i < edges.size(); ++i) {
        nlohmann::json row = {{"u", edges[i].u}, {"v", edges[i].v},
                              {"len", edges[i].len}, {"sigma", edges[i].sigma}};
        if (density) row["rho"] = (*density)[i];
        je.push_back(std::move(row));
    }
    j["edges"] = std::move(je);
    nlohmann::json jt = nlohmann::json::object();
    for (const auto& [name, ids] : tags) jt[name] = ids;
    j["tags"] = std::move(jt);
    return j;
}

std::vector<double> geometric_levels(double r_min, double r_max, int per_octave) {
    if (!(r_min > 0.0) || !(r_max > r_min)) throw std::invalid_argument("bad level range");
    if (per_octave < 1) throw std::invalid_argument("per_octave must be >= 1");
    const double ratio = std::pow(2.0, 1.0 / per_octave);
    std::vector<double> out;
    double r = r_min;
    while (r < r_max * (1.0 - 1e-12)) {
        out.push_back(r);
        r *= ratio;
    }
    out.push_back(r);
    return out;
}

namespace {

// Dual radial extents of each level: half-gap to each neighbor.
std::vector<double> dual_extents(const std::vector<double>& levels) {
    const size_t m = levels.size();
    std::vector<double> d(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        double lo = i == 0 ? levels[0] : 0.5 * (levels[i - 1] + levels[i]);
        double hi = i + 1 == m ? levels[m - 1] : 0.5 * (levels[i] + levels[i + 1]);
        d[i] = hi - lo;
    }
    return d;
}

void check_levels(const std::vector<double>& levels) {
    if (levels.size() < 2) throw std::invalid_argument("need at least two radial levels");
    for (size_t i = 0; i < levels.size(); ++i) {
        if (!(levels[i] > 0.0)) throw std::invalid_argument("radial levels must be positive");
        if (i > 0 && !(levels[i] > levels[i - 1]))
            throw std::invalid_argument("radial levels must increase");
    }
}

}  // namespace

GridGraph make_cylindrical_grid(int n, const std::vector<double>& rho_levels, int n_theta,
                                const std::vector<double>& z_levels,
                                const std::optional<Domain>& trim) {
    if (n != 2 && n != 3) throw std::invalid_argument("cylindrical grid needs n = 2 or 3");
    if (n_theta < 3) throw std::invalid_argument("need at least 3 angular nodes");
    check_levels(rho_levels);
    std::vector<double> zl = z_levels;
    if (n == 2) zl = {0.0};
    if (n == 3 && zl.size() < 2)
        throw std::invalid_argument("cylindrical grid with n = 3 needs z levels");

    GridGraph g;
    g.kind = GridGraph::Kind::Cylindrical;
    g.n = n;
    g.n_theta = n_theta;
    g.theta_step = 2.0 * kPi / n_theta;
    const int nr = static_cast<int>(rho_levels.size());
    const int nz = static_cast<int>(zl.size());
    const double dth = g.theta_step;
    const std::vector<double> drho = dual_extents(rho_levels);
    const std::vector<double> dz = nz > 1 ? dual_extents(zl) : std::vector<double>{1.0};

    auto make_point = [&](int i, int j, int k) {
        double rho = rho_levels[static_cast<size_t>(i)];
        double th = j * dth;
        Point p = Point::zero(n);
        p.c[0] = rho * std::cos(th);
        p.c[1] = rho * std::sin(th);
        if (n == 3) p.c[2] = zl[static_cast<size_t>(k)];
        return p;
    };

    // id grid with -1 for trimmed-out lattice sites
    std::vector<int> id(static_cast<size_t>(nr) * n_theta * nz, -1);
    auto at = [&](int i, int j, int k) -> int& {
        return id[(static_cast<size_t>(i) * n_theta + static_cast<size_t>(j)) * nz + k];
    };
    std::vector<char> inside(id.size(), 0);
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < n_theta; ++j)
            for (int k = 0; k < nz; ++k) {
                Point p = make_point(i, j, k);
                bool in = !trim || trim->contains(p);
                if (in) {
                    at(i, j, k) = g.add_node(p);
                    g.theta_index.push_back(j);
                }
                inside[(static_cast<size_t>(i) * n_theta + j) * nz + k] = in ? 1 : 0;
            }

    std::vector<int> boundary;
    auto in_at = [&](int i, int j, int k) {
        return inside[(static_cast<size_t>(i) * n_theta + j) * nz + k] != 0;
    };
    auto mark_boundary = [&](int i, int j, int k) {
        // lattice neighbor was trimmed away => this node touches the boundary
        boundary.push_back(at(i, j, k));
    };

    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < n_theta; ++j)
            for (int k = 0; k < nz; ++k) {
                if (!in_at(i, j, k)) continue;
                const double rho = rho_levels[static_cast<size_t>(i)];
                bool touches = false;
                // radial
                if (i + 1 < nr) {
                    if (in_at(i + 1, j, k)) {
                        double rbar = 0.5 * (rho + rho_levels[static_cast<size_t>(i + 1)]);
                        double len = rho_levels[static_cast<size_t>(i + 1)] - rho;
                        double sigma = (n == 2) ? rbar * len * dth
                                                : rbar * len * dth * dz[static_cast<size_t>(k)];
                        g.add_edge(at(i, j, k), at(i + 1, j, k), len, sigma);
                    } else {
                        touches = true;
                    }
                }
                if (i > 0 && !in_at(i - 1, j, k)) touches = true;
                // angular
                {
                    int j2 = (j + 1) % n_theta;
                    if (in_at(i, j2, k)) {
                        double len = rho * dth;
                        double sigma = (n == 2)
                                           ? rho * dth * drho[static_cast<size_t>(i)]
                                           : rho * dth * drho[static_cast<size_t>(i)] *
                                                 dz[static_cast<size_t>(k)];
                        g.add_edge(at(i, j, k), at(i, j2, k), len, sigma);
                    } else {
                        touches = true;
                    }
                    if (!in_at(i, (j + n_theta - 1) % n_theta, k)) touches = true;
                }
                // axial
                if (n == 3) {
                    if (k + 1 < nz) {
                        if (in_at(i, j, k + 1)) {
                            double len = zl[static_cast<size_t>(k + 1)] - zl[static_cast<size_t>(k)];
                            double sigma = rho * dth * drho[static_cast<size_t>(i)] * len;
                            g.add_edge(at(i, j, k), at(i, j, k + 1), len, sigma);
                        } else {
                            touches = true;
                        }
                    }
                    if (k > 0 && !in_at(i, j, k - 1)) touches = true;
                }
                if (touches && trim) mark_boundary(i, j, k);
            }
    if (trim) g.tags["boundary"] = std::move(boundary);
    g.finalize();
    return g;
}

GridGraph make_spherical_grid(const Point& center, const std::vector<double>& radii, int n_lat,
                              int n_lon, const std::optional<Domain>& trim) {
    if (center.dim() != 3) throw std::invalid_argument("spherical grid needs a 3-d center");
    if (n_lat < 2 || n_lon < 3) throw std::invalid_argument("spherical grid too coarse");
    check_levels(radii);

    GridGraph g;
    g.kind = GridGraph::Kind::Spherical;
    g.n = 3;
    const int nr = static_cast<int>(radii.size());
    const double dphi = kPi / n_lat;
    const double dpsi = 2.0 * kPi / n_lon;
    const std::vector<double> dr = dual_extents(radii);

    auto lat_of = [&](int a) { return (a + 0.5) * dphi; };
    auto make_point = [&](int i, int a, int b) {
        const double r = radii[static_cast<size_t>(i)];
        const double phi = lat_of(a), psi = b * dpsi;
        Point p = center;
        p.c[0] += r * std::sin(phi) * std::cos(psi);
        p.c[1] += r * std::sin(phi) * std::sin(psi);
        p.c[2] += r * std::cos(phi);
        return p;
    };

    std::vector<int> id(static_cast<size_t>(nr) * n_lat * n_lon, -1);
    auto at = [&](int i, int a, int b) -> int& {
        return id[(static_cast<size_t>(i) * n_lat + static_cast<size_t>(a)) * n_lon + b];
    };
    std::vector<char> inside(id.size(), 0);
    for (int i = 0; i < nr; ++i)
        for (int a = 0; a < n_lat; ++a)
            for (int b = 0; b < n_lon; ++b) {
                Point p = make_point(i, a, b);
                bool in = !trim || trim->contains(p);
                if (in) at(i, a, b) = g.add_node(p);
                inside[(static_cast<size_t>(i) * n_lat + a) * n_lon + b] = in ? 1 : 0;
            }

    auto in_at = [&](int i, int a, int b) {
        return inside[(static_cast<size_t>(i) * n_lat + a) * n_lon + b] != 0;
    };
    std::vector<int> boundary;
    for (int i = 0; i < nr; ++i)
        for (int a = 0; a < n_lat; ++a)
            for (int b = 0; b < n_lon; ++b) {
                if (!in_at(i, a, b)) continue;
                const double r = radii[static_cast<size_t>(i)];
                const double sphi = std::sin(lat_of(a));
                const double cell_angle = sphi * dphi * dpsi;  // solid-angle element
                bool touches = false;
                if (i + 1 < nr) {
                    if (in_at(i + 1, a, b)) {
                        double rbar = 0.5 * (r + radii[static_cast<size_t>(i + 1)]);
                        double len = radii[static_cast<size_t>(i + 1)] - r;
                        g.add_edge(at(i, a, b), at(i + 1, a, b), len,
                                   rbar * rbar * len * cell_angle);
                    } else {
                        touches = true;
                    }
                }
                if (i > 0 && !in_at(i - 1, a, b)) touches = true;
                if (a + 1 < n_lat) {
                    if (in_at(i, a + 1, b)) {
                        double sphib = std::sin(0.5 * (lat_of(a) + lat_of(a + 1)));
                        g.add_edge(at(i, a, b), at(i, a + 1, b), r * dphi,
                                   r * r * dr[static_cast<size_t>(i)] * sphib * dphi * dpsi);
                    } else {
                        touches = true;
                    }
                }
                if (a > 0 && !in_at(i, a - 1, b)) touches = true;
                {
                    int b2 = (b + 1) % n_lon;
                    if (in_at(i, a, b2)) {
                        g.add_edge(at(i, a, b), at(i, a, b2), r * sphi * dpsi,
                                   r * r * dr[static_cast<size_t>(i)] * cell_angle);
                    } else {
                        touches = true;
                    }
                    if (!in_at(i, a, (b + n_lon - 1) % n_lon)) touches = true;
                }
                if (touches && trim) boundary.push_back(at(i, a, b));
            }
    if (trim) g.tags["boundary"] = std::move(boundary);
    g.finalize();
    return g;
}

GridGraph make_cartesian_grid(const Point& lo, const Point& hi, double h,
                              const std::optional<Domain>& trim) {
    check_same_dim(lo, hi, "cartesian grid box");
    if (!(h > 0.0)) throw std::invalid_argument("grid step must be positive");
    const int n = lo.dim();
    std::vector<int> counts(static_cast<size_t>(n));
    size_t total = 1;
    for (int d = 0; d < n; ++d) {
        if (!(hi.c[static_cast<size_t>(d)] > lo.c[static_cast<size_t>(d)]))
            throw std::invalid_argument("empty box");
        counts[static_cast<size_t>(d)] =
            static_cast<int>(std::floor((hi.c[static_cast<size_t>(d)] -
                                         lo.c[static_cast<size_t>(d)]) / h + 1e-9)) + 1;
        total *= static_cast<size_t>(counts[static_cast<size_t>(d)]);
        if (total > 80u * 1000u * 1000u) throw std::invalid_argument("cartesian grid too large");
    }

    GridGraph g;
    g.kind = GridGraph::Kind::Cartesian;
    g.n = n;
    std::vector<int> id(total, -1);
    std::vector<char> inside(total, 0);
    std::vector<int> multi(static_cast<size_t>(n));
    auto flat = [&](const std::vector<int>& m) {
        size_t f = 0;
        for (int d = 0; d < n; ++d) f = f * static_cast<size_t>(counts[static_cast<size_t>(d)]) +
                                        static_cast<size_t>(m[static_cast<size_t>(d)]);
        return f;
    };
    auto make_point = [&](const std::vector<int>& m) {
        Point p = lo;
        for (int d = 0; d < n; ++d) p.c[static_cast<size_t>(d)] += m[static_cast<size_t>(d)] * h;
        return p;
    };
    auto advance = [&](std::vector<int>& m) {
        for (int d = n - 1; d >= 0; --d) {
            if (++m[static_cast<size_t>(d)] < counts[static_cast<size_t>(d)]) return true;
            m[static_cast<size_t>(d)] = 0;
        }
        return false;
    };

    std::fill(multi.begin(), multi.end(), 0);
    do {
        Point p = make_point(multi);
        bool in = !trim || trim->contains(p);
        inside[flat(multi)] = in ? 1 : 0;
        if (in) id[flat(multi)] = g.add_node(p);
    } while (advance(multi));

    const double sigma = std::pow(h, n);  // full dual-cell volume per edge direction
    std::vector<int> boundary;
    std::fill(multi.begin(), multi.end(), 0);
    do {
        if (!inside[flat(multi)]) continue;
        bool touches = false;
        for (int d = 0; d < n; ++d) {
            std::vector<int> m2 = multi;
            ++m2[static_cast<size_t>(d)];
            if (m2[static_cast<size_t>(d)] < counts[static_cast<size_t>(d)]) {
                if (inside[flat(m2)])
                    g.add_edge(id[flat(multi)], id[flat(m2)], h, sigma);
                else
                    touches = true;
            }
            m2[static_cast<size_t>(d)] -= 2;
            if (m2[static_cast<size_t>(d)] >= 0 && !inside[flat(m2)]) touches = true;
        }
        if (touches && trim) boundary.push_back(id[flat(multi)]);
    } while (advance(multi));
    if (trim) g.tags["boundary"] = std::move(boundary);
    g.finalize();
    return g;
}

void tag_sphere(GridGraph& g, const std::string& name, const Point& center, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    std::vector<int> picked;
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
        const Point& p = g.nodes[static_cast<size_t>(i)];
        double r = dist(p, center);
        // half a local step: use the shortest incident edge as the local scale
        double step = std::numeric_limits<double>::infinity();
        for (int e : g.incident[static_cast<size_t>(i)])
            step = std::min(step, g.edges[static_cast<size_t>(e)].len);
        if (std::isfinite(step) && std::abs(r - t) <= 0.5 * step) picked.push_back(i);
    }
    if (picked.empty()) throw std::runtime_error("sphere tag '" + name + "' matched no nodes");
    g.tags[name] = std::move(picked);
}

}  // namespace modrad
