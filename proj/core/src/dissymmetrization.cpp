#include "modrad/dissymmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

namespace modrad {

namespace {

double wrap2pi(double x) { return wrap_angle(x); }

// distance of x to the nearest multiple of period T
double dist_mod(double x, double period) {
    double r = std::remainder(x, period);
    return std::abs(r);
}

struct CaseData {
    std::vector<double> pattern;              // piece widths q_1..q_r (palindromic)
    std::vector<std::vector<int>> walks;      // per width rank (ascending), 1-based pieces
};

// Piece layout for one fundamental gap and the per-block walks.  A walk
// lists the piece indices filling a block in order; consecutive entries obey
// i -> i+1 (same cut) or i -> r-i+1 (reflected cut), which is exactly what
// the gluing condition needs at each internal seam.
CaseData case_data(int m, double g, const std::vector<double>& sorted_w) {
    CaseData cd;
    if (m == 2) {
        double a = sorted_w[0] / 2.0;
        cd.pattern = {a, g - 2.0 * a, a};
        cd.walks = {{1, 3}, {1, 2, 2, 3}};
        return cd;
    }
    // m == 3
    const double w1 = sorted_w[0], w2 = sorted_w[1], w3 = sorted_w[2];
    if (std::abs(w2 - g) <= 1e-12) {
        double a = w1 / 2.0;
        cd.pattern = {a, g - 2.0 * a, a};
        cd.walks = {{1, 3}, {1, 2, 3}, {1, 2, 2, 3}};
    } else if (w2 < g) {
        double a = w1 / 2.0, b = (w2 - w1) / 2.0;
        double e = g - 2.0 * a - 2.0 * b;
        cd.pattern = {a, b, e, b, a};
        cd.walks = {{1, 5}, {1, 2, 4, 5}, {1, 2, 3, 3, 3, 4, 2, 4, 5}};
    } else {
        double a = w1 / 2.0, b = (w3 - g) / 2.0;
        double e = 2.0 * g - w1 - w3;
        cd.pattern = {a, b, e, b, a};
        cd.walks = {{1, 5}, {1, 2, 3, 3, 4, 5}, {1, 2, 4, 2, 3, 4, 5}};
    }
    return cd;
}

}  // namespace

SymmetricStructure build_structure(int m, const std::vector<double>& targets) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (static_cast<int>(targets.size()) != m)
        throw std::invalid_argument("need exactly m target rays");
    for (int l = 0; l + 1 < m; ++l)
        if (!(targets[static_cast<size_t>(l)] < targets[static_cast<size_t>(l + 1)]))
            throw std::invalid_argument("targets must be strictly increasing");
    if (m > 1 && !(targets[static_cast<size_t>(m - 1)] - targets[0] < 2.0 * kPi))
        throw std::invalid_argument("targets must span less than a full turn");

    SymmetricStructure s;
    s.m = m;
    s.targets = targets;
    const double g = 2.0 * kPi / m;

    std::vector<double> w(static_cast<size_t>(m));
    for (int l = 0; l < m; ++l) {
        double next = (l + 1 < m) ? targets[static_cast<size_t>(l + 1)]
                                  : targets[0] + 2.0 * kPi;
        w[static_cast<size_t>(l)] = next - targets[static_cast<size_t>(l)];
        if (!(w[static_cast<size_t>(l)] > 0.0))
            throw std::invalid_argument("degenerate target gap");
    }

    bool equal = true;
    for (double wl : w) equal = equal && std::abs(wl - g) <= 1e-12;
    if (equal) {
        // pure rotation: one sector per fundamental gap
        for (int l = 0; l < m; ++l)
            s.sectors.push_back({l * g, (l + 1) * g, wrap2pi(targets[0])});
        return s;
    }
    if (m > 3)
        throw std::runtime_error(
            "no rotation structure available for m > 3 with unequal target spacing");

    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return w[static_cast<size_t>(i)] < w[static_cast<size_t>(j)]; });
    std::vector<double> sorted_w;
    for (int i : order) sorted_w.push_back(w[static_cast<size_t>(i)]);
    std::vector<int> rank_of(static_cast<size_t>(m));
    for (int r = 0; r < m; ++r) rank_of[static_cast<size_t>(order[static_cast<size_t>(r)])] = r;

    CaseData cd = case_data(m, g, sorted_w);
    const int r = static_cast<int>(cd.pattern.size());
    std::vector<double> U(static_cast<size_t>(r) + 1, 0.0);
    for (int i = 1; i <= r; ++i) U[static_cast<size_t>(i)] = U[static_cast<size_t>(i - 1)] + cd.pattern[static_cast<size_t>(i - 1)];

    // pools of unused (gap, piece) copies
    std::vector<std::vector<int>> pool(static_cast<size_t>(r) + 1);
    for (int i = 1; i <= r; ++i)
        for (int l = m - 1; l >= 0; --l) pool[static_cast<size_t>(i)].push_back(l);

    for (int l = 0; l < m; ++l) {
        const std::vector<int>& walk = cd.walks[static_cast<size_t>(rank_of[static_cast<size_t>(l)])];
        double slot = targets[static_cast<size_t>(l)];
        for (size_t step = 0; step < walk.size(); ++step) {
            int piece = walk[step];
            int gap;
            if (step == 0 || step + 1 == walk.size()) {
                // end pieces carry a symmetric ray: they must come from gap l
                auto& pl = pool[static_cast<size_t>(piece)];
                auto it = std::find(pl.begin(), pl.end(), l);
                if (it == pl.end()) throw std::logic_error("walk bookkeeping failed");
                gap = *it;
                pl.erase(it);
            } else {
                auto& pl = pool[static_cast<size_t>(piece)];
                if (pl.empty()) throw std::logic_error("walk bookkeeping failed");
                gap = pl.back();
                pl.pop_back();
            }
            double width = cd.pattern[static_cast<size_t>(piece - 1)];
            double o = gap * g + U[static_cast<size_t>(piece - 1)];
            if (width > 1e-13)
                s.sectors.push_back({o, o + width, wrap2pi(slot - o)});
            slot += width;
        }
    }
    return s;
}

StructureCheck verify_structure(const SymmetricStructure& s, double tol) {
    StructureCheck out;
    if (s.sectors.empty()) {
        out.failure = "no sectors";
        return out;
    }
    const int N = static_cast<int>(s.sectors.size());
    for (const StructureSector& sec : s.sectors)
        if (!(sec.t2 > sec.t1)) {
            out.failure = "empty sector";
            return out;
        }

    auto partition_defect = [&](bool image) {
        std::vector<std::pair<double, double>> iv;  // (start mod 2pi, width)
        double total = 0.0;
        for (const StructureSector& sec : s.sectors) {
            double shift = image ? sec.beta : 0.0;
            iv.push_back({wrap2pi(sec.t1 + shift), sec.t2 - sec.t1});
            total += sec.t2 - sec.t1;
        }
        double defect = std::abs(total - 2.0 * kPi);
        std::sort(iv.begin(), iv.end());
        for (int k = 0; k < N; ++k) {
            double end = iv[static_cast<size_t>(k)].first + iv[static_cast<size_t>(k)].second;
            double next = (k + 1 < N) ? iv[static_cast<size_t>(k + 1)].first
                                      : iv[0].first + 2.0 * kPi;
            defect = std::max(defect, dist_mod(end - next, 2.0 * kPi));
        }
        return defect;
    };
    out.cover_defect = partition_defect(false);
    out.image_cover_defect = partition_defect(true);

    const double g = 2.0 * kPi / s.m;
    for (int l = 0; l < s.m; ++l) {
        double ray = l * g;
        double target = s.targets[static_cast<size_t>(l)];
        for (const StructureSector& sec : s.sectors) {
            double rel = wrap2pi(ray - sec.t1);
            if (rel > sec.t2 - sec.t1 + 1e-9 && rel < 2.0 * kPi - 1e-9) continue;
            out.target_defect =
                std::max(out.target_defect, dist_mod(ray + sec.beta - target, 2.0 * kPi));
        }
    }

    // gluing: if two rotated sectors share a boundary point, the preimages of
    // that point must be equivalent under the dihedral symmetries of the rays
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            const StructureSector& a = s.sectors[static_cast<size_t>(i)];
            const StructureSector& b = s.sectors[static_cast<size_t>(j)];
            const double ends_a[2] = {a.t1, a.t2};
            const double ends_b[2] = {b.t1, b.t2};
            for (double ya : ends_a)
                for (double yb : ends_b) {
                    if (dist_mod((ya + a.beta) - (yb + b.beta), 2.0 * kPi) > 1e-9) continue;
                    double d = std::min(dist_mod(ya - yb, g), dist_mod(ya + yb, g));
                    out.gluing_defect = std::max(out.gluing_defect, d);
                }
        }

    double worst = std::max({out.cover_defect, out.image_cover_defect, out.target_defect,
                             out.gluing_defect});
    out.ok = worst <= tol;
    if (!out.ok) out.failure = "structure condition violated";
    return out;
}

double dis_angle(const SymmetricStructure& s, double theta) {
    for (const StructureSector& sec : s.sectors) {
        double rel = wrap2pi(theta - sec.t1);
        if (rel <= sec.t2 - sec.t1 + 1e-12 || rel >= 2.0 * kPi - 1e-12)
            return wrap2pi(theta + sec.beta);
    }
    throw std::logic_error("angle not covered by structure");
}

DisGridMap make_dis_grid_map(const GridGraph& g, const SymmetricStructure& s) {
    if (g.kind != GridGraph::Kind::Cylindrical || g.n_theta <= 0)
        throw std::invalid_argument("dissymmetrization transport needs a cylindrical grid");
    const double dth = g.theta_step;
    for (const StructureSector& sec : s.sectors) {
        if (dist_mod(sec.t1, dth) > 1e-9 || dist_mod(sec.t2, dth) > 1e-9 ||
            dist_mod(sec.beta, dth) > 1e-9)
            throw std::invalid_argument("structure is not aligned with the grid step");
    }

    DisGridMap out;
    out.grid = &g;
    out.structure = s;
    const int N = static_cast<int>(s.sectors.size());

    out.sector_perm.resize(static_cast<size_t>(N));
    for (int k = 0; k < N; ++k) {
        double beta = s.sectors[static_cast<size_t>(k)].beta;
        auto rot = [beta](const Point& x) { return rotate(x, beta); };
        out.sector_perm[static_cast<size_t>(k)] = edge_permutation(g, node_permutation(g, rot));
    }

    out.sector_of_edge.assign(g.edges.size(), -1);
    for (size_t e = 0; e < g.edges.size(); ++e) {
        int ju = g.theta_index[static_cast<size_t>(g.edges[e].u)];
        int jv = g.theta_index[static_cast<size_t>(g.edges[e].v)];
        int d = (jv - ju + g.n_theta) % g.n_theta;
        double center;
        if (d == 0) center = ju * dth;
        else if (d == 1) center = (ju + 0.5) * dth;
        else if (d == g.n_theta - 1) center = (jv + 0.5) * dth;
        else throw std::logic_error("unexpected angular stride in grid edge");
        for (int k = 0; k < N; ++k) {
            const StructureSector& sec = s.sectors[static_cast<size_t>(k)];
            double rel = wrap2pi(center - sec.t1);
            if (rel > 1e-9 && rel < sec.t2 - sec.t1 - 1e-9) {
                out.sector_of_edge[e] = k;
                break;
            }
        }
        // edges whose center sits on a sector boundary keep -1 (cut ray)
    }
    return out;
}

Curve DisGridMap::map_curve(const Curve& c) const {
    Curve out;
    out.connected = false;  // transport is per edge; connectivity is not tracked
    for (const auto& [e, w] : c.edges) {
        int k = sector_of_edge[static_cast<size_t>(e)];
        if (k < 0)
            throw std::invalid_argument("curve uses an edge on a structure cut ray");
        out.edges.push_back({sector_perm[static_cast<size_t>(k)][static_cast<size_t>(e)], w});
    }
    return out;
}

std::vector<double> DisGridMap::map_density(const std::vector<double>& rho) const {
    std::vector<double> out(rho.size(), 0.0);
    for (size_t e = 0; e < rho.size(); ++e) {
        int k = sector_of_edge[e];
        if (k >= 0) out[static_cast<size_t>(sector_perm[static_cast<size_t>(k)][e])] = rho[e];
    }
    return out;
}

ExplicitFamily dis_family(const DisGridMap& map, const ExplicitFamily& family) {
    ExplicitFamily out;
    for (const Curve& c : family.curves) out.curves.push_back(map.map_curve(c));
    return out;
}

nlohmann::json structure_to_json(const SymmetricStructure& s) {
    nlohmann::json j;
    j["schema"] = "modrad.structure.v1";
    j["m"] = s.m;
    j["targets"] = s.targets;
    nlohmann::json arr = nlohmann::json::array();
    for (const StructureSector& sec : s.sectors)
        arr.push_back({{"t1", sec.t1}, {"t2", sec.t2}, {"beta", sec.beta}});
    j["sectors"] = std::move(arr);
    return j;
}

}  // namespace modrad
