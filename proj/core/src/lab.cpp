#include "modrad/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <stdexcept>

namespace modrad {

using nlohmann::json;

// ---------- extremal configurations ----------

Hyperplane bisector_hyperplane(const Point& a1, const Point& a2) {
    check_same_dim(a1, a2, "bisector");
    Point nrm = sub(a1, a2);
    if (norm(nrm) < 1e-14) throw std::invalid_argument("bisector of coinciding points");
    Point mid = scale(add(a1, a2), 0.5);
    return Hyperplane(nrm, dot(nrm, mid));
}

namespace {

void check_mirror_symmetry(const Domain& G, const Hyperplane& L, const Point& around,
                           double radius, int seed) {
    std::mt19937 rng(static_cast<unsigned>(seed) * 2654435761u + 17u);
    std::normal_distribution<double> gauss;
    const int n = around.dim();
    for (int it = 0; it < 400; ++it) {
        Point x = around;
        for (int d = 0; d < n; ++d) x.c[static_cast<size_t>(d)] += radius * gauss(rng);
        if (G.contains(x) != G.contains(reflect(x, L)))
            throw std::invalid_argument("G is not symmetric with respect to the hyperplane");
    }
}

}  // namespace

std::pair<Domain, Domain> extremal_halfspace_pair(const Point& a1, const Point& a2,
                                                  const std::optional<Domain>& G) {
    Hyperplane L = bisector_hyperplane(a1, a2);
    Domain h1 = Domain::halfspace(L, signed_distance(a1, L) > 0.0);
    Domain h2 = Domain::halfspace(L, !(signed_distance(a1, L) > 0.0));
    if (!G) return {h1, h2};
    Point mid = scale(add(a1, a2), 0.5);
    check_mirror_symmetry(*G, L, mid, 2.0 * dist(a1, a2) + 1.0, 1);
    return {Domain::intersection({*G, h1}), Domain::intersection({*G, h2})};
}

SectorDecomposition extremal_sectors(int m, const Domain& G, double rho0, int n) {
    if (m < 1) throw std::invalid_argument("m must be positive");
    if (!(rho0 > 0.0)) throw std::invalid_argument("rho0 must be positive");
    SectorDecomposition out;
    for (int l = 0; l < m; ++l) {
        double th = 2.0 * kPi * l / m;
        Point a = Point::zero(n);
        a.c[0] = rho0 * std::cos(th);
        a.c[1] = rho0 * std::sin(th);
        if (!G.contains(a)) throw std::invalid_argument("circle O(rho0) leaves the domain G");
        out.points.push_back(std::move(a));
        out.domains.push_back(Domain::intersection(
            {G, Domain::sector(n, kPi * (2.0 * l - 1.0) / m, kPi * (2.0 * l + 1.0) / m)}));
    }
    return out;
}

std::pair<Domain, Domain> extremal_kufarev_split(const Point& a1, const Point& a2) {
    PsiMap psi = build_psi(a1, a2);
    const int n = a1.dim();
    Domain ball = Domain::ball(Point::zero(n), 1.0);
    Domain hs_pos = Domain::halfspace(Hyperplane(psi.c, 0.0), true);
    Domain hs_neg = Domain::halfspace(Hyperplane(psi.c, 0.0), false);
    MoebiusMap inv = psi.map.inverse();
    Domain d1 = Domain::moebius_image(inv, Domain::intersection({ball, hs_pos}));
    Domain d2 = Domain::moebius_image(inv, Domain::intersection({ball, hs_neg}));
    if (!d1.contains(a1) || !d2.contains(a2))
        throw std::logic_error("kufarev split mislabeled the components");
    return {d1, d2};
}

std::pair<Domain, Domain> dp_extremal_domains(const Point& a1, const Point& a2, int n) {
    return {Domain::dp_region(a1, a2, n, 1), Domain::dp_region(a1, a2, n, 2)};
}

RadiusValue radius_dihedral_p2_general(const Point& a, double theta1, double theta2, int n) {
    if (n < 3) throw std::invalid_argument("dihedral closed form needs n >= 3");
    const double alpha = theta2 - theta1;
    if (!(alpha > 0.0) || !(alpha <= kPi + 1e-12))
        throw std::invalid_argument("wedge opening must lie in (0, pi]");
    const double kreal = kPi / alpha;
    const int k = static_cast<int>(std::lround(kreal));
    if (k < 1 || std::abs(kreal - k) > 1e-9)
        throw std::invalid_argument("wedge opening must be pi / k");
    CylCoords cc = to_cylindrical(a);
    const double phi = wrap_angle(cc.theta - theta1);
    if (!(phi > 0.0 && phi < alpha)) throw std::invalid_argument("point outside the wedge");
    const double rho = cc.rho;
    auto chord = [&](double other_angle) {
        return 2.0 * rho * std::abs(std::sin(0.5 * (phi - other_angle)));
    };
    double s = 0.0;
    for (int j = 0; j < k; ++j)  // reflections phi -> -phi + 2 j alpha
        s += std::pow(chord(-phi + 2.0 * j * alpha), 2.0 - n);
    for (int j = 1; j < k; ++j)  // rotations phi -> phi + 2 j alpha
        s -= std::pow(chord(phi + 2.0 * j * alpha), 2.0 - n);
    if (!(s > 0.0)) throw std::runtime_error("image sum degenerated");
    return RadiusValue(std::pow(s, 1.0 / (2.0 - n)), RadiusKind::DerivedClosedForm);
}

// ---------- radius computation ----------

ModulusEstimatorOptions modulus_options_for(double grid_h, double outer_cap_factor) {
    if (!(grid_h > 0.0) || grid_h > 0.5) throw std::invalid_argument("bad grid step");
    ModulusEstimatorOptions opt;
    opt.levels_per_octave = std::max(8, static_cast<int>(std::lround(std::log(2.0) / grid_h)));
    opt.n_lat = std::max(12, static_cast<int>(std::lround(kPi / (4.0 * grid_h))));
    opt.n_lon = 2 * opt.n_lat;
    opt.n_theta = std::max(64, static_cast<int>(std::lround(2.0 * kPi / (4.0 * grid_h))));
    opt.outer_cap_factor = outer_cap_factor;
    return opt;
}

RadiusReport compute_radius(const Domain& D, const Point& a, const PExponent& pe,
                            const LabOptions& opt) {
    if (!D.contains(a)) throw std::invalid_argument("point outside its domain");
    const int n = pe.n;
    RadiusReport rep;

    if (auto hs = D.as_halfspace()) {
        const double d = std::abs(signed_distance(a, hs->plane));
        if (pe.conformal_case() || std::abs(pe.p - 2.0) < 1e-14) {
            // (rad1) for p = n; method of images (k = 1 wedge) for p = 2
            rep.value = 2.0 * d;
            rep.source = "closed-form:half-space";
        }
    } else if (auto b = D.as_ball()) {
        const double dc = dist(a, b->center);
        if (dc < 1e-12 * b->radius) {
            rep.value = b->radius;
            rep.source = "closed-form:ball-center";
        } else if (pe.conformal_case() || std::abs(pe.p - 2.0) < 1e-14) {
            // p = n, and the harmonic case in any dimension, share this form
            rep.value = (b->radius * b->radius - dc * dc) / b->radius;
            rep.source = "closed-form:ball";
        }
    } else if (auto sec = D.as_sector()) {
        if (std::abs(pe.p - 2.0) < 1e-14 && n >= 3) {
            RadiusValue rv = radius_dihedral_p2_general(a, sec->theta1, sec->theta2, n);
            rep.value = rv.value;
            rep.source = "closed-form:dihedral";
        }
    }

    if (rep.source.empty()) {
        if (std::abs(pe.p - 2.0) < 1e-14 && (n == 2 || n == 3)) {
            PdeEstimatorOptions popt;
            popt.h = opt.grid_h;
            popt.box_halfwidth = opt.pde_box_halfwidth;
            RadiusEstimate est = estimate_radius_pde(D, a, popt);
            rep.value = est.value;
            rep.error = est.error;
            rep.source = "pde";
        } else {
            RadiusEstimate est =
                estimate_radius_modulus(D, a, pe, modulus_options_for(opt.grid_h, opt.outer_cap_factor));
            rep.value = est.value;
            rep.error = est.error;
            rep.source = "modulus";
        }
    } else if (opt.pde_crosscheck && std::abs(pe.p - 2.0) < 1e-14 && n == 3) {
        PdeEstimatorOptions popt;
        popt.h = opt.grid_h;
        popt.box_halfwidth = opt.pde_box_halfwidth;
        RadiusEstimate est = estimate_radius_pde(D, a, popt);
        rep.cross_value = est.value;
        rep.cross_error = est.error;
        rep.cross_source = "pde";
    }
    return rep;
}

// ---------- verification ----------

namespace {

LabOptions options_from_config(const json& cfg) {
    LabOptions opt;
    if (cfg.contains("grid_h")) opt.grid_h = cfg.at("grid_h").get<double>();
    if (cfg.contains("seed")) opt.seed = cfg.at("seed").get<int>();
    if (cfg.contains("pde_crosscheck")) opt.pde_crosscheck = cfg.at("pde_crosscheck").get<bool>();
    if (cfg.contains("pde_box_halfwidth"))
        opt.pde_box_halfwidth = cfg.at("pde_box_halfwidth").get<double>();
    if (cfg.contains("outer_cap_factor"))
        opt.outer_cap_factor = cfg.at("outer_cap_factor").get<double>();
    return opt;
}

Point point_from(const json& j) { return Point(j.get<std::vector<double>>()); }

struct Interval {
    double lo = 0.0, hi = 0.0;
};

Interval mu_interval(const RadiusReport& r, const PExponent& pe) {
    double rlo = std::max(r.value - r.error, 1e-12);
    double rhi = r.value + r.error;
    // mu_p is strictly decreasing
    return {mu_p(rhi, pe), mu_p(rlo, pe)};
}

Verdict make_verdict(double left, double right, Interval li, Interval ri) {
    Verdict v;
    v.margin = left - right;
    v.margin_lo = li.lo - ri.hi;
    v.margin_hi = li.hi - ri.lo;
    if (v.margin >= 0.0)
        v.state = "holds";
    else if (v.margin_hi >= 0.0)
        v.state = "violated-within-error";
    else
        v.state = "violated";
    return v;
}

void check_disjoint(const Domain& d1, const Domain& d2, const Point& around, double radius,
                    int seed) {
    std::mt19937 rng(static_cast<unsigned>(seed) * 40503u + 3u);
    std::normal_distribution<double> gauss;
    const int n = around.dim();
    auto overlap = [&](const Point& x) { return d1.contains(x) && d2.contains(x); };
    if (overlap(around)) throw std::invalid_argument("domains overlap");
    for (int it = 0; it < 4000; ++it) {
        // mixture of scales so both thin overlaps and containments are seen
        double r = radius * std::pow(0.5, it % 4);
        Point x = around;
        for (int d = 0; d < n; ++d) x.c[static_cast<size_t>(d)] += r * gauss(rng);
        if (overlap(x)) throw std::invalid_argument("domains overlap (sampled common point)");
    }
}

json radius_to_json(const RadiusReport& r) {
    json j;
    j["value"] = r.value;
    j["error"] = r.error;
    j["source"] = r.source;
    if (!r.cross_source.empty()) {
        j["cross_value"] = r.cross_value;
        j["cross_error"] = r.cross_error;
        j["cross_source"] = r.cross_source;
    }
    return j;
}

}  // namespace

json DecompositionReport::to_json() const {
    json j;
    j["schema"] = "modrad.report.v1";
    j["config"] = config;
    json lr = json::array(), rr = json::array();
    for (const RadiusReport& r : left_radii) lr.push_back(radius_to_json(r));
    for (const RadiusReport& r : right_radii) rr.push_back(radius_to_json(r));
    j["left_radii"] = std::move(lr);
    j["right_radii"] = std::move(rr);
    j["left"] = left;
    j["right"] = right;
    j["margin"] = verdict.margin;
    j["margin_interval"] = {verdict.margin_lo, verdict.margin_hi};
    j["verdict"] = verdict.state;
    return j;
}

DecompositionReport verify_theorem1(const json& cfg) {
    const int n = cfg.at("dimension").get<int>();
    PExponent pe(n, cfg.at("p").get<double>());
    Point a1 = point_from(cfg.at("a1")), a2 = point_from(cfg.at("a2"));
    Domain D1 = Domain::from_json(cfg.at("D1")), D2 = Domain::from_json(cfg.at("D2"));
    std::optional<Domain> G;
    if (cfg.contains("G")) G = Domain::from_json(cfg.at("G"));
    LabOptions opt = options_from_config(cfg);

    if (!D1.contains(a1) || !D2.contains(a2))
        throw std::invalid_argument("marked points must lie in their domains");
    if (D1.contains(a2) || D2.contains(a1))
        throw std::invalid_argument("domains overlap at a marked point");
    Point mid = scale(add(a1, a2), 0.5);
    check_disjoint(D1, D2, mid, 2.0 * dist(a1, a2) + 1.0, opt.seed);

    auto [E1, E2] = extremal_halfspace_pair(a1, a2, G);

    DecompositionReport rep;
    rep.config = cfg;
    rep.left_radii = {compute_radius(D1, a1, pe, opt), compute_radius(D2, a2, pe, opt)};
    rep.right_radii = {compute_radius(E1, a1, pe, opt), compute_radius(E2, a2, pe, opt)};
    Interval li{0, 0}, ri{0, 0};
    for (const RadiusReport& r : rep.left_radii) {
        Interval i = mu_interval(r, pe);
        rep.left += mu_p(r.value, pe);
        li.lo += i.lo;
        li.hi += i.hi;
    }
    for (const RadiusReport& r : rep.right_radii) {
        Interval i = mu_interval(r, pe);
        rep.right += mu_p(r.value, pe);
        ri.lo += i.lo;
        ri.hi += i.hi;
    }
    rep.verdict = make_verdict(rep.left, rep.right, li, ri);
    return rep;
}

DecompositionReport verify_lavrentiev(const json& cfg) {
    const int n = cfg.at("dimension").get<int>();
    PExponent pe(n, cfg.at("p").get<double>());
    if (!pe.conformal_case()) throw std::invalid_argument("lavrentiev product form needs p = n");
    Point a1 = point_from(cfg.at("a1")), a2 = point_from(cfg.at("a2"));
    Domain D1 = Domain::from_json(cfg.at("D1")), D2 = Domain::from_json(cfg.at("D2"));
    LabOptions opt = options_from_config(cfg);
    if (!D1.contains(a1) || !D2.contains(a2))
        throw std::invalid_argument("marked points must lie in their domains");
    if (D1.contains(a2) || D2.contains(a1))
        throw std::invalid_argument("domains overlap at a marked point");
    Point mid = scale(add(a1, a2), 0.5);
    check_disjoint(D1, D2, mid, 2.0 * dist(a1, a2) + 1.0, opt.seed);

    DecompositionReport rep;
    rep.config = cfg;
    RadiusReport r1 = compute_radius(D1, a1, pe, opt);
    RadiusReport r2 = compute_radius(D2, a2, pe, opt);
    rep.right_radii = {r1, r2};
    const double d2v = dist(a1, a2) * dist(a1, a2);
    rep.left = d2v;  // |a1 - a2|^2 >= R(a1, D1) R(a2, D2)
    rep.right = r1.value * r2.value;
    Interval ri{std::max(r1.value - r1.error, 0.0) * std::max(r2.value - r2.error, 0.0),
                (r1.value + r1.error) * (r2.value + r2.error)};
    rep.verdict = make_verdict(rep.left, rep.right, {d2v, d2v}, ri);
    return rep;
}

DecompositionReport verify_kufarev(const json& cfg) {
    const int n = cfg.at("dimension").get<int>();
    PExponent pe(n, cfg.at("p").get<double>());
    if (!pe.conformal_case()) throw std::invalid_argument("kufarev inequality needs p = n");
    Point a1 = point_from(cfg.at("a1")), a2 = point_from(cfg.at("a2"));
    Domain D1 = Domain::from_json(cfg.at("D1")), D2 = Domain::from_json(cfg.at("D2"));
    LabOptions opt = options_from_config(cfg);
    if (!D1.contains(a1) || !D2.contains(a2))
        throw std::invalid_argument("marked points must lie in their domains");
    if (D1.contains(a2) || D2.contains(a1))
        throw std::invalid_argument("domains overlap at a marked point");
    check_disjoint(D1, D2, scale(add(a1, a2), 0.5), 1.5, opt.seed);

    auto [E1, E2] = extremal_kufarev_split(a1, a2);
    DecompositionReport rep;
    rep.config = cfg;
    RadiusReport r1 = compute_radius(D1, a1, pe, opt);
    RadiusReport r2 = compute_radius(D2, a2, pe, opt);
    RadiusReport s1 = compute_radius(E1, a1, pe, opt);
    RadiusReport s2 = compute_radius(E2, a2, pe, opt);
    rep.left_radii = {s1, s2};
    rep.right_radii = {r1, r2};
    rep.left = s1.value * s2.value;
    rep.right = r1.value * r2.value;
    Interval li{std::max(s1.value - s1.error, 0.0) * std::max(s2.value - s2.error, 0.0),
                (s1.value + s1.error) * (s2.value + s2.error)};
    Interval ri{std::max(r1.value - r1.error, 0.0) * std::max(r2.value - r2.error, 0.0),
                (r1.value + r1.error) * (r2.value + r2.error)};
    rep.verdict = make_verdict(rep.left, rep.right, li, ri);
    return rep;
}

DecompositionReport verify_corollary3(const json& cfg) {
    const int n = cfg.at("dimension").get<int>();
    if (n < 3) throw std::invalid_argument("corollary 3 needs n >= 3");
    PExponent pe(n, 2.0);
    Point a1 = point_from(cfg.at("a1")), a2 = point_from(cfg.at("a2"));
    Domain D1 = Domain::from_json(cfg.at("D1")), D2 = Domain::from_json(cfg.at("D2"));
    LabOptions opt = options_from_config(cfg);
    if (!D1.contains(a1) || !D2.contains(a2))
        throw std::invalid_argument("marked points must lie in their domains");
    if (D1.contains(a2) || D2.contains(a1))
        throw std::invalid_argument("domains overlap at a marked point");
    check_disjoint(D1, D2, scale(add(a1, a2), 0.5), 1.5, opt.seed);

    PsiMap psi = build_psi(a1, a2);
    const double w1 = psi.map.conformal_factor(a1);
    const double w2 = psi.map.conformal_factor(a2);
    auto [E1, E2] = extremal_kufarev_split(a1, a2);

    auto term = [&](double w, const RadiusReport& r) {
        // (w R)^(2-n): decreasing in R
        double mid = std::pow(w * r.value, 2.0 - n);
        double hi = std::pow(w * std::max(r.value - r.error, 1e-12), 2.0 - n);
        double lo = std::pow(w * (r.value + r.error), 2.0 - n);
        return std::array<double, 3>{mid, lo, hi};
    };

    DecompositionReport rep;
    rep.config = cfg;
    RadiusReport r1 = compute_radius(D1, a1, pe, opt);
    RadiusReport r2 = compute_radius(D2, a2, pe, opt);
    RadiusReport s1 = compute_radius(E1, a1, pe, opt);
    RadiusReport s2 = compute_radius(E2, a2, pe, opt);
    rep.left_radii = {r1, r2};
    rep.right_radii = {s1, s2};
    auto t1 = term(w1, r1), t2 = term(w2, r2), u1 = term(w1, s1), u2 = term(w2, s2);
    rep.left = t1[0] + t2[0];
    rep.right = u1[0] + u2[0];
    rep.verdict = make_verdict(rep.left, rep.right, {t1[1] + t2[1], t1[2] + t2[2]},
                               {u1[1] + u2[1], u1[2] + u2[2]});
    return rep;
}

DecompositionReport verify_theorem2(const json& cfg) {
    const int n = cfg.at("dimension").get<int>();
    PExponent pe(n, cfg.at("p").get<double>());
    const int m = cfg.at("m").get<int>();
    const double rho1 = cfg.at("rho1").get<double>();
    const double rho2cfg = cfg.at("rho2").get<double>();
    const double rho0 = cfg.at("rho0").get<double>();
    const bool cyl = cfg.value("cylinder", false);
    if (!(rho1 < rho0 && rho0 < rho2cfg)) throw std::invalid_argument("need rho1 < rho0 < rho2");
    LabOptions opt = options_from_config(cfg);

    Domain G = cyl ? Domain::cylinder(n, rho1, rho2cfg) : Domain::ring(n, rho1, rho2cfg);
    SectorDecomposition ext = extremal_sectors(m, G, rho0, n);

    std::vector<Point> points;
    std::vector<Domain> domains;
    if (cfg.contains("perturbation_delta")) {
        const double delta = cfg.at("perturbation_delta").get<double>();
        // shift the dividing ray between D_0^* and D_1^* by delta
        points = ext.points;
        for (int l = 0; l < m; ++l) {
            double lo = kPi * (2.0 * l - 1.0) / m;
            double hi = kPi * (2.0 * l + 1.0) / m;
            if (l == 0) hi += delta;
            if (l == 1) lo += delta;
            domains.push_back(Domain::intersection({G, Domain::sector(n, lo, hi)}));
        }
    } else {
        for (const auto& jp : cfg.at("points")) points.push_back(point_from(jp));
        for (const auto& jd : cfg.at("domains")) domains.push_back(Domain::from_json(jd));
    }
    if (static_cast<int>(points.size()) != m || static_cast<int>(domains.size()) != m)
        throw std::invalid_argument("need m points and m domains");
    for (int l = 0; l < m; ++l) {
        CylCoords cc = to_cylindrical(points[static_cast<size_t>(l)]);
        if (std::abs(cc.rho - rho0) > 1e-9)
            throw std::invalid_argument("marked point off the circle O(rho0)");
        if (!domains[static_cast<size_t>(l)].contains(points[static_cast<size_t>(l)]))
            throw std::invalid_argument("marked points must lie in their domains");
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            check_disjoint(domains[static_cast<size_t>(i)], domains[static_cast<size_t>(j)],
                           Point::zero(n), rho0 + 1.0, opt.seed + i * m + j);

    DecompositionReport rep;
    rep.config = cfg;
    Interval li{0, 0}, ri{0, 0};
    for (int l = 0; l < m; ++l) {
        RadiusReport r =
            compute_radius(domains[static_cast<size_t>(l)], points[static_cast<size_t>(l)], pe, opt);
        Interval i = mu_interval(r, pe);
        rep.left += mu_p(r.value, pe);
        li.lo += i.lo;
        li.hi += i.hi;
        rep.left_radii.push_back(std::move(r));
    }
    RadiusReport r0 = compute_radius(ext.domains[0], ext.points[0], pe, opt);
    Interval i0 = mu_interval(r0, pe);
    rep.right = m * mu_p(r0.value, pe);
    ri.lo = m * i0.lo;
    ri.hi = m * i0.hi;
    rep.right_radii.push_back(std::move(r0));
    rep.verdict = make_verdict(rep.left, rep.right, li, ri);
    return rep;
}

// ---------- figure emission ----------

namespace {

void append_point(std::string& csv, const std::string& curve, double x, double y) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g\n", curve.c_str(), x, y);
    csv += buf;
}

}  // namespace

std::string figure1_section_csv(const Point& a1, const Point& a2, int n, double window,
                                int samples) {
    if (n < 3) throw std::invalid_argument("figure needs n >= 3");
    Domain d1 = Domain::dp_region(a1, a2, n, 1);
    auto expr = [&](double x, double y) {
        Point p = Point::zero(n);
        p.c[0] = x;
        p.c[1] = y;
        return d1.dp_expression(p);
    };
    std::string csv = "curve,x1,x2\n";
    const double h = 2.0 * window / samples;
    auto bisect_emit = [&](double x0, double y0, double x1, double y1) {
        double f0 = expr(x0, y0), f1v = expr(x1, y1);
        if (!(f0 * f1v < 0.0)) return;
        for (int it = 0; it < 80; ++it) {
            double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
            double fm = expr(xm, ym);
            if (f0 * fm <= 0.0) {
                x1 = xm; y1 = ym; f1v = fm;
            } else {
                x0 = xm; y0 = ym; f0 = fm;
            }
        }
        double x = 0.5 * (x0 + x1), y = 0.5 * (y0 + y1);
        if (x * x + y * y < 1.0) append_point(csv, "dp_boundary", x, y);
    };
    for (int i = 0; i <= samples; ++i)
        for (int j = 0; j < samples; ++j) {
            double x = -window + i * h, y = -window + j * h;
            bisect_emit(x, y, x, y + h);          // vertical segment
            bisect_emit(y, x, y + h, x);          // horizontal segment
        }

    SphereOrPlane C = separating_hypersphere(a1, a2);
    const int arc = 720;
    if (const Sphere* sp = std::get_if<Sphere>(&C)) {
        for (int i = 0; i <= arc; ++i) {
            double th = 2.0 * kPi * i / arc;
            double x = sp->center[0] + sp->radius * std::cos(th);
            double y = sp->center[1] + sp->radius * std::sin(th);
            if (x * x + y * y <= 1.0) append_point(csv, "separating_sphere", x, y);
        }
    } else {
        const Hyperplane& pl = std::get<Hyperplane>(C);
        // intersection of the hyperplane with the (x1, x2) plane: a chord
        double nx = pl.normal[0], ny = pl.normal[1];
        double nn = std::hypot(nx, ny);
        if (nn > 1e-14) {
            double px = pl.offset * nx / (nn * nn), py = pl.offset * ny / (nn * nn);
            double tx = -ny / nn, ty = nx / nn;
            for (int i = 0; i <= arc; ++i) {
                double t = -1.0 + 2.0 * i / arc;
                double x = px + t * tx, y = py + t * ty;
                if (x * x + y * y <= 1.0) append_point(csv, "separating_sphere", x, y);
            }
        }
    }
    for (int i = 0; i <= arc; ++i) {
        double th = 2.0 * kPi * i / arc;
        append_point(csv, "unit_sphere", std::cos(th), std::sin(th));
    }
    return csv;
}

std::string config_section_csv(const Domain& D, double window, int samples,
                               const std::string& label) {
    const int n = D.dim();
    auto inside = [&](double x, double y) {
        Point p = Point::zero(n);
        p.c[0] = x;
        p.c[1] = y;
        return D.contains(p);
    };
    std::string csv = "curve,x1,x2\n";
    const double h = 2.0 * window / samples;
    auto bisect_emit = [&](double x0, double y0, double x1, double y1) {
        bool i0 = inside(x0, y0), i1 = inside(x1, y1);
        if (i0 == i1) return;
        for (int it = 0; it < 60; ++it) {
            double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
            if (inside(xm, ym) == i0) {
                x0 = xm; y0 = ym;
            } else {
                x1 = xm; y1 = ym;
            }
        }
        append_point(csv, label, 0.5 * (x0 + x1), 0.5 * (y0 + y1));
    };
    for (int i = 0; i <= samples; ++i)
        for (int j = 0; j < samples; ++j) {
            double x = -window + i * h, y = -window + j * h;
            bisect_emit(x, y, x, y + h);
            bisect_emit(y, x, y + h, x);
        }
    return csv;
}

}  // namespace modrad
