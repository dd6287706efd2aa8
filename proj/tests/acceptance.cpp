// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Tolerances are pinned here and nowhere else.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modrad/dissymmetrization.hpp"
#include "modrad/lab.hpp"

using namespace modrad;

namespace {

int g_failures = 0;

void criterion(int id, const char* label, bool ok, const std::string& detail) {
    std::printf("%s  criterion %2d  %s  [%s]\n", ok ? "PASS" : "FAIL", id, label, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> uniform_levels(double a, double b, int k) {
    std::vector<double> v;
    for (int i = 0; i <= k; ++i) v.push_back(a + (b - a) * i / k);
    return v;
}

int theta_index(const GridGraph& g, int node, int n_theta) {
    CylCoords cc = to_cylindrical(g.nodes[static_cast<size_t>(node)]);
    int j = static_cast<int>(std::llround(wrap_angle(cc.theta) * n_theta / (2.0 * kPi)));
    return ((j % n_theta) + n_theta) % n_theta;
}

// Independent oracle for the ring modulus: n omega_n (mu_p(r) - mu_p(R))^{1-p}
// with the mu difference re-derived by Simpson quadrature of t^{-gamma-1}.
double ring_modulus_quadrature(int n, double p, double r, double R) {
    const double gamma = (n - p) / (p - 1.0);
    const double omega_n = std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
    const int steps = 4096;
    const double h = (R - r) / steps;
    auto f = [&](double t) { return std::pow(t, -gamma - 1.0); };
    double s = f(r) + f(R);
    for (int i = 1; i < steps; ++i) s += (i % 2 ? 4.0 : 2.0) * f(r + i * h);
    const double mu_diff = s * h / 3.0;
    return n * omega_n * std::pow(mu_diff, 1.0 - p);
}

// All simple source-to-sink paths; the brute-force family generator.
std::vector<Curve> all_simple_paths(const GridGraph& g, const std::vector<int>& source,
                                    const std::vector<int>& sink) {
    std::vector<char> is_sink(g.nodes.size(), 0), visited(g.nodes.size(), 0);
    for (int s : sink) is_sink[static_cast<size_t>(s)] = 1;
    std::vector<Curve> out;
    std::vector<std::pair<int, double>> stack;
    auto dfs = [&](auto&& self, int u) -> void {
        if (is_sink[static_cast<size_t>(u)]) {
            Curve c;
            c.edges = stack;
            out.push_back(std::move(c));
            return;
        }
        for (int e : g.incident[static_cast<size_t>(u)]) {
            int v = g.other_end(e, u);
            if (visited[static_cast<size_t>(v)]) continue;
            visited[static_cast<size_t>(v)] = 1;
            stack.push_back({e, 1.0});
            self(self, v);
            stack.pop_back();
            visited[static_cast<size_t>(v)] = 0;
        }
    };
    for (int s : source) {
        if (is_sink[static_cast<size_t>(s)]) continue;
        std::fill(visited.begin(), visited.end(), 0);
        visited[static_cast<size_t>(s)] = 1;
        dfs(dfs, s);
    }
    return out;
}

GridGraph random_small_graph(std::mt19937& rng, int n_nodes) {
    std::uniform_real_distribution<double> len(0.4, 1.6), sig(0.3, 2.0);
    std::bernoulli_distribution extra(0.35);
    GridGraph g;
    g.kind = GridGraph::Kind::Abstract;
    for (int i = 0; i < n_nodes; ++i) g.add_node(Point{static_cast<double>(i), 0.0});
    for (int i = 0; i + 1 < n_nodes; ++i) g.add_edge(i, i + 1, len(rng), sig(rng));
    for (int i = 0; i < n_nodes; ++i)
        for (int j = i + 2; j < n_nodes; ++j)
            if (extra(rng)) g.add_edge(i, j, len(rng), sig(rng));
    g.finalize();
    return g;
}

std::vector<double> random_targets(std::mt19937& rng, int m) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    while (true) {
        std::set<double> s;
        while (static_cast<int>(s.size()) < m) s.insert(u(rng));
        std::vector<double> t(s.begin(), s.end());
        bool ok = 2.0 * kPi - t.back() + t.front() >= 0.05;
        for (size_t i = 1; i < t.size(); ++i)
            if (t[i] - t[i - 1] < 0.05) ok = false;
        if (ok) return t;
    }
}

Point random_in_ball(std::mt19937& rng, int n, double rmax) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    while (true) {
        Point p = Point::zero(n);
        for (int i = 0; i < n; ++i) p.c[static_cast<size_t>(i)] = u(rng);
        if (norm(p) < rmax) return p;
    }
}

// ---------- criteria ----------

void criterion1_ring_modulus() {
    bool ok = true;
    std::ostringstream detail;
    std::vector<double> levels = uniform_levels(1.0, 2.0, 64);  // grid step 1/64
    for (auto [n, p] : {std::pair{2, 2.0}, {3, 2.0}, {3, 3.0}}) {
        GridGraph g = (n == 2) ? make_cylindrical_grid(2, levels, 256, {})
                               : make_spherical_grid(Point::zero(3), levels, 32, 64);
        tag_sphere(g, "in", Point::zero(n), 1.0);
        tag_sphere(g, "out", Point::zero(n), 2.0);
        SolveOptions so;
        so.inner_tol = 1e-4;
        auto t0 = std::chrono::steady_clock::now();
        ModulusResult r =
            solve_modulus(g, ConnectorFamily{g.tags.at("in"), g.tags.at("out"), {}}, p, so);
        const double secs = seconds_since(t0);
        const double oracle = ring_modulus_quadrature(n, p, 1.0, 2.0);
        const double rel = std::abs(r.value / oracle - 1.0);
        if (rel > 0.05 || secs >= 60.0) ok = false;
        char buf[80];
        std::snprintf(buf, sizeof buf, "n%d p%.0f rel %.1e %.1fs; ", n, p, rel, secs);
        detail << buf;
    }
    criterion(1, "ring modulus vs quadrature oracle (5%, <60s)", ok, detail.str());
}

void criterion2_ball_recovery() {
    bool ok = true;
    std::ostringstream detail;
    Domain ball = Domain::ball(Point::zero(3), 1.0);
    for (double p : {2.0, 3.0}) {
        RadiusEstimate est = estimate_radius_modulus(ball, Point::zero(3), PExponent(3, p),
                                                     modulus_options_for(1.0 / 32));
        if (!(est.value >= 0.90 && est.value <= 1.10)) ok = false;
        char buf[48];
        std::snprintf(buf, sizeof buf, "mod p%.0f %.4f; ", p, est.value);
        detail << buf;
    }
    PdeEstimatorOptions po;
    po.h = 1.0 / 32;
    RadiusEstimate pde = estimate_radius_pde(ball, Point::zero(3), po);
    if (!(pde.value >= 0.97 && pde.value <= 1.03)) ok = false;
    char buf[32];
    std::snprintf(buf, sizeof buf, "pde %.4f", pde.value);
    detail << buf;
    criterion(2, "unit-ball radius recovery ([0.90,1.10]; pde [0.97,1.03])", ok, detail.str());
}

void criterion3_wedge() {
    const double reference = 1.0938;  // alternating-sum value for k=2, t=1
    const double closed = radius_dihedral_harmonic(1.0, 2, PExponent(3, 2.0)).value;
    Domain wedge = Domain::sector(3, -kPi / 4, kPi / 4);
    Point apex(std::vector<double>{1.0, 0.0, 0.0});
    PdeEstimatorOptions po;
    po.h = 1.0 / 16;
    po.box_halfwidth = 4.0;
    RadiusEstimate est = estimate_radius_pde(wedge, apex, po);
    const double rel = std::abs(est.value / reference - 1.0);
    bool ok = std::abs(closed - reference) < 5e-4 && rel <= 0.10;
    char buf[80];
    std::snprintf(buf, sizeof buf, "closed %.4f pde %.4f rel %.3f", closed, est.value, rel);
    criterion(3, "quarter-wedge harmonic radius (10% of 1.0938)", ok, std::string(buf));
}

void criterion4_reflection_ratio() {
    bool ok = true;
    double worst = 0.0;
    const int n_theta = 24;
    GridGraph g = make_cylindrical_grid(2, uniform_levels(1.0, 2.0, 10), n_theta, {});
    tag_sphere(g, "in", Point::zero(2), 1.0);
    tag_sphere(g, "out", Point::zero(2), 2.0);
    SolveOptions so;
    so.inner_tol = 1e-10;
    so.tol = 1e-8;
    for (int m : {1, 2, 3}) {
        const int half = n_theta / (2 * m);
        std::vector<char> allowed(g.nodes.size(), 0);
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            int j = theta_index(g, static_cast<int>(i), n_theta);
            if (j >= 1 && j <= half - 1) allowed[i] = 1;  // open half-sector interior
        }
        auto pick = [&](const std::vector<int>& tagged) {
            std::vector<int> out;
            for (int v : tagged)
                if (allowed[static_cast<size_t>(v)]) out.push_back(v);
            return out;
        };
        ConnectorFamily base{pick(g.tags.at("in")), pick(g.tags.at("out")), allowed};
        auto images = dihedral_edge_images(g, m);
        for (double p : {1.5, 2.0, 3.0}) {
            ModulusResult m0 = solve_modulus(g, CurveFamily{base}, p, so);
            ModulusResult ms = solve_modulus(g, CurveFamily{SymmetrizedFamily{base, images}}, p, so);
            const double want = std::pow(2.0 * m, 1.0 - p);
            const double rel = std::abs(ms.value / m0.value / want - 1.0);
            worst = std::max(worst, rel);
            if (rel > 1e-3) ok = false;
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "worst rel %.1e", worst);
    criterion(4, "reflection symmetrization ratio (2m)^{1-p} (1e-3)", ok, std::string(buf));
}

void criterion5_dis_invariance() {
    bool ok = true;
    double worst = 0.0;
    const int nt = 240;
    const double dth = 2.0 * kPi / nt;
    GridGraph g = make_cylindrical_grid(2, uniform_levels(1.0, 2.0, 6), nt, {});
    SymmetricStructure s = build_structure(2, {0.0, 100 * dth});
    DisGridMap map = make_dis_grid_map(g, s);
    std::vector<std::vector<int>> node_at(7, std::vector<int>(nt, -1));
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        CylCoords cc = to_cylindrical(g.nodes[i]);
        int li = static_cast<int>(std::llround((cc.rho - 1.0) * 6));
        node_at[static_cast<size_t>(li)][static_cast<size_t>(theta_index(g, static_cast<int>(i), nt))] =
            static_cast<int>(i);
    }
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> u_theta(0, nt - 1), u_step(-1, 1);
    SolveOptions so;
    so.inner_tol = 1e-10;
    for (int fam = 0; fam < 10; ++fam) {
        ExplicitFamily ef;
        while (ef.curves.size() < 5) {
            int j = u_theta(rng);
            Curve c;
            bool good = true;
            for (int lvl = 0; lvl < 6 && good; ++lvl) {
                int side = u_step(rng);
                if (side != 0) {
                    int j2 = ((j + side) % nt + nt) % nt;
                    int e = g.find_edge(node_at[static_cast<size_t>(lvl)][static_cast<size_t>(j)],
                                        node_at[static_cast<size_t>(lvl)][static_cast<size_t>(j2)]);
                    if (e < 0 || map.sector_of_edge[static_cast<size_t>(e)] < 0) {
                        good = false;
                        break;
                    }
                    c.edges.push_back({e, 1.0});
                    j = j2;
                }
                int e = g.find_edge(node_at[static_cast<size_t>(lvl)][static_cast<size_t>(j)],
                                    node_at[static_cast<size_t>(lvl) + 1][static_cast<size_t>(j)]);
                if (e < 0 || map.sector_of_edge[static_cast<size_t>(e)] < 0) {
                    good = false;
                    break;
                }
                c.edges.push_back({e, 1.0});
            }
            if (good) ef.curves.push_back(std::move(c));
        }
        ExplicitFamily dis = dis_family(map, ef);
        for (double p : {1.5, 2.5}) {
            ModulusResult r1 = solve_modulus(g, CurveFamily{ef}, p, so);
            ModulusResult r2 = solve_modulus(g, CurveFamily{dis}, p, so);
            const double gaps = std::max(0.0, r1.value - r1.lower_bound) +
                                std::max(0.0, r2.value - r2.lower_bound);
            const double diff = std::abs(r1.value - r2.value);
            worst = std::max(worst, diff - gaps);
            if (diff > gaps) ok = false;
        }
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "worst excess %.1e", worst);
    criterion(5, "dissymmetrization keeps the modulus within certified gaps", ok, std::string(buf));
}

void criterion6_structures() {
    bool ok = true;
    std::string failure;
    std::mt19937 rng(51);
    for (int m = 1; m <= 3 && ok; ++m)
        for (int rep = 0; rep < 5 && ok; ++rep) {
            std::vector<double> targets = random_targets(rng, m);
            SymmetricStructure s = build_structure(m, targets);
            StructureCheck chk = verify_structure(s);
            if (!chk.ok) {
                ok = false;
                failure = chk.failure;
                break;
            }
            // the symmetric rays must land exactly on the prescribed targets
            std::multiset<long long> got, want;
            for (int l = 0; l < m; ++l) {
                got.insert(std::llround(wrap_angle(dis_angle(s, 2.0 * kPi * l / m)) * 1e9));
                want.insert(std::llround(wrap_angle(targets[static_cast<size_t>(l)]) * 1e9));
            }
            if (got != want) {
                ok = false;
                failure = "ray images off target";
            }
        }
    criterion(6, "rotation structures verify (aP,bP,aS,bS + ray transport)", ok,
              ok ? "m=1..3 x 5 target sets" : failure);
}

void criterion7_two_point_inequality() {
    bool ok = true;
    std::ostringstream detail;
    PExponent pe(3, 3.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
        const double gap = 0.5 + u(rng);
        const double r1 = 0.3 + 0.7 * u(rng), r2 = 0.3 + 0.7 * u(rng);
        Point a1 = Point::zero(3), a2 = Point::zero(3);
        a1.c[0] = -(r1 + gap / 2);
        a2.c[0] = r2 + gap / 2;
        a1.c[1] = 0.3 * (u(rng) - 0.5);
        a2.c[1] = 0.3 * (u(rng) - 0.5);
        RadiusEstimate e1 =
            estimate_radius_modulus(Domain::ball(a1, r1), a1, pe, modulus_options_for(1.0 / 12));
        RadiusEstimate e2 =
            estimate_radius_modulus(Domain::ball(a2, r2), a2, pe, modulus_options_for(1.0 / 12));
        const double prod = e1.value * e2.value;
        const double d2 = dist(a1, a2) * dist(a1, a2);
        const double budget = d2 * (1.0 + e1.error / e1.value + e2.error / e2.value);
        worst = std::max(worst, prod / budget);
        if (prod > budget) ok = false;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "worst prod/budget %.3f; ", worst);
    detail << buf;
    // opposing half-spaces: the inequality is tight, product = |a1-a2|^2
    Point a1(std::vector<double>{-1.0, 0.0, 0.0}), a2(std::vector<double>{1.0, 0.0, 0.0});
    Hyperplane wall{Point(std::vector<double>{1.0, 0.0, 0.0}), 0.0};
    RadiusEstimate h1 = estimate_radius_modulus(Domain::halfspace(wall, false), a1, pe,
                                                modulus_options_for(1.0 / 32));
    RadiusEstimate h2 = estimate_radius_modulus(Domain::halfspace(wall, true), a2, pe,
                                                modulus_options_for(1.0 / 32));
    const double eq_rel = std::abs(h1.value * h2.value / 4.0 - 1.0);
    if (eq_rel > 0.10) ok = false;
    std::snprintf(buf, sizeof buf, "halfspace equality rel %.4f", eq_rel);
    detail << buf;
    criterion(7, "two-point product bound, p=n=3 (10 pairs + tight pair)", ok, detail.str());
}

void criterion8_perturbed_decomposition() {
    bool ok = true;
    std::ostringstream detail;
    double prev = -1e300;
    for (double delta : {0.1, 0.2, 0.4}) {
        nlohmann::json cfg = {{"dimension", 3}, {"p", 2.0},   {"m", 2},
                              {"rho1", 0.5},    {"rho2", 2.0}, {"rho0", 1.0},
                              {"perturbation_delta", delta},   {"grid_h", 1.0 / 48}};
        DecompositionReport rep = verify_theorem2(cfg);
        const double margin = rep.left - rep.right;
        if (rep.verdict.state != "holds" || margin < prev) ok = false;
        prev = margin;
        char buf[48];
        std::snprintf(buf, sizeof buf, "d%.1f margin %+.6f; ", delta, margin);
        detail << buf;
    }
    criterion(8, "perturbed ring decomposition: positive nondecreasing margins", ok, detail.str());
}

void criterion9_psi_and_separator() {
    bool ok = true;
    double worst_sym = 0.0, worst_orth = 0.0;
    std::mt19937 rng(91);
    for (int k = 0; k < 100; ++k) {
        const int n = (k % 2) ? 4 : 3;
        Point a1 = random_in_ball(rng, n, 0.95), a2 = random_in_ball(rng, n, 0.95);
        if (dist(a1, a2) < 1e-2) {
            --k;
            continue;
        }
        PsiMap psi = build_psi(a1, a2);
        const double sym = norm(add(psi.map.apply(a1), psi.map.apply(a2)));
        worst_sym = std::max(worst_sym, sym);
        if (sym > 1e-10) ok = false;
        SphereOrPlane C = separating_hypersphere(a1, a2);
        double orth;
        if (const Sphere* sp = std::get_if<Sphere>(&C))
            orth = std::abs(norm(sp->center) * norm(sp->center) - sp->radius * sp->radius - 1.0);
        else
            orth = std::abs(std::get<Hyperplane>(C).offset);
        worst_orth = std::max(worst_orth, orth);
        if (orth > 1e-9) ok = false;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "worst antipode %.1e orth %.1e", worst_sym, worst_orth);
    criterion(9, "psi antipodality (1e-10) and separator orthogonality (1e-9)", ok,
              std::string(buf));
}

void criterion10_property_suite() {
    bool ok = true;
    double worst = 0.0;
    int families = 0;
    std::mt19937 rng(31);
    SolveOptions so;
    so.inner_tol = 1e-10;
    const double tol = 1e-8;
    auto inv = [](double m, double p) { return std::pow(m, 1.0 / (1.0 - p)); };
    auto note = [&](double slack, int fams) {
        worst = std::min(worst, slack);
        families += fams;
        if (slack < -tol) ok = false;
    };
    for (int it = 0; it < 4; ++it) {
        const double p = 1.7 + 0.3 * it;
        GridGraph g = random_small_graph(rng, 8 + it);
        std::vector<int> src{0}, snk{static_cast<int>(g.nodes.size()) - 1};
        std::vector<Curve> paths = all_simple_paths(g, src, snk);
        // generated connector agrees with brute-force enumeration
        ModulusResult full = solve_modulus(g, ExplicitFamily{paths}, p, so);
        ModulusResult conn = solve_modulus(g, ConnectorFamily{src, snk, {}}, p, so);
        note(1e-6 - std::abs(conn.value / full.value - 1.0), 1);
        // monotonicity: a subfamily has no larger modulus
        std::vector<Curve> sub;
        for (size_t i = 0; i < paths.size(); i += 2) sub.push_back(paths[i]);
        ModulusResult msub = solve_modulus(g, ExplicitFamily{sub}, p, so);
        note(full.value - msub.value, 1);
        // subadditivity over a split of the path list
        std::vector<Curve> part_a(paths.begin(), paths.begin() + paths.size() / 2);
        std::vector<Curve> part_b(paths.begin() + paths.size() / 2, paths.end());
        if (!part_a.empty() && !part_b.empty()) {
            ModulusResult ma = solve_modulus(g, ExplicitFamily{part_a}, p, so);
            ModulusResult mb = solve_modulus(g, ExplicitFamily{part_b}, p, so);
            note(ma.value + mb.value - full.value, 2);
        }
        // overflowing: curves extended past the sink cannot raise the modulus
        std::vector<Curve> longer = paths;
        for (Curve& c : longer)
            for (int e : g.incident[static_cast<size_t>(snk[0])]) {
                bool used = false;
                for (auto [ce, w] : c.edges) used = used || ce == e;
                if (!used) {
                    c.edges.push_back({e, 1.0});
                    break;
                }
            }
        ModulusResult mlong = solve_modulus(g, ExplicitFamily{longer}, p, so);
        note(full.value - mlong.value, 1);
    }
    // serial rule on two blocks in series joined at a single node
    for (int it = 0; it < 2; ++it) {
        const double p = (it == 0) ? 2.0 : 2.6;
        GridGraph g = random_small_graph(rng, 6);
        GridGraph h = random_small_graph(rng, 6);
        GridGraph s;
        s.kind = GridGraph::Kind::Abstract;
        for (int i = 0; i < 11; ++i) s.add_node(Point{static_cast<double>(i), 0.0});
        for (const auto& e : g.edges) s.add_edge(e.u, e.v, e.len, e.sigma);
        for (const auto& e : h.edges) s.add_edge(e.u + 5, e.v + 5, e.len, e.sigma);
        s.finalize();
        ModulusResult whole = solve_modulus(s, ConnectorFamily{{0}, {10}, {}}, p, so);
        ModulusResult first = solve_modulus(s, ExplicitFamily{all_simple_paths(s, {0}, {5})}, p, so);
        ModulusResult second =
            solve_modulus(s, ExplicitFamily{all_simple_paths(s, {5}, {10})}, p, so);
        note(inv(whole.value, p) - inv(first.value, p) - inv(second.value, p) +
                 1e-6 * inv(whole.value, p),
             3);
    }
    char buf[56];
    std::snprintf(buf, sizeof buf, "%d families, worst slack %.1e", families, worst);
    criterion(10, "modulus property suite vs brute-force paths (-1e-8)", ok, std::string(buf));
}

void criterion11_figure_section() {
    Point a1 = Point::zero(4), a2 = Point::zero(4);
    a1.c[0] = 0.5;
    a2.c[0] = 1.0 / 3.0;
    std::string csv = figure1_section_csv(a1, a2, 4);
    Domain dp = Domain::dp_region(a1, a2, 4, 1);
    int n_boundary = 0, n_arc = 0;
    double worst = 0.0;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    bool ok = line == "curve,x1,x2";
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string name, sx, sy;
        std::getline(ls, name, ',');
        std::getline(ls, sx, ',');
        std::getline(ls, sy, ',');
        if (name == "dp_boundary") {
            ++n_boundary;
            Point q = Point::zero(4);
            q.c[0] = std::stod(sx);
            q.c[1] = std::stod(sy);
            worst = std::max(worst, std::abs(dp.dp_expression(q)));
        } else if (name == "separating_sphere") {
            ++n_arc;
        }
    }
    if (n_boundary == 0 || n_arc == 0 || worst >= 1e-6) ok = false;
    char buf[72];
    std::snprintf(buf, sizeof buf, "%d boundary pts (worst |expr| %.1e), %d arc pts", n_boundary,
                  worst, n_arc);
    criterion(11, "figure section: implicit boundary + separator arc CSV", ok, std::string(buf));
}

}  // namespace

int main() {
    criterion1_ring_modulus();
    criterion2_ball_recovery();
    criterion3_wedge();
    criterion4_reflection_ratio();
    criterion5_dis_invariance();
    criterion6_structures();
    criterion7_two_point_inequality();
    criterion8_perturbed_decomposition();
    criterion9_psi_and_separator();
    criterion10_property_suite();
    criterion11_figure_section();
    std::printf("%s (%d of 11 criteria failed)\n", g_failures ? "ACCEPTANCE FAIL" : "ACCEPTANCE PASS",
                g_failures);
    return g_failures ? 1 : 0;
}
