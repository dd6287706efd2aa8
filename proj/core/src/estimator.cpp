#include "modrad/estimator.hpp"

#include "modrad/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace modrad {

namespace {

struct Extent {
    double r_max = 0.0;
    bool bounded = true;
};

// Farthest point of D visible from a along sampled rays, capped.
Extent probe_extent(const Domain& D, const Point& a, double cap) {
    const int n = a.dim();
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss;
    Extent out;
    const int dirs = 128 * n;
    const int steps = 512;
    for (int d = 0; d < dirs; ++d) {
        Point u = Point::zero(n);
        double nn = 0.0;
        while (nn < 1e-12) {
            for (double& c : u.c) c = gauss(rng);
            nn = norm(u);
        }
        u = scale(u, 1.0 / nn);
        double last_in = 0.0;
        for (int s = 1; s <= steps; ++s) {
            double r = cap * s / steps;
            if (D.contains(add(a, scale(u, r)))) last_in = r;
        }
        out.r_max = std::max(out.r_max, last_in);
        if (last_in >= cap * (1.0 - 1.5 / steps)) out.bounded = false;
    }
    return out;
}

double fit_phi0(const std::vector<double>& t, const std::vector<double>& phi, double* exponent,
                double* spread) {
    const size_t J = t.size();
    auto fit_subset = [&](size_t skip, double* q_out) {
        // least squares phi = phi0 + c t^q over a grid of exponents q
        double best_res = std::numeric_limits<double>::infinity();
        double best_phi0 = 0.0, best_q = 1.0;
        for (double q = 0.2; q <= 3.0 + 1e-9; q += 0.05) {
            double s1 = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
            for (size_t j = 0; j < J; ++j) {
                if (j == skip) continue;
                double x = std::pow(t[j], q), y = phi[j];
                s1 += 1; sx += x; sxx += x * x; sy += y; sxy += x * y;
            }
            double det = s1 * sxx - sx * sx;
            if (std::abs(det) < 1e-300) continue;
            double phi0 = (sy * sxx - sx * sxy) / det;
            double c = (s1 * sxy - sx * sy) / det;
            double res = 0.0;
            for (size_t j = 0; j < J; ++j) {
                if (j == skip) continue;
                double r = phi[j] - phi0 - c * std::pow(t[j], q);
                res += r * r;
            }
            if (res < best_res) {
                best_res = res;
                best_phi0 = phi0;
                best_q = q;
            }
        }
        if (!std::isfinite(best_res)) {
            // flat fallback
            double m = 0;
            size_t cnt = 0;
            for (size_t j = 0; j < J; ++j)
                if (j != skip) { m += phi[j]; ++cnt; }
            best_phi0 = m / static_cast<double>(cnt);
            best_q = 0.0;
        }
        if (q_out) *q_out = best_q;
        return best_phi0;
    };

    double q = 1.0;
    double phi0 = fit_subset(J, &q);  // skip index J == no skip
    double sp = 0.0;
    for (size_t j = 0; j < J; ++j) sp = std::max(sp, std::abs(fit_subset(j, nullptr) - phi0));
    if (exponent) *exponent = q;
    if (spread) *spread = sp;
    return phi0;
}

}  // namespace

RadiusEstimate estimate_radius_modulus(const Domain& D, const Point& a, const PExponent& pe,
                                       const ModulusEstimatorOptions& opt) {
    const int n = a.dim();
    if (n != pe.n) throw std::invalid_argument("point dimension does not match exponent");
    if (n != 2 && n != 3)
        throw std::invalid_argument("modulus estimator supports n = 2 and n = 3");
    if (!D.contains(a)) throw std::invalid_argument("center must lie in the domain");

    if (pe.conformal_case()) {
        // p = n moduli are Moebius invariant, so transport a half-space to the
        // unit ball with `a` at the center, where the radial grid is exact.
        if (auto hs = D.as_halfspace()) {
            const double sd = signed_distance(a, hs->plane);
            Point nrm = scale(hs->plane.normal, 1.0 / norm(hs->plane.normal));
            Point foot = sub(a, scale(nrm, sd));
            MoebiusMap f({Stage{TranslationStage{scale(foot, -1.0)}}});
            const MoebiusMap hm = halfspace_map(scale(nrm, sd));
            for (const Stage& s : hm.stages()) f.push_back(s);
            const double fac = f.conformal_factor(a);
            RadiusEstimate est =
                estimate_radius_modulus(Domain::ball(Point::zero(n), 1.0), Point::zero(n), pe, opt);
            est.value /= fac;
            est.error /= fac;
            return est;
        }
    }

    const double d = D.boundary_distance(a, 1e6);
    if (!(d > 0.0)) throw std::runtime_error("could not find the boundary distance");
    const double t0 = d / 4.0;
    const int J = opt.octaves;
    const double tJ = t0 * std::pow(2.0, -J);

    const double cap = opt.outer_cap_factor * t0;
    Extent ext = probe_extent(D, a, cap);
    double r_max = ext.bounded ? ext.r_max * 1.05 + 2.0 * tJ : cap;
    r_max = std::max(r_max, 2.0 * t0);

    std::vector<double> levels = geometric_levels(tJ, r_max, opt.levels_per_octave);

    GridGraph g;
    Point center = Point::zero(n);
    if (n == 3) {
        g = make_spherical_grid(a, levels, opt.n_lat, opt.n_lon, D);
        center = a;
    } else {
        // polar grid around the origin against the translated domain
        MoebiusMap shift({Stage{TranslationStage{scale(a, -1.0)}}});
        Domain moved = Domain::moebius_image(std::move(shift), D);
        g = make_cylindrical_grid(2, levels, opt.n_theta, {}, moved);
    }
    auto bd = g.tags.find("boundary");
    if (bd == g.tags.end() || bd->second.empty())
        throw std::runtime_error("domain boundary was not captured by the grid");

    RadiusEstimate est;
    tag_sphere(g, "sphere_0", center, t0);
    for (int j = 0; j <= J; ++j) {
        const double tj = t0 * std::pow(2.0, -j);
        std::string tag = "sphere_" + std::to_string(j);
        if (j > 0) tag_sphere(g, tag, center, tj);
        ConnectorFamily fam;
        fam.source = g.tags[tag];
        fam.sink = bd->second;
        ModulusResult res = solve_modulus(g, CurveFamily{fam}, pe.p, opt.solve);
        if (!std::isfinite(res.value) || !(res.value > 0.0))
            throw std::runtime_error("modulus estimate failed at t = " + std::to_string(tj));
        double value = res.value;
        if (j > 0) {
            // Self-calibration: the same grid also carries the annulus family
            // (t_j, t_0) whose modulus is known in closed form.  Its relative
            // error is dominated by the same near-field discretization, so the
            // ratio cancels the mu(t)-growing bias in phi.
            ConnectorFamily ann;
            ann.source = g.tags[tag];
            ann.sink = g.tags["sphere_0"];
            ModulusResult ares = solve_modulus(g, CurveFamily{ann}, pe.p, opt.solve);
            if (std::isfinite(ares.value) && ares.value > 0.0)
                value *= annulus_modulus_analytic(tj, t0, pe) / ares.value;
        }
        double phi = pe.lambda_n * std::pow(value, 1.0 / (1.0 - pe.p)) - mu_p(tj, pe);
        est.t_values.push_back(tj);
        est.phi_values.push_back(phi);
    }

    double spread = 0.0;
    est.fit_offset = fit_phi0(est.t_values, est.phi_values, &est.fit_exponent, &spread);
    const double s = -est.fit_offset;
    if (!(pe.conformal_case()) && !(pe.gamma * s > 0.0))
        throw std::runtime_error("extrapolated value left the range of mu_p");
    est.value = mu_inv(s, pe);
    // first-order sensitivity of mu_inv at the extrapolated point
    double ds = std::max(spread, 1e-12);
    double lo = s - ds, hi = s + ds;
    double vlo = est.value, vhi = est.value;
    if (pe.conformal_case() || pe.gamma * lo > 0.0) vlo = mu_inv(lo, pe);
    if (pe.conformal_case() || pe.gamma * hi > 0.0) vhi = mu_inv(hi, pe);
    est.error = std::max(std::abs(vlo - est.value), std::abs(vhi - est.value));
    return est;
}

namespace {

struct PdeSolution {
    double value_at_a = 0.0;
};

PdeSolution solve_pde(const Domain& D, const Point& a, const PExponent& pe, double h,
                      double box_halfwidth, double cg_rel_tol, int cg_max_iter) {
    const int n = a.dim();
    // lattice centered at a
    const int K = static_cast<int>(std::ceil(box_halfwidth / h));
    const int side = 2 * K + 1;
    size_t total = 1;
    for (int d = 0; d < n; ++d) {
        total *= static_cast<size_t>(side);
        if (total > 400u * 1000u * 1000u) throw std::invalid_argument("pde grid too large");
    }
    auto coord = [&](size_t flat, int d) {
        for (int k = n - 1; k > d; --k) flat /= static_cast<size_t>(side);
        return static_cast<int>(flat % static_cast<size_t>(side)) - K;
    };
    auto flat_of = [&](const std::vector<int>& m) {
        size_t f = 0;
        for (int d = 0; d < n; ++d)
            f = f * static_cast<size_t>(side) + static_cast<size_t>(m[static_cast<size_t>(d)] + K);
        return f;
    };
    auto point_of = [&](size_t flat) {
        Point p = a;
        for (int d = 0; d < n; ++d) p.c[static_cast<size_t>(d)] += coord(flat, d) * h;
        return p;
    };

    std::vector<char> inside(total, 0);
    for (size_t f = 0; f < total; ++f) inside[f] = D.contains(point_of(f)) ? 1 : 0;

    // interior unknowns: inside nodes all of whose lattice neighbors exist and
    // are inside; every other inside node carries the Dirichlet data
    std::vector<long long> unknown(total, -1);
    std::vector<size_t> unknown_flat;
    for (size_t f = 0; f < total; ++f) {
        if (!inside[f]) continue;
        bool interior = true;
        std::vector<int> m(static_cast<size_t>(n));
        for (int d = 0; d < n; ++d) m[static_cast<size_t>(d)] = coord(f, d);
        for (int d = 0; d < n && interior; ++d)
            for (int s = -1; s <= 1 && interior; s += 2) {
                std::vector<int> m2 = m;
                m2[static_cast<size_t>(d)] += s;
                if (std::abs(m2[static_cast<size_t>(d)]) > K || !inside[flat_of(m2)])
                    interior = false;
            }
        if (interior) {
            unknown[f] = static_cast<long long>(unknown_flat.size());
            unknown_flat.push_back(f);
        }
    }
    const size_t N = unknown_flat.size();
    if (unknown[flat_of(std::vector<int>(static_cast<size_t>(n), 0))] < 0)
        throw std::runtime_error("pde estimator: center is not an interior lattice node");

    auto dirichlet = [&](size_t f) { return -mu_p(dist(point_of(f), a), pe); };

    // assemble right-hand side of (2n u_i - sum_nb u_nb) = sum_boundary g
    std::vector<double> b(N, 0.0);
    std::vector<std::vector<long long>> nbs(N);
    for (size_t i = 0; i < N; ++i) {
        std::vector<int> m(static_cast<size_t>(n));
        for (int d = 0; d < n; ++d) m[static_cast<size_t>(d)] = coord(unknown_flat[i], d);
        for (int d = 0; d < n; ++d)
            for (int s = -1; s <= 1; s += 2) {
                std::vector<int> m2 = m;
                m2[static_cast<size_t>(d)] += s;
                size_t f2 = flat_of(m2);
                if (unknown[f2] >= 0)
                    nbs[i].push_back(unknown[f2]);
                else
                    b[i] += dirichlet(f2);
            }
    }

    auto apply_A = [&](const std::vector<double>& x, std::vector<double>& y) {
        for (size_t i = 0; i < N; ++i) {
            double s = 2.0 * n * x[i];
            for (long long j : nbs[i]) s -= x[static_cast<size_t>(j)];
            y[i] = s;
        }
    };

    // conjugate gradients on the SPD system
    std::vector<double> x(N, 0.0), r = b, p = b, Ap(N);
    double rr = 0.0, bb = 0.0;
    for (size_t i = 0; i < N; ++i) { rr += r[i] * r[i]; bb += b[i] * b[i]; }
    const double stop = cg_rel_tol * cg_rel_tol * std::max(bb, 1e-300);
    for (int it = 0; it < cg_max_iter && rr > stop; ++it) {
        apply_A(p, Ap);
        double pAp = 0.0;
        for (size_t i = 0; i < N; ++i) pAp += p[i] * Ap[i];
        double alpha = rr / pAp;
        for (size_t i = 0; i < N; ++i) { x[i] += alpha * p[i]; r[i] -= alpha * Ap[i]; }
        double rr2 = 0.0;
        for (size_t i = 0; i < N; ++i) rr2 += r[i] * r[i];
        double beta = rr2 / rr;
        rr = rr2;
        for (size_t i = 0; i < N; ++i) p[i] = r[i] + beta * p[i];
    }
    if (rr > stop) throw std::runtime_error("pde estimator: conjugate gradients stalled");

    PdeSolution out;
    out.value_at_a =
        x[static_cast<size_t>(unknown[flat_of(std::vector<int>(static_cast<size_t>(n), 0))])];
    return out;
}

}  // namespace

RadiusEstimate estimate_radius_pde(const Domain& D, const Point& a, const PdeEstimatorOptions& opt) {
    const int n = a.dim();
    if (n != 2 && n != 3) throw std::invalid_argument("pde estimator supports n = 2 and n = 3");
    if (!D.contains(a)) throw std::invalid_argument("center must lie in the domain");
    PExponent pe(n, 2.0);

    PdeSolution fine = solve_pde(D, a, pe, opt.h, opt.box_halfwidth, opt.cg_rel_tol, opt.cg_max_iter);
    RadiusEstimate est;
    est.value = mu_inv(-fine.value_at_a, pe);
    if (opt.two_grid_error) {
        PdeSolution coarse =
            solve_pde(D, a, pe, 2.0 * opt.h, opt.box_halfwidth, opt.cg_rel_tol, opt.cg_max_iter);
        est.error = std::abs(mu_inv(-coarse.value_at_a, pe) - est.value);
    }
    return est;
}

}  // namespace modrad
