#pragma once

#include <cmath>

#include "modrad/geometry.hpp"
#include "modrad/moebius.hpp"

namespace modrad {

// Dimension/exponent bundle: gamma = (n-p)/(p-1), omega_n the unit-ball
// volume, lambda_n = (n omega_n)^{1/(p-1)}.
struct PExponent {
    int n;
    double p;
    double gamma;
    double omega_n;
    double lambda_n;

    PExponent(int n_, double p_) : n(n_), p(p_) {
        if (n < 2) throw std::invalid_argument("PExponent: n must be >= 2");
        if (!(p > 1.0)) throw std::invalid_argument("PExponent: p must be > 1");
        gamma = (static_cast<double>(n) - p) / (p - 1.0);
        omega_n = std::pow(kPi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
        lambda_n = std::pow(n * omega_n, 1.0 / (p - 1.0));
    }

    bool conformal_case() const { return gamma == 0.0 || std::abs(gamma) < 1e-14; }
};

// mu_p(t) = -log t for p = n, (1/gamma) t^{-gamma} otherwise; t > 0.
inline double mu_p(double t, const PExponent& pe) {
    if (!(t > 0.0)) throw std::invalid_argument("mu_p: t must be > 0");
    if (pe.conformal_case()) return -std::log(t);
    return std::pow(t, -pe.gamma) / pe.gamma;
}

// Inverse of mu_p on its range.
inline double mu_inv(double s, const PExponent& pe) {
    if (pe.conformal_case()) return std::exp(-s);
    const double gs = pe.gamma * s;
    if (!(gs > 0.0)) throw std::invalid_argument("mu_inv: s outside the range of mu_p");
    return std::pow(gs, -1.0 / pe.gamma);
}

enum class RadiusKind { ExactClosedForm, DerivedClosedForm, NumericEstimate };

struct RadiusValue {
    double value;
    RadiusKind kind;

    RadiusValue(double v, RadiusKind k) : value(v), kind(k) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("RadiusValue: value must be finite and positive");
    }
};

// R_n(a, B*) = |a - reflect(a, L)| = 2 dist(a, L); the p = n half-space value.
inline RadiusValue radius_halfspace_pn(const Point& a, const Hyperplane& L) {
    const double d = std::abs(signed_distance(a, L));
    if (d < 1e-15) throw std::invalid_argument("radius_halfspace_pn: point lies on the boundary");
    return RadiusValue(2.0 * d, RadiusKind::ExactClosedForm);
}

// R_n(a, B(0,1)) = 1 - |a|^2 for p = n.
inline RadiusValue radius_ball_pn(const Point& a) {
    const double an = norm(a);
    if (!(an < 1.0)) throw std::invalid_argument("radius_ball_pn: point must lie in the open ball");
    return RadiusValue(1.0 - an * an, RadiusKind::DerivedClosedForm);
}

// Harmonic radius of the dihedral angle { |theta| < pi/(2k) } at [t,0,0]:
// the alternating sum over x_l = [t, pi l / k, 0], evaluated as printed.
inline RadiusValue radius_dihedral_harmonic(double t, int k, const PExponent& pe) {
    if (!(t > 0.0) || k < 1) throw std::invalid_argument("radius_dihedral_harmonic: bad t or k");
    if (pe.n < 3 || std::abs(pe.p - 2.0) > 1e-14)
        throw std::invalid_argument("radius_dihedral_harmonic: requires p = 2, n >= 3");
    double s = 0.0;
    for (int l = 1; l <= 2 * k - 1; ++l) {
        const double d = 2.0 * t * std::sin(kPi * l / (2.0 * k));  // |x0 - x_l|
        const double term = std::pow(d, 2.0 - pe.n);
        s += (l % 2 == 1) ? term : -term;
    }
    return RadiusValue(std::pow(s, 1.0 / (2.0 - pe.n)), RadiusKind::ExactClosedForm);
}

// R_2(f(B), f(x0)) = |f'(x0)| R_2(B, x0) for a Moebius map f.
inline RadiusValue conformal_transport_r2(const RadiusValue& R, const MoebiusMap& map,
                                          const Point& x0) {
    return RadiusValue(map.conformal_factor(x0) * R.value, R.kind);
}

// Modulus of the curve family joining the boundary spheres of the ring
// r < |x| < R: n omega_n (mu_p(r) - mu_p(R))^{1-p}, from the radial extremal
// density rho(x) = c |x|^{-(n-1)/(p-1)}.
inline double annulus_modulus_analytic(double r, double R, const PExponent& pe) {
    if (!(0.0 < r && r < R)) throw std::invalid_argument("annulus_modulus_analytic: need 0 < r < R");
    return pe.n * pe.omega_n * std::pow(mu_p(r, pe) - mu_p(R, pe), 1.0 - pe.p);
}

}  // namespace modrad
