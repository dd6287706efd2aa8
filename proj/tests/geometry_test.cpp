#include <doctest.h>

#include <cmath>
#include <random>

#include "modrad/geometry.hpp"
#include "modrad/radii.hpp"

using namespace modrad;

TEST_CASE("wrap_angle lands in [0, 2pi)") {
    CHECK(wrap_angle(0.0) == doctest::Approx(0.0));
    CHECK(wrap_angle(2.0 * kPi) == doctest::Approx(0.0));
    CHECK(wrap_angle(-0.1) == doctest::Approx(2.0 * kPi - 0.1));
    CHECK(wrap_angle(7.0 * kPi) == doctest::Approx(kPi));
}

TEST_CASE("cylindrical coordinates round-trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int it = 0; it < 50; ++it) {
        Point x{u(rng), u(rng), u(rng)};
        Point y = from_cylindrical(to_cylindrical(x));
        for (int d = 0; d < 3; ++d) CHECK(y[d] == doctest::Approx(x[d]).epsilon(1e-12));
    }
}

TEST_CASE("reflection is an involution fixing the plane") {
    Hyperplane L(Point{1.0, 2.0, -1.0}, 0.7);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int it = 0; it < 20; ++it) {
        Point x{u(rng), u(rng), u(rng)};
        Point xr = reflect(x, L);
        CHECK(dist(reflect(xr, L), x) < 1e-12);
        CHECK(signed_distance(xr, L) == doctest::Approx(-signed_distance(x, L)).epsilon(1e-12));
        // midpoint lies on the plane
        CHECK(std::abs(signed_distance(scale(add(x, xr), 0.5), L)) < 1e-12);
    }
}

TEST_CASE("rotation acts on the angular coordinate") {
    Point x{1.0, 0.5, 0.3};
    double beta = 0.8;
    CylCoords before = to_cylindrical(x);
    CylCoords after = to_cylindrical(rotate(x, beta));
    CHECK(after.rho == doctest::Approx(before.rho));
    CHECK(wrap_angle(after.theta - before.theta - beta) < 1e-12);
    CHECK(after.xprime[0] == doctest::Approx(before.xprime[0]));
}

TEST_CASE("unit-ball volumes") {
    CHECK(PExponent(2, 2.0).omega_n == doctest::Approx(kPi));
    CHECK(PExponent(3, 2.0).omega_n == doctest::Approx(4.0 * kPi / 3.0));
    CHECK(PExponent(4, 2.0).omega_n == doctest::Approx(kPi * kPi / 2.0));
}

TEST_CASE("mu_p inverse round-trip") {
    for (auto [n, p] : {std::pair{2, 2.0}, {3, 2.0}, {3, 3.0}, {4, 2.5}}) {
        PExponent pe(n, p);
        for (double t : {0.1, 0.5, 1.0, 3.0}) {
            if (!pe.conformal_case() && pe.gamma * mu_p(t, pe) <= 0.0) continue;
            CHECK(mu_inv(mu_p(t, pe), pe) == doctest::Approx(t).epsilon(1e-12));
        }
    }
}

namespace {

// Quadrature re-derivation of the ring modulus: the extremal density is
// radial, rho(s) = c s^{-(n-1)/(p-1)} with unit line integral, and
// M = integral of rho^p over the ring.
double ring_modulus_quadrature(double r, double R, const PExponent& pe) {
    const double a = -(pe.n - 1.0) / (pe.p - 1.0);
    auto simpson = [&](auto f) {
        const int N = 40000;
        double s = f(r) + f(R);
        const double h = (R - r) / N;
        for (int i = 1; i < N; ++i) s += (i % 2 ? 4.0 : 2.0) * f(r + i * h);
        return s * h / 3.0;
    };
    const double I = simpson([&](double s) { return std::pow(s, a); });
    const double c = 1.0 / I;
    return pe.n * pe.omega_n *
           simpson([&](double s) { return std::pow(c * std::pow(s, a), pe.p) * std::pow(s, pe.n - 1.0); });
}

}  // namespace

TEST_CASE("ring modulus closed form against quadrature") {
    for (auto [n, p] : {std::pair{2, 2.0}, {3, 2.0}, {3, 3.0}, {4, 3.0}, {3, 1.5}}) {
        PExponent pe(n, p);
        CHECK(annulus_modulus_analytic(1.0, 2.0, pe) ==
              doctest::Approx(ring_modulus_quadrature(1.0, 2.0, pe)).epsilon(1e-8));
        CHECK(annulus_modulus_analytic(0.3, 5.0, pe) ==
              doctest::Approx(ring_modulus_quadrature(0.3, 5.0, pe)).epsilon(1e-8));
    }
}

TEST_CASE("half-space and ball closed forms") {
    Hyperplane L(Point{0.0, 0.0, 1.0}, 0.0);
    CHECK(radius_halfspace_pn(Point{0.3, -0.2, 0.7}, L).value == doctest::Approx(1.4));
    CHECK(radius_ball_pn(Point{0.5, 0.0, 0.0}).value == doctest::Approx(0.75));
    CHECK(radius_ball_pn(Point{0.0, 0.0, 0.0}).value == doctest::Approx(1.0));
}

TEST_CASE("dihedral harmonic radius, printed value") {
    PExponent pe(3, 2.0);
    // k = 1 is the half-space: R = 2t
    CHECK(radius_dihedral_harmonic(0.7, 1, pe).value == doctest::Approx(1.4));
    // k = 2, t = 1: (2 sin(pi/4))^-1 + (2 sin(3pi/4))^-1 - (2 sin(pi/2))^-1, inverted
    const double s = 2.0 / (2.0 * std::sin(kPi / 4.0)) - 0.5;
    CHECK(radius_dihedral_harmonic(1.0, 2, pe).value == doctest::Approx(1.0 / s));
    CHECK(radius_dihedral_harmonic(1.0, 2, pe).value == doctest::Approx(1.0938).epsilon(1e-4));
}
