#include <doctest.h>

#include "modrad/estimator.hpp"

using namespace modrad;

TEST_CASE("modulus estimator recovers the disc radius, n = 2") {
    Domain D = Domain::ball(Point{0.0, 0.0}, 1.0);
    PExponent pe(2, 2.0);
    ModulusEstimatorOptions opt;
    opt.levels_per_octave = 16;
    opt.n_theta = 96;
    RadiusEstimate est = estimate_radius_modulus(D, Point{0.0, 0.0}, pe, opt);
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.03));

    // scaled disc
    Domain D2 = Domain::ball(Point{0.0, 0.0}, 1.7);
    RadiusEstimate est2 = estimate_radius_modulus(D2, Point{0.0, 0.0}, pe, opt);
    CHECK(est2.value == doctest::Approx(1.7).epsilon(0.03));
}

TEST_CASE("modulus estimator at an off-center point, n = 2") {
    Domain D = Domain::ball(Point{0.0, 0.0}, 1.0);
    PExponent pe(2, 2.0);
    ModulusEstimatorOptions opt;
    opt.levels_per_octave = 16;
    opt.n_theta = 96;
    RadiusEstimate est = estimate_radius_modulus(D, Point{0.4, 0.0}, pe, opt);
    CHECK(est.value == doctest::Approx(1.0 - 0.16).epsilon(0.05));
}

TEST_CASE("pde estimator: disc values match 1 - |a|^2") {
    Domain D = Domain::ball(Point{0.0, 0.0}, 1.0);
    PdeEstimatorOptions opt;
    opt.h = 1.0 / 48;
    RadiusEstimate c = estimate_radius_pde(D, Point{0.0, 0.0}, opt);
    CHECK(c.value == doctest::Approx(1.0).epsilon(0.01));
    RadiusEstimate o = estimate_radius_pde(D, Point{0.25, 0.0}, opt);
    CHECK(o.value == doctest::Approx(1.0 - 0.0625).epsilon(0.015));
    // two-grid bar should cover the truth within a small factor
    CHECK(std::abs(o.value - 0.9375) <= 4.0 * o.error + 5e-3);
}

TEST_CASE("pde estimator: ball in three dimensions") {
    Domain D = Domain::ball(Point{0.0, 0.0, 0.0}, 1.0);
    PdeEstimatorOptions opt;
    opt.h = 1.0 / 24;
    RadiusEstimate c = estimate_radius_pde(D, Point{0.0, 0.0, 0.0}, opt);
    CHECK(c.value == doctest::Approx(1.0).epsilon(0.02));
    // harmonic radius of the ball at an interior point: (r^2 - |a|^2)/r
    RadiusEstimate o = estimate_radius_pde(D, Point{0.25, 0.0, 0.0}, opt);
    CHECK(o.value == doctest::Approx(0.9375).epsilon(0.02));
}

TEST_CASE("pde estimator: half-plane via a large box") {
    Domain H = Domain::halfspace(Hyperplane(Point{0.0, 1.0}, 0.0), true);
    PdeEstimatorOptions opt;
    opt.h = 1.0 / 32;
    opt.box_halfwidth = 6.0;
    RadiusEstimate est = estimate_radius_pde(H, Point{0.0, 0.5}, opt);
    // truncation-box bias dominates; loose check only
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.1));
}
