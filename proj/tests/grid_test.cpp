#include <doctest.h>

#include <numeric>

#include "modrad/grid.hpp"
#include "modrad/modulus.hpp"

using namespace modrad;

namespace {

double total_sigma(const GridGraph& g) {
    double s = 0.0;
    for (const auto& e : g.edges) s += e.sigma;
    return s;
}

std::vector<double> uniform_levels(double a, double b, int k) {
    std::vector<double> v;
    for (int i = 0; i <= k; ++i) v.push_back(a + (b - a) * i / k);
    return v;
}

}  // namespace

TEST_CASE("polar ring grid: edge weights tile the area once per direction") {
    GridGraph g = make_cylindrical_grid(2, uniform_levels(1.0, 2.0, 32), 128, {});
    const double area = kPi * (4.0 - 1.0);
    // radial and angular direction families each cover the ring
    CHECK(total_sigma(g) == doctest::Approx(2.0 * area).epsilon(0.02));
    CHECK(g.n_theta == 128);
    CHECK(g.theta_step == doctest::Approx(2.0 * kPi / 128));
}

TEST_CASE("spherical ring grid: weights tile the volume once per direction") {
    GridGraph g = make_spherical_grid(Point::zero(3), uniform_levels(1.0, 2.0, 16), 24, 48);
    const double vol = 4.0 * kPi / 3.0 * (8.0 - 1.0);
    CHECK(total_sigma(g) == doctest::Approx(3.0 * vol).epsilon(0.03));
}

TEST_CASE("cylindrical 3d grid: weights tile the volume once per direction") {
    GridGraph g = make_cylindrical_grid(3, uniform_levels(0.5, 2.0, 24), 96,
                                        uniform_levels(-1.0, 1.0, 32));
    const double vol = kPi * (4.0 - 0.25) * 2.0;
    CHECK(total_sigma(g) == doctest::Approx(3.0 * vol).epsilon(0.03));
}

TEST_CASE("cartesian grid trims to the domain and tags its boundary") {
    Domain B = Domain::ball(Point{0.0, 0.0}, 1.0);
    GridGraph g = make_cartesian_grid(Point{-1.2, -1.2}, Point{1.2, 1.2}, 1.0 / 16, B);
    CHECK(g.nodes.size() > 600);
    for (const Point& x : g.nodes) CHECK(norm(x) < 1.0);
    REQUIRE(g.tags.count("boundary") == 1);
    for (int id : g.tags.at("boundary"))
        CHECK(norm(g.nodes[static_cast<size_t>(id)]) > 1.0 - 2.0 / 16);
    CHECK(total_sigma(g) == doctest::Approx(2.0 * kPi).epsilon(0.05));
}

TEST_CASE("tag_sphere picks exactly one radial layer") {
    GridGraph g = make_cylindrical_grid(2, uniform_levels(1.0, 2.0, 16), 64, {});
    tag_sphere(g, "mid", Point::zero(2), 1.5);
    REQUIRE(g.tags.count("mid") == 1);
    CHECK(g.tags.at("mid").size() == 64);
    for (int id : g.tags.at("mid"))
        CHECK(norm(g.nodes[static_cast<size_t>(id)]) == doctest::Approx(1.5));
}

TEST_CASE("grid-step rotations and reflections are automorphisms") {
    GridGraph g = make_cylindrical_grid(2, uniform_levels(1.0, 2.0, 8), 24, {});
    auto rot = node_permutation(g, [&](const Point& x) { return rotate(x, g.theta_step); });
    CHECK(rot.size() == g.nodes.size());
    Hyperplane mirror(Point{0.0, 1.0}, 0.0);  // theta = 0 axis
    auto refl = node_permutation(g, [&](const Point& x) { return reflect(x, mirror); });
    auto erefl = edge_permutation(g, refl);
    // involution on edges
    for (size_t e = 0; e < erefl.size(); ++e)
        CHECK(erefl[static_cast<size_t>(erefl[e])] == static_cast<int>(e));
}

TEST_CASE("geometric level ladder") {
    std::vector<double> lv = geometric_levels(0.25, 2.0, 8);
    CHECK(lv.front() == doctest::Approx(0.25));
    CHECK(lv.back() >= 2.0 - 1e-12);
    for (size_t i = 1; i < lv.size(); ++i)
        CHECK(lv[i] / lv[i - 1] == doctest::Approx(std::pow(2.0, 1.0 / 8)).epsilon(1e-9));
}
