#include <benchmark/benchmark.h>

#include <vector>

#include "modrad/estimator.hpp"
#include "modrad/grid.hpp"
#include "modrad/moebius.hpp"
#include "modrad/modulus.hpp"
#include "modrad/radii.hpp"

using namespace modrad;

namespace {

std::vector<double> uniform_levels(double a, double b, int k) {
    std::vector<double> v;
    for (int i = 0; i <= k; ++i) v.push_back(a + (b - a) * i / k);
    return v;
}

GridGraph ring_grid(int n, int radial, int angular) {
    GridGraph g = (n == 2)
                      ? make_cylindrical_grid(2, uniform_levels(1.0, 2.0, radial), angular, {})
                      : make_spherical_grid(Point::zero(3), uniform_levels(1.0, 2.0, radial),
                                            angular, 2 * angular);
    tag_sphere(g, "in", Point::zero(n), 1.0);
    tag_sphere(g, "out", Point::zero(n), 2.0);
    return g;
}

void bench_ring_modulus(benchmark::State& state, int n, double p) {
    GridGraph g = ring_grid(n, static_cast<int>(state.range(0)), (n == 2) ? 128 : 16);
    ConnectorFamily fam{g.tags.at("in"), g.tags.at("out"), {}};
    SolveOptions so;
    so.inner_tol = 1e-4;
    for (auto _ : state) {
        ModulusResult r = solve_modulus(g, fam, p, so);
        benchmark::DoNotOptimize(r.value);
    }
    state.counters["nodes"] = static_cast<double>(g.nodes.size());
}

void ring_modulus_2d_p2(benchmark::State& state) { bench_ring_modulus(state, 2, 2.0); }
void ring_modulus_3d_p2(benchmark::State& state) { bench_ring_modulus(state, 3, 2.0); }
void ring_modulus_3d_p3(benchmark::State& state) { bench_ring_modulus(state, 3, 3.0); }

void psi_build_and_eval(benchmark::State& state) {
    Point a1(std::vector<double>{0.5, 0.1, 0.0}), a2(std::vector<double>{-0.3, 0.2, 0.1});
    Point x(std::vector<double>{0.2, -0.4, 0.3});
    for (auto _ : state) {
        PsiMap psi = build_psi(a1, a2);
        benchmark::DoNotOptimize(psi.map.apply(x));
        benchmark::DoNotOptimize(psi.map.conformal_factor(x));
    }
}

void pde_ball_radius(benchmark::State& state) {
    Domain ball = Domain::ball(Point::zero(3), 1.0);
    PdeEstimatorOptions po;
    po.h = 1.0 / state.range(0);
    po.two_grid_error = false;
    for (auto _ : state) {
        RadiusEstimate est = estimate_radius_pde(ball, Point::zero(3), po);
        benchmark::DoNotOptimize(est.value);
    }
}

}  // namespace

BENCHMARK(ring_modulus_2d_p2)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(ring_modulus_3d_p2)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(ring_modulus_3d_p3)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(psi_build_and_eval);
BENCHMARK(pde_ball_radius)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
