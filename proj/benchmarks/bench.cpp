#include <benchmark/benchmark.h>

#include "gdsq/composition.hpp"
#include "gdsq/genericity.hpp"
#include "gdsq/manifolds.hpp"
#include "gdsq/maps.hpp"
#include "gdsq/rng.hpp"
#include "gdsq/singularity.hpp"

namespace {

gdsq::GdsMap random_map(int m, std::uint64_t seed) {
    gdsq::Rng rng(seed);
    Eigen::MatrixXd a(m, m), p(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double v = rng.gaussian();
            while (std::abs(v) < 0.1) v = rng.gaussian();
            a(i, j) = v;
            p(i, j) = rng.gaussian();
        }
    return {gdsq::CoefficientMatrix(std::move(a)), gdsq::CentralPoints(std::move(p))};
}

void bm_eval(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const gdsq::GdsMap g = random_map(m, 11);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(m, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(g.eval(x));
}
BENCHMARK(bm_eval)->Arg(2)->Arg(4)->Arg(8);

void bm_jacobian(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const gdsq::GdsMap g = random_map(m, 11);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(m, -1.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(g.jacobian(x));
}
BENCHMARK(bm_jacobian)->Arg(2)->Arg(4)->Arg(8);

void bm_composition_jacobian(benchmark::State& state) {
    const gdsq::GdsMap g = random_map(3, 5);
    const gdsq::ParamManifold f = gdsq::trefoil();
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(1, 1.3);
    for (auto _ : state) benchmark::DoNotOptimize(gdsq::composition_jacobian(g, f, q));
}
BENCHMARK(bm_composition_jacobian);

void bm_sigma_scan(benchmark::State& state) {
    const gdsq::GdsMap g = random_map(2, 7);
    const gdsq::ParamManifold f = gdsq::circle(1.0, Eigen::Vector2d::Zero(), 2);
    gdsq::RankScanOptions opts;
    opts.grid = {static_cast<int>(state.range(0))};
    opts.refine_rounds = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gdsq::immersion_check(g, f, opts));
}
BENCHMARK(bm_sigma_scan)->Arg(1024)->Arg(4096);

void bm_pair_screen(benchmark::State& state) {
    const gdsq::GdsMap g = random_map(3, 9);
    const gdsq::ParamManifold f = gdsq::trefoil();
    gdsq::GapScanOptions opts;
    opts.grid = {static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(gdsq::injectivity_check(g, f, opts));
}
BENCHMARK(bm_pair_screen)->Arg(1024)->Arg(4096);

void bm_trace(benchmark::State& state) {
    Eigen::MatrixXd a(2, 2), p(2, 2);
    a << 1, 2, 3, 1;
    p << 0.3, -0.2, 1.1, 0.7;
    const gdsq::GdsMap g{gdsq::CoefficientMatrix(a), gdsq::CentralPoints(p)};
    const gdsq::Window w{-2.0, 2.0, -2.0, 2.0};
    for (auto _ : state) benchmark::DoNotOptimize(gdsq::trace_singular_curve(g, w));
}
BENCHMARK(bm_trace);

}  // namespace

BENCHMARK_MAIN();
