#include <benchmark/benchmark.h>

#include <vector>

#include "lkpolar/lkpolar.hpp"

using namespace lkpolar;

namespace {

std::vector<Vector> folded_gaussians(int n, int count, std::uint64_t seed) {
    RngStream rng(seed, 0);
    Vector axis = rng.unit_vector(n);
    std::vector<Vector> g;
    for (int k = 0; k < count; ++k) {
        Vector x = rng.gaussian(n);
        double t = x.dot(axis);
        g.push_back(t >= 0 ? x : Vector(x - 2.0 * t * axis));
    }
    return g;
}

void BM_DoubleDescription(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    auto gens = folded_gaussians(n, m, 1);
    for (auto _ : state) benchmark::DoNotOptimize(cone_from_generators(gens, n));
}
BENCHMARK(BM_DoubleDescription)->Args({3, 8})->Args({3, 32})->Args({4, 12})->Args({5, 16});

void BM_SolidAngleMc(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ConvexCone cone = cone_from_generators(folded_gaussians(n, n + 2, 2), n);
    AngleConfig cfg;
    cfg.samples = state.range(1);
    cfg.force_mc = true;
    for (auto _ : state) benchmark::DoNotOptimize(solid_angle(cone, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_SolidAngleMc)->Args({3, 200000})->Args({4, 200000})->Unit(benchmark::kMillisecond);

void BM_FaceContributions(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    ConvexCone cone = cone_from_generators(folded_gaussians(n, n + 3, 3), n);
    for (auto _ : state) benchmark::DoNotOptimize(face_contributions(cone));
}
BENCHMARK(BM_FaceContributions)->Arg(2)->Arg(3);

void BM_TubeVolume(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    PolyUnion u({cone_from_generators(folded_gaussians(n, n + 2, 4), n)});
    McConfig cfg;
    cfg.samples = state.range(1);
    for (auto _ : state) benchmark::DoNotOptimize(tube_volume_mc(u, 0.5, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_TubeVolume)->Args({2, 100000})->Args({3, 100000})->Unit(benchmark::kMillisecond);

void BM_Nnls(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    const int cols = static_cast<int>(state.range(1));
    RngStream rng(5, 0);
    Matrix a(rows, cols);
    for (int j = 0; j < cols; ++j) a.col(j) = rng.gaussian(rows);
    Vector b = rng.gaussian(rows);
    for (auto _ : state) benchmark::DoNotOptimize(nnls(a, b));
}
BENCHMARK(BM_Nnls)->Args({4, 8})->Args({8, 32})->Args({16, 64});

void BM_LeastDistance(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int m = static_cast<int>(state.range(1));
    RngStream rng(6, 0);
    Matrix g(m, n);
    Vector h(m);
    for (int i = 0; i < m; ++i) {
        g.row(i) = rng.unit_vector(n).transpose();
        h[i] = -0.5 + rng.uniform();
    }
    Vector z;
    for (auto _ : state) benchmark::DoNotOptimize(least_distance(g, h, z));
}
BENCHMARK(BM_LeastDistance)->Args({3, 6})->Args({6, 20});

}  // namespace

BENCHMARK_MAIN();
