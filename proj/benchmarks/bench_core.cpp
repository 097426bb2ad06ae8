#include <benchmark/benchmark.h>

#include <random>

#include "frop/dirichlet.hpp"
#include "frop/kernel.hpp"
#include "frop/obstacle.hpp"
#include "frop/operator.hpp"
#include "frop/rearrangement.hpp"

using namespace frop;

namespace {

NonlocalOperator make_op(int n, double s = 0.5) {
    return assemble(build_grid(Domain::interval(-1.0, 1.0), n), KernelParams{1, s, false});
}

void BM_Assemble1D(benchmark::State& state) {
    const Grid grid = build_grid(Domain::interval(-1.0, 1.0), static_cast<int>(state.range(0)));
    const KernelParams params{1, 0.5, false};
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble(grid, params));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assemble1D)->Arg(128)->Arg(256)->Arg(512)->Complexity(benchmark::oNSquared);

void BM_Assemble2DDisk(benchmark::State& state) {
    const Grid grid = build_grid(Domain::disk(0.0, 0.0, 1.0), static_cast<int>(state.range(0)));
    const KernelParams params{2, 0.5, false};
    for (auto _ : state) {
        benchmark::DoNotOptimize(assemble(grid, params));
    }
}
BENCHMARK(BM_Assemble2DDisk)->Arg(12)->Arg(20)->Arg(28);

void BM_NormalizationConstant(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(normalization_constant(dim, 0.7));
    }
}
BENCHMARK(BM_NormalizationConstant)->Arg(1)->Arg(2);

void BM_Matvec(benchmark::State& state) {
    const NonlocalOperator op = make_op(static_cast<int>(state.range(0)));
    std::vector<double> w(op.grid().interior_count(), 1.0), out(w.size());
    for (auto _ : state) {
        op.apply(w, out);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_Matvec)->Arg(256)->Arg(1024);

void BM_CgSolve(benchmark::State& state) {
    const NonlocalOperator op = make_op(static_cast<int>(state.range(0)));
    const Field f = make_field(op.grid(), 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(op, f, 1e-10));
    }
}
BENCHMARK(BM_CgSolve)->Arg(256)->Arg(512);

void BM_BathtubLmo(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Field u;
    u.values.resize(n);
    for (double& v : u.values) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bathtub_lmo(u, 0.4 * n * 0.01, 0.01));
    }
}
BENCHMARK(BM_BathtubLmo)->Arg(256)->Arg(4096);

void BM_ProjectCappedBox(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> dist(-0.5, 1.5);
    Field g;
    g.values.resize(n);
    for (double& v : g.values) v = dist(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(project_capped_box(g, 0.4 * n * 0.01, 0.01));
    }
}
BENCHMARK(BM_ProjectCappedBox)->Arg(256)->Arg(4096);

void BM_FrankWolfe(benchmark::State& state) {
    const NonlocalOperator op = make_op(static_cast<int>(state.range(0)));
    FrankWolfeOptions opts;
    opts.gap_tol = 1e-6;
    opts.keep_log = false;
    const RearrangementClass cls{op.grid().interior_measure() / 2.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_frank_wolfe(op, cls, opts));
    }
}
BENCHMARK(BM_FrankWolfe)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Obstacle(benchmark::State& state) {
    const NonlocalOperator op = make_op(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_obstacle(op, 0.1));
    }
}
BENCHMARK(BM_Obstacle)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
