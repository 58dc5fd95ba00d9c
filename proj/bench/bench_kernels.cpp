// Serial reference vs OpenMP kernels. Arguments: number of points (assign) or
// grid side (som_update).

#include <benchmark/benchmark.h>

#include <vector>

#include "twostage/kernels.hpp"
#include "twostage/rng.hpp"
#include "twostage/som.hpp"

using namespace twostage;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(RngSeed{seed});
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform(-1.0, 1.0);
    return m;
}

template <auto Kernel>
void bm_assign(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const Matrix points = random_matrix(n, 10, 1);
    const Matrix centers = random_matrix(323, 10, 2);
    std::vector<std::size_t> out(n);
    for (auto _ : state) {
        Kernel(points, centers, out, {});
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

template <auto Kernel>
void bm_som_update(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    Matrix weights = random_matrix(side * side, 10, 3);
    const Matrix positions = hex_positions(side, side);
    const std::vector<double> x(10, 0.25);
    for (auto _ : state) {
        Kernel(weights, positions, side, x, 0.1, 3.0);
        benchmark::DoNotOptimize(weights.data().data());
    }
}

}  // namespace

BENCHMARK(bm_assign<kernels::serial::assign_nearest>)->Name("assign_nearest/serial")->Arg(1000)->Arg(10000);
BENCHMARK(bm_assign<kernels::omp::assign_nearest>)->Name("assign_nearest/omp")->Arg(1000)->Arg(10000);
BENCHMARK(bm_som_update<kernels::serial::som_update>)->Name("som_update/serial")->Arg(19)->Arg(64);
BENCHMARK(bm_som_update<kernels::omp::som_update>)->Name("som_update/omp")->Arg(19)->Arg(64);

BENCHMARK_MAIN();
