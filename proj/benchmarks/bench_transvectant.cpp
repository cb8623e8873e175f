#include <random>

#include "benchmark/benchmark.h"
#include "sympleq/transvectant.hpp"

using namespace sympleq;

namespace {

HomogeneousPoly dense_poly(std::size_t d, unsigned deg, int seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    HomogeneousPoly p(d, deg);
    for (const MultiIndex& m : monomial_basis(d, deg)) p.add_term(m, Rat(coef(rng)));
    return p;
}

void BM_SymplecticTransvectant(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    unsigned deg = static_cast<unsigned>(state.range(1));
    int r = static_cast<int>(state.range(2));
    HomogeneousPoly P = dense_poly(d, deg, 1);
    HomogeneousPoly Q = dense_poly(d, deg, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(symplectic_transvectant(P, Q, r));
    }
}
BENCHMARK(BM_SymplecticTransvectant)
    ->Args({2, 3, 1})
    ->Args({2, 5, 3})
    ->Args({4, 3, 2})
    ->Args({4, 5, 4});

void BM_MetricTransvectant(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    unsigned deg = static_cast<unsigned>(state.range(1));
    int m = static_cast<int>(state.range(2));
    HomogeneousPoly P = dense_poly(d, deg, 3);
    HomogeneousPoly Q = dense_poly(d, deg, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(metric_transvectant(P, Q, m));
    }
}
BENCHMARK(BM_MetricTransvectant)->Args({2, 4, 2})->Args({3, 4, 2});

}  // namespace
