#include <random>

#include "benchmark/benchmark.h"
#include "sympleq/trace_invariants.hpp"

using namespace sympleq;

namespace {

HomogeneousPoly dense_poly(std::size_t d, unsigned deg, int seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    HomogeneousPoly p(d, deg);
    for (const MultiIndex& m : monomial_basis(d, deg)) p.add_term(m, Rat(coef(rng)));
    return p;
}

void BM_InvariantSignature(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    unsigned deg = static_cast<unsigned>(state.range(1));
    HomogeneousPoly P = dense_poly(d, deg, 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(invariant_signature(P));
    }
}
BENCHMARK(BM_InvariantSignature)->Args({2, 3})->Args({2, 4})->Args({4, 3});

void BM_OrbitDimension(benchmark::State& state) {
    std::size_t d = static_cast<std::size_t>(state.range(0));
    HomogeneousPoly P = dense_poly(d, 3, 12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sp_orbit_dimension(P));
    }
}
BENCHMARK(BM_OrbitDimension)->Arg(2)->Arg(4);

void BM_PairingForm(benchmark::State& state) {
    unsigned p = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairing_form(2, p, InvariantKind::Symplectic));
    }
}
BENCHMARK(BM_PairingForm)->Arg(3)->Arg(5);

}  // namespace
