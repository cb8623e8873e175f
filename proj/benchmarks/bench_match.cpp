#include <random>

#include "benchmark/benchmark.h"
#include "sympleq/match.hpp"

using namespace sympleq;

namespace {

void BM_OrbitMatchPlanted(benchmark::State& state) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> coef(-4, 4);
    HomogeneousPoly P(2, 3);
    for (const MultiIndex& m : monomial_basis(2, 3)) P.add_term(m, Rat(coef(rng)));
    LinearMap g{Mat<Rat>{{Rat(1), Rat(1, 2)}, {Rat(0), Rat(1)}}};
    HomogeneousPoly Q = act(g, P);
    MatchConfig cfg;
    cfg.restarts = static_cast<int>(state.range(0));
    cfg.seed = 5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(orbit_match(P, Q, cfg));
    }
}
BENCHMARK(BM_OrbitMatchPlanted)->Arg(1)->Arg(8);

void BM_MatrixExp(benchmark::State& state) {
    DMat M = {{0.1, 0.4, 0.0, 0.2},
              {-0.3, 0.0, 0.1, 0.0},
              {0.2, 0.0, -0.1, 0.3},
              {0.0, 0.1, -0.4, 0.0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(dmat_exp(M));
    }
}
BENCHMARK(BM_MatrixExp);

}  // namespace
