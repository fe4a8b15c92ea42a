#include "blocksplit/bam.hpp"
#include "blocksplit/inner.hpp"
#include "blocksplit/quadratic.hpp"

#include <benchmark/benchmark.h>

namespace bs = blocksplit;

namespace {

void BM_InnerSolve(benchmark::State& state) {
    const double Ly = static_cast<double>(state.range(0));
    const auto p = bs::gen_quadratic({100, 10, 0.1, 50.0, 0.1, Ly, 0.2, 1});
    const auto params = bs::compute_parameters(p->constants());
    const bs::AuxProblem aux(*p, bs::Vector::Ones(100), bs::Vector::Zero(10), params.prox_weight());
    bs::InnerBudget budget;
    const int first = bs::inner_budget_seed(1.0 / aux.rho(), Ly, budget.seed_factor);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bs::solve_inner(aux, budget, first));
    }
}
BENCHMARK(BM_InnerSolve)->Arg(500)->Arg(5000)->Arg(50000);

void BM_BamStep(benchmark::State& state) {
    const auto p = bs::gen_quadratic({100, 10, 0.1, 50.0, 0.1, 5000.0, 0.0, 1});
    const auto params = bs::compute_parameters(p->constants());
    bs::CompositeInnerSolver inner;
    auto s = bs::BamState::start(bs::BlockVector::zeros(100, 10));
    for (auto _ : state) {
        s = bs::bam_step(s, *p, params, inner);
    }
}
BENCHMARK(BM_BamStep);

void BM_Generate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(bs::gen_quadratic({100, 10, 0.1, 50.0, 0.1, 500.0, 0.0, 1}));
    }
}
BENCHMARK(BM_Generate);

} // namespace
