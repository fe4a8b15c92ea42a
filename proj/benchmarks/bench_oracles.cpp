#include "blocksplit/logistic.hpp"
#include "blocksplit/quadratic.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace bs = blocksplit;

namespace {

void BM_QuadraticGradX(benchmark::State& state) {
    const auto dx = state.range(0);
    const auto p = bs::gen_quadratic({dx, 10, 0.1, 50.0, 0.1, 500.0, 0.2, 1});
    const bs::Vector x = bs::Vector::Ones(dx);
    const bs::Vector y = bs::Vector::Ones(10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p->grad_x(x, y));
    }
}
BENCHMARK(BM_QuadraticGradX)->Arg(100)->Arg(400);

void BM_QuadraticGradY(benchmark::State& state) {
    const auto p = bs::gen_quadratic({100, 10, 0.1, 50.0, 0.1, 500.0, 0.2, 1});
    const bs::Vector x = bs::Vector::Ones(100);
    const bs::Vector y = bs::Vector::Ones(10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(p->grad_y(x, y));
    }
}
BENCHMARK(BM_QuadraticGradY);

bs::LibsvmDataset sparse_dataset(int rows) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bs::LibsvmDataset d;
    d.n_features = 123;
    for (int r = 0; r < rows; ++r) {
        bs::LibsvmRow row;
        row.label = u(rng) < 0.25 ? 1.0 : -1.0;
        for (bs::Index j = 0; j < 123; ++j) {
            if (u(rng) < 0.11) {
                row.features.push_back({j, 1.0});
            }
        }
        d.rows.push_back(std::move(row));
    }
    return d;
}

void BM_LogisticGradients(benchmark::State& state) {
    const auto p = bs::make_logistic(sparse_dataset(1605), 100, 19, 0.005, 0.001);
    const bs::Vector x = bs::Vector::Constant(100, 0.01);
    const bs::Vector y = bs::Vector::Constant(19, -0.01);
    const bool block_x = state.range(0) == 0;
    for (auto _ : state) {
        if (block_x) {
            benchmark::DoNotOptimize(p->grad_x(x, y));
        } else {
            benchmark::DoNotOptimize(p->grad_y(x, y));
        }
    }
    state.SetLabel(block_x ? "grad_x" : "grad_y");
}
BENCHMARK(BM_LogisticGradients)->Arg(0)->Arg(1);

} // namespace
