#include <benchmark/benchmark.h>

#include <vector>

#include "adaconv/objectives.hpp"
#include "adaconv/optim.hpp"
#include "adaconv/rng.hpp"
#include "adaconv/tau.hpp"

namespace {

// Single adaptive step throughput on the six-coordinate toy objective.
void BM_AdaptiveStep(benchmark::State& state) {
  adaconv::ToyProblem obj;
  adaconv::HyperParams h(1e-6, 0.9, 1.0 - 1e-6);
  adaconv::RngStream rng(1);
  auto s = adaconv::OptimizerState::initial(std::vector<double>(obj.dim(), 0.0));
  std::vector<double> g(obj.dim());
  for (auto _ : state) {
    obj.sample_grad(s.x, rng, g);
    adaconv::advance_adaptive(s, h, g);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_AdaptiveStep);

void BM_SgdStep(benchmark::State& state) {
  adaconv::ToyProblem obj;
  adaconv::RngStream rng(1);
  auto s = adaconv::SgdState::initial(std::vector<double>(obj.dim(), 0.0));
  std::vector<double> g(obj.dim());
  for (auto _ : state) {
    obj.sample_grad(s.x, rng, g);
    adaconv::advance_sgd(s, 1e-6, 0.9, g);
    benchmark::DoNotOptimize(s.x.data());
  }
}
BENCHMARK(BM_SgdStep);

void BM_ToySampleGrad(benchmark::State& state) {
  adaconv::ToyProblem obj;
  adaconv::RngStream rng(1);
  std::vector<double> x(obj.dim(), 0.5), g(obj.dim());
  for (auto _ : state) {
    obj.sample_grad(x, rng, g);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_ToySampleGrad);

void BM_TauWeights(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    auto dist = adaconv::tau_weights(n, 0.9);
    benchmark::DoNotOptimize(dist.weights.data());
  }
}
BENCHMARK(BM_TauWeights)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
