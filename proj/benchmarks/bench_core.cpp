#include <benchmark/benchmark.h>

#include <random>

#include "tpp/adam.hpp"
#include "tpp/losses.hpp"
#include "tpp/mlp.hpp"
#include "tpp/problems.hpp"

namespace {

tpp::Mlp make_net(int layers, int width) {
  return tpp::Mlp(tpp::MLPConfig::uniform_hidden(layers, width));
}

void BM_Forward(benchmark::State& state) {
  const tpp::Mlp net = make_net(static_cast<int>(state.range(0)), 20);
  const tpp::ParamVector params = net.init_params(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(net.forward(params, 0.37, -0.21));
}
BENCHMARK(BM_Forward)->Arg(4)->Arg(9);

void BM_ForwardJet(benchmark::State& state) {
  const tpp::Mlp net = make_net(static_cast<int>(state.range(0)), 20);
  const tpp::ParamVector params = net.init_params(7);
  for (auto _ : state)
    benchmark::DoNotOptimize(net.forward_jet(params, 0.37, -0.21));
}
BENCHMARK(BM_ForwardJet)->Arg(4)->Arg(9);

void BM_ResidualLossGradient(benchmark::State& state) {
  const tpp::Problem problem = tpp::make_burgers_problem();
  const tpp::Mlp net = make_net(4, 20);
  const tpp::ParamVector params = net.init_params(7);
  std::mt19937_64 rng(11);
  const auto colloc = tpp::lhs_sample(static_cast<int>(state.range(0)),
                                      problem.domain, rng);
  const tpp::MseFLoss loss(net, problem.residual, problem.residual_partials,
                           colloc);
  tpp::ParamVector grad = tpp::zeros_like(params);
  for (auto _ : state) {
    std::fill(grad.values.begin(), grad.values.end(), 0.0);
    benchmark::DoNotOptimize(loss.add_gradient(params, 1.0, grad));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ResidualLossGradient)->Arg(256)->Arg(2000);

void BM_AdamStep(benchmark::State& state) {
  const tpp::Mlp net = make_net(9, 20);
  tpp::ParamVector params = net.init_params(7);
  tpp::ParamVector grad = tpp::zeros_like(params);
  for (std::size_t i = 0; i < grad.values.size(); ++i)
    grad.values[i] = 1e-3 * static_cast<double>(i % 17) - 8e-3;
  tpp::Adam opt(tpp::AdamConfig{}, params.size());
  for (auto _ : state) {
    opt.step(grad, params);
    benchmark::DoNotOptimize(params.values.data());
  }
}
BENCHMARK(BM_AdamStep);

} // namespace

BENCHMARK_MAIN();
