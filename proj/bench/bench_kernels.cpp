// SPDX-License-Identifier: Apache-2.0
// Serial vs OpenMP kernels on a paper-scale training set.
#include <benchmark/benchmark.h>

#include "aircomp/evaluation.hpp"
#include "aircomp/kernels.hpp"
#include "aircomp/optimizer.hpp"
#include "aircomp/scenario.hpp"

namespace {

using namespace aircomp;

struct Fixture {
  ScenarioConfig cfg;
  ChannelSet set;
  BeamformingState state;
  std::vector<RealSampleM> real_m;
  std::vector<RealSampleV> real_v;
  SurrogateParams params;

  Fixture() {
    cfg.devices = 20;
    cfg.antennas = 20;
    cfg.elements = 40;
    set = generate_channel_set(cfg, 300);
    Rng rng(derive_seed(cfg.seed, Stream::kSolverInit));
    state = initial_state(cfg.antennas, cfg.elements, rng);
    real_m = build_real_channels_m(set, state.v);
    real_v = build_real_channels_v(set, state.m);
    params.gamma = gamma_from_tau_db(-28.0, cfg);
  }
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}

void BM_GradientM_Serial(benchmark::State& st) {
  const auto& f = fixture();
  const Eigen::VectorXd x = stack_real(f.state.m);
  for (auto _ : st) benchmark::DoNotOptimize(serial::mean_gradient_m(x, f.real_m, f.params));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(f.real_m.size()));
}

void BM_GradientM_ParallelOrdered(benchmark::State& st) {
  const auto& f = fixture();
  const Eigen::VectorXd x = stack_real(f.state.m);
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel::mean_gradient_m(x, f.real_m, f.params, {}, Reduction::kOrdered));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(f.real_m.size()));
}

void BM_GradientM_ParallelUnordered(benchmark::State& st) {
  const auto& f = fixture();
  const Eigen::VectorXd x = stack_real(f.state.m);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        parallel::mean_gradient_m(x, f.real_m, f.params, {}, Reduction::kUnordered));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(f.real_m.size()));
}

void BM_GradientV_Serial(benchmark::State& st) {
  const auto& f = fixture();
  const Eigen::VectorXd x = stack_real(f.state.v);
  const double n2 = f.state.m.squaredNorm();
  for (auto _ : st) benchmark::DoNotOptimize(serial::mean_gradient_v(x, f.real_v, n2, f.params));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(f.real_v.size()));
}

void BM_GradientV_ParallelOrdered(benchmark::State& st) {
  const auto& f = fixture();
  const Eigen::VectorXd x = stack_real(f.state.v);
  const double n2 = f.state.m.squaredNorm();
  for (auto _ : st)
    benchmark::DoNotOptimize(parallel::mean_gradient_v(x, f.real_v, n2, f.params));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(f.real_v.size()));
}

void BM_BuildRealChannelsV(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(build_real_channels_v(f.set, f.state.m));
}

void BM_GenerateChannelSet(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st) benchmark::DoNotOptimize(generate_channel_set(f.cfg, st.range(0)));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_MonteCarloOutage(benchmark::State& st) {
  const auto& f = fixture();
  for (auto _ : st)
    benchmark::DoNotOptimize(monte_carlo_outage(f.state, f.cfg, st.range(0), f.params.gamma));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_GradientM_Serial);
BENCHMARK(BM_GradientM_ParallelOrdered);
BENCHMARK(BM_GradientM_ParallelUnordered);
BENCHMARK(BM_GradientV_Serial);
BENCHMARK(BM_GradientV_ParallelOrdered);
BENCHMARK(BM_BuildRealChannelsV);
BENCHMARK(BM_GenerateChannelSet)->Arg(300);
BENCHMARK(BM_MonteCarloOutage)->Arg(1000);

BENCHMARK_MAIN();
