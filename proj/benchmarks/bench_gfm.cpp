#include <benchmark/benchmark.h>

#include "gfm/generator.hpp"
#include "gfm/invertibility.hpp"
#include "gfm/multiplier.hpp"
#include "gfm/neumann.hpp"

namespace {

gfm::Scenario scenario(benchmark::State& state) {
  gfm::GenerateOptions opt;
  opt.seed = 1;
  opt.dim = state.range(0);
  opt.points = 3 * opt.dim;
  opt.block_dims = {2};
  opt.target_ratio = 0.5;
  opt.nu_target = 0.01;
  opt.symbol = gfm::parse_symbol_spec("near-one:0.2");
  return gfm::generate_scenario(opt);
}

void BM_FrameOperator(benchmark::State& state) {
  const auto s = scenario(state);
  for (auto _ : state) benchmark::DoNotOptimize(gfm::frame_operator(s.lambda));
}

void BM_FrameBounds(benchmark::State& state) {
  const auto s = scenario(state);
  for (auto _ : state) benchmark::DoNotOptimize(gfm::frame_bounds(s.lambda));
}

void BM_AssembleMultiplier(benchmark::State& state) {
  const auto s = scenario(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gfm::assemble_multiplier(s.symbol, s.lambda, s.theta_or_lambda()));
  }
}

void BM_OpNorm(benchmark::State& state) {
  const auto s = scenario(state);
  const auto m = gfm::assemble_multiplier(s.symbol, s.lambda, s.theta_or_lambda());
  for (auto _ : state) benchmark::DoNotOptimize(gfm::op_norm(m));
}

void BM_DirectInverse(benchmark::State& state) {
  const auto s = scenario(state);
  const auto m = gfm::assemble_multiplier(s.symbol, s.lambda, s.theta_or_lambda());
  for (auto _ : state) benchmark::DoNotOptimize(gfm::direct_inverse(m));
}

void BM_NeumannInvert(benchmark::State& state) {
  const auto s = scenario(state);
  const auto m = gfm::assemble_multiplier(s.symbol, s.lambda, s.lambda);
  const auto p = gfm::frame_operator(s.lambda);
  for (auto _ : state) benchmark::DoNotOptimize(gfm::neumann_invert(m, p, 200, 1e-10));
}

void BM_CertifiedInversion(benchmark::State& state) {
  const auto s = scenario(state);
  const auto c = gfm::cert_combined(s.lambda, s.theta_or_lambda(), s.symbol);
  const auto m = gfm::assemble_multiplier(s.symbol, s.lambda, s.theta_or_lambda());
  for (auto _ : state) benchmark::DoNotOptimize(gfm::run_certified_inversion(c, m, 30, 0.0));
}

}  // namespace

BENCHMARK(BM_FrameOperator)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_FrameBounds)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_AssembleMultiplier)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_OpNorm)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_DirectInverse)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_NeumannInvert)->RangeMultiplier(2)->Range(4, 64);
BENCHMARK(BM_CertifiedInversion)->RangeMultiplier(2)->Range(4, 16);
BENCHMARK_MAIN();
