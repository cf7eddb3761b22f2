#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "l1geom/exponents.hpp"
#include "l1geom/lp_core.hpp"
#include "l1geom/polytope_geometry.hpp"
#include "l1geom/recovery_lab.hpp"
#include "l1geom/specfun.hpp"
#include "l1geom/thresholds.hpp"

namespace {

using namespace l1geom;

void BM_RateFunction(benchmark::State& state) {
  const double y = specfun::kHalfNormalMean * 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(specfun::rate_function(y).lambda_star);
}
BENCHMARK(BM_RateFunction);

void BM_NetExponent(benchmark::State& state) {
  exponents::NetExponentParams p;
  p.rho = 0.05;
  p.delta = 0.5555;
  p.c_factor = 2.0;
  p.mode = exponents::RobustnessMode::strong;
  for (auto _ : state) benchmark::DoNotOptimize(exponents::psi_net(0.7, p));
}
BENCHMARK(BM_NetExponent);

void BM_NetExponentMaximum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        thresholds::max_net_exponent(0.05, 0.5555, 2.0, exponents::RobustnessMode::strong));
  }
}
BENCHMARK(BM_NetExponentMaximum);

void BM_CriticalRho(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        thresholds::critical_rho(0.5555, 2.0, exponents::RobustnessMode::strong));
  }
}
BENCHMARK(BM_CriticalRho);

void BM_ExternalAngle(benchmark::State& state) {
  const polytope_geometry::FaceSpec spec{static_cast<int>(state.range(0)),
                                         static_cast<int>(state.range(0)) / 20,
                                         static_cast<int>(state.range(0)) / 2, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(polytope_geometry::external_angle(spec).value);
}
BENCHMARK(BM_ExternalAngle)->Arg(100)->Arg(400);

void BM_InternalAngleSampling(benchmark::State& state) {
  const polytope_geometry::FaceSpec spec{120, 4, 40, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        polytope_geometry::internal_angle(spec, state.range(0), 7).value);
  }
}
BENCHMARK(BM_InternalAngleSampling)->Arg(10000)->Arg(100000);

void BM_DecodeL1(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  const auto ens = recovery_lab::sample_ensemble(m, n, 42);
  const auto x = recovery_lab::generate_signal(n, n / 20, 1.0, 0.2, 43);
  const auto y = ens.entries.multiply(x.values);
  for (auto _ : state) benchmark::DoNotOptimize(recovery_lab::decode_l1(ens, y).front());
}
BENCHMARK(BM_DecodeL1)->Arg(40)->Arg(80)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_SubspaceMaximization(benchmark::State& state) {
  const auto z = recovery_lab::direct_gaussian_basis(24, 12, 3);
  const std::vector<std::size_t> support = {0, 1, 2};
  const std::vector<int> signs = {1, -1, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_core::max_l1_on_subspace(z.basis, support, signs).value);
  }
}
BENCHMARK(BM_SubspaceMaximization);

}  // namespace

BENCHMARK_MAIN();
