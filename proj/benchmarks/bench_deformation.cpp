#include <benchmark/benchmark.h>

#include <defexp/deformation.hpp>

#include <cmath>

using defexp::Deformation;

static void ExpPhiKaniadakis(benchmark::State& state) {
  const auto d = Deformation::kaniadakis(0.5);
  double u = -5.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.exp_phi(u));
    u = u < 5.0 ? u + 0.001 : -5.0;
  }
}
BENCHMARK(ExpPhiKaniadakis);

static void LnPhiKaniadakis(benchmark::State& state) {
  const auto d = Deformation::kaniadakis(0.5);
  double v = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.ln_phi(v));
    v = v < 100.0 ? v * 1.001 : 0.1;
  }
}
BENCHMARK(LnPhiKaniadakis);

// Quadrature-backed rate-function route, for comparison with the closed forms.
static void ExpPhiFromRate(benchmark::State& state) {
  const auto d =
      Deformation::from_psi([](double u) { return 1.0 / std::sqrt(1.0 + 0.25 * u * u); });
  double u = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.exp_phi(u));
    u = u < 3.0 ? u + 0.1 : -3.0;
  }
}
BENCHMARK(ExpPhiFromRate);

static void LnPhiFromRate(benchmark::State& state) {
  const auto d =
      Deformation::from_psi([](double u) { return 1.0 / std::sqrt(1.0 + 0.25 * u * u); });
  double v = 0.25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(d.ln_phi(v));
    v = v < 20.0 ? v * 1.1 : 0.25;
  }
}
BENCHMARK(LnPhiFromRate);
