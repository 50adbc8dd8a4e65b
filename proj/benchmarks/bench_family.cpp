#include <benchmark/benchmark.h>

#include <defexp/conjugate.hpp>
#include <defexp/family.hpp>

#include <random>

using namespace defexp;

namespace {

PhiExponentialFamily bench_family(int points, int dims) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(0.3, 1.5);
  Vector mu(points), p(points);
  std::vector<std::string> labels;
  for (int i = 0; i < points; ++i) {
    mu[i] = unit(rng);
    p[i] = unit(rng);
    labels.push_back("x" + std::to_string(i));
  }
  p /= p.dot(mu);
  Matrix H(dims, points);
  std::uniform_real_distribution<double> stat(-2.0, 2.0);
  for (int j = 0; j < dims; ++j) {
    for (int i = 0; i < points; ++i) H(j, i) = stat(rng);
  }
  SampleSpace space(labels, mu);
  return PhiExponentialFamily(Deformation::kaniadakis(0.5), space, space.density(p), H);
}

}  // namespace

static void AlphaSolve(benchmark::State& state) {
  const auto fam = bench_family(static_cast<int>(state.range(0)), 2);
  Vector theta(2);
  theta << 1.3, -0.7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fam.alpha(theta));
  }
}
BENCHMARK(AlphaSolve)->Arg(4)->Arg(6);

static void EscortDensity(benchmark::State& state) {
  const auto fam = bench_family(static_cast<int>(state.range(0)), 2);
  Vector theta(2);
  theta << 1.3, -0.7;
  const Vector u = fam.centered_basis().transpose() * theta;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fam.escort(u));
  }
}
BENCHMARK(EscortDensity)->Arg(4)->Arg(6);

static void HessianAlpha(benchmark::State& state) {
  const auto fam = bench_family(6, static_cast<int>(state.range(0)));
  Vector theta = Vector::Constant(state.range(0), 0.4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fam.hessian_alpha(theta));
  }
}
BENCHMARK(HessianAlpha)->Arg(2)->Arg(3);

static void ConjugateNewton(benchmark::State& state) {
  const auto fam = bench_family(6, 2);
  Vector theta(2);
  theta << 0.9, -0.4;
  const Vector eta = fam.grad_alpha(theta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_star(fam, eta));
  }
}
BENCHMARK(ConjugateNewton);
