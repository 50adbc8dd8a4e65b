#include <benchmark/benchmark.h>

#include <defexp/polytope.hpp>

#include <random>

using namespace defexp;

namespace {

Matrix random_vertices(int dims, int count) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coord(-1.5, 1.5);
  Matrix vertices(dims, count);
  for (int v = 0; v < count; ++v) {
    for (int k = 0; k < dims; ++k) vertices(k, v) = coord(rng);
  }
  return vertices;
}

}  // namespace

static void PolytopeBuild(benchmark::State& state) {
  const Matrix vertices = random_vertices(3, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(MarginalPolytope::build(vertices));
  }
}
BENCHMARK(PolytopeBuild)->Arg(4)->Arg(6);

static void MembershipLp(benchmark::State& state) {
  const Matrix vertices = random_vertices(3, static_cast<int>(state.range(0)));
  const auto polytope = MarginalPolytope::build(vertices);
  const Vector inside = vertices.rowwise().mean();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polytope.contains(inside));
  }
}
BENCHMARK(MembershipLp)->Arg(4)->Arg(6);

static void InteriorLp(benchmark::State& state) {
  const Matrix vertices = random_vertices(3, static_cast<int>(state.range(0)));
  const auto polytope = MarginalPolytope::build(vertices);
  const Vector inside = vertices.rowwise().mean();
  for (auto _ : state) {
    benchmark::DoNotOptimize(polytope.relative_interior_contains(inside));
  }
}
BENCHMARK(InteriorLp)->Arg(4)->Arg(6);

static void SeparationCertificateQuery(benchmark::State& state) {
  const Matrix vertices = random_vertices(3, static_cast<int>(state.range(0)));
  const auto polytope = MarginalPolytope::build(vertices);
  const Vector outside = Vector::Constant(3, 9.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(polytope.contains(outside));
  }
}
BENCHMARK(SeparationCertificateQuery)->Arg(4)->Arg(6);

BENCHMARK_MAIN();
