// Serial reference against the OpenMP kernels. Each benchmark takes the
// execution policy as its last argument (0 serial, 1 parallel).

#include <random>

#include <benchmark/benchmark.h>

#include "qlab/common/execution.hpp"
#include "qlab/dynamics/loop_set.hpp"
#include "qlab/geometry/models.hpp"
#include "qlab/spectral/projector.hpp"
#include "qlab/spectral/torus_basis.hpp"

namespace {

using namespace qlab;

Execution policy(const benchmark::State& state) {
  return state.range(1) != 0 ? Execution::Parallel : Execution::Serial;
}

const spectral::TorusBasis& torus() {
  static const spectral::TorusBasis b = spectral::TorusBasis::square(2.0 * kPi, 160.0);
  return b;
}

spectral::CoefficientVector random_coefficients(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  spectral::CoefficientVector f(n);
  for (cplx& c : f.c) {
    const double re = g(rng);
    c = cplx(re, g(rng));
  }
  return f;
}

// FFT strip sup over an N x N grid.
void BM_StripSup(benchmark::State& state) {
  const auto& b = torus();
  const auto f = random_coefficients(b.size());
  const int n = static_cast<int>(state.range(0));
  const Execution exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(b.strip_sup(f, n, n, exec).value);
}
BENCHMARK(BM_StripSup)->ArgsProduct({{512, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

// Grid sup of the projector density for a unit window.
void BM_ProjectorSup(benchmark::State& state) {
  const auto& b = torus();
  const double lambda = static_cast<double>(state.range(0));
  const Execution exec = policy(state);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        spectral::projector_sup_norm(b, spectral::WindowSpec::sharp(lambda, 1.0), std::nullopt, exec).value);
}
BENCHMARK(BM_ProjectorSup)->ArgsProduct({{40, 80}, {0, 1}})->Unit(benchmark::kMillisecond);

// Direction sweep at the ellipsoid umbilic.
void BM_DirectionSweep(benchmark::State& state) {
  static const geometry::ModelPtr m =
      geometry::make_model({"ellipsoid", {{"a", "1"}, {"b", "0.8"}, {"c", "0.6"}}});
  const Vec z = geometry::resolve_point(*m, "umbilic");
  dynamics::SweepParams p;
  p.grid_size = static_cast<std::size_t>(state.range(0));
  p.T_max = 6.0;
  p.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(dynamics::sample_loop_set(*m, z, p).measure_fraction);
}
BENCHMARK(BM_DirectionSweep)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
