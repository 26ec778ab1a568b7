// Serial reference vs the OpenMP kernels. On a machine with fewer cores than
// the worker count the parallel rows only measure scheduling overhead.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <cmath>
#include <random>

#include "eulerprof/analysis.hpp"
#include "eulerprof/cubical.hpp"
#include "eulerprof/vr.hpp"

namespace {

using namespace eulerprof;

// Uniform sample of the unit 4-sphere in R^5.
vr::PointCloud sphere(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> coords(n * 5);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    for (std::size_t k = 0; k < 5; ++k) norm += std::pow(coords[i * 5 + k] = g(rng), 2);
    norm = std::sqrt(norm);
    for (std::size_t k = 0; k < 5; ++k) coords[i * 5 + k] /= norm;
  }
  return vr::PointCloud(5, std::move(coords));
}

const vr::PointCloud& bench_cloud() {
  static const auto cloud = vr::reorder_by_degree(sphere(3000, 7), 0.45);
  return cloud;
}

void BM_VrSerial(benchmark::State& state) {
  const auto& cloud = bench_cloud();
  std::size_t n = 0;
  for (auto _ : state) {
    auto raw = vr::compute_contributions_vr_serial(cloud, 0.45);
    n = raw.size();
    benchmark::DoNotOptimize(raw);
  }
  state.counters["simplices"] = static_cast<double>(n);
}
BENCHMARK(BM_VrSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_VrParallel(benchmark::State& state) {
  const auto& cloud = bench_cloud();
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto raw = vr::compute_contributions_vr(cloud, 0.45, nullptr, workers);
    benchmark::DoNotOptimize(raw);
  }
}
BENCHMARK(BM_VrParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_Cubical(benchmark::State& state) {
  const std::size_t side = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<double> values(side * side * side);
  for (auto& v : values) v = u(rng);
  const cubical::Image image({side, side, side}, 1, std::move(values));
  for (auto _ : state) {
    auto raw = cubical::compute_contributions_cubical(image);
    benchmark::DoNotOptimize(raw);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * image.values().size()));
}
BENCHMARK(BM_Cubical)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_EcpDistance(benchmark::State& state) {
  const auto threads = static_cast<int>(state.range(0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto random_profile = [&] {
    ContributionList raw(2);
    for (int i = 0; i < 400; ++i) raw.push(std::vector<double>{u(rng), u(rng)}, i % 2 ? 1 : -1);
    return canonicalize_profile(raw);
  };
  const auto a = random_profile();
  const auto b = random_profile();
  omp_set_num_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(distance_ecp(a, b, FiltrationVector{1.0, 1.0}));
  omp_set_num_threads(1);
}
BENCHMARK(BM_EcpDistance)->Arg(1)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
