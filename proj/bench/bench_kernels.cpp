// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <cmath>

#include "noncross/kernels.hpp"

using namespace noncross;

namespace {

std::vector<Point2> square_points(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {rng.uniform(0.01, 0.99), rng.uniform(0.01, 0.99)};
  return pts;
}

Polyline random_walk(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> v{{0.5, 0.5}};
  for (std::size_t i = 1; i < n; ++i) {
    const double a = rng.uniform(-kPi, kPi);
    v.push_back({v.back().x + 0.01 * std::cos(a), v.back().y + 0.01 * std::sin(a)});
  }
  return Polyline(v);
}

Polyline circle(std::size_t n) {
  std::vector<Point2> v;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    v.push_back({0.5 + 0.4 * std::cos(t), 0.5 + 0.4 * std::sin(t)});
  }
  return Polyline(v, true);
}

template <auto Kernel>
void BM_eval(benchmark::State& st) {
  const PlanarMap m = twist_map({0.5, 0.5}, 0.4, 1.0);
  const auto pts = square_points(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(m, pts, Tolerances{}));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Kernel>
void BM_max_distance(benchmark::State& st) {
  const auto a = square_points(static_cast<std::size_t>(st.range(0)), 2);
  const auto b = square_points(static_cast<std::size_t>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(a, b));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <auto Kernel>
void BM_contacts(benchmark::State& st) {
  const Polyline c = random_walk(static_cast<std::size_t>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(c));
}

template <auto Kernel>
void BM_winding(benchmark::State& st) {
  const Polyline c = circle(1024);
  const auto probes = square_points(static_cast<std::size_t>(st.range(0)), 5);
  for (auto _ : st) benchmark::DoNotOptimize(Kernel(c, probes, 1e-9));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_eval<serial::eval_batch>)->Name("eval/serial")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_eval<parallel::eval_batch>)->Name("eval/parallel")->Arg(1 << 12)->Arg(1 << 16);
BENCHMARK(BM_max_distance<serial::max_distance>)->Name("max_distance/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_max_distance<parallel::max_distance>)->Name("max_distance/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_contacts<serial::count_contacts>)->Name("contacts/serial")->Arg(512)->Arg(2048);
BENCHMARK(BM_contacts<parallel::count_contacts>)->Name("contacts/parallel")->Arg(512)->Arg(2048);
BENCHMARK(BM_winding<serial::winding_numbers>)->Name("winding/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_winding<parallel::winding_numbers>)->Name("winding/parallel")->Arg(256)->Arg(4096);
BENCHMARK_MAIN();
