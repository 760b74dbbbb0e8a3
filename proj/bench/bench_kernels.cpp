// OpenMP kernels against their serial references, plus one solver step.
#include <benchmark/benchmark.h>

#include <random>

#include "mnda/integrator.hpp"
#include "mnda/kernels.hpp"
#include "mnda/reference.hpp"
#include "mnda/window.hpp"

namespace {

using namespace mnda;

std::vector<double> noise(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(count);
  for (auto& x : v) x = u(rng);
  return v;
}

SpectralField noise_field(int n) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  SpectralField f(n);
  for (int ky = 0; ky < n / 2; ++ky) {
    for (int kx = -n / 2 + 1; kx < n / 2; ++kx) {
      if (ky == 0 && kx <= 0) continue;
      f.set_pair(kx, ky, Complex(g(rng), g(rng)));
    }
  }
  return f;
}

template <bool Parallel>
void BM_AdvectiveProduct(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = noise(n * n, 1), b = noise(n * n, 2), c = noise(n * n, 3), d = noise(n * n, 4);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::advective_product(a, b, c, d, out);
    } else {
      reference::advective_product(a, b, c, d, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Dealias(benchmark::State& state) {
  const SpectralField base = noise_field(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    state.PauseTiming();
    SpectralField f = base;
    state.ResumeTiming();
    if constexpr (Parallel) {
      kernels::dealias_in_place(f);
    } else {
      reference::dealias_in_place(f);
    }
    benchmark::DoNotOptimize(f.data().data());
  }
}

template <bool Parallel>
void BM_KpFill(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const int p = static_cast<int>(state.range(1));
  const auto base = noise(static_cast<std::size_t>(m + 1) * (m + 1), 7);
  auto block = base;
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::kp_fill(block, m, p);
    } else {
      reference::kp_fill(block, m, p);
    }
    benchmark::DoNotOptimize(block.data());
  }
}

template <bool Parallel>
void BM_WindowTrapezoid(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  GridField g(n);
  const auto v = noise(static_cast<std::size_t>(n) * n, 9);
  std::copy(v.begin(), v.end(), g.data().begin());
  const NodeWindow w = to_nodes(partition_window(6, 4), n);
  for (auto _ : state) {
    double e = Parallel ? kernels::window_trapezoid(g, w, 1) : reference::window_trapezoid(g, w, 1);
    benchmark::DoNotOptimize(e);
  }
}

void BM_SolverStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SpectralField omega = noise_field(n);
  dealias(omega);
  omega *= 1e-3;
  const SpectralField forcing(n);
  StepperState s = make_state(omega, 0.0, 1e-4, 1e-3);
  const ExplicitRhs rhs = [&](const SpectralField& w, double) { return rhs_explicit(w, forcing, nullptr, 0.0); };
  for (auto _ : state) advance(s, rhs);
}

}  // namespace

BENCHMARK(BM_AdvectiveProduct<true>)->Arg(128)->Arg(512);
BENCHMARK(BM_AdvectiveProduct<false>)->Arg(128)->Arg(512);
BENCHMARK(BM_Dealias<true>)->Arg(128)->Arg(512);
BENCHMARK(BM_Dealias<false>)->Arg(128)->Arg(512);
BENCHMARK(BM_KpFill<true>)->Args({32, 1})->Args({128, 4});
BENCHMARK(BM_KpFill<false>)->Args({32, 1})->Args({128, 4});
BENCHMARK(BM_WindowTrapezoid<true>)->Arg(128)->Arg(512);
BENCHMARK(BM_WindowTrapezoid<false>)->Arg(128)->Arg(512);
BENCHMARK(BM_SolverStep)->Arg(128)->Arg(256);

BENCHMARK_MAIN();
