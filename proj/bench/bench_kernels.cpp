// Serial reference vs OpenMP kernels on the default grid and its refinements.
#include <cmath>
#include <complex>
#include <vector>

#include <benchmark/benchmark.h>

#include "satnls/grid.hpp"
#include "satnls/kernels.hpp"

using namespace satnls;

namespace {

const NonlinearityModel& model() {
  static const NonlinearityModel m = make_prototype({0.5, 1.0});
  return m;
}

struct Fixture {
  Grid grid;
  RealField u, out, pot1, pot2, lower, diag, upper;
  ComplexField psi, mult;

  explicit Fixture(std::size_t n)
      : grid(40.0, n), u(n), out(n), pot1(n), pot2(n), lower(n - 1), diag(n), upper(n - 1), psi(n), mult(n) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = grid.x(j);
      u[j] = 1.5 / std::cosh(0.7 * x);
      psi[j] = u[j] * std::polar(1.0, 0.1 * x);
      mult[j] = std::polar(1.0, -0.01 * x * x);
    }
  }
};

template <bool Parallel>
void residual(benchmark::State& st) {
  Fixture f(st.range(0));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::stationary_residual(model(), f.grid.nodes(), f.grid.h(), 0.35, f.u, f.out);
    else
      kernels::serial::stationary_residual(model(), f.grid.nodes(), f.grid.h(), 0.35, f.u, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void jacobian(benchmark::State& st) {
  Fixture f(st.range(0));
  for (auto _ : st) {
    const kernels::BandView b{f.lower, f.diag, f.upper};
    if constexpr (Parallel)
      kernels::parallel::stationary_jacobian(model(), f.grid.nodes(), f.grid.h(), 0.35, f.u, b);
    else
      kernels::serial::stationary_jacobian(model(), f.grid.nodes(), f.grid.h(), 0.35, f.u, b);
    benchmark::DoNotOptimize(f.diag.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void potentials(benchmark::State& st) {
  Fixture f(st.range(0));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::linearized_potentials(model(), f.grid.nodes(), f.u, f.pot1, f.pot2);
    else
      kernels::serial::linearized_potentials(model(), f.grid.nodes(), f.u, f.pot1, f.pot2);
    benchmark::DoNotOptimize(f.pot1.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void phase(benchmark::State& st) {
  Fixture f(st.range(0));
  for (auto _ : st) {
    // the phase map keeps |psi|, so repeated calls stay bounded
    if constexpr (Parallel)
      kernels::parallel::nonlinear_phase(model(), f.grid.nodes(), 1e-9, f.psi);
    else
      kernels::serial::nonlinear_phase(model(), f.grid.nodes(), 1e-9, f.psi);
    benchmark::DoNotOptimize(f.psi.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Parallel>
void multiply(benchmark::State& st) {
  Fixture f(st.range(0));
  for (auto _ : st) {
    if constexpr (Parallel)
      kernels::parallel::multiply(f.psi, f.mult);
    else
      kernels::serial::multiply(f.psi, f.mult);
    benchmark::DoNotOptimize(f.psi.data());
  }
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

#define SIZES ->Arg(4001)->Arg(16001)->Arg(64001)
BENCHMARK(residual<false>) SIZES;
BENCHMARK(residual<true>) SIZES;
BENCHMARK(jacobian<false>) SIZES;
BENCHMARK(jacobian<true>) SIZES;
BENCHMARK(potentials<false>) SIZES;
BENCHMARK(potentials<true>) SIZES;
BENCHMARK(phase<false>) SIZES;
BENCHMARK(phase<true>) SIZES;
BENCHMARK(multiply<false>) SIZES;
BENCHMARK(multiply<true>) SIZES;

BENCHMARK_MAIN();
