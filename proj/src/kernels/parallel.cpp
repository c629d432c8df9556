#include "node_ops.hpp"

namespace satnls::kernels::parallel {

namespace {
using Index = std::ptrdiff_t;
}

void stationary_residual(const NonlinearityModel& model, std::span<const double> x, double h,
                         double lambda, std::span<const double> u, std::span<double> out) {
  const auto n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) out[j] = detail::residual_at(model, x, h, lambda, u, j);
}

void stationary_jacobian(const NonlinearityModel& model, std::span<const double> x, double h,
                         double lambda, std::span<const double> u, BandView bands) {
  const auto n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) detail::jacobian_at(model, x, h, lambda, u, bands, j);
}

void linearized_potentials(const NonlinearityModel& model, std::span<const double> x,
                           std::span<const double> u, std::span<double> pot1, std::span<double> pot2) {
  const auto n = static_cast<Index>(u.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) detail::potentials_at(model, x, u, pot1, pot2, j);
}

void nonlinear_phase(const NonlinearityModel& model, std::span<const double> x, double tau,
                     std::span<std::complex<double>> psi) {
  const auto n = static_cast<Index>(psi.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) detail::phase_at(model, x, tau, psi, j);
}

void multiply(std::span<std::complex<double>> a, std::span<const std::complex<double>> m) {
  const auto n = static_cast<Index>(a.size());
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < n; ++j) a[j] *= m[j];
}

}  // namespace satnls::kernels::parallel
