#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "satnls/kernels.hpp"

// Per-node bodies of the kernels; the serial and OpenMP translation units
// only differ in how they loop over j.
namespace satnls::kernels::detail {

inline double residual_at(const NonlinearityModel& m, std::span<const double> x, double h, double lambda,
                          std::span<const double> u, std::size_t j) {
  const std::size_t n = u.size();
  const double ih2 = 1.0 / (h * h);
  double lap;
  if (j == 0) {
    lap = (2.0 * u[1] - 2.0 * u[0] - 2.0 * h * std::sqrt(lambda) * u[0]) * ih2;
  } else if (j + 1 == n) {
    lap = (2.0 * u[n - 2] - 2.0 * u[n - 1] - 2.0 * h * std::sqrt(lambda) * u[n - 1]) * ih2;
  } else {
    lap = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * ih2;
  }
  const double s = u[j] * u[j];
  return lap + m.f(x[j], s) * u[j] - lambda * u[j];
}

inline void jacobian_at(const NonlinearityModel& m, std::span<const double> x, double h, double lambda,
                        std::span<const double> u, BandView b, std::size_t j) {
  const std::size_t n = u.size();
  const double ih2 = 1.0 / (h * h);
  const double s = u[j] * u[j];
  double d = -2.0 * ih2 + m.f(x[j], s) + 2.0 * m.d2f(x[j], s) * s - lambda;
  if (j == 0 || j + 1 == n) d -= 2.0 * std::sqrt(lambda) / h;
  b.diag[j] = d;
  if (j + 1 < n) b.upper[j] = (j == 0 ? 2.0 : 1.0) * ih2;
  if (j + 1 < n) b.lower[j] = (j + 2 == n ? 2.0 : 1.0) * ih2;
}

inline void potentials_at(const NonlinearityModel& m, std::span<const double> x, std::span<const double> u,
                          std::span<double> p1, std::span<double> p2, std::size_t j) {
  const double s = u[j] * u[j];
  const double fv = m.f(x[j], s);
  p2[j] = fv;
  p1[j] = fv + 2.0 * m.d2f(x[j], s) * s;
}

inline void phase_at(const NonlinearityModel& m, std::span<const double> x, double tau,
                     std::span<std::complex<double>> psi, std::size_t j) {
  const double phi = tau * m.f(x[j], std::norm(psi[j]));
  psi[j] *= std::complex<double>(std::cos(phi), std::sin(phi));
}

}  // namespace satnls::kernels::detail
