#pragma once

// Nodewise kernels shared by the stationary, spectral and dynamics modules.
//
// Each kernel exists twice: `serial` is the plain reference loop kept for
// testing, `parallel` is the OpenMP version used by the library. Both are
// elementwise maps, so their outputs must agree bit for bit. Reductions stay
// serial to keep results independent of the thread count.

#include <complex>
#include <span>

#include "satnls/model.hpp"

namespace satnls::kernels {

/// Coefficient bands of a tridiagonal matrix; lower[j] couples row j+1 to
/// column j, upper[j] couples row j to column j+1.
struct BandView {
  std::span<double> lower;
  std::span<double> diag;
  std::span<double> upper;
};

#define SATNLS_KERNEL_DECLS                                                                      \
  /* F(lambda,u) = u'' + f(x,u^2) u - lambda u with u'(+-R) = -+sqrt(lambda) u(+-R) */          \
  void stationary_residual(const NonlinearityModel& model, std::span<const double> x, double h,  \
                           double lambda, std::span<const double> u, std::span<double> out);     \
  /* D_2 F(lambda,u), same boundary closure */                                                    \
  void stationary_jacobian(const NonlinearityModel& model, std::span<const double> x, double h,  \
                           double lambda, std::span<const double> u, BandView bands);            \
  /* potentials of L1 (f + 2 d2f u^2) and L2 (f) at s = u^2 */                                   \
  void linearized_potentials(const NonlinearityModel& model, std::span<const double> x,          \
                             std::span<const double> u, std::span<double> pot1,                  \
                             std::span<double> pot2);                                             \
  /* psi <- psi exp(i tau f(x,|psi|^2)) */                                                       \
  void nonlinear_phase(const NonlinearityModel& model, std::span<const double> x, double tau,    \
                       std::span<std::complex<double>> psi);                                      \
  /* a <- a * m, elementwise */                                                                  \
  void multiply(std::span<std::complex<double>> a, std::span<const std::complex<double>> m);

namespace serial {
SATNLS_KERNEL_DECLS
}
namespace parallel {
SATNLS_KERNEL_DECLS
}

#undef SATNLS_KERNEL_DECLS

}  // namespace satnls::kernels
