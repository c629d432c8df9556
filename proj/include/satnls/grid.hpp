#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace satnls {

using RealField = std::vector<double>;
using ComplexField = std::vector<std::complex<double>>;

/// Uniform grid on [-R, R] with an odd number of nodes, so that x = 0 is the
/// center node and nodes are exactly symmetric.
class Grid {
public:
  Grid(double R, std::size_t N);

  double R() const noexcept { return R_; }
  std::size_t N() const noexcept { return N_; }
  double h() const noexcept { return h_; }
  std::size_t center() const noexcept { return (N_ - 1) / 2; }
  double x(std::size_t j) const noexcept { return x_[j]; }
  std::span<const double> nodes() const noexcept { return x_; }

  /// Same radius, spacing halved (N -> 2N - 1).
  Grid refined() const { return Grid(R_, 2 * N_ - 1); }

  /// Grid with the given spacing on [-R, R]; R must be a multiple of h.
  static Grid with_spacing(double R, double h);

private:
  double R_;
  std::size_t N_;
  double h_;
  std::vector<double> x_;
};

struct Norms {
  double L2 = 0.0;
  double Linf = 0.0;
  double H1 = 0.0;
};

/// Three-point second difference with zero-Dirichlet ghost values.
RealField second_derivative(std::span<const double> u, const Grid& grid);

/// Fourth-order central first derivative (five-point stencil), one-sided
/// second-order closures on the two outermost nodes at each end.
RealField first_derivative(std::span<const double> u, const Grid& grid);

/// Trapezoid rule over all nodes.
double integrate(std::span<const double> g, const Grid& grid);

/// Trapezoid rule over nodes with x >= 0.
double half_line_integral(std::span<const double> g, const Grid& grid);

Norms norms(std::span<const double> u, const Grid& grid);
Norms norms(std::span<const std::complex<double>> psi, const Grid& grid);

/// H1 inner product <a, b> = int (a conj(b) + a' conj(b')).
std::complex<double> h1_inner(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b, const Grid& grid);

void write_csv(const std::string& path, std::span<const double> u, const Grid& grid,
               const std::string& header_comment = "");
void write_csv(const std::string& path, std::span<const std::complex<double>> psi, const Grid& grid,
               const std::string& header_comment = "");

}  // namespace satnls
