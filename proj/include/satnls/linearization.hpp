#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "satnls/grid.hpp"
#include "satnls/model.hpp"

namespace satnls {

/// General tridiagonal matrix. lower[j] is entry (j+1, j), upper[j] is (j, j+1).
struct Tridiagonal {
  RealField lower;
  RealField diag;
  RealField upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n ? n - 1 : 0), diag(n), upper(n ? n - 1 : 0) {}
  std::size_t size() const noexcept { return diag.size(); }

  RealField apply(std::span<const double> v) const;
  Tridiagonal transposed() const;
};

/// Solves A y = rhs by LU with partial pivoting. Throws SingularSystem.
RealField solve(const Tridiagonal& A, std::span<const double> rhs);

/// Smallest singular value by inverse power iteration on A^T A.
double smallest_singular_value(const Tridiagonal& A, int max_iters = 2000, double rel_tol = 1e-12);

struct SpectrumReport {
  std::vector<double> eigenvalues;    // ascending, all < threshold
  std::vector<RealField> eigenvectors;  // unit Euclidean norm
  std::vector<double> residuals;      // ||A v - mu v||_2 / ||v||_2
  double essential_threshold = 0.0;
  double kernel_tol = 0.0;
  int morse_index = 0;
  std::vector<std::size_t> kernel_candidates;  // indices with |mu| < kernel_tol
  int bisection_steps = 0;
};

/// Default kernel tolerance, 1e-6 times the infinity norm of the matrix.
double default_kernel_tol(std::span<const double> diag, std::span<const double> off);

/// All eigenpairs of the symmetric tridiagonal matrix (diag, off) lying
/// strictly below `threshold`: Sturm-sequence bisection for the values,
/// inverse iteration for the vectors.
///
/// Throws ConvergenceError if an eigenvector cannot be resolved to a
/// relative residual of 1e-8 (the message carries the matrix size and the
/// shift history).
SpectrumReport tridiag_spectrum(std::span<const double> diag, std::span<const double> off, double threshold,
                                std::optional<double> kernel_tol = std::nullopt);

/// Number of eigenvalues of (diag, off) strictly below sigma.
std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double sigma);

struct PrincipalEigenpair {
  double lambda_inf = 0.0;
  RealField phi;  // positive inside, zero on the walls, unit L2 norm
};

/// Principal eigenpair of u'' + finf(x) u = lambda u with Dirichlet walls at
/// +-R. Throws DomainError when no positive eigenvalue exists, i.e. (A7)
/// fails at this discretization.
PrincipalEigenpair principal_eigenpair(const std::function<double(double)>& finf, const Grid& grid);
PrincipalEigenpair principal_eigenpair(const NonlinearityModel& model, const Grid& grid);

struct LambdaInfEstimate {
  double coarse = 0.0;        // grid spacing h
  double fine = 0.0;          // spacing h/2
  double extrapolated = 0.0;  // (4 fine - coarse) / 3
};

/// Richardson-extrapolated principal eigenvalue from the grid and its
/// refinement.
LambdaInfEstimate lambda_inf_estimate(const std::function<double(double)>& finf, const Grid& grid);
LambdaInfEstimate lambda_inf_estimate(const NonlinearityModel& model, const Grid& grid);

}  // namespace satnls
