#pragma once

#include "satnls/grid.hpp"
#include "satnls/linearization.hpp"
#include "satnls/model.hpp"

namespace satnls {

struct NewtonConfig {
  double tol = 1e-10;  // on ||F(lambda,u)||_inf
  int max_iters = 50;
  double backtrack = 0.5;
  int max_halvings = 20;
};

/// A positive even solution of u'' + f(x,u^2) u = lambda u on the grid.
struct StandingWave {
  double lambda = 0.0;
  RealField u;
  double residual_inf = 0.0;
  double decay_ratio = 0.0;  // u'(R)/u(R), approaches -sqrt(lambda)
  double mass = 0.0;         // int u^2 over the whole line
  int iterations = 0;
};

/// F(lambda, u) = u'' + f(x,u^2) u - lambda u with the exponential-decay
/// closure u'(+-R) = -+sqrt(lambda) u(+-R) in the boundary rows.
RealField residual(double lambda, std::span<const double> u, const NonlinearityModel& model, const Grid& grid);

/// D_2 F(lambda, u), assembled with the same boundary closure.
Tridiagonal jacobian(double lambda, std::span<const double> u, const NonlinearityModel& model, const Grid& grid);

/// dF/dlambda at fixed u (the boundary rows depend on lambda through
/// sqrt(lambda)).
RealField lambda_derivative(double lambda, std::span<const double> u, const Grid& grid);

/// Scaled soliton A sech(sqrt(lambda) x)^(2/(p-1)), p = 2 alpha + 1, the
/// small-amplitude seed for Newton.
RealField initial_guess(double lambda, double alpha, const Grid& grid);

/// Log-derivative of u one node inside the right wall (central difference).
double decay_ratio(std::span<const double> u, const Grid& grid);

/// Damped Newton with symmetrization and backtracking on ||F||_inf.
///
/// Requires 0 < lambda < lambda_inf and a positive even guess. Throws
/// DomainError for lambda outside the window, ConvergenceError on
/// divergence, ShapeViolation if the converged profile is not positive
/// and strictly decreasing on x > 0.
StandingWave solve(double lambda, RealField guess, const NonlinearityModel& model, const Grid& grid,
                   const NewtonConfig& cfg, double lambda_inf);

/// Checks the StandingWave invariants; returns an empty string if they hold.
std::string shape_violation(const StandingWave& wave, const Grid& grid);

/// Smallest r such that f(x,s) <= eps for all |x| >= r and all s, using
/// f <= finf. Scans finf on [0, r_max].
double radius_below(const NonlinearityModel& model, double eps, double r_max);

}  // namespace satnls
