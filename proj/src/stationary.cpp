#include "satnls/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "satnls/error.hpp"
#include "satnls/kernels.hpp"

namespace satnls {

RealField residual(double lambda, std::span<const double> u, const NonlinearityModel& model, const Grid& grid) {
  RealField out(u.size());
  kernels::parallel::stationary_residual(model, grid.nodes(), grid.h(), lambda, u, out);
  return out;
}

Tridiagonal jacobian(double lambda, std::span<const double> u, const NonlinearityModel& model, const Grid& grid) {
  Tridiagonal J(u.size());
  kernels::parallel::stationary_jacobian(model, grid.nodes(), grid.h(), lambda, u,
                                         {J.lower, J.diag, J.upper});
  return J;
}

RealField lambda_derivative(double lambda, std::span<const double> u, const Grid& grid) {
  RealField d(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) d[j] = -u[j];
  // d/dlambda of -2 sqrt(lambda) u / h in the closure rows
  const double c = 1.0 / (grid.h() * std::sqrt(lambda));
  d.front() -= c * u.front();
  d.back() -= c * u.back();
  return d;
}

RealField initial_guess(double lambda, double alpha, const Grid& grid) {
  const double p = 2.0 * alpha + 1.0;
  const double amp = std::pow(lambda * (p + 1.0) / 2.0, 1.0 / (p - 1.0));
  const double k = std::sqrt(lambda);
  RealField u(grid.N());
  for (std::size_t j = 0; j < grid.N(); ++j) u[j] = amp * std::pow(1.0 / std::cosh(k * grid.x(j)), 2.0 / (p - 1.0));
  return u;
}

double decay_ratio(std::span<const double> u, const Grid& grid) {
  const std::size_t n = u.size();
  return (u[n - 1] - u[n - 3]) / (2.0 * grid.h()) / u[n - 2];
}

namespace {

void symmetrize(RealField& u) {
  const std::size_t n = u.size();
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double a = 0.5 * (u[j] + u[n - 1 - j]);
    u[j] = a;
    u[n - 1 - j] = a;
  }
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

std::string shape_violation(const StandingWave& wave, const Grid& grid) {
  const auto& u = wave.u;
  const std::size_t n = u.size(), c = grid.center();
  std::ostringstream os;
  for (std::size_t j = 0; j < n; ++j) {
    if (!(u[j] > 0.0)) {
      os << "positivity violated at x = " << grid.x(j) << " (u = " << u[j] << ")";
      return os.str();
    }
    if (u[j] != u[n - 1 - j]) {
      os << "evenness violated at x = " << grid.x(j);
      return os.str();
    }
  }
  for (std::size_t j = c; j + 1 < n; ++j) {
    if (!(u[j + 1] < u[j])) {
      os << "strict decay violated between x = " << grid.x(j) << " and " << grid.x(j + 1);
      return os.str();
    }
  }
  return {};
}

StandingWave solve(double lambda, RealField guess, const NonlinearityModel& model, const Grid& grid,
                   const NewtonConfig& cfg, double lambda_inf) {
  if (!(lambda > 0.0 && lambda < lambda_inf)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " outside (0, lambda_inf = " << lambda_inf
       << "): no positive solution exists there";
    throw DomainError(os.str());
  }
  if (guess.size() != grid.N()) throw DomainError("initial guess does not match the grid");
  symmetrize(guess);
  if (std::any_of(guess.begin(), guess.end(), [](double v) { return !(v > 0.0); }))
    throw DomainError("initial guess must be positive");

  RealField u = std::move(guess);
  RealField r = residual(lambda, u, model, grid);
  double rn = inf_norm(r);
  int it = 0;
  for (; it < cfg.max_iters && !(rn < cfg.tol); ++it) {
    const Tridiagonal J = jacobian(lambda, u, model, grid);
    for (auto& v : r) v = -v;
    RealField du;
    try {
      du = solve(J, r);
    } catch (const SingularSystem& e) {
      throw ConvergenceError(std::string("Newton: singular Jacobian: ") + e.what(), rn, it);
    }
    double t = 1.0;
    bool accepted = false;
    RealField trial(u.size());
    for (int k = 0; k <= cfg.max_halvings; ++k, t *= cfg.backtrack) {
      for (std::size_t j = 0; j < u.size(); ++j) trial[j] = u[j] + t * du[j];
      symmetrize(trial);
      RealField rt = residual(lambda, trial, model, grid);
      const double rtn = inf_norm(rt);
      if (rtn < rn) {
        u.swap(trial);
        r = std::move(rt);
        rn = rtn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      std::ostringstream os;
      os << "Newton line search stalled at lambda = " << lambda << " with ||F||_inf = " << rn;
      throw ConvergenceError(os.str(), rn, it);
    }
  }
  if (!(rn < cfg.tol)) {
    std::ostringstream os;
    os << "Newton did not converge at lambda = " << lambda << " after " << it << " iterations (||F||_inf = " << rn
       << ")";
    throw ConvergenceError(os.str(), rn, it);
  }

  StandingWave w;
  w.lambda = lambda;
  w.u = std::move(u);
  w.residual_inf = rn;
  w.iterations = it;
  w.decay_ratio = decay_ratio(w.u, grid);
  RealField sq(w.u.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = w.u[j] * w.u[j];
  w.mass = integrate(sq, grid);
  if (auto msg = shape_violation(w, grid); !msg.empty()) throw ShapeViolation("solution at lambda = " +
                                                                               std::to_string(lambda) + ": " + msg);
  return w;
}

double radius_below(const NonlinearityModel& model, double eps, double r_max) {
  const int n = 100000;
  double r = 0.0;
  for (int i = n; i >= 0; --i) {
    const double x = r_max * i / n;
    if (model.finf(x) > eps) {
      r = r_max * (i + 1) / n;
      break;
    }
  }
  return r;
}

}  // namespace satnls
