#include "satnls/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <sstream>

#include "satnls/error.hpp"

namespace satnls {

namespace {

double rel(double a, double b) {
  const double d = std::max(std::abs(a), std::abs(b));
  return d > 0.0 ? std::abs(a - b) / d : 0.0;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

IdentityResiduals wave_identities(const StandingWave& wave, const NonlinearityModel& m, const Grid& grid) {
  const auto& u = wave.u;
  const std::size_t n = u.size();
  const RealField du = first_derivative(u, grid);
  RealField g2(n), g4(n), uu(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j), s = u[j] * u[j];
    const double fs = m.f(x, s);
    uu[j] = s;
    g2[j] = fs * s - du[j] * du[j];
    g4[j] = fs * s + m.Fanti(x, s) + x * m.dx_Fanti(x, s);
  }
  const double mass_half = half_line_integral(uu, grid);
  IdentityResiduals r;
  r.intid2 = rel(half_line_integral(g2, grid), wave.lambda * mass_half);
  r.intid4 = rel(half_line_integral(g4, grid), 2.0 * wave.lambda * mass_half);
  return r;
}

RealField solve_xi(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid) {
  const Tridiagonal J = jacobian(wave.lambda, wave.u, model, grid);
  RealField rhs = lambda_derivative(wave.lambda, wave.u, grid);
  for (auto& v : rhs) v = -v;
  RealField xi;
  try {
    xi = solve(J, rhs);
  } catch (const SingularSystem& e) {
    throw SingularSystem(std::string("non-degeneracy violated at lambda = ") + std::to_string(wave.lambda) + ": " +
                         e.what());
  }
  const std::size_t n = xi.size();
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double a = 0.5 * (xi[j] + xi[n - 1 - j]);
    xi[j] = a;
    xi[n - 1 - j] = a;
  }
  return xi;
}

IdentityResiduals check_identities(const StandingWave& wave, std::span<const double> xi,
                                   const NonlinearityModel& m, const Grid& grid) {
  IdentityResiduals r = wave_identities(wave, m, grid);
  const auto& u = wave.u;
  const std::size_t n = u.size();
  RealField uu(n), a1(n), ai(n), uxi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j), s = u[j] * u[j];
    const double d2 = m.d2f(x, s);
    uu[j] = s;
    a1[j] = d2 * s * u[j] * xi[j];
    ai[j] = (2.0 * m.f(x, s) + x * m.d1f(x, s) - d2 * s) * u[j] * xi[j];
    uxi[j] = u[j] * xi[j];
  }
  r.intid1 = rel(half_line_integral(uu, grid), 2.0 * half_line_integral(a1, grid));
  r.intid = rel(half_line_integral(ai, grid), 2.0 * wave.lambda * half_line_integral(uxi, grid));
  return r;
}

XiSignStructure xi_sign_structure(const StandingWave& wave, std::span<const double> xi, const Grid& grid) {
  // work with r = xi/u: u > 0 fixes the sign, and r stays O(1) in the tail
  // where xi and u are both tiny
  XiSignStructure out;
  const std::size_t c = grid.center(), n = xi.size();
  out.xi0 = xi[c];
  RealField r(n);
  double rmax = 0.0;
  for (std::size_t j = c; j < n; ++j) {
    r[j] = xi[j] / wave.u[j];
    rmax = std::max(rmax, std::abs(r[j]));
  }
  const double floor = 1e-10 * rmax;
  int last_sign = 0;
  std::size_t last_j = c;
  for (std::size_t j = c; j < n; ++j) {
    if (std::abs(r[j]) <= floor) continue;
    const int sg = r[j] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sg != last_sign && ++out.sign_changes == 1) {
      const double xa = grid.x(last_j), xb = grid.x(j);
      out.x0 = xa + (xb - xa) * r[last_j] / (r[last_j] - r[j]);
    }
    last_sign = sg;
    last_j = j;
  }
  if (last_sign > 0 && ++out.sign_changes == 1) {
    out.x0 = grid.R() + 2.0 * std::sqrt(wave.lambda) * r[n - 1];
    out.exterior = true;
  }
  return out;
}

double slope(const CurvePoint& point) { return point.slope_xi; }

double zeta_contradiction_quantity(const StandingWave& wave, std::span<const double> xi, double x0,
                                   const NonlinearityModel& m, const Grid& grid) {
  const auto& u = wave.u;
  const std::size_t n = u.size(), c = grid.center();
  // u at x0: linear interpolation, or the closure tail beyond R
  double u0;
  if (x0 >= grid.R()) {
    u0 = u.back() * std::exp(-std::sqrt(wave.lambda) * (x0 - grid.R()));
  } else {
    const double pos = x0 / grid.h();
    const auto k = static_cast<std::size_t>(std::floor(pos));
    const double t = pos - static_cast<double>(k);
    u0 = (1.0 - t) * u[c + k] + t * u[std::min(c + k + 1, n - 1)];
  }
  const double s0 = u0 * u0;
  const double zeta0 = (2.0 * m.f(x0, s0) + x0 * m.d1f(x0, s0)) / (m.d2f(x0, s0) * s0) - 1.0;

  RealField g(n, 0.0), uu(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = grid.x(j), s = u[j] * u[j];
    uu[j] = s;
    const double d2 = m.d2f(x, s);
    if (s == 0.0 || !(d2 > 0.0)) continue;
    const double z = (2.0 * m.f(x, s) + x * m.d1f(x, s)) / (d2 * s) - 1.0;
    g[j] = (z - zeta0) * d2 * s * u[j] * xi[j];
  }
  return half_line_integral(g, grid) + 0.5 * zeta0 * half_line_integral(uu, grid);
}

namespace {

RealField tangent_predictor(const StandingWave& w, std::span<const double> xi, double dl) {
  // u exp(dl xi/u): first order equal to u + dl xi, stays positive and is
  // exact on the exponential tail
  RealField p(w.u.size());
  for (std::size_t j = 0; j < p.size(); ++j) p[j] = w.u[j] * std::exp(dl * xi[j] / w.u[j]);
  return p;
}

double l2(std::span<const double> v, const Grid& grid) {
  RealField sq(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) sq[j] = v[j] * v[j];
  return std::sqrt(integrate(sq, grid));
}

}  // namespace

CurvePoint make_point(StandingWave wave, const NonlinearityModel& m, const Grid& grid, const StepConfig& cfg,
                      double lambda_inf) {
  CurvePoint p;
  p.xi = solve_xi(wave, m, grid);
  const std::size_t n = wave.u.size();
  RealField uxi(n);
  for (std::size_t j = 0; j < n; ++j) uxi[j] = wave.u[j] * p.xi[j];
  p.slope_xi = 2.0 * integrate(uxi, grid);
  p.sup_u = max_abs(wave.u);

  const double d = cfg.fd_delta;
  const StandingWave plus = solve(wave.lambda + d, tangent_predictor(wave, p.xi, d), m, grid, cfg.newton, lambda_inf);
  const StandingWave minus =
      solve(wave.lambda - d, tangent_predictor(wave, p.xi, -d), m, grid, cfg.newton, lambda_inf);
  p.slope_direct = (plus.mass - minus.mass) / (2.0 * d);
  RealField diff(n);
  for (std::size_t j = 0; j < n; ++j) diff[j] = p.xi[j] - (plus.u[j] - minus.u[j]) / (2.0 * d);
  p.xi_fd_error = l2(diff, grid) / l2(p.xi, grid);

  p.identities = check_identities(wave, p.xi, m, grid);
  p.sign = xi_sign_structure(wave, p.xi, grid);
  p.zeta_check = p.sign.sign_changes > 0 ? zeta_contradiction_quantity(wave, p.xi, p.sign.x0, m, grid)
                                         : std::numeric_limits<double>::quiet_NaN();
  p.wave = std::move(wave);
  return p;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::WindowEdge:
      return "window_edge";
    case Termination::NewtonFailure:
      return "newton_failure";
    case Termination::AmplitudeCap:
      return "amplitude_cap";
  }
  return "unknown";
}

namespace {

// Marches from `w` to `target`; returns false if the step underflows.
bool march(StandingWave& w, double target, double& step, const NonlinearityModel& m, const Grid& grid,
           const StepConfig& cfg, double lambda_inf, std::string& why) {
  const double dir = target > w.lambda ? 1.0 : -1.0;
  while (w.lambda != target) {
    const RealField xi = solve_xi(w, m, grid);
    const double remaining = std::abs(target - w.lambda);
    const double dl = std::min(step, remaining);
    const double next = dl == remaining ? target : w.lambda + dir * dl;
    try {
      StandingWave s = solve(next, tangent_predictor(w, xi, next - w.lambda), m, grid, cfg.newton, lambda_inf);
      if (s.iterations <= cfg.easy_iters) step *= cfg.grow;
      w = std::move(s);
    } catch (const Error& e) {
      step *= 0.5;
      if (step < cfg.min_step) {
        why = e.what();
        return false;
      }
    }
  }
  return true;
}

}  // namespace

StandingWave continue_to(const StandingWave& start, double target, const NonlinearityModel& m, const Grid& grid,
                         const StepConfig& cfg, double lambda_inf) {
  StandingWave w = start;
  double step = std::max(std::abs(target - start.lambda) / 8.0, cfg.min_step);
  std::string why;
  if (!march(w, target, step, m, grid, cfg, lambda_inf, why))
    throw ConvergenceError("continuation to lambda = " + std::to_string(target) + " failed: " + why,
                           w.residual_inf, 0);
  return w;
}

SolutionCurve trace(const NonlinearityModel& m, const Grid& grid, double lambda_inf, LambdaWindow window,
                    const StepConfig& cfg) {
  if (!(window.lo > 0.0 && window.lo < window.hi && window.hi < lambda_inf))
    throw DomainError("trace: lambda window must satisfy 0 < lo < hi < lambda_inf");
  if (cfg.points < 2) throw DomainError("trace: need at least two points");
  const double alpha = m.prototype ? m.prototype->alpha : 1.0;

  SolutionCurve curve;
  curve.lambda_inf = lambda_inf;
  StandingWave w;
  try {
    w = solve(window.lo, initial_guess(window.lo, alpha, grid), m, grid, cfg.newton, lambda_inf);
  } catch (const ConvergenceError& e) {
    std::ostringstream os;
    os << "seeding failed at lambda = " << window.lo << " from the sech guess (alpha = " << alpha
       << ", amplitude = " << initial_guess(window.lo, alpha, grid)[grid.center()] << "): " << e.what();
    throw ConvergenceError(os.str(), e.last_residual(), e.iterations());
  }

  const double spacing = (window.hi - window.lo) / (cfg.points - 1);
  double step = spacing;
  for (int i = 0; i < cfg.points; ++i) {
    const double target = i + 1 == cfg.points ? window.hi : window.lo + i * spacing;
    if (i > 0) {
      std::string why;
      if (!march(w, target, step, m, grid, cfg, lambda_inf, why)) {
        curve.termination = Termination::NewtonFailure;
        curve.message = "step underflow before lambda = " + std::to_string(target) + ": " + why;
        return curve;
      }
    }
    if (max_abs(w.u) > cfg.amplitude_cap) {
      curve.termination = Termination::AmplitudeCap;
      curve.message = "sup u exceeded the amplitude cap at lambda = " + std::to_string(w.lambda);
      return curve;
    }
    try {
      curve.points.push_back(make_point(w, m, grid, cfg, lambda_inf));
    } catch (const Error& e) {
      curve.termination = Termination::NewtonFailure;
      curve.message = std::string("point diagnostics failed at lambda = ") + std::to_string(w.lambda) + ": " +
                      e.what();
      return curve;
    }
  }
  curve.termination = Termination::WindowEdge;
  return curve;
}

void write_curve_csv(const std::string& path, const SolutionCurve& curve, const std::string& header_comment) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!fp) throw Error("cannot open " + path + " for writing");
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  std::fprintf(fp.get(),
               "lambda,mass,slope_xi,slope_direct,sup_u,decay_ratio,intid_res1,intid_res2,intid_res4,x0,"
               "intid_res,xi0,xi_sign_changes,xi_fd_rel_err,zeta_check,residual_inf,x0_exterior\n");
  for (const auto& p : curve.points) {
    std::fprintf(fp.get(), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d\n",
                 p.wave.lambda, p.wave.mass, p.slope_xi, p.slope_direct, p.sup_u, p.wave.decay_ratio,
                 p.identities.intid1, p.identities.intid2, p.identities.intid4, p.sign.x0, p.identities.intid,
                 p.sign.xi0, p.sign.sign_changes, p.xi_fd_error, p.zeta_check, p.wave.residual_inf,
                 p.sign.exterior ? 1 : 0);
  }
}

}  // namespace satnls
