#pragma once

#include <string>
#include <vector>

#include "satnls/stationary.hpp"

namespace satnls {

/// Relative residuals |lhs - rhs| / max(|lhs|, |rhs|) of the half-line
/// integral identities satisfied by u(lambda) and xi = du/dlambda:
///   intid1: int u^2 = 2 int d2f u^3 xi
///   intid : int [2f + x d1f - d2f u^2] u xi = 2 lambda int u xi
///   intid2: int f u^2 - u'^2 = lambda int u^2
///   intid4: int f u^2 + int_0^{u^2} (f + x d1f) ds = 2 lambda int u^2
struct IdentityResiduals {
  double intid1 = 0.0;
  double intid = 0.0;
  double intid2 = 0.0;
  double intid4 = 0.0;
};

/// Only the identities that need u alone (intid2, intid4).
IdentityResiduals wave_identities(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid);

/// Solves D_2F(lambda,u) xi = -dF/dlambda, i.e. xi = du/dlambda.
/// Throws SingularSystem (non-degeneracy violated at this discretization).
RealField solve_xi(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid);

IdentityResiduals check_identities(const StandingWave& wave, std::span<const double> xi,
                                   const NonlinearityModel& model, const Grid& grid);

struct XiSignStructure {
  double xi0 = 0.0;       // xi(0)
  int sign_changes = 0;   // on (0, infinity), ignoring |xi| below the noise floor
  double x0 = 0.0;        // first sign change, linear interpolation
  bool exterior = false;  // x0 lies beyond R, on the closure tail
};

/// Sign changes of xi on x > 0. Beyond R the closure continues the wave as
/// u(R) e^{-sqrt(lambda)(x-R)}, so xi/u = xi(R)/u(R) - (x-R)/(2 sqrt(lambda))
/// there; a positive xi(R) therefore changes sign once more, at
/// x = R + 2 sqrt(lambda) xi(R)/u(R).
XiSignStructure xi_sign_structure(const StandingWave& wave, std::span<const double> xi, const Grid& grid);

struct CurvePoint {
  StandingWave wave;
  RealField xi;
  double slope_xi = 0.0;      // 2 int_R u xi
  double slope_direct = 0.0;  // centered difference of the mass in lambda
  double xi_fd_error = 0.0;   // relative L2 gap between xi and (u(l+d)-u(l-d))/2d
  double sup_u = 0.0;
  IdentityResiduals identities;
  XiSignStructure sign;
  double zeta_check = 0.0;  // int [zeta(x)-zeta(x0)] d2f u^3 xi + zeta(x0)/2 int u^2
};

/// d/dlambda of the mass via xi, 2 int_R u xi.
double slope(const CurvePoint& point);

/// The quantity the slope argument shows cannot vanish; positive when the
/// hypotheses hold.
double zeta_contradiction_quantity(const StandingWave& wave, std::span<const double> xi, double x0,
                                   const NonlinearityModel& model, const Grid& grid);

struct StepConfig {
  int points = 60;
  double grow = 1.3;
  double min_step = 1e-7;
  int easy_iters = 4;
  double fd_delta = 1e-4;
  double amplitude_cap = 1e3;
  NewtonConfig newton;
};

/// Fills every derived field of a CurvePoint (two extra solves at
/// lambda +- fd_delta).
CurvePoint make_point(StandingWave wave, const NonlinearityModel& model, const Grid& grid, const StepConfig& cfg,
                      double lambda_inf);

enum class Termination { WindowEdge, NewtonFailure, AmplitudeCap };
std::string to_string(Termination t);

struct SolutionCurve {
  std::vector<CurvePoint> points;
  double lambda_inf = 0.0;
  Termination termination = Termination::WindowEdge;
  std::string message;
};

struct LambdaWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// Natural-parameter continuation over `cfg.points` equally spaced lambda
/// values in the window, with adaptive substeps in between.
///
/// Throws ConvergenceError if the first point cannot be seeded; later
/// failures end the curve early with the termination reason recorded.
SolutionCurve trace(const NonlinearityModel& model, const Grid& grid, double lambda_inf, LambdaWindow window,
                    const StepConfig& cfg);

/// Continues an existing wave to a new lambda with adaptive substeps.
StandingWave continue_to(const StandingWave& start, double target, const NonlinearityModel& model, const Grid& grid,
                         const StepConfig& cfg, double lambda_inf);

void write_curve_csv(const std::string& path, const SolutionCurve& curve, const std::string& header_comment = "");

}  // namespace satnls
