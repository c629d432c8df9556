#pragma once

#include <string>
#include <vector>

#include "satnls/curve.hpp"

namespace satnls {

/// Planar TE waveguide in normalized units. c defaults to 1 so omega equals
/// omega_over_c.
struct WaveguideParams {
  double omega_over_c = 1.0;
  double eps_L = 1.0;
  double c = 1.0;
};

struct KWindow {
  double k1 = 0.0;  // (omega/c) sqrt(eps_L)
  double k3 = 0.0;  // sqrt((omega/c)^2 eps_L + lambda_inf)
};

KWindow k_window(const WaveguideParams& params, double lambda_inf);

/// lambda = k^2 - (omega/c)^2 eps_L and its inverse on k > k1.
double lambda_of_k(const WaveguideParams& params, double k);
double k_of_lambda(const WaveguideParams& params, double lambda);

/// Nonlinear dielectric response eps_NL(x, s) = (c/omega)^2 f(x, 2s).
double eps_nl(const NonlinearityModel& model, const WaveguideParams& params, double x, double s);

struct DispersionPoint {
  double k = 0.0;
  double lambda = 0.0;
  double power = 0.0;  // c^2 k / (2 omega) int U_k^2
};

struct DispersionCurve {
  std::vector<DispersionPoint> points;
  KWindow window;
  double lambda_inf = 0.0;
  std::vector<std::string> notes;  // skipped points
};

/// Maps every traced point to (k, lambda, P). Points outside (0, lambda_inf)
/// are skipped with a note.
DispersionCurve dispersion_curve(const SolutionCurve& curve, const WaveguideParams& params);

/// Header line is a JSON object {k1, k3, lambda_inf}, then k,lambda,power.
void write_dispersion_csv(const std::string& path, const DispersionCurve& d, const std::string& header_comment = "");

}  // namespace satnls
