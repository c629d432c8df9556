#pragma once

#include <string>
#include <vector>

#include "satnls/linearization.hpp"
#include "satnls/stationary.hpp"

namespace satnls {

/// L1 = -v'' - (f + 2 d2f u^2) v + lambda v and L2 = -v'' - f v + lambda v,
/// both on the interior nodes with Dirichlet walls at +-R.
struct StabilityOperators {
  RealField L1_diag;
  RealField L2_diag;
  RealField off;  // shared, -1/h^2
  double essential_threshold = 0.0;  // lambda
  double kernel_tol = 0.0;           // h^2 max(||pot1||_inf, ||pot2||_inf)
  double lambda = 0.0;
};

StabilityOperators assemble(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid);

struct S1Report {
  int morse = 0;
  double lowest = 0.0;
  double second = 0.0;  // NaN when nothing else lies below the threshold
  std::vector<double> eigenvalues;
  std::size_t kernel_candidates = 0;
  bool pass = false;
  std::string message;
};

struct S2Report {
  double mu0 = 0.0;
  double overlap = 0.0;      // |<v0, u>| / (|v0| |u|)
  double l2_distance = 0.0;  // between v0 and u/|u|, sign aligned
  std::vector<double> eigenvalues;
  std::size_t kernel_candidates = 0;
  bool pass = false;
  std::string message;
};

/// Exactly one eigenvalue below -kernel_tol and none within kernel_tol of 0.
S1Report check_S1(const StabilityOperators& ops);

/// Lowest eigenvalue within kernel_tol of 0 with eigenvector along u
/// (overlap above 1 - 1e-6), and no second kernel candidate. The L2 distance
/// is reported but not gated: at small lambda the Dirichlet walls cut the
/// tail of u and the distance sits near 1e-3 while the overlap stays tight.
S2Report check_S2(const StabilityOperators& ops, const StandingWave& wave);

struct SpectralPoint {
  double lambda = 0.0;
  S1Report s1;
  S2Report s2;
};

SpectralPoint spectral_check(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid);

/// {lambda, L1: {morse, lowest, second}, L2: {mu0, overlap}, pass_S1, pass_S2}
std::string to_json(const SpectralPoint& p);

}  // namespace satnls
