#include "satnls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "satnls/kernels.hpp"

namespace satnls {

StabilityOperators assemble(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid) {
  const std::size_t N = grid.N(), n = N - 2;
  RealField pot1(N), pot2(N);
  kernels::parallel::linearized_potentials(model, grid.nodes(), wave.u, pot1, pot2);
  const double ih2 = 1.0 / (grid.h() * grid.h());

  StabilityOperators ops;
  ops.lambda = wave.lambda;
  ops.essential_threshold = wave.lambda;
  ops.L1_diag.resize(n);
  ops.L2_diag.resize(n);
  ops.off.assign(n - 1, -ih2);
  double pmax = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    ops.L1_diag[j] = 2.0 * ih2 - pot1[j + 1] + wave.lambda;
    ops.L2_diag[j] = 2.0 * ih2 - pot2[j + 1] + wave.lambda;
    pmax = std::max({pmax, std::abs(pot1[j + 1]), std::abs(pot2[j + 1])});
  }
  ops.kernel_tol = grid.h() * grid.h() * pmax;
  return ops;
}

S1Report check_S1(const StabilityOperators& ops) {
  const auto rep = tridiag_spectrum(ops.L1_diag, ops.off, ops.essential_threshold, ops.kernel_tol);
  S1Report r;
  r.eigenvalues = rep.eigenvalues;
  r.morse = rep.morse_index;
  r.kernel_candidates = rep.kernel_candidates.size();
  r.lowest = rep.eigenvalues.empty() ? std::numeric_limits<double>::quiet_NaN() : rep.eigenvalues[0];
  r.second = rep.eigenvalues.size() > 1 ? rep.eigenvalues[1] : std::numeric_limits<double>::quiet_NaN();
  r.pass = r.morse == 1 && r.kernel_candidates == 0;
  if (!r.pass) {
    std::ostringstream os;
    os << "S1 violated at lambda = " << ops.lambda << ": Morse index " << r.morse << ", " << r.kernel_candidates
       << " eigenvalue(s) within " << ops.kernel_tol << " of zero";
    r.message = os.str();
  }
  return r;
}

S2Report check_S2(const StabilityOperators& ops, const StandingWave& wave) {
  const auto rep = tridiag_spectrum(ops.L2_diag, ops.off, ops.essential_threshold, ops.kernel_tol);
  S2Report r;
  r.eigenvalues = rep.eigenvalues;
  r.kernel_candidates = rep.kernel_candidates.size();
  if (rep.eigenvalues.empty()) {
    r.mu0 = std::numeric_limits<double>::quiet_NaN();
    r.message = "S2 violated at lambda = " + std::to_string(ops.lambda) + ": no eigenvalue below the threshold";
    return r;
  }
  r.mu0 = rep.eigenvalues[0];
  const auto& v = rep.eigenvectors[0];
  const std::size_t n = v.size();
  std::span<const double> u(wave.u.data() + 1, n);
  const double uu = std::sqrt(std::inner_product(u.begin(), u.end(), u.begin(), 0.0));
  const double vu = std::inner_product(v.begin(), v.end(), u.begin(), 0.0);
  r.overlap = std::abs(vu) / uu;
  const double sg = vu < 0.0 ? -1.0 : 1.0;
  double d2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = sg * v[j] - u[j] / uu;
    d2 += d * d;
  }
  r.l2_distance = std::sqrt(d2);

  std::ostringstream os;
  if (!(std::abs(r.mu0) < ops.kernel_tol)) {
    os << "S2 violated at lambda = " << ops.lambda << ": mu0 = " << r.mu0 << " outside +-" << ops.kernel_tol;
  } else if (!(r.overlap > 1.0 - 1e-6)) {
    os << "S2 eigenvector does not match u at lambda = " << ops.lambda << " (overlap " << r.overlap << ")";
  } else if (r.kernel_candidates != 1) {
    os << "S2 violated at lambda = " << ops.lambda << ": " << r.kernel_candidates << " kernel candidates";
  }
  r.message = os.str();
  r.pass = r.message.empty();
  return r;
}

SpectralPoint spectral_check(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid) {
  const auto ops = assemble(wave, model, grid);
  return {wave.lambda, check_S1(ops), check_S2(ops, wave)};
}

namespace {

nlohmann::ordered_json num(double v) {
  return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string to_json(const SpectralPoint& p) {
  nlohmann::ordered_json j;
  j["lambda"] = p.lambda;
  j["L1"] = {{"morse", p.s1.morse}, {"lowest", num(p.s1.lowest)}, {"second", num(p.s1.second)}};
  j["L2"] = {{"mu0", num(p.s2.mu0)}, {"overlap", p.s2.overlap}};
  j["pass_S1"] = p.s1.pass;
  j["pass_S2"] = p.s2.pass;
  return j.dump();
}

}  // namespace satnls
