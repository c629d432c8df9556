#include "satnls/waveguide.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

#include <json.hpp>

#include "satnls/error.hpp"

namespace satnls {

namespace {

void check(const WaveguideParams& p) {
  if (!(p.omega_over_c > 0.0 && p.eps_L > 0.0 && p.c > 0.0))
    throw DomainError("waveguide parameters omega/c, eps_L and c must be positive");
}

}  // namespace

KWindow k_window(const WaveguideParams& p, double lambda_inf) {
  check(p);
  if (!(lambda_inf > 0.0)) throw DomainError("k window needs lambda_inf > 0");
  const double w2 = p.omega_over_c * p.omega_over_c * p.eps_L;
  return {p.omega_over_c * std::sqrt(p.eps_L), std::sqrt(w2 + lambda_inf)};
}

double lambda_of_k(const WaveguideParams& p, double k) {
  return k * k - p.omega_over_c * p.omega_over_c * p.eps_L;
}

double k_of_lambda(const WaveguideParams& p, double lambda) {
  return std::sqrt(lambda + p.omega_over_c * p.omega_over_c * p.eps_L);
}

double eps_nl(const NonlinearityModel& model, const WaveguideParams& p, double x, double s) {
  return model.f(x, 2.0 * s) / (p.omega_over_c * p.omega_over_c);
}

DispersionCurve dispersion_curve(const SolutionCurve& curve, const WaveguideParams& p) {
  DispersionCurve d;
  d.lambda_inf = curve.lambda_inf;
  d.window = k_window(p, curve.lambda_inf);
  const double omega = p.omega_over_c * p.c;
  for (const auto& pt : curve.points) {
    const double lambda = pt.wave.lambda;
    if (!(lambda > 0.0 && lambda < curve.lambda_inf)) {
      d.notes.push_back("skipped lambda = " + std::to_string(lambda) + " outside (0, lambda_inf)");
      continue;
    }
    const double k = k_of_lambda(p, lambda);
    d.points.push_back({k, lambda, p.c * p.c * k / (2.0 * omega) * pt.wave.mass});
  }
  return d;
}

void write_dispersion_csv(const std::string& path, const DispersionCurve& d, const std::string& header_comment) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!fp) throw Error("cannot open " + path + " for writing");
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  nlohmann::ordered_json h;
  h["k1"] = d.window.k1;
  h["k3"] = d.window.k3;
  h["lambda_inf"] = d.lambda_inf;
  std::fprintf(fp.get(), "# %s\n", h.dump().c_str());
  std::fprintf(fp.get(), "k,lambda,power\n");
  for (const auto& p : d.points) std::fprintf(fp.get(), "%.17g,%.17g,%.17g\n", p.k, p.lambda, p.power);
}

}  // namespace satnls
