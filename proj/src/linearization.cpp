#include "satnls/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <lapacke.h>

#include "satnls/error.hpp"

namespace satnls {

RealField Tridiagonal::apply(std::span<const double> v) const {
  const std::size_t n = size();
  RealField out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = diag[j] * v[j];
    if (j > 0) s += lower[j - 1] * v[j - 1];
    if (j + 1 < n) s += upper[j] * v[j + 1];
    out[j] = s;
  }
  return out;
}

Tridiagonal Tridiagonal::transposed() const {
  Tridiagonal t = *this;
  std::swap(t.lower, t.upper);
  return t;
}

RealField solve(const Tridiagonal& A, std::span<const double> rhs) {
  const auto n = static_cast<lapack_int>(A.size());
  RealField dl = A.lower, d = A.diag, du = A.upper;
  RealField b(rhs.begin(), rhs.end());
  const lapack_int info = LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), d.data(), du.data(), b.data(), n);
  if (info != 0) {
    throw SingularSystem("tridiagonal solve failed (dgtsv info = " + std::to_string(info) + ", n = " +
                         std::to_string(n) + ")");
  }
  return b;
}

namespace {

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

double smallest_singular_value(const Tridiagonal& A, int max_iters, double rel_tol) {
  const auto n = static_cast<lapack_int>(A.size());
  RealField dl = A.lower, d = A.diag, du = A.upper, du2(A.size() > 2 ? A.size() - 2 : 1);
  std::vector<lapack_int> ipiv(A.size());
  if (LAPACKE_dgttrf(n, dl.data(), d.data(), du.data(), du2.data(), ipiv.data()) != 0)
    return 0.0;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  RealField x(A.size());
  for (auto& v : x) v = dist(rng);
  double nx = norm2(x);
  for (auto& v : x) v /= nx;

  double est = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    // x <- A^{-1} A^{-T} x
    LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'T', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(),
                   x.data(), n);
    LAPACKE_dgttrs(LAPACK_COL_MAJOR, 'N', n, 1, dl.data(), d.data(), du.data(), du2.data(), ipiv.data(),
                   x.data(), n);
    nx = norm2(x);
    for (auto& v : x) v /= nx;
    const double next = 1.0 / std::sqrt(nx);
    if (it > 0 && std::abs(next - est) <= rel_tol * next) return next;
    est = next;
  }
  return est;
}

double default_kernel_tol(std::span<const double> diag, std::span<const double> off) {
  double nrm = 0.0;
  for (std::size_t j = 0; j < diag.size(); ++j) {
    double row = std::abs(diag[j]);
    if (j > 0) row += std::abs(off[j - 1]);
    if (j < off.size()) row += std::abs(off[j]);
    nrm = std::max(nrm, row);
  }
  return 1e-6 * nrm;
}

namespace {

double pivot_floor(std::span<const double> off) {
  double emax = 1.0;
  for (double e : off) emax = std::max(emax, e * e);
  return std::numeric_limits<double>::min() * emax;
}

std::size_t sturm_count_impl(std::span<const double> diag, std::span<const double> off, double sigma,
                             double pivmin) {
  std::size_t count = 0;
  double q = diag[0] - sigma;
  if (std::abs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t j = 1; j < diag.size(); ++j) {
    q = diag[j] - sigma - off[j - 1] * off[j - 1] / q;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

std::size_t sturm_count(std::span<const double> diag, std::span<const double> off, double sigma) {
  return sturm_count_impl(diag, off, sigma, pivot_floor(off));
}

SpectrumReport tridiag_spectrum(std::span<const double> diag, std::span<const double> off, double threshold,
                                std::optional<double> kernel_tol) {
  const std::size_t n = diag.size();
  if (n == 0 || off.size() + 1 != n) throw DomainError("tridiag_spectrum: inconsistent band sizes");

  SpectrumReport rep;
  rep.essential_threshold = threshold;
  rep.kernel_tol = kernel_tol.value_or(default_kernel_tol(diag, off));

  const double pivmin = pivot_floor(off);
  double glo = std::numeric_limits<double>::infinity();
  double ghi = -glo;
  for (std::size_t j = 0; j < n; ++j) {
    double r = 0.0;
    if (j > 0) r += std::abs(off[j - 1]);
    if (j + 1 < n) r += std::abs(off[j]);
    glo = std::min(glo, diag[j] - r);
    ghi = std::max(ghi, diag[j] + r);
  }
  const double scale = std::max(std::abs(glo), std::abs(ghi));
  const double top = std::min(threshold, ghi + 1.0);
  const std::size_t k = sturm_count_impl(diag, off, top, pivmin);

  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < k; ++i) {
    double lo = glo - eps * scale - pivmin, hi = top;
    for (int it = 0; it < 256; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (hi - lo <= 2.0 * eps * std::max(std::abs(lo), std::abs(hi)) + 4.0 * pivmin) break;
      ++rep.bisection_steps;
      if (sturm_count_impl(diag, off, mid, pivmin) > i)
        hi = mid;
      else
        lo = mid;
    }
    rep.eigenvalues.push_back(0.5 * (lo + hi));
  }

  // inverse iteration
  Tridiagonal shifted(n);
  std::copy(off.begin(), off.end(), shifted.lower.begin());
  std::copy(off.begin(), off.end(), shifted.upper.begin());
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t i = 0; i < k; ++i) {
    const double mu = rep.eigenvalues[i];
    std::vector<double> shifts;
    RealField v(n);
    for (auto& c : v) c = dist(rng);
    double res = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 4 && !(res < 1e-8); ++attempt) {
      // nudge the shift off the exact eigenvalue so the LU stays finite
      const double sigma = mu + (attempt + 1) * 8.0 * eps * scale;
      shifts.push_back(sigma);
      for (std::size_t j = 0; j < n; ++j) shifted.diag[j] = diag[j] - sigma;
      for (int it = 0; it < 6; ++it) {
        try {
          v = solve(shifted, v);
        } catch (const SingularSystem&) {
          break;
        }
        for (std::size_t p = 0; p < i; ++p) {
          const auto& w = rep.eigenvectors[p];
          const double c = std::inner_product(v.begin(), v.end(), w.begin(), 0.0);
          for (std::size_t j = 0; j < n; ++j) v[j] -= c * w[j];
        }
        const double nv = norm2(v);
        for (auto& c : v) c /= nv;
      }
      RealField Av(n);
      for (std::size_t j = 0; j < n; ++j) {
        double s = diag[j] * v[j] - mu * v[j];
        if (j > 0) s += off[j - 1] * v[j - 1];
        if (j + 1 < n) s += off[j] * v[j + 1];
        Av[j] = s;
      }
      res = norm2(Av);
    }
    if (!(res < 1e-8)) {
      std::ostringstream os;
      os << "inverse iteration did not converge for eigenvalue " << i << " (n = " << n << ", mu = " << mu
         << ", residual = " << res << ", shifts:";
      for (double s : shifts) os << ' ' << s;
      os << ')';
      throw ConvergenceError(os.str(), res, static_cast<int>(shifts.size()));
    }
    rep.eigenvectors.push_back(std::move(v));
    rep.residuals.push_back(res);
  }

  for (std::size_t i = 0; i < k; ++i) {
    const double mu = rep.eigenvalues[i];
    if (mu < -rep.kernel_tol) ++rep.morse_index;
    if (std::abs(mu) < rep.kernel_tol) rep.kernel_candidates.push_back(i);
  }
  return rep;
}

PrincipalEigenpair principal_eigenpair(const std::function<double(double)>& finf, const Grid& grid) {
  const std::size_t N = grid.N();
  const std::size_t n = N - 2;  // unknowns strictly inside the walls
  const double ih2 = 1.0 / (grid.h() * grid.h());
  RealField diag(n), off(n - 1, -ih2);
  for (std::size_t j = 0; j < n; ++j) diag[j] = 2.0 * ih2 - finf(grid.x(j + 1));

  // -u'' - finf u = mu u; lambda = -mu
  auto rep = tridiag_spectrum(diag, off, 0.0);
  if (rep.eigenvalues.empty()) {
    throw DomainError("(A7) fails at this discretization: u'' + finf u = lambda u has no positive eigenvalue");
  }
  PrincipalEigenpair out;
  out.lambda_inf = -rep.eigenvalues.front();
  out.phi.assign(N, 0.0);
  const auto& v = rep.eigenvectors.front();
  const double sign = v[n / 2] < 0.0 ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) out.phi[j + 1] = sign * v[j];
  RealField sq(N);
  for (std::size_t j = 0; j < N; ++j) sq[j] = out.phi[j] * out.phi[j];
  const double nrm = std::sqrt(integrate(sq, grid));
  for (auto& c : out.phi) c /= nrm;
  return out;
}

PrincipalEigenpair principal_eigenpair(const NonlinearityModel& model, const Grid& grid) {
  return principal_eigenpair(model.finf, grid);
}

LambdaInfEstimate lambda_inf_estimate(const std::function<double(double)>& finf, const Grid& grid) {
  LambdaInfEstimate e;
  e.coarse = principal_eigenpair(finf, grid).lambda_inf;
  e.fine = principal_eigenpair(finf, grid.refined()).lambda_inf;
  e.extrapolated = (4.0 * e.fine - e.coarse) / 3.0;
  return e;
}

LambdaInfEstimate lambda_inf_estimate(const NonlinearityModel& model, const Grid& grid) {
  return lambda_inf_estimate(model.finf, grid);
}

}  // namespace satnls
