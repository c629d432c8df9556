#include "satnls/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "satnls/error.hpp"

namespace satnls {

Grid::Grid(double R, std::size_t N) : R_(R), N_(N) {
  if (!(R > 0.0)) throw DomainError("grid radius must be positive");
  if (N < 3 || N % 2 == 0) throw DomainError("grid needs an odd number of nodes N >= 3");
  h_ = 2.0 * R / static_cast<double>(N - 1);
  x_.resize(N);
  const auto c = static_cast<std::ptrdiff_t>(center());
  for (std::size_t j = 0; j < N; ++j) x_[j] = static_cast<double>(static_cast<std::ptrdiff_t>(j) - c) * h_;
  x_.front() = -R;
  x_.back() = R;
}

Grid Grid::with_spacing(double R, double h) {
  const double cells = 2.0 * R / h;
  const auto n = static_cast<std::size_t>(std::llround(cells));
  if (std::abs(cells - static_cast<double>(n)) > 1e-9 * cells)
    throw DomainError("grid spacing must divide 2R");
  return Grid(R, n + 1);
}

RealField second_derivative(std::span<const double> u, const Grid& grid) {
  const std::size_t n = u.size();
  const double ih2 = 1.0 / (grid.h() * grid.h());
  RealField out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? u[j - 1] : 0.0;
    const double right = j + 1 < n ? u[j + 1] : 0.0;
    out[j] = (left - 2.0 * u[j] + right) * ih2;
  }
  return out;
}

RealField first_derivative(std::span<const double> u, const Grid& grid) {
  const std::size_t n = u.size();
  const double h = grid.h();
  RealField d(n, 0.0);
  if (n < 5) {
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (u[j + 1] - u[j - 1]) / (2.0 * h);
    d[0] = (u[1] - u[0]) / h;
    d[n - 1] = (u[n - 1] - u[n - 2]) / h;
    return d;
  }
  for (std::size_t j = 2; j + 2 < n; ++j)
    d[j] = (-u[j + 2] + 8.0 * u[j + 1] - 8.0 * u[j - 1] + u[j - 2]) / (12.0 * h);
  d[1] = (u[2] - u[0]) / (2.0 * h);
  d[n - 2] = (u[n - 1] - u[n - 3]) / (2.0 * h);
  d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
  d[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  return d;
}

double integrate(std::span<const double> g, const Grid& grid) {
  if (g.empty()) return 0.0;
  double s = 0.5 * (g.front() + g.back());
  for (std::size_t j = 1; j + 1 < g.size(); ++j) s += g[j];
  return s * grid.h();
}

double half_line_integral(std::span<const double> g, const Grid& grid) {
  return integrate(g.subspan(grid.center()), grid);
}

Norms norms(std::span<const double> u, const Grid& grid) {
  Norms n;
  RealField sq(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    sq[j] = u[j] * u[j];
    n.Linf = std::max(n.Linf, std::abs(u[j]));
  }
  const double l2sq = integrate(sq, grid);
  const RealField du = first_derivative(u, grid);
  for (std::size_t j = 0; j < u.size(); ++j) sq[j] = du[j] * du[j];
  n.L2 = std::sqrt(l2sq);
  n.H1 = std::sqrt(l2sq + integrate(sq, grid));
  return n;
}

namespace {

void split(std::span<const std::complex<double>> psi, RealField& re, RealField& im) {
  re.resize(psi.size());
  im.resize(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) {
    re[j] = psi[j].real();
    im[j] = psi[j].imag();
  }
}

}  // namespace

Norms norms(std::span<const std::complex<double>> psi, const Grid& grid) {
  RealField re, im;
  split(psi, re, im);
  const Norms a = norms(re, grid), b = norms(im, grid);
  Norms n;
  n.L2 = std::hypot(a.L2, b.L2);
  n.H1 = std::hypot(a.H1, b.H1);
  for (const auto& z : psi) n.Linf = std::max(n.Linf, std::abs(z));
  return n;
}

std::complex<double> h1_inner(std::span<const std::complex<double>> a,
                              std::span<const std::complex<double>> b, const Grid& grid) {
  RealField ar, ai, br, bi;
  split(a, ar, ai);
  split(b, br, bi);
  const RealField dar = first_derivative(ar, grid), dai = first_derivative(ai, grid);
  const RealField dbr = first_derivative(br, grid), dbi = first_derivative(bi, grid);
  RealField re(a.size()), im(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    // a conj(b) = (ar + i ai)(br - i bi)
    re[j] = ar[j] * br[j] + ai[j] * bi[j] + dar[j] * dbr[j] + dai[j] * dbi[j];
    im[j] = ai[j] * br[j] - ar[j] * bi[j] + dai[j] * dbr[j] - dar[j] * dbi[j];
  }
  return {integrate(re, grid), integrate(im, grid)};
}

namespace {

std::unique_ptr<std::FILE, int (*)(std::FILE*)> open_out(const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!fp) throw Error("cannot open " + path + " for writing");
  return fp;
}

}  // namespace

void write_csv(const std::string& path, std::span<const double> u, const Grid& grid,
               const std::string& header_comment) {
  auto fp = open_out(path);
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  std::fprintf(fp.get(), "x,value\n");
  for (std::size_t j = 0; j < u.size(); ++j) std::fprintf(fp.get(), "%.17g,%.17g\n", grid.x(j), u[j]);
}

void write_csv(const std::string& path, std::span<const std::complex<double>> psi, const Grid& grid,
               const std::string& header_comment) {
  auto fp = open_out(path);
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  std::fprintf(fp.get(), "x,re,im\n");
  for (std::size_t j = 0; j < psi.size(); ++j)
    std::fprintf(fp.get(), "%.17g,%.17g,%.17g\n", grid.x(j), psi[j].real(), psi[j].imag());
}

}  // namespace satnls
