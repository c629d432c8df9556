#include "satnls/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "satnls/error.hpp"
#include "satnls/kernels.hpp"

namespace satnls {

namespace {

// the FFTW planner is not thread safe
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  std::lock_guard lock(planner_mutex());
  buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* b = reinterpret_cast<fftw_complex*>(buf_);
  const int in = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(in, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(in, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void Fft::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Fft::backward() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

RealField wavenumbers(const Grid& grid) {
  const std::size_t n = grid.N();
  const double L = static_cast<double>(n) * grid.h();
  RealField k(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double mm = m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    k[m] = 2.0 * std::numbers::pi * mm / L;
  }
  if (n % 2 == 0) k[n / 2] = 0.0;  // drop the unpaired Nyquist mode
  return k;
}

ComplexField spectral_derivative(std::span<const std::complex<double>> psi, const Grid& grid) {
  const std::size_t n = psi.size();
  Fft fft(n);
  std::copy(psi.begin(), psi.end(), fft.data());
  fft.forward();
  const RealField k = wavenumbers(grid);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) fft.data()[m] *= std::complex<double>(0.0, k[m] * inv);
  fft.backward();
  return ComplexField(fft.data(), fft.data() + n);
}

RealField spectral_second_derivative(std::span<const double> u, const Grid& grid) {
  const std::size_t n = u.size();
  Fft fft(n);
  std::copy(u.begin(), u.end(), fft.data());
  fft.forward();
  const RealField k = wavenumbers(grid);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) fft.data()[m] *= -k[m] * k[m] * inv;
  fft.backward();
  RealField out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = fft.data()[j].real();
  return out;
}

double field_mass(std::span<const std::complex<double>> psi, const Grid& grid) {
  double s = 0.0;
  for (const auto& z : psi) s += std::norm(z);
  return s * grid.h();
}

double field_energy(std::span<const std::complex<double>> psi, const NonlinearityModel& model, const Grid& grid) {
  const ComplexField d = spectral_derivative(psi, grid);
  double s = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) s += std::norm(d[j]) - model.Fanti(grid.x(j), std::norm(psi[j]));
  return s * grid.h();
}

FieldState make_state(ComplexField psi, double t, const NonlinearityModel& model, const Grid& grid) {
  FieldState st;
  st.t = t;
  st.mass = field_mass(psi, grid);
  st.energy = field_energy(psi, model, grid);
  st.psi = std::move(psi);
  return st;
}

SplitStepPropagator::SplitStepPropagator(const NonlinearityModel& model, const Grid& grid, double dt)
    : model_(&model), grid_(&grid), dt_(dt), fft_(grid.N()), multiplier_(grid.N()) {
  if (!(dt > 0.0)) throw DomainError("time step must be positive");
  const RealField k = wavenumbers(grid);
  const double inv = 1.0 / static_cast<double>(grid.N());
  for (std::size_t m = 0; m < k.size(); ++m) multiplier_[m] = std::polar(inv, -dt * k[m] * k[m]);
}

void SplitStepPropagator::kinetic(ComplexField& psi) {
  std::copy(psi.begin(), psi.end(), fft_.data());
  fft_.forward();
  kernels::parallel::multiply({fft_.data(), fft_.size()}, multiplier_);
  fft_.backward();
  std::copy(fft_.data(), fft_.data() + fft_.size(), psi.begin());
}

void SplitStepPropagator::step(ComplexField& psi) {
  kernels::parallel::nonlinear_phase(*model_, grid_->nodes(), 0.5 * dt_, psi);
  kinetic(psi);
  kernels::parallel::nonlinear_phase(*model_, grid_->nodes(), 0.5 * dt_, psi);
}

void SplitStepPropagator::evolve(ComplexField& psi, long steps) {
  if (steps <= 0) return;
  kernels::parallel::nonlinear_phase(*model_, grid_->nodes(), 0.5 * dt_, psi);
  for (long i = 0; i < steps; ++i) {
    kinetic(psi);
    kernels::parallel::nonlinear_phase(*model_, grid_->nodes(), i + 1 < steps ? dt_ : 0.5 * dt_, psi);
  }
}

FieldState step(const FieldState& state, const NonlinearityModel& model, const Grid& grid, double dt) {
  SplitStepPropagator prop(model, grid, dt);
  ComplexField psi = state.psi;
  prop.step(psi);
  return make_state(std::move(psi), state.t + dt, model, grid);
}

StandingWave polish_spectral(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid, double tol,
                             int max_iters) {
  // high modes: the FD Laplacian underestimates the spectral one by up to
  // pi^2/4, so a damping of 2/(1 + pi^2/4) keeps every mode contracting
  const double omega = 2.0 / (1.0 + std::numbers::pi * std::numbers::pi / 4.0);
  const std::size_t n = wave.u.size();
  RealField u = wave.u;
  auto spec_residual = [&](const RealField& v) {
    RealField r = spectral_second_derivative(v, grid);
    for (std::size_t j = 0; j < n; ++j) r[j] += (model.f(grid.x(j), v[j] * v[j]) - wave.lambda) * v[j];
    return r;
  };
  const Tridiagonal J = jacobian(wave.lambda, wave.u, model, grid);
  RealField r = spec_residual(u);
  double rn = 0.0;
  int it = 0;
  for (;; ++it) {
    rn = 0.0;
    for (double c : r) rn = std::max(rn, std::abs(c));
    if (rn < tol || it >= max_iters) break;
    const RealField du = solve(J, r);
    for (std::size_t j = 0; j < n; ++j) u[j] -= omega * du[j];
    for (std::size_t j = 0; j < n / 2; ++j) {
      const double a = 0.5 * (u[j] + u[n - 1 - j]);
      u[j] = a;
      u[n - 1 - j] = a;
    }
    r = spec_residual(u);
  }
  if (!(rn < tol))
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "spectral polish stalled at ||F||_inf = %.3g (target %.3g) at lambda = %.6g", rn,
                  tol, wave.lambda);
    throw ConvergenceError(buf, rn, it);
  }
  StandingWave out = wave;
  out.u = std::move(u);
  out.residual_inf = rn;
  out.iterations = it;
  RealField sq(n);
  for (std::size_t j = 0; j < n; ++j) sq[j] = out.u[j] * out.u[j];
  out.mass = integrate(sq, grid);
  out.decay_ratio = decay_ratio(out.u, grid);
  return out;
}

OrbitDistance orbit_distance(std::span<const std::complex<double>> psi, std::span<const double> u,
                             const Grid& grid) {
  const ComplexField uc(u.begin(), u.end());
  OrbitDistance d;
  d.theta_opt = std::arg(h1_inner(psi, uc, grid));
  const auto rot = std::polar(1.0, d.theta_opt);
  ComplexField diff(psi.size());
  for (std::size_t j = 0; j < psi.size(); ++j) diff[j] = psi[j] - rot * u[j];
  d.distance = norms(diff, grid).H1;
  return d;
}

RealField perturbation_shape(const PerturbationConfig& cfg, const Grid& grid) {
  RealField eta(grid.N());
  for (std::size_t j = 0; j < eta.size(); ++j) {
    const double x = grid.x(j);
    eta[j] = (cfg.parity == Parity::Odd ? x : 1.0) * std::exp(-x * x / cfg.width);
  }
  const double nrm = norms(eta, grid).H1;
  for (auto& v : eta) v /= nrm;
  return eta;
}

namespace {

double leakage(std::span<const std::complex<double>> psi, const Grid& grid, double mass) {
  double s = 0.0;
  const double edge = 0.9 * grid.R();
  for (std::size_t j = 0; j < psi.size(); ++j)
    if (std::abs(grid.x(j)) > edge) s += std::norm(psi[j]);
  return s * grid.h() / mass;
}

}  // namespace

OrbitRecord stability_experiment(const StandingWave& wave, const PerturbationConfig& perturbation,
                                 const ExperimentConfig& cfg, const NonlinearityModel& model, const Grid& grid) {
  if (!(perturbation.delta >= 0.0)) throw DomainError("perturbation size must be non-negative");
  if (!(cfg.T > 0.0 && cfg.dt > 0.0 && cfg.sample >= cfg.dt)) throw DomainError("need T > 0 and sample >= dt > 0");
  const StandingWave w = cfg.polish ? polish_spectral(wave, model, grid) : wave;
  const RealField eta = perturbation_shape(perturbation, grid);
  ComplexField psi(grid.N());
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = w.u[j] + perturbation.delta * eta[j];

  OrbitRecord rec;
  rec.u_h1 = norms(w.u, grid).H1;
  const double m0 = field_mass(psi, grid), e0 = field_energy(psi, model, grid);
  auto record = [&](double t) {
    const auto d = orbit_distance(psi, w.u, grid);
    const double m = field_mass(psi, grid);
    rec.times.push_back(t);
    rec.distance.push_back(d.distance);
    rec.theta_opt.push_back(d.theta_opt);
    rec.mass_drift.push_back(std::abs(m - m0) / m0);
    rec.energy_drift.push_back(std::abs(field_energy(psi, model, grid) - e0) / std::abs(e0));
    rec.max_distance = std::max(rec.max_distance, d.distance);
    rec.max_leakage = std::max(rec.max_leakage, leakage(psi, grid, m));
  };

  SplitStepPropagator prop(model, grid, cfg.dt);
  const long per_sample = std::lround(cfg.sample / cfg.dt);
  const long samples = std::lround(cfg.T / cfg.sample);
  record(0.0);
  for (long s = 1; s <= samples; ++s) {
    prop.evolve(psi, per_sample);
    record(static_cast<double>(s * per_sample) * cfg.dt);
  }

  const double md = *std::max_element(rec.mass_drift.begin(), rec.mass_drift.end());
  const double ed = *std::max_element(rec.energy_drift.begin(), rec.energy_drift.end());
  char buf[256];
  if (md > cfg.max_mass_drift) {
    rec.valid = false;
    std::snprintf(buf, sizeof buf, "mass drift %.3g exceeds %.3g", md, cfg.max_mass_drift);
    rec.message = buf;
  } else if (ed > cfg.max_energy_drift) {
    rec.valid = false;
    std::snprintf(buf, sizeof buf, "energy drift %.3g exceeds %.3g", ed, cfg.max_energy_drift);
    rec.message = buf;
  }
  rec.leakage_ok = rec.max_leakage <= cfg.max_leakage;
  return rec;
}

void write_orbit_csv(const std::string& path, const OrbitRecord& rec, const std::string& header_comment) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> fp(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!fp) throw Error("cannot open " + path + " for writing");
  if (!header_comment.empty()) std::fprintf(fp.get(), "# %s\n", header_comment.c_str());
  std::fprintf(fp.get(), "t,distance,theta_opt,mass_drift,energy_drift\n");
  for (std::size_t i = 0; i < rec.times.size(); ++i)
    std::fprintf(fp.get(), "%.17g,%.17g,%.17g,%.17g,%.17g\n", rec.times[i], rec.distance[i], rec.theta_opt[i],
                 rec.mass_drift[i], rec.energy_drift[i]);
}

}  // namespace satnls
