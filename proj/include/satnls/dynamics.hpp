#pragma once

#include <complex>
#include <string>
#include <vector>

#include "satnls/stationary.hpp"

namespace satnls {

/// Periodic FFT on the N grid nodes (period N h). Owns its FFTW plans.
class Fft {
public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::complex<double>* data() noexcept { return buf_; }
  void forward();
  void backward();  // unnormalized

private:
  std::size_t n_;
  std::complex<double>* buf_;
  void* fwd_;
  void* bwd_;
};

/// Angular wavenumbers of the periodic closure, FFT order.
RealField wavenumbers(const Grid& grid);

/// d/dx by the periodic spectral multiplier i k.
ComplexField spectral_derivative(std::span<const std::complex<double>> psi, const Grid& grid);

/// Periodic second derivative of a real field by the multiplier -k^2.
RealField spectral_second_derivative(std::span<const double> u, const Grid& grid);

struct FieldState {
  double t = 0.0;
  ComplexField psi;
  double mass = 0.0;    // h sum |psi|^2
  double energy = 0.0;  // h sum |psi'|^2 - Fanti(x, |psi|^2), spectral psi'
};

double field_mass(std::span<const std::complex<double>> psi, const Grid& grid);
double field_energy(std::span<const std::complex<double>> psi, const NonlinearityModel& model, const Grid& grid);
FieldState make_state(ComplexField psi, double t, const NonlinearityModel& model, const Grid& grid);

/// Strang splitting for i psi_t + psi_xx + f(x,|psi|^2) psi = 0: nonlinear
/// half step, exact kinetic step exp(-i dt k^2), nonlinear half step.
class SplitStepPropagator {
public:
  SplitStepPropagator(const NonlinearityModel& model, const Grid& grid, double dt);

  double dt() const noexcept { return dt_; }

  /// One full Strang step.
  void step(ComplexField& psi);

  /// `steps` Strang steps with the adjacent nonlinear half steps merged.
  /// Exact because the nonlinear flow leaves |psi| unchanged.
  void evolve(ComplexField& psi, long steps);

private:
  void kinetic(ComplexField& psi);

  const NonlinearityModel* model_;
  const Grid* grid_;
  double dt_;
  Fft fft_;
  ComplexField multiplier_;  // exp(-i dt k^2) / N
};

FieldState step(const FieldState& state, const NonlinearityModel& model, const Grid& grid, double dt);

/// Re-solves the stationary problem with the spectral Laplacian the
/// propagator uses, so the wave is an exact fixed orbit of the semi-discrete
/// flow. Damped chord iteration preconditioned by the finite-difference
/// Jacobian; stops at ||F||_inf < tol. The FFT roundoff floor of the
/// residual is a few 1e-12 at the default grid.
StandingWave polish_spectral(const StandingWave& wave, const NonlinearityModel& model, const Grid& grid,
                             double tol = 1e-10, int max_iters = 400);

struct OrbitDistance {
  double distance = 0.0;
  double theta_opt = 0.0;
};

/// inf over theta of ||psi - e^{i theta} u||_H1; the minimizer is
/// theta = arg <psi, u>_H1 because u is real.
OrbitDistance orbit_distance(std::span<const std::complex<double>> psi, std::span<const double> u,
                             const Grid& grid);

enum class Parity { Even, Odd };

struct PerturbationConfig {
  double delta = 1e-3;
  Parity parity = Parity::Even;
  double width = 8.0;  // eta = e^{-x^2/width} or x e^{-x^2/width}, unit H1 norm
};

/// Fixed-shape perturbation of unit H1 norm.
RealField perturbation_shape(const PerturbationConfig& cfg, const Grid& grid);

struct ExperimentConfig {
  double T = 50.0;
  double dt = 1e-3;
  double sample = 0.1;
  bool polish = true;
  double max_mass_drift = 1e-8;
  double max_energy_drift = 1e-5;
  double max_leakage = 1e-10;  // monitored, not gated: radiation from a perturbation reaches the walls
};

struct OrbitRecord {
  std::vector<double> times;
  std::vector<double> distance;
  std::vector<double> theta_opt;
  std::vector<double> mass_drift;    // relative
  std::vector<double> energy_drift;  // relative
  double max_distance = 0.0;
  double u_h1 = 0.0;
  double max_leakage = 0.0;  // share of mass with |x| > 0.9 R
  bool leakage_ok = true;
  bool valid = true;
  std::string message;
};

/// Evolves psi0 = u + delta eta and records the orbit distance to
/// {e^{i theta} u}. Mass or energy drift beyond the configured bounds marks
/// the run invalid (integrator fault, not instability).
OrbitRecord stability_experiment(const StandingWave& wave, const PerturbationConfig& perturbation,
                                 const ExperimentConfig& cfg, const NonlinearityModel& model, const Grid& grid);

/// t, distance, theta_opt, mass_drift, energy_drift
void write_orbit_csv(const std::string& path, const OrbitRecord& rec, const std::string& header_comment = "");

}  // namespace satnls
