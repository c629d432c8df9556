#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "satnls/curve.hpp"
#include "satnls/dynamics.hpp"

using namespace satnls;

namespace {

constexpr double kLambdaInf = 0.71466625190;

const NonlinearityModel& model() {
  static const NonlinearityModel m = make_prototype({0.5, 1.0});
  return m;
}

NonlinearityModel free_model() {
  NonlinearityModel m;
  m.f = [](double, double) { return 0.0; };
  m.d1f = m.d2f = m.Fanti = m.d1Fanti = [](double, double) { return 0.0; };
  m.finf = [](double) { return 0.0; };
  return m;
}

const Grid& grid() {
  static const Grid g(40.0, 4001);
  return g;
}

StandingWave wave(double frac) {
  const auto& g = grid();
  const double lo = 0.05 * kLambdaInf;
  const StandingWave s = solve(lo, initial_guess(lo, 1.0, g), model(), g, {}, kLambdaInf);
  return continue_to(s, frac * kLambdaInf, model(), g, {}, kLambdaInf);
}

const StandingWave& polished_mid() {
  static const StandingWave w = polish_spectral(wave(0.5), model(), grid());
  return w;
}

ComplexField perturbed(const StandingWave& w, double delta) {
  const auto eta = perturbation_shape({delta, Parity::Even}, grid());
  ComplexField psi(w.u.size());
  for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = w.u[j] + delta * eta[j];
  return psi;
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double e = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) e = std::max(e, std::abs(a[j] - b[j]));
  return e;
}

}  // namespace

TEST(Fft, RoundTripAndDerivative) {
  const auto& g = grid();
  ComplexField psi(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) psi[j] = std::exp(-g.x(j) * g.x(j)) * std::polar(1.0, 0.3 * g.x(j));
  const auto d = spectral_derivative(psi, g);
  for (std::size_t j = 0; j < g.N(); j += 41) {
    const double x = g.x(j);
    const auto exact = psi[j] * std::complex<double>(-2.0 * x, 0.3);
    EXPECT_NEAR(std::abs(d[j] - exact), 0.0, 1e-11);
  }
}

TEST(Step, FreeGaussianClosedForm) {
  const auto& g = grid();
  const auto m = free_model();
  ComplexField psi(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) psi[j] = std::exp(-g.x(j) * g.x(j) / 2.0);
  SplitStepPropagator prop(m, g, 1e-3);
  prop.evolve(psi, 1000);
  const std::complex<double> a(1.0, 2.0);  // 1 + 2 i t at t = 1
  double e = 0.0;
  for (std::size_t j = 0; j < g.N(); ++j) {
    const double x = g.x(j);
    e = std::max(e, std::abs(psi[j] - std::exp(-x * x / (2.0 * a)) / std::sqrt(a)));
  }
  EXPECT_LT(e, 1e-6);
}

TEST(Step, MergedEvolutionEqualsRepeatedSteps) {
  const auto& g = grid();
  ComplexField a = perturbed(polished_mid(), 0.05), b = a;
  SplitStepPropagator prop(model(), g, 0.01);
  for (int i = 0; i < 20; ++i) prop.step(a);
  prop.evolve(b, 20);
  EXPECT_LT(max_diff(a, b), 1e-12);

  FieldState st = make_state(perturbed(polished_mid(), 0.05), 0.0, model(), g);
  ComplexField c = st.psi;
  prop.step(c);
  const auto next = step(st, model(), g, 0.01);
  EXPECT_DOUBLE_EQ(next.t, 0.01);
  EXPECT_LT(max_diff(next.psi, c), 1e-14);
}

TEST(Step, StandingWaveReturnsAfterOnePeriod) {
  const auto& w = polished_mid();
  const double period = 2.0 * std::numbers::pi / w.lambda;
  const long steps = 8800;  // dt ~ 1e-3
  ComplexField psi(w.u.begin(), w.u.end());
  SplitStepPropagator prop(model(), grid(), period / steps);
  prop.evolve(psi, steps);
  const auto d = orbit_distance(psi, w.u, grid());
  EXPECT_LT(d.distance, 1e-6);
  EXPECT_NEAR(std::remainder(d.theta_opt, 2.0 * std::numbers::pi), 0.0, 1e-6);
}

TEST(Step, SecondOrderInTime) {
  const auto& g = grid();
  const ComplexField psi0 = perturbed(polished_mid(), 0.2);
  auto run = [&](double dt) {
    ComplexField psi = psi0;
    SplitStepPropagator prop(model(), g, dt);
    prop.evolve(psi, std::lround(1.0 / dt));
    return psi;
  };
  const auto ref = run(1.0 / 1280);
  const double e1 = max_diff(run(1.0 / 40), ref), e2 = max_diff(run(1.0 / 80), ref), e3 = max_diff(run(1.0 / 160), ref);
  EXPECT_NEAR(e1 / e2, 4.0, 0.4);
  EXPECT_NEAR(e2 / e3, 4.0, 0.4);
}

TEST(Invariants, MassConservedAndEnergyDriftSecondOrder) {
  const auto& g = grid();
  const ComplexField psi0 = perturbed(polished_mid(), 0.2);
  const double m0 = field_mass(psi0, g), e0 = field_energy(psi0, model(), g);
  auto drift = [&](double dt) {
    ComplexField psi = psi0;
    SplitStepPropagator prop(model(), g, dt);
    prop.evolve(psi, std::lround(1.0 / dt));
    EXPECT_LT(std::abs(field_mass(psi, g) - m0) / m0, 1e-10);
    return std::abs(field_energy(psi, model(), g) - e0) / std::abs(e0);
  };
  const double a = drift(0.02), b = drift(0.01);
  EXPECT_NEAR(a / b, 4.0, 0.6);
  EXPECT_LT(drift(1e-3), 1e-5);
}

TEST(Invariants, PhaseEquivariance) {
  const auto& g = grid();
  const auto rot = std::polar(1.0, 0.9);
  ComplexField a = perturbed(polished_mid(), 0.1), b = a;
  for (auto& z : b) z *= rot;
  SplitStepPropagator prop(model(), g, 0.01);
  prop.evolve(a, 50);
  prop.evolve(b, 50);
  for (auto& z : a) z *= rot;
  EXPECT_LT(max_diff(a, b), 1e-12);
}

TEST(OrbitDistance, ClosedFormMinimizer) {
  const auto& g = grid();
  const auto& u = polished_mid().u;
  const double uh1 = norms(u, g).H1;
  for (double theta : {0.0, 1.234, -2.5}) {
    ComplexField psi(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) psi[j] = std::polar(u[j], theta);
    const auto d = orbit_distance(psi, u, g);
    EXPECT_LT(d.distance, 1e-12 * uh1);
    EXPECT_NEAR(d.theta_opt, theta, 1e-12);
  }
  ComplexField scaled(u.begin(), u.end());
  for (auto& z : scaled) z *= 1.01;
  const auto d = orbit_distance(scaled, u, g);
  EXPECT_NEAR(d.distance, 0.01 * uh1, 1e-12);
  EXPECT_EQ(d.theta_opt, 0.0);
}

TEST(Polish, ExactStationaryStateOfTheSpectralSystem) {
  const auto& g = grid();
  const auto& w = polished_mid();
  auto r = spectral_second_derivative(w.u, g);
  for (std::size_t j = 0; j < r.size(); ++j) r[j] += (model().f(g.x(j), w.u[j] * w.u[j]) - w.lambda) * w.u[j];
  double rn = 0.0;
  for (double v : r) rn = std::max(rn, std::abs(v));
  EXPECT_LT(rn, 1e-10);
  EXPECT_EQ(shape_violation(w, g), "");
}

TEST(Experiment, InitialDistanceIsDeltaAndStandingWaveStays) {
  const auto& g = grid();
  const auto w = wave(0.5);
  ExperimentConfig cfg;
  cfg.T = 2.0;
  for (Parity p : {Parity::Even, Parity::Odd}) {
    const auto eta = perturbation_shape({1e-3, p}, g);
    EXPECT_NEAR(norms(eta, g).H1, 1.0, 1e-14);
    const auto rec = stability_experiment(w, {1e-3, p}, cfg, model(), g);
    EXPECT_NEAR(rec.distance.front(), 1e-3, 1e-12);
    EXPECT_TRUE(rec.valid) << rec.message;
    EXPECT_EQ(rec.times.size(), 21u);
  }
  const auto rec0 = stability_experiment(w, {0.0, Parity::Even}, cfg, model(), g);
  EXPECT_LT(rec0.max_distance, 1e-6);
  EXPECT_TRUE(rec0.leakage_ok);
}
