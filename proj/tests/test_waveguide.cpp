#include <cmath>

#include <gtest/gtest.h>

#include "satnls/error.hpp"
#include "satnls/waveguide.hpp"

using namespace satnls;

TEST(KWindow, UnitFixture) {
  const auto w = k_window({1.0, 1.0, 1.0}, 1.0);
  EXPECT_EQ(w.k1, 1.0);
  EXPECT_EQ(w.k3, std::sqrt(2.0));
}

TEST(KWindow, CollapsesAsLambdaInfVanishes) {
  const auto w = k_window({1.3, 2.0, 1.0}, 1e-14);
  EXPECT_NEAR(w.k3 - w.k1, 0.0, 1e-13);
  EXPECT_THROW(k_window({1.0, 1.0, 1.0}, 0.0), DomainError);
  EXPECT_THROW(k_window({-1.0, 1.0, 1.0}, 0.5), DomainError);
}

TEST(KWindow, LambdaOfKIsMonotoneAndMapsTheWindow) {
  const WaveguideParams p{1.7, 2.3, 1.0};
  const double li = 0.7;
  const auto w = k_window(p, li);
  EXPECT_NEAR(lambda_of_k(p, w.k1), 0.0, 1e-14);
  EXPECT_NEAR(lambda_of_k(p, w.k3), li, 1e-14);
  double prev = -1.0;
  for (int i = 1; i < 50; ++i) {
    const double k = w.k1 + (w.k3 - w.k1) * i / 50.0;
    const double l = lambda_of_k(p, k);
    EXPECT_GT(l, prev);
    EXPECT_NEAR(k_of_lambda(p, l), k, 1e-14);
    prev = l;
  }
}

TEST(Dispersion, PowerIsScaledMass) {
  SolutionCurve c;
  c.lambda_inf = 0.7;
  for (double l : {0.1, 0.3, 0.5, 0.8}) {
    CurvePoint p;
    p.wave.lambda = l;
    p.wave.mass = 10.0 * l;
    c.points.push_back(p);
  }
  const WaveguideParams params{2.0, 1.5, 3.0};
  const auto d = dispersion_curve(c, params);
  ASSERT_EQ(d.points.size(), 3u);
  ASSERT_EQ(d.notes.size(), 1u);  // 0.8 > lambda_inf
  const double omega = params.omega_over_c * params.c;
  for (const auto& p : d.points) {
    EXPECT_NEAR(p.power, params.c * params.c * p.k / (2.0 * omega) * 10.0 * p.lambda, 1e-15);
    EXPECT_GT(p.k, d.window.k1);
    EXPECT_LT(p.k, d.window.k3);
  }
}

TEST(Dispersion, EpsNlInvertsTheScaling) {
  const auto m = make_prototype({0.5, 1.0});
  const WaveguideParams p{2.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(eps_nl(m, p, 0.3, 0.25), m.f(0.3, 0.5) / 4.0);
}
