#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "satnls/grid.hpp"

using namespace satnls;

TEST(Grid, SymmetricNodes) {
  const Grid g(40.0, 4001);
  EXPECT_DOUBLE_EQ(g.h(), 0.02);
  EXPECT_EQ(g.x(g.center()), 0.0);
  for (std::size_t j = 0; j < g.N(); ++j) EXPECT_EQ(g.x(j), -g.x(g.N() - 1 - j));
  EXPECT_EQ(g.x(0), -40.0);
  EXPECT_EQ(g.refined().N(), 8001u);
  EXPECT_THROW(Grid(1.0, 4), std::exception);
  EXPECT_THROW(Grid(1.0, 1), std::exception);
}

TEST(SecondDerivative, ExactOnQuadratics) {
  const Grid g(3.0, 61);
  RealField u(g.N()), one(g.N(), 1.0);
  for (std::size_t j = 0; j < g.N(); ++j) u[j] = g.x(j) * g.x(j);
  const auto d = second_derivative(u, g);
  const auto c = second_derivative(one, g);
  for (std::size_t j = 1; j + 1 < g.N(); ++j) {
    EXPECT_NEAR(d[j], 2.0, 1e-10);
    EXPECT_NEAR(c[j], 0.0, 1e-12);
  }
}

TEST(SecondDerivative, SecondOrderOnSine) {
  auto err = [](std::size_t N) {
    const Grid g(3.0, N);
    RealField u(g.N());
    for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::sin(g.x(j));
    const auto d = second_derivative(u, g);
    double e = 0.0;
    for (std::size_t j = 1; j + 1 < g.N(); ++j) e = std::max(e, std::abs(d[j] + std::sin(g.x(j))));
    return e;
  };
  const double order = std::log2(err(301) / err(601));
  EXPECT_NEAR(order, 2.0, 0.05);
}

TEST(FirstDerivative, FourthOrderInterior) {
  auto err = [](std::size_t N) {
    const Grid g(3.0, N);
    RealField u(g.N());
    for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::sin(g.x(j));
    const auto d = first_derivative(u, g);
    double e = 0.0;
    for (std::size_t j = 2; j + 2 < g.N(); ++j) e = std::max(e, std::abs(d[j] - std::cos(g.x(j))));
    return e;
  };
  EXPECT_NEAR(std::log2(err(151) / err(301)), 4.0, 0.1);
}

TEST(Norms, GaussianL2) {
  const Grid g(20.0, 4001);
  RealField u(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::exp(-g.x(j) * g.x(j) / 2.0);
  const auto n = norms(u, g);
  EXPECT_NEAR(n.L2 * n.L2, std::sqrt(std::numbers::pi), 1e-8);
  EXPECT_DOUBLE_EQ(n.Linf, 1.0);
}

TEST(Norms, ZeroField) {
  const Grid g(5.0, 101);
  const RealField z(g.N(), 0.0);
  const auto n = norms(z, g);
  EXPECT_EQ(n.L2, 0.0);
  EXPECT_EQ(n.Linf, 0.0);
  EXPECT_EQ(n.H1, 0.0);
}

TEST(Norms, ExponentialKinkH1) {
  // int e^{-2|x|} (1 + 1) dx = 2; the kink at 0 costs O(h)
  const Grid g(40.0, 8001);
  RealField u(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::exp(-std::abs(g.x(j)));
  const double h1sq = std::pow(norms(u, g).H1, 2);
  EXPECT_NEAR(h1sq, 2.0, 5e-3);
}

TEST(HalfLine, ExponentialAgainstTrapezoidClosedForm) {
  // trapezoid sum of e^{-x} over [0, R] in closed form:
  // h (1/2 + sum_{j>=1} e^{-jh}) - h e^{-R}/2 = (h/2) coth(h/2) (1 - e^{-R})
  const Grid g(40.0, 4001);
  RealField u(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::exp(-std::abs(g.x(j)));
  const double h = g.h();
  const double exact_sum = 0.5 * h / std::tanh(0.5 * h) * (1.0 - std::exp(-g.R()));
  EXPECT_NEAR(half_line_integral(u, g), exact_sum, 1e-13);
  // and the quadrature error against the integral 1 is the h^2/12 term
  EXPECT_NEAR(half_line_integral(u, g) - 1.0, h * h / 12.0, 1e-9);
}

TEST(HalfLine, EvenIntegrandIsHalfTheLine) {
  const Grid g(10.0, 1001);
  RealField u(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) u[j] = std::cos(g.x(j)) * std::exp(-g.x(j) * g.x(j));
  EXPECT_NEAR(half_line_integral(u, g), 0.5 * integrate(u, g), 1e-14);
  EXPECT_EQ(half_line_integral(RealField(g.N(), 0.0), g), 0.0);
}

TEST(Properties, OperatorsLinearNormsHomogeneousTriangle) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  const Grid g(4.0, 201);
  for (int trial = 0; trial < 50; ++trial) {
    RealField u(g.N()), v(g.N()), w(g.N());
    const double a = gauss(rng), b = gauss(rng);
    for (std::size_t j = 0; j < g.N(); ++j) {
      u[j] = gauss(rng);
      v[j] = gauss(rng);
      w[j] = a * u[j] + b * v[j];
    }
    const auto du = first_derivative(u, g), dv = first_derivative(v, g), dw = first_derivative(w, g);
    const auto su = second_derivative(u, g), sv = second_derivative(v, g), sw = second_derivative(w, g);
    for (std::size_t j = 0; j < g.N(); ++j) {
      EXPECT_NEAR(dw[j], a * du[j] + b * dv[j], 1e-9 * (1.0 + std::abs(dw[j])));
      EXPECT_NEAR(sw[j], a * su[j] + b * sv[j], 1e-9 * (1.0 + std::abs(sw[j])));
    }
    const auto nu = norms(u, g), nv = norms(v, g);
    RealField au(g.N()), s(g.N());
    for (std::size_t j = 0; j < g.N(); ++j) {
      au[j] = a * u[j];
      s[j] = u[j] + v[j];
    }
    const auto na = norms(au, g), ns = norms(s, g);
    EXPECT_NEAR(na.L2, std::abs(a) * nu.L2, 1e-12 * na.L2);
    EXPECT_NEAR(na.H1, std::abs(a) * nu.H1, 1e-12 * na.H1);
    EXPECT_LE(ns.L2, nu.L2 + nv.L2 + 1e-12);
    EXPECT_LE(ns.H1, nu.H1 + nv.H1 + 1e-12);
    EXPECT_LE(ns.Linf, nu.Linf + nv.Linf + 1e-12);
  }
}

TEST(Properties, RefinementChangesSmoothIntegralsByHSquared) {
  auto integral = [](std::size_t N) {
    const Grid g(10.0, N);
    RealField u(g.N());
    for (std::size_t j = 0; j < g.N(); ++j) u[j] = 1.0 / std::cosh(g.x(j));
    return integrate(u, g);
  };
  // sech is analytic, so trapezoid converges faster than h^2; bound only
  const double a = integral(201), b = integral(401);
  EXPECT_LT(std::abs(a - b), 0.1 * 0.1);
}

TEST(H1Inner, ComplexPhase) {
  const Grid g(10.0, 1001);
  ComplexField a(g.N());
  for (std::size_t j = 0; j < g.N(); ++j) a[j] = std::exp(-g.x(j) * g.x(j));
  ComplexField b = a;
  for (auto& z : b) z *= std::polar(1.0, 0.7);
  const auto ip = h1_inner(b, a, g);
  EXPECT_NEAR(std::arg(ip), 0.7, 1e-14);
  EXPECT_NEAR(std::abs(ip), std::pow(norms(a, g).H1, 2), 1e-12);
}
