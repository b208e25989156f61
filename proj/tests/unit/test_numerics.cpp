#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "cars/diagnostics.hpp"
#include "cars/golden.hpp"
#include "cars/quadrature.hpp"
#include "cars/units.hpp"

using namespace cars;

TEST(Quadrature, CubicIsExact) {
  auto f = [](double x) { return 3.0 * x * x * x - x + 2.0; };
  const auto r = integrate_adaptive_simpson(f, -1.0, 2.0);
  EXPECT_NEAR(r.value.real(), 3.0 * (16.0 - 1.0) / 4.0 - (4.0 - 1.0) / 2.0 + 6.0, 1e-12);
}

TEST(Quadrature, OscillatoryComplexExponential) {
  for (double k : {0.5, 10.0, 100.0, 357.0}) {
    auto f = [k](double x) { return std::exp(std::complex<double>(0.0, k * x)); };
    const auto r = integrate_adaptive_simpson(f, -0.07, 0.07);
    const double expect = 2.0 * std::sin(k * 0.07) / k;
    EXPECT_NEAR(r.value.real(), expect, 1e-8 * std::abs(expect)) << k;
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-10) << k;
  }
}

TEST(Quadrature, PeakedIntegrand) {
  auto f = [](double x) { return 1.0 / (1.0 + 1e4 * x * x); };
  const auto r = integrate_adaptive_simpson(f, -1.0, 1.0);
  EXPECT_NEAR(r.value.real(), 2.0 * std::atan(100.0) / 100.0, 1e-9);
  EXPECT_GT(r.evaluations, 0);
}

TEST(Quadrature, EvaluationCapRaisesWithDiagnostics) {
  auto f = [](double x) { return std::sin(1.0 / (x + 1e-9)); };
  QuadratureOptions opt;
  opt.max_evaluations = 1000;
  try {
    integrate_adaptive_simpson(f, 0.0, 1.0, opt);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_FALSE(e.diagnostics().empty());
  }
}

TEST(Golden, Parabola) {
  auto f = [](double x) { return -(x - 2.3) * (x - 2.3) + 1.0; };
  const auto r = golden_section_maximize(f, 0.0, 5.0, 1e-6);
  EXPECT_NEAR(r.x, 2.3, 1e-6);
  EXPECT_NEAR(r.value, 1.0, 1e-10);
}

TEST(Golden, CalculusOracle) {
  // P² e^{−2aP} peaks at 1/a.
  const double a = 0.37;
  auto f = [a](double p) { return p * p * std::exp(-2.0 * a * p); };
  const auto r = maximize_bracketed(f, 0.0, 20.0, 1e-6);
  EXPECT_NEAR(r.x, 1.0 / a, 1e-5);
}

TEST(Golden, NoInteriorMaximumThrows) {
  auto rising = [](double x) { return x; };
  EXPECT_THROW(maximize_bracketed(rising, 0.0, 1.0, 1e-6), DomainError);
  auto f = [](double p) { return p * p * std::exp(-2.0 * p); };
  EXPECT_THROW(maximize_bracketed(f, 2.0, 5.0, 1e-6), DomainError);
}
