#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cars/diagnostics.hpp"
#include "cars/fit.hpp"
#include "cars/resonance.hpp"

using namespace cars;
using namespace cars::literals;

namespace {

std::vector<double> span(double center, double half, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(center - half + 2.0 * half * i / (n - 1));
  return g;
}

ScanData clean_scan(double center, double gamma, double peak, double offset, int n = 101) {
  ScanData s;
  s.x = span(center, 3.0 * gamma, n);
  for (double x : s.x) s.y.push_back(offset + peak * lineshape(x - center, gamma));
  return s;
}

ScanData scan_at(Pressure p, NoiseModel noise, std::uint64_t seed) {
  const ResonanceParams r;
  const double g = fwhm(r, p);
  const double c = r.shift_mhz_per_bar * p.value();
  return synthesize_scan(r, p, span(c, 3.0 * g, 100), 400.0, noise, seed);
}

FitResult center_only(double center, double sigma) {
  FitResult f;
  f.model = "lorentzian";
  f.converged = true;
  f.params = {{"center", center, sigma}, {"fwhm", 1.0, 0.1}, {"amplitude", 1.0, 0.1},
              {"offset", 0.0, 0.1}};
  return f;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

TEST(Lorentzian, InitialGuess) {
  const auto s = clean_scan(10.0, 100.0, 50.0, 5.0);
  const auto g = lorentzian_initial_guess(s);
  EXPECT_NEAR(g.center, 10.0, 6.0);
  EXPECT_NEAR(g.fwhm, 100.0, 10.0);
  EXPECT_NEAR(g.offset, s.y.front(), 1e-12);
  EXPECT_NEAR(g.amplitude, 55.0 - s.y.front(), 1e-9);
}

TEST(Lorentzian, NoiseFreeFixedPoint) {
  const auto s = clean_scan(0.0, 668.0, 400.0, 0.0);
  const auto f = fit_lorentzian(s);
  ASSERT_TRUE(f.converged) << f.diagnostics;
  EXPECT_NEAR(f.value("center"), 0.0, 668.0 * 1e-6);
  EXPECT_NEAR(f.value("fwhm"), 668.0, 668.0 * 1e-6);
  EXPECT_NEAR(f.value("amplitude"), 400.0, 400.0 * 1e-6);
  EXPECT_NEAR(f.value("offset"), 0.0, 400.0 * 1e-6);
  EXPECT_LE(f.n_iterations, 100);
  EXPECT_GE(f.chi2_reduced, 0.0);
  for (const auto& p : f.params) EXPECT_GT(p.sigma, 0.0) << p.name;
}

TEST(Lorentzian, TranslationAndScalingCovariance) {
  const auto base = fit_lorentzian(clean_scan(-640.0, 320.0, 400.0, 3.0));
  auto shifted = clean_scan(-640.0, 320.0, 400.0, 3.0);
  for (double& x : shifted.x) x += 1234.5;
  for (double& y : shifted.y) y *= 7.0;
  const auto f = fit_lorentzian(shifted);
  ASSERT_TRUE(f.converged);
  EXPECT_NEAR(f.value("center"), base.value("center") + 1234.5, 1e-6);
  EXPECT_NEAR(f.value("fwhm"), base.value("fwhm"), 1e-6);
  EXPECT_NEAR(f.value("amplitude"), 7.0 * base.value("amplitude"), 1e-5);
  EXPECT_NEAR(f.value("offset"), 7.0 * base.value("offset"), 1e-5);
}

TEST(Lorentzian, PoissonRecoveryOverSeeds) {
  std::vector<double> centers, widths;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto f = fit_lorentzian(scan_at(Pressure(16.7), NoiseModel::Poisson, seed));
    ASSERT_TRUE(f.converged) << seed << ": " << f.diagnostics;
    centers.push_back(f.value("center"));
    widths.push_back(f.value("fwhm"));
  }
  EXPECT_NEAR(mean(centers), -80.0 * 16.7, 5.0);
  EXPECT_NEAR(mean(widths), 668.0, 0.05 * 668.0);
}

TEST(Lorentzian, ReportedSigmaMatchesScatter) {
  std::vector<double> centers, widths;
  double sig_c = 0.0, sig_w = 0.0;
  const int n = 60;
  for (int seed = 0; seed < n; ++seed) {
    const auto f = fit_lorentzian(scan_at(8_bar, NoiseModel::Poisson, 1000 + seed));
    ASSERT_TRUE(f.converged);
    centers.push_back(f.value("center"));
    widths.push_back(f.value("fwhm"));
    sig_c += f.sigma("center") / n;
    sig_w += f.sigma("fwhm") / n;
  }
  EXPECT_NEAR(stddev(centers) / sig_c, 1.0, 0.3);
  EXPECT_NEAR(stddev(widths) / sig_w, 1.0, 0.3);
}

TEST(Lorentzian, ConstantDataIsFlagged) {
  ScanData s;
  s.x = span(0.0, 100.0, 20);
  s.y.assign(20, 50.0);
  const auto f = fit_lorentzian(s);
  const bool zero_amp = f.converged && std::abs(f.value("amplitude")) < 1e-9;
  EXPECT_TRUE(!f.converged || zero_amp);
  if (!f.converged) EXPECT_FALSE(f.diagnostics.empty());
}

TEST(Lorentzian, TooFewPointsThrows) {
  ScanData s;
  s.x = {0.0, 1.0, 2.0, 3.0};
  s.y = {1.0, 2.0, 1.0, 0.5};
  EXPECT_THROW(fit_lorentzian(s), DomainError);
}

TEST(Lorentzian, UnknownParameterThrows) {
  const auto f = fit_lorentzian(clean_scan(0.0, 100.0, 10.0, 0.0));
  EXPECT_THROW(f.param("gamma"), std::out_of_range);
}

TEST(Line, NoiseFreeCenters) {
  const ResonanceParams r;
  const std::vector<double> p{4.0, 8.0, 12.0, 16.0};
  std::vector<double> c, w;
  for (double x : p) {
    c.push_back((center_frequency(r, Pressure(x)).value() - r.nu0.value()) * 1e6);
    w.push_back(fwhm(r, Pressure(x)));
  }
  const auto fc = fit_line(p, c);
  EXPECT_NEAR(fc.value("slope"), -80.0, 1e-6);
  EXPECT_NEAR(r.nu0.value() + fc.value("intercept") * 1e-6, 124.571055, 1e-12);
  EXPECT_NEAR(fit_line(p, w).value("slope"), 40.0, 1e-12);
}

TEST(Line, NoisyCentersMonteCarlo) {
  const std::vector<double> p{4.0, 8.0, 12.0, 16.0};
  const std::vector<double> sigma(4, 10.0);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 10.0);
  std::vector<double> slopes;
  int covered = 0;
  for (int seed = 0; seed < 20; ++seed) {
    std::vector<double> c;
    for (double x : p) c.push_back(-80.0 * x + noise(rng));
    const auto f = fit_line(p, c, sigma);
    slopes.push_back(f.value("slope"));
    if (std::abs(f.value("slope") + 80.0) <= 2.0 * f.sigma("slope")) ++covered;
  }
  EXPECT_NEAR(mean(slopes), -80.0, 1.0);
  EXPECT_GE(covered, 17);
}

TEST(Line, Errors) {
  const std::vector<double> x{2.0, 2.0, 2.0}, y{1.0, 2.0, 3.0};
  EXPECT_THROW(fit_line(x, y), DomainError);
  const std::vector<double> one{1.0};
  EXPECT_THROW(fit_line(one, one), DomainError);
}

TEST(Malus, IdealChannels) {
  std::vector<double> t, c1, c2;
  for (double a = 0.0; a <= 360.0; a += 10.0) {
    t.push_back(a);
    const double c = std::cos(a * kPi / 180.0);
    c1.push_back(c * c);
    c2.push_back(1.0 - c * c);
  }
  const auto f1 = fit_malus(t, c1);
  EXPECT_NEAR(f1.value("phase"), 0.0, 1e-9);
  EXPECT_NEAR(f1.value("offset"), 0.0, 1e-12);
  EXPECT_NEAR(f1.value("amplitude"), 1.0, 1e-12);
  const auto f2 = fit_malus(t, c2);
  EXPECT_NEAR(f2.value("phase"), 90.0, 1e-6);
}

TEST(Malus, RecoversArbitraryPhase) {
  std::vector<double> t, y;
  for (double a = 0.0; a <= 180.0; a += 15.0) {
    t.push_back(a);
    const double c = std::cos((a - 33.0) * kPi / 180.0);
    y.push_back(2.0 + 5.0 * c * c);
  }
  const auto f = fit_malus(t, y);
  EXPECT_NEAR(f.value("phase"), 33.0, 1e-9);
  EXPECT_NEAR(f.value("amplitude"), 5.0, 1e-9);
  EXPECT_NEAR(f.value("offset"), 2.0, 1e-9);
}

TEST(Malus, Errors) {
  const std::vector<double> three{0.0, 60.0, 120.0}, y3{1.0, 0.5, 0.2};
  EXPECT_THROW(fit_malus(three, y3), DomainError);
  const std::vector<double> narrow{0.0, 30.0, 60.0, 90.0, 120.0}, y5{1, 0.75, 0.25, 0, 0.25};
  EXPECT_THROW(fit_malus(narrow, y5), DomainError);
  const std::vector<double> aliased{0.0, 90.0, 180.0, 270.0}, y4{1.0, 0.0, 1.0, 0.0};
  EXPECT_THROW(fit_malus(aliased, y4), DomainError);
}

TEST(ZeroPressure, NoiseFreePipeline) {
  std::vector<PressurePoint> series;
  for (double p : {4.0, 8.0, 12.0, 16.0}) {
    const auto f = fit_lorentzian(scan_at(Pressure(p), NoiseModel::None, 0));
    ASSERT_TRUE(f.converged);
    series.push_back({p, f, 124.571055});
  }
  const auto z = zero_pressure_extrapolation(series);
  EXPECT_NEAR(z.nu0_thz, 124.571055, 1e-12);
  EXPECT_NEAR(z.slope_mhz_per_bar, -80.0, 1e-6);
}

TEST(ZeroPressure, SinglePressureThrows) {
  const std::vector<PressurePoint> one{{4.0, center_only(-320.0, 1.0), 124.571055}};
  EXPECT_THROW(zero_pressure_extrapolation(one), DomainError);
}

TEST(ZeroPressure, MixedReferencesAreAligned) {
  std::vector<PressurePoint> series;
  for (double p : {4.0, 8.0, 12.0}) {
    const double ref = 124.571055 + p * 1e-6;  // each scan referenced elsewhere
    const double center = (124.571055 - 80.0 * p * 1e-6 - ref) * 1e6;
    series.push_back({p, center_only(center, 2.0), ref});
  }
  const auto z = zero_pressure_extrapolation(series);
  EXPECT_NEAR(z.nu0_thz, 124.571055, 1e-11);
  EXPECT_NEAR(z.slope_mhz_per_bar, -80.0, 1e-5);
}

TEST(ZeroPressure, SlopeSigmaScalesAsInverseSqrtN) {
  auto sigma_for = [](int repeats) {
    std::vector<PressurePoint> series;
    for (int k = 0; k < repeats; ++k)
      for (double p : {4.0, 8.0, 12.0, 16.0})
        series.push_back({p, center_only(-80.0 * p, 10.0), 124.571055});
    return zero_pressure_extrapolation(series).slope_sigma_mhz_per_bar;
  };
  EXPECT_NEAR(sigma_for(1) / sigma_for(4), 2.0, 1e-9);
  EXPECT_NEAR(sigma_for(1) / sigma_for(9), 3.0, 1e-9);
}
