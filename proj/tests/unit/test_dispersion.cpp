#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cars/diagnostics.hpp"
#include "cars/dispersion.hpp"

using namespace cars;
using namespace cars::literals;

namespace {

const Temperature kRefT(273.15);
const Pressure kRefP(1.01325);

struct CaptureWarnings {
  CaptureWarnings()
      : previous(set_warning_handler([this](std::string_view m) { messages.emplace_back(m); })) {}
  ~CaptureWarnings() { set_warning_handler(previous); }
  std::vector<std::string> messages;
  WarningHandler previous;
};

}  // namespace

TEST(Dispersion, GoldenRefractivity) {
  EXPECT_NEAR(refractivity_std(Wavelength(546.1)), 1.3930e-4, 1e-7);
  EXPECT_NEAR(refractivity_std(434_nm), 1.4150e-4, 1e-7);
  EXPECT_NEAR(refractivity_std(938_nm), 1.3692e-4, 1e-7);
}

TEST(Dispersion, NormalDispersionOverValidRange) {
  double previous = refractivity_std(Wavelength(2000.0));
  for (double nm = 1990.0; nm >= 300.0; nm -= 10.0) {
    const double r = refractivity_std(Wavelength(nm));
    EXPECT_GT(r, previous) << nm;
    EXPECT_GT(r, 0.0);
    previous = r;
  }
}

TEST(Dispersion, WarnsOutsideValidatedRange) {
  CaptureWarnings w;
  refractivity_std(434_nm);
  EXPECT_TRUE(w.messages.empty());
  refractivity_std(250_nm);
  ASSERT_EQ(w.messages.size(), 1u);
  EXPECT_NE(w.messages[0].find("250"), std::string::npos);
}

TEST(Dispersion, PoleThrows) {
  CaptureWarnings w;
  const double pole_nm = 1e3 / std::sqrt(180.7);
  EXPECT_THROW(refractivity_std(Wavelength(pole_nm)), DomainError);
  EXPECT_THROW(refractivity_std(Wavelength(0.0)), DomainError);
}

TEST(Dispersion, NumberDensity) {
  EXPECT_NEAR(number_density(kRefP, kRefT), 2.6868e25, 2.6868e25 * 1e-4);
  EXPECT_EQ(number_density(0_bar, Temperature(293.15)), 0.0);
  EXPECT_NEAR(number_density(6.5_bar, Temperature(293.15)), 1.606e26, 1.606e26 * 1e-3);
  EXPECT_THROW(number_density(1_bar, Temperature(0.0)), DomainError);
  EXPECT_THROW(number_density(1_bar, Temperature(-5.0)), DomainError);
  EXPECT_THROW(number_density(Pressure(-1.0), Temperature(293.15)), DomainError);
}

TEST(Dispersion, GasStateDensityZeroIffVacuum) {
  EXPECT_EQ(GasState(0_bar, Temperature(293.15)).number_density(), 0.0);
  EXPECT_GT(GasState(Pressure(1e-9), Temperature(293.15)).number_density(), 0.0);
}

TEST(Dispersion, RefractiveIndexVacuumIsOne) {
  for (double nm : {300.0, 434.0, 938.0, 1538.0, 2000.0})
    EXPECT_EQ(refractive_index(Wavelength(nm), GasState(0_bar, Temperature(293.15))), 1.0);
}

TEST(Dispersion, ReferenceStateSelfConsistency) {
  const double n = refractive_index(434_nm, GasState(kRefP, kRefT));
  EXPECT_NEAR(n - 1.0, refractivity_std(434_nm), 1e-9);
  EXPECT_NEAR(n - 1.0, 1.4150e-4, 1e-7);
}

TEST(Dispersion, DoubleDensity) {
  const double r = refractivity(434_nm, GasState(Pressure(2.0265), kRefT));
  EXPECT_NEAR(r, 2.830e-4, 2.830e-4 * 1e-3);
}

TEST(Dispersion, UnphysicalDensityThrows) {
  EXPECT_THROW(refractive_index(434_nm, GasState(Pressure(1e6), kRefT)), DomainError);
}

TEST(Dispersion, Wavevector) {
  const GasState vac(0_bar, Temperature(293.15));
  EXPECT_NEAR(wavevector(434_nm, vac), 1.447739e7, 1.447739e7 * 1e-6);
  EXPECT_NEAR(wavevector(938_nm, vac), 6.698492e6, 6.698492e6 * 1e-6);
  const GasState gas(10_bar, Temperature(293.15));
  EXPECT_NEAR(wavevector(434_nm, gas) / wavevector(434_nm, vac), refractive_index(434_nm, gas),
              1e-15);
}

TEST(Dispersion, MonotoneInPressureAndOrderedInWavelength) {
  const Temperature t(293.15);
  double prev = 1.0;
  for (double p = 0.5; p <= 60.0; p += 0.5) {
    const GasState s{Pressure(p), t};
    const double n434 = refractive_index(434_nm, s);
    EXPECT_GT(n434, prev);
    EXPECT_GT(n434, refractive_index(938_nm, s));
    EXPECT_GT(refractive_index(938_nm, s), refractive_index(1538_nm, s));
    prev = n434;
  }
}

TEST(Dispersion, NearlyLinearInDensityBelow20Bar) {
  const double r_ref = refractivity_std(434_nm);
  for (double t : {273.15, 293.15, 350.0}) {
    for (double p = 0.25; p <= 20.0; p += 0.25) {
      const double r = refractivity(434_nm, GasState(Pressure(p), Temperature(t)));
      const double linear = p / kRefP.value() * r_ref * (kRefT.value() / t);
      EXPECT_LT(std::abs(r - linear) / r, 1e-3) << p << " bar, " << t << " K";
    }
  }
}

TEST(Dispersion, CustomCoefficients) {
  DispersionModel::Coefficients c;
  c.a2 = 0.0;
  const DispersionModel m(c);
  const double um = 0.5;
  EXPECT_NEAR(refractivity_std(500_nm, m), 1e-6 * 14895.6 / (180.7 - 1.0 / (um * um)), 1e-18);
  EXPECT_THROW(DispersionModel(c, kRefT, Pressure(0.0)), DomainError);
}
