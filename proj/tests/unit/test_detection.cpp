#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "cars/detection.hpp"
#include "cars/diagnostics.hpp"

using namespace cars;

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> significances(double extra, int cycles, double seconds, int seeds,
                                  const DetectorSpec& d = {}) {
  std::vector<double> out;
  for (int s = 0; s < seeds; ++s)
    out.push_back(simulate_toggle_experiment(d, extra, cycles, seconds, 100 + s).significance);
  return out;
}

}  // namespace

TEST(Chain, ThreeFilters) {
  const std::vector<ChainElement> filters{{"f1", 0.9}, {"f2", 0.9}, {"f3", 0.9}};
  EXPECT_NEAR(chain_transmission(filters), 0.729, 1e-15);
}

TEST(Chain, DefaultProduct) {
  const auto chain = default_chain();
  EXPECT_NEAR(chain_transmission(chain), 0.57, 0.01);
}

TEST(Chain, SingleUnitElement) {
  const std::vector<ChainElement> one{{"window", 1.0}};
  EXPECT_EQ(chain_transmission(one), 1.0);
}

TEST(Chain, OrderIndependentAndMultiplicative) {
  auto chain = default_chain();
  const double t = chain_transmission(chain);
  std::reverse(chain.begin(), chain.end());
  EXPECT_NEAR(chain_transmission(chain), t, 1e-15);
  const std::vector<ChainElement> extra{{"a", 0.5}, {"b", 0.8}};
  auto joined = chain;
  joined.insert(joined.end(), extra.begin(), extra.end());
  EXPECT_NEAR(chain_transmission(joined), t * chain_transmission(extra), 1e-15);
}

TEST(Chain, Errors) {
  EXPECT_THROW(chain_transmission({}), DomainError);
  const std::vector<ChainElement> zero{{"opaque", 0.0}};
  EXPECT_THROW(chain_transmission(zero), DomainError);
  const std::vector<ChainElement> gain{{"gain", 1.2}};
  EXPECT_THROW(chain_transmission(gain), DomainError);
}

TEST(DetectionProbability, DefaultChainBookkeeping) {
  const auto chain = default_chain();
  const DetectorSpec d;
  const double p = detection_probability(1.0e-9, chain, d);
  EXPECT_NEAR(p, 1.54e-10, 0.01e-10);
  EXPECT_NEAR(p, 1.4e-10, 0.3e-10);
  EXPECT_EQ(detection_probability(0.0, chain, d), 0.0);
}

TEST(DetectionProbability, UnitChainAndQe) {
  const std::vector<ChainElement> clear{{"none", 1.0}};
  DetectorSpec d;
  d.quantum_efficiency = 1.0;
  EXPECT_EQ(detection_probability(3.7e-9, clear, d), 3.7e-9);
}

TEST(DetectionProbability, LinearInEachFactor) {
  const auto chain = default_chain();
  DetectorSpec d;
  const double base = detection_probability(1e-9, chain, d);
  EXPECT_NEAR(detection_probability(3e-9, chain, d), 3.0 * base, 1e-24);
  d.quantum_efficiency *= 0.5;
  EXPECT_NEAR(detection_probability(1e-9, chain, d), 0.5 * base, 1e-24);
  auto halved = chain;
  halved.push_back({"ND", 0.5});
  EXPECT_NEAR(detection_probability(1e-9, halved, DetectorSpec{}), 0.5 * base, 1e-24);
  EXPECT_THROW(detection_probability(-1.0, chain, DetectorSpec{}), DomainError);
}

TEST(Toggle, RecordsAndDeterminism) {
  const DetectorSpec d;
  const auto a = simulate_toggle_experiment(d, 0.5, 10, 10.0, 3);
  const auto b = simulate_toggle_experiment(d, 0.5, 10, 10.0, 3);
  ASSERT_EQ(a.records.size(), 20u);
  EXPECT_EQ(a.records[0].phase, TogglePhase::On);
  EXPECT_EQ(a.records[1].phase, TogglePhase::Off);
  EXPECT_EQ(a.records[19].cycle, 9);
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].counts, b.records[i].counts);
  EXPECT_EQ(a.significance, b.significance);
  EXPECT_NEAR(a.difference_cps, a.rate_on_cps - a.rate_off_cps, 1e-12);
}

TEST(Toggle, NullHypothesis) {
  const auto s = significances(0.0, 100, 10.0, 50);
  const auto within = std::count_if(s.begin(), s.end(), [](double z) { return std::abs(z) < 2.0; });
  EXPECT_GE(within, 45);
}

TEST(Toggle, OneCountPerSecondIsDetected) {
  const auto s = significances(1.0, 100, 10.0, 50);
  const auto detected = std::count_if(s.begin(), s.end(), [](double z) { return z > 5.0; });
  EXPECT_GE(detected, 45);
}

TEST(Toggle, TenthCountPerSecondIsNot) {
  const auto s = significances(0.1, 100, 10.0, 50);
  EXPECT_LT(median(s), 2.0);
}

TEST(Toggle, SignificanceGrowsAsSqrtTime) {
  DetectorSpec steady;
  steady.drift_fraction = 0.0;
  // Mean significance over seeds for durations spanning three decades.
  std::vector<double> z;
  for (double seconds : {1.0, 10.0, 100.0, 1000.0}) {
    const auto s = significances(1.0, 100, seconds, 40, steady);
    double m = 0.0;
    for (double v : s) m += v / static_cast<double>(s.size());
    z.push_back(m);
  }
  for (std::size_t i = 1; i < z.size(); ++i)
    EXPECT_NEAR(z[i] / z[i - 1], std::sqrt(10.0), 0.15 * std::sqrt(10.0)) << i;
}

TEST(Toggle, Errors) {
  const DetectorSpec d;
  EXPECT_THROW(simulate_toggle_experiment(d, 0.0, 1, 10.0, 0), DomainError);
  EXPECT_THROW(simulate_toggle_experiment(d, 0.0, 10, 0.0, 0), DomainError);
  EXPECT_THROW(simulate_toggle_experiment(d, -1.0, 10, 1.0, 0), DomainError);
  DetectorSpec bad;
  bad.quantum_efficiency = 1.5;
  EXPECT_THROW(simulate_toggle_experiment(bad, 0.0, 10, 1.0, 0), DomainError);
}
