#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "opinion_merge/scenarios.hpp"
#include "opinion_merge/strategies.hpp"
#include "opinion_merge/verify.hpp"

namespace om = opinion_merge;
using om::AlphaParam;
using om::CompetitiveContext;

namespace {

om::Transcript joint_run(double alpha, std::uint64_t seed, om::Regime regime, std::size_t n = 50) {
  om::ScenarioForecasts fc(seed, 3, regime, 2.0);
  auto pair = om::alpha_pair(AlphaParam(alpha));
  om::SamplingReality reality(om::Side::I, seed);
  return om::run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, reality, n);
}

}  // namespace

TEST(Identity, PassesOnJointPowerPlay) {
  for (double a : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    const auto rep = om::check_small_alpha_identity(joint_run(a, 2, om::Regime::drift), AlphaParam(a));
    EXPECT_TRUE(rep.pass()) << a;
    EXPECT_EQ(rep.left.size(), 50u);
  }
}

TEST(Identity, DetectsPerturbedCapital) {
  om::Transcript t = joint_run(0.0, 2, om::Regime::drift);
  t.rounds[10].log_K_I = t.rounds[10].log_K_I.plus(1e-6);
  const auto rep = om::check_small_alpha_identity(t, AlphaParam(0.0));
  EXPECT_FALSE(rep.pass());
  EXPECT_GT(rep.max_violation, 1e-7);
}

TEST(Identity, OneRoundValueOnWorkedPair) {
  om::FixedForecasts fc({0.5, 0.5}, {0.9, 0.1});
  auto pair = om::alpha_pair(AlphaParam(0.0));
  om::ScriptedReality reality({0});
  const auto t = om::run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, reality, 1);
  const auto rep = om::check_small_alpha_identity(t, AlphaParam(0.0));
  EXPECT_NEAR(rep.left[0], 0.4462871, 1e-7);
  EXPECT_NEAR(rep.right[0], 0.4462871, 1e-7);
}

TEST(BigAlphaBound, HoldsAndDetectsViolation) {
  om::ScenarioForecasts fc(3, 4, om::Regime::drift);
  auto s_I = om::big_alpha_sceptic_I(-2.0);
  om::RandomSceptic<CompetitiveContext> s_II(4);
  om::SamplingReality reality(om::Side::II, 5);
  om::Transcript t = om::run_competitive(fc, *s_I, s_II, reality, 60);
  EXPECT_TRUE(om::check_big_alpha_bound(t, -2.0).pass());
  // The coefficient of ln K_II is positive for alpha < -1.
  t.rounds[5].log_K_II = t.rounds[5].log_K_II.plus(50.0);
  EXPECT_FALSE(om::check_big_alpha_bound(t, -2.0).pass());
  EXPECT_THROW(om::check_big_alpha_bound(t, -0.5), om::Error);
}

TEST(Growth, ConstantsAtCTwo) {
  om::GrowthSeries s;
  s.log_K_I = {om::LogCapital{}};
  s.log_K_II = {om::LogCapital{}};
  s.kl_cum = {0.0};
  om::GrowthParams prm;
  prm.c = 2.0;
  prm.horizon = 4;
  const auto lower = om::check_growth_series(s, om::GrowthVariant::fixed_growth_lower, prm);
  EXPECT_NEAR(lower.right[0], -1.9218121, 1e-7);
  const auto upper = om::check_growth_series(s, om::GrowthVariant::fixed_growth_upper, prm);
  EXPECT_NEAR(upper.right[0], 3.0 * 0.9609060, 1e-6);
}

TEST(Growth, SkipsNonTimidPlays) {
  const om::Transcript t = joint_run(0.0, 1, om::Regime::zero_mixed, 10);
  om::GrowthParams prm;
  const auto rep = om::check_growth_bounds(t, om::GrowthVariant::fixed_growth_lower, prm);
  EXPECT_EQ(rep.status, om::CheckStatus::skipped);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.detail.rfind("NOT_TIMID", 0), 0u);
}

TEST(Growth, LowerBoundFailsForInflatedCapitalGap) {
  om::GrowthSeries s;
  s.log_K_I = {om::LogCapital{}};
  s.log_K_II = {om::LogCapital::from_log(-10.0)};
  s.kl_cum = {0.0};
  om::GrowthParams prm;
  prm.horizon = 4;
  EXPECT_FALSE(om::check_growth_series(s, om::GrowthVariant::fixed_growth_lower, prm).pass());
}

TEST(Constants, LargeRatioAndTruncatedLog) {
  EXPECT_NEAR(om::lemma6_constant(0.5), 3.5018565, 1e-7);
  EXPECT_NEAR(om::lemma6_constant(0.0), 3.2295961, 1e-7);
  EXPECT_NEAR(om::lemma7_constant(0.5), 17.4872127, 1e-7);
  EXPECT_THROW(om::lemma6_constant(1.0), om::Error);
  EXPECT_THROW(om::lemma7_constant(0.0), om::Error);
}

TEST(Constants, TruncatedLogAtE) {
  const double x[] = {std::numbers::e};
  const auto rep = om::check_lemma7(0.5, x);
  EXPECT_NEAR(rep.left[0], 5.4365637, 1e-7);
  EXPECT_NEAR(rep.right[0], 8.6567487, 1e-7);
  EXPECT_TRUE(rep.pass());
}

TEST(Constants, LargeRatioOnWorkedPair) {
  const auto dp = om::mixture_densities({0.9, 0.1}, {0.1, 0.9});
  for (double a : {-0.9, 0.0, 0.9}) EXPECT_TRUE(om::check_lemma6(dp, a).pass());
}

TEST(Relations, AllSixPassOnWorkedPair) {
  std::vector<std::pair<om::Distribution, om::Distribution>> pairs;
  pairs.emplace_back(om::Distribution{0.5, 0.5}, om::Distribution{0.9, 0.1});
  pairs.emplace_back(om::Distribution{1.0, 0.0}, om::Distribution{0.0, 1.0});
  pairs.emplace_back(om::Distribution{0.2, 0.8, 0.0}, om::Distribution{0.3, 0.3, 0.4});
  const auto reports = om::check_divergence_relations(pairs, om::default_alpha_grid());
  ASSERT_EQ(reports.size(), 6u);
  for (const auto& r : reports) EXPECT_TRUE(r.pass()) << r.name;
}

TEST(Helpers, LogSpacedGrid) {
  const auto g = om::log_spaced(1e-6, 1e3, 10);
  ASSERT_EQ(g.size(), 10u);
  EXPECT_DOUBLE_EQ(g.front(), 1e-6);
  EXPECT_NEAR(g.back(), 1e3, 1e-9);
  EXPECT_EQ(om::default_alpha_grid().front(), -0.99);
}
