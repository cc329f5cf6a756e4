#include <cmath>

#include <gtest/gtest.h>

#include "opinion_merge/divergence.hpp"

namespace om = opinion_merge;
using om::AlphaParam;
using om::kInfinity;

namespace {

om::DensityPair worked() { return om::mixture_densities({0.5, 0.5}, {0.9, 0.1}); }

}  // namespace

TEST(AlphaParamTest, RejectsOnes) {
  EXPECT_THROW(AlphaParam(1.0), om::Error);
  EXPECT_THROW(AlphaParam(-1.0), om::Error);
  EXPECT_THROW(AlphaParam(NAN), om::Error);
  EXPECT_DOUBLE_EQ(AlphaParam(0.5).exponent_I(), 0.25);
  EXPECT_DOUBLE_EQ(AlphaParam(0.5).exponent_II(), 0.75);
}

TEST(Divergence, HellingerAtZero) {
  const auto dp = worked();
  EXPECT_NEAR(om::hellinger_integral(dp, AlphaParam(0.0)).value(), 0.894427191, 1e-9);
  EXPECT_NEAR(om::div_paren(dp, AlphaParam(0.0)).value(), 0.422291236, 1e-9);
  EXPECT_NEAR(om::div_bracket(dp, AlphaParam(0.0)).value(), 0.446287103, 1e-9);
}

TEST(Divergence, BigAlphaValues) {
  const auto dp = worked();
  EXPECT_NEAR(om::hellinger_integral(dp, AlphaParam(-3.0)).value(), 2.7777778, 1e-7);
  EXPECT_NEAR(om::div_paren(dp, AlphaParam(-3.0)).value(), 0.8888889, 1e-7);
  EXPECT_NEAR(om::div_bracket(dp, AlphaParam(-3.0)).value(), 0.5108256, 1e-7);
  EXPECT_NEAR(om::hellinger_integral(dp, AlphaParam(3.0)).value(), 1.64, 1e-9);
  EXPECT_NEAR(om::div_paren(dp, AlphaParam(3.0)).value(), 0.32, 1e-9);
  EXPECT_NEAR(om::div_bracket(dp, AlphaParam(3.0)).value(), 0.2473481, 1e-7);
}

TEST(Divergence, IntermediateAlphas) {
  const auto dp = worked();
  EXPECT_NEAR(om::div_paren(dp, AlphaParam(0.5)).value(), 0.3917819, 1e-7);
  EXPECT_NEAR(om::div_bracket(dp, AlphaParam(0.5)).value(), 0.4069178, 1e-7);
  EXPECT_NEAR(om::div_paren(dp, AlphaParam(-0.5)).value(), 0.4612467, 1e-7);
  EXPECT_NEAR(om::div_bracket(dp, AlphaParam(-0.5)).value(), 0.4824220, 1e-7);
}

TEST(Divergence, KlChi2Renyi) {
  const auto dp = worked();
  EXPECT_NEAR(om::kl_divergence(dp).value(), 0.5108256, 1e-7);
  EXPECT_NEAR(om::chi2_divergence(dp).value(), 0.8888889, 1e-7);
  EXPECT_NEAR(om::renyi_info_gain(dp, 0.5).value(), 0.3219281, 1e-7);
  EXPECT_NEAR(om::renyi_info_gain(dp, 2.0).value(), 1.4739312, 1e-7);
  EXPECT_THROW(om::renyi_info_gain(dp, 1.0), om::Error);
}

TEST(Divergence, IdenticalForecastsGiveZero) {
  const auto dp = om::mixture_densities({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5});
  for (double a : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    EXPECT_NEAR(om::div_paren(dp, AlphaParam(a)).value(), 0.0, 1e-15);
    EXPECT_NEAR(om::div_bracket(dp, AlphaParam(a)).value(), 0.0, 1e-15);
  }
  EXPECT_NEAR(om::kl_divergence(dp).value(), 0.0, 1e-15);
}

TEST(Divergence, MutuallySingular) {
  const auto dp = om::mixture_densities({1.0, 0.0}, {0.0, 1.0});
  EXPECT_EQ(om::hellinger_integral(dp, AlphaParam(0.0)).value(), 0.0);
  EXPECT_DOUBLE_EQ(om::div_paren(dp, AlphaParam(0.0)).value(), 4.0);
  EXPECT_EQ(om::div_bracket(dp, AlphaParam(0.0)).value(), kInfinity);
  EXPECT_EQ(om::kl_divergence(dp).value(), kInfinity);
  EXPECT_EQ(om::chi2_divergence(dp).value(), kInfinity);
}

TEST(Divergence, OneSidedZeroGivesInfiniteIntegralForLargeAlpha) {
  // beta_I = 0 on outcome 1, so exponent_I < 0 for alpha > 1 is an infinite power.
  const auto dp = om::mixture_densities({1.0, 0.0}, {0.5, 0.5});
  EXPECT_EQ(om::hellinger_integral(dp, AlphaParam(3.0)).value(), kInfinity);
  EXPECT_EQ(om::div_bracket(dp, AlphaParam(3.0)).value(), kInfinity);
  EXPECT_TRUE(om::hellinger_integral(dp, AlphaParam(-3.0)).is_finite());
}
