#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "opinion_merge/config.hpp"
#include "opinion_merge/io.hpp"
#include "opinion_merge/runner.hpp"

namespace om = opinion_merge;

namespace {

om::ErrorCode code_of(const std::string& text) {
  try {
    om::parse_config_string(text, false);
  } catch (const om::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return om::ErrorCode::dimension_mismatch;
}

std::string message_of(const std::string& text) {
  try {
    om::parse_config_string(text, false);
  } catch (const om::Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST(Config, Defaults) {
  const om::RunConfig cfg = om::parse_config_string("", false);
  EXPECT_EQ(cfg.horizon, 100u);
  EXPECT_EQ(cfg.regime, "drift");
  EXPECT_EQ(cfg.sceptic_I, "constant");
  EXPECT_TRUE(cfg.checks.empty());
}

TEST(Config, FullSchema) {
  const om::RunConfig cfg = om::parse_config_string(
      "[run]\nprotocol = modified\nhorizon = 7\nseed = 9\n"
      "[scenario]\nregime = fixed\np_I = 0.2,0.3,0.5\np_II = 0.5,0.3,0.2\nreality = fixed\nreality_outcome = 2\n"
      "[sceptics]\nsceptic_I = big_alpha\nsceptic_II = random\nalpha = -3\nset_aside = true\n"
      "[checks]\nlist = big_alpha, agreement\n",
      false);
  EXPECT_EQ(cfg.protocol, om::ProtocolKind::modified);
  EXPECT_EQ(cfg.outcomes, 3u);
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.reality_outcome, 2u);
  EXPECT_TRUE(cfg.set_aside);
  EXPECT_EQ(cfg.checks, (std::vector<std::string>{"big_alpha", "agreement"}));
}

TEST(Config, UnknownKeysAndSectionsAreErrors) {
  EXPECT_EQ(code_of("[run]\nhorizn = 5\n"), om::ErrorCode::parse_error);
  EXPECT_EQ(code_of("[output]\npath = x\n"), om::ErrorCode::parse_error);
  EXPECT_EQ(code_of("[run]\nhorizon = five\n"), om::ErrorCode::parse_error);
  EXPECT_EQ(code_of("[run]\nhorizon = 2.5\n"), om::ErrorCode::parse_error);
}

TEST(Config, PreconditionsAreValidated) {
  EXPECT_EQ(code_of("[sceptics]\nalpha = 1\n"), om::ErrorCode::invalid_parameter);
  EXPECT_NE(message_of("[sceptics]\nalpha = 1\n").find("sceptics.alpha"), std::string::npos);
  EXPECT_EQ(code_of("[sceptics]\nsceptic_I = big_alpha\nalpha = 0\n"), om::ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of("[sceptics]\nsceptic_II = criterion\n"), om::ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of("[checks]\nlist = magic\n"), om::ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of("[scenario]\nc = 1\n"), om::ErrorCode::invalid_parameter);
  EXPECT_EQ(code_of("[scenario]\nregime = fixed\np_I = 0.5,0.5\np_II = 0.3\n"),
            om::ErrorCode::invalid_parameter);
}

TEST(Config, EnvironmentSeedOverrides) {
  ::setenv(om::kSeedEnvVar, "77", 1);
  EXPECT_EQ(om::parse_config_string("[run]\nseed = 3\n").seed, 77u);
  EXPECT_EQ(om::parse_config_string("[run]\nseed = 3\n", false).seed, 3u);
  ::setenv(om::kSeedEnvVar, "seventy", 1);
  EXPECT_THROW(om::parse_config_string("[run]\nseed = 3\n"), om::Error);
  ::unsetenv(om::kSeedEnvVar);
  EXPECT_EQ(om::parse_config_string("[run]\nseed = 3\n").seed, 3u);
}

TEST(Runner, MinimalAgreeRun) {
  const auto cfg = om::parse_config_string("[run]\nhorizon = 5\n[scenario]\nregime = agree\n", false);
  const om::RunResult r = om::execute(cfg);
  ASSERT_EQ(r.transcript.size(), 5u);
  for (const auto& round : r.transcript.rounds) {
    EXPECT_EQ(round.log_K_I.log_value().value(), 0.0);
    EXPECT_EQ(round.log_K_II.log_value().value(), 0.0);
  }
}

TEST(Runner, AlphaPairPassesIdentityCheck) {
  const auto cfg = om::parse_config_string(
      "[sceptics]\nsceptic_I = alpha_pair\nsceptic_II = alpha_pair\n[checks]\nlist = small_alpha\n", false);
  const om::RunResult r = om::execute(cfg);
  ASSERT_EQ(r.reports.size(), 1u);
  EXPECT_TRUE(r.reports[0].pass());
}

TEST(Runner, EveryStrategyNameRuns) {
  for (const std::string& name : om::sceptic_I_names()) {
    std::string alpha = name == "big_alpha" ? "-2" : "0.3";
    const auto cfg = om::parse_config_string("[run]\nhorizon = 12\n[scenario]\nregime = timid\n"
                                             "[sceptics]\nsceptic_I = " + name +
                                                 "\nsceptic_II = random\nk_max = 4\nc_max = 4\nalpha = " + alpha + "\n",
                                             false);
    EXPECT_NO_THROW(om::execute(cfg)) << name;
  }
}

TEST(Runner, GrowthChecksOnTimidPlay) {
  const auto cfg = om::parse_config_string(
      "[run]\nhorizon = 100\n[scenario]\nregime = timid\n"
      "[sceptics]\nsceptic_I = growth_joint_fixed\nsceptic_II = growth_joint_fixed\n"
      "[checks]\nlist = small_alpha, fixed_growth_lower, eps_growth_lower\n",
      false);
  for (const auto& rep : om::execute(cfg).reports) EXPECT_TRUE(rep.pass()) << rep.name;
}

TEST(Runner, AgreementCheckFlagsExceptionalHits) {
  const auto cfg = om::parse_config_string(
      "[run]\nprotocol = modified\nhorizon = 3\n[scenario]\nregime = fixed\np_I = 0.5,0.5,0\np_II = 0.5,0.3,0.2\n"
      "reality = fixed\nreality_outcome = 2\n[checks]\nlist = agreement\n",
      false);
  const auto r = om::execute(cfg);
  EXPECT_FALSE(r.reports[0].pass());
}

TEST(Runner, DerivedSeedsDiffer) {
  EXPECT_NE(om::derive_seed(1, 1), om::derive_seed(1, 2));
  EXPECT_NE(om::derive_seed(1, 1), om::derive_seed(2, 1));
}
