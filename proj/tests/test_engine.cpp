#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "opinion_merge/engine.hpp"
#include "opinion_merge/scenarios.hpp"

namespace om = opinion_merge;
using om::BettingFunction;
using om::CompetitiveContext;
using om::Distribution;

namespace {

class Fixed final : public om::ScepticStrategy {
 public:
  explicit Fixed(BettingFunction f) : f_(std::move(f)) {}
  BettingFunction bet(const CompetitiveContext&) override { return f_; }

 private:
  BettingFunction f_;
};

// Records what it saw when asked to bet.
class Spy final : public om::ScepticStrategy {
 public:
  BettingFunction bet(const CompetitiveContext& ctx) override {
    saw_f_II.push_back(ctx.f_II != nullptr);
    history_sizes.push_back(ctx.history.size());
    return BettingFunction::constant(ctx.p_I.size());
  }
  void observe(const CompetitiveContext&, std::size_t outcome) override { outcomes.push_back(outcome); }

  std::vector<bool> saw_f_II;
  std::vector<std::size_t> history_sizes;
  std::vector<std::size_t> outcomes;
};

om::FixedForecasts coin_pair() { return om::FixedForecasts({0.5, 0.5}, {0.9, 0.1}); }

}  // namespace

TEST(Engine, AdvanceAbsorbsAtZeroAndInfinity) {
  const om::LogCapital zero = om::LogCapital::from_capital(0.0);
  EXPECT_EQ(om::advance(zero, om::kInfinity).state(), om::LogCapital::State::neg_inf);
  const om::LogCapital inf = om::LogCapital::from_capital(om::kInfinity);
  EXPECT_EQ(om::advance(inf, 0.0).state(), om::LogCapital::State::pos_inf);
  EXPECT_DOUBLE_EQ(om::advance(om::LogCapital{}, 2.0).capital().value(), 2.0);
}

TEST(Engine, ConstantScepticsKeepUnitCapital) {
  auto fc = coin_pair();
  om::ConstantStrategy<CompetitiveContext> s_I;
  om::ConstantStrategy<CompetitiveContext> s_II;
  om::SamplingReality reality(om::Side::I, 3);
  const om::Transcript t = om::run_competitive(fc, s_I, s_II, reality, 5);
  ASSERT_EQ(t.size(), 5u);
  for (const auto& r : t.rounds) {
    EXPECT_EQ(r.log_K_I.log_value().value(), 0.0);
    EXPECT_EQ(r.log_K_II.log_value().value(), 0.0);
  }
  EXPECT_EQ(t.rounds[2].index, 3u);
}

TEST(Engine, Sceptic1SeesSceptic2BetAndPriorHistory) {
  auto fc = coin_pair();
  Spy s_I;
  Spy s_II;
  om::ScriptedReality reality({1, 0, 1});
  const om::Transcript t = om::run_competitive(fc, s_I, s_II, reality, 3);
  EXPECT_EQ(s_I.saw_f_II, (std::vector<bool>{true, true, true}));
  EXPECT_EQ(s_II.saw_f_II, (std::vector<bool>{false, false, false}));
  EXPECT_EQ(s_I.history_sizes, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(s_I.outcomes, (std::vector<std::size_t>{1, 0, 1}));
  EXPECT_EQ(t.rounds[1].outcome, 0u);
}

TEST(Engine, CapitalsMultiplyAlongThePath) {
  auto fc = coin_pair();
  Fixed s_I(BettingFunction{1.5, 0.5});
  Fixed s_II(BettingFunction{0.5, 5.5});
  om::ScriptedReality reality({0, 0, 1});
  const om::Transcript t = om::run_competitive(fc, s_I, s_II, reality, 3);
  EXPECT_NEAR(t.log_K_I().capital().value(), 1.5 * 1.5 * 0.5, 1e-15);
  EXPECT_NEAR(t.log_K_II().capital().value(), 0.5 * 0.5 * 5.5, 1e-14);
}

TEST(Engine, InvalidBetNamesTheSceptic) {
  auto fc = coin_pair();
  Fixed good(BettingFunction{1.0, 1.0});
  Fixed bad(BettingFunction{2.0, 2.0});
  om::ScriptedReality reality({0});
  try {
    om::run_competitive(fc, bad, good, reality, 1);
    FAIL() << "expected INVALID_BET";
  } catch (const om::Error& e) {
    EXPECT_EQ(e.code(), om::ErrorCode::invalid_bet);
    EXPECT_NE(std::string(e.what()).find("Sceptic I"), std::string::npos);
    EXPECT_EQ(std::string(e.what()).find("Sceptic II"), std::string::npos);
  }
  try {
    om::run_competitive(fc, good, bad, reality, 1);
    FAIL() << "expected INVALID_BET";
  } catch (const om::Error& e) {
    EXPECT_NE(std::string(e.what()).find("Sceptic II"), std::string::npos);
  }
}

TEST(Engine, ModifiedProtocolRecordsExceptionalPairs) {
  om::FixedForecasts fc({0.5, 0.5, 0.0}, {0.0, 0.6, 0.4});
  om::ConstantStrategy<CompetitiveContext> s_I;
  om::ConstantStrategy<CompetitiveContext> s_II;
  om::ScriptedReality reality({0, 1});
  const om::Transcript t = om::run_modified(fc, s_I, s_II, reality, 2);
  EXPECT_EQ(t.kind, om::ProtocolKind::modified);
  ASSERT_TRUE(t.rounds[0].exceptional.has_value());
  EXPECT_EQ(t.rounds[0].exceptional->e_II, om::OutcomeSet{0});
  EXPECT_TRUE(t.rounds[0].hit_exceptional());
  EXPECT_FALSE(t.rounds[1].hit_exceptional());
  EXPECT_TRUE(t.agreement_violated());
}

TEST(Engine, ModifiedProtocolRejectsBadExceptionalPair) {
  auto fc = coin_pair();
  om::ConstantStrategy<CompetitiveContext> s_I;
  om::ConstantStrategy<CompetitiveContext> s_II;
  om::ScriptedReality reality({0});
  const om::ExceptionalProvider bad = [](const Distribution&, const Distribution&, const om::DensityPair&) {
    return om::ExceptionalPair{{0}, {}};
  };
  try {
    om::run_modified(fc, s_I, s_II, reality, 1, bad);
    FAIL();
  } catch (const om::Error& e) {
    EXPECT_EQ(e.code(), om::ErrorCode::invalid_exceptional);
  }
}

namespace {

class Opponents final : public om::SemimartingaleOpponents {
 public:
  explicit Opponents(std::vector<double> xi) : xi_(std::move(xi)) {}
  Distribution forecast(const om::SemimartingaleTranscript&) override { return Distribution{0.5, 0.5}; }
  std::vector<double> test_function(const om::SemimartingaleTranscript&, const Distribution&) override {
    return xi_;
  }
  std::size_t outcome(const om::SemimartingaleContext& ctx, const BettingFunction&) override {
    return ctx.round % 2;
  }

 private:
  std::vector<double> xi_;
};

class Doubler final : public om::SemimartingaleStrategy {
 public:
  BettingFunction bet(const om::SemimartingaleContext&) override { return BettingFunction{1.5, 0.5}; }
};

}  // namespace

TEST(Semimartingale, MeanConstraintIsEnforced) {
  Doubler s;
  Opponents up({1.0, 0.0});
  EXPECT_NO_THROW(om::run_semimartingale(om::MeanConstraint::submartingale,
                                         om::Representation::multiplicative, up, s, 2));
  try {
    om::run_semimartingale(om::MeanConstraint::martingale, om::Representation::multiplicative, up, s, 2);
    FAIL();
  } catch (const om::Error& e) {
    EXPECT_EQ(e.code(), om::ErrorCode::invalid_xi);
  }
  EXPECT_THROW(om::run_semimartingale(om::MeanConstraint::supermartingale,
                                      om::Representation::multiplicative, up, s, 2),
               om::Error);
}

TEST(Semimartingale, AdditiveMatchesMultiplicative) {
  Doubler s;
  Opponents o({1.0, -1.0});
  const auto mult = om::run_semimartingale(om::MeanConstraint::martingale,
                                           om::Representation::multiplicative, o, s, 6);
  const auto add = om::run_semimartingale(om::MeanConstraint::martingale,
                                          om::Representation::additive, o, s, 6);
  for (std::size_t n = 0; n < 6; ++n) {
    EXPECT_NEAR(mult.rounds[n].log_K.capital().value(), add.rounds[n].log_K.capital().value(), 1e-14);
  }
  // Round 2 starts from capital 0.5 * ... : outcome 1 in round 1 gives K = 0.5.
  EXPECT_DOUBLE_EQ(add.rounds[1].g[0].value(), 0.25);
  EXPECT_DOUBLE_EQ(add.rounds[1].g[1].value(), -0.25);
}

TEST(Semimartingale, AdditiveFormNeedsFiniteCapital) {
  const BettingFunction f{1.5, 0.5};
  const auto g = om::additive_from_multiplicative(f, om::LogCapital::from_capital(2.0));
  EXPECT_DOUBLE_EQ(g[0].value(), 1.0);
  EXPECT_DOUBLE_EQ(g[1].value(), -1.0);
  try {
    om::additive_from_multiplicative(f, om::LogCapital::from_capital(om::kInfinity));
    FAIL();
  } catch (const om::Error& e) {
    EXPECT_EQ(e.code(), om::ErrorCode::nonfinite_capital);
  }
}
