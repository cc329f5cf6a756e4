#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "opinion_merge/divergence.hpp"
#include "opinion_merge/engine.hpp"
#include "opinion_merge/forcers.hpp"
#include "opinion_merge/mixing.hpp"
#include "opinion_merge/scenarios.hpp"
#include "opinion_merge/strategies.hpp"
#include "opinion_merge/verify.hpp"

namespace opinion_merge {

/// Folds many reports of one kind into a single report; the detail names
/// the first failing case.
class Aggregate {
 public:
  Aggregate(std::string name, double tolerance) : rep_(make_report(std::move(name), tolerance)) {}

  void add(const CheckReport& r, const std::string& label) {
    ++cases_;
    if (r.status == CheckStatus::skipped) {
      ++skipped_;
      if (first_skip_.empty()) first_skip_ = label + ": " + r.detail;
      return;
    }
    if (r.max_violation > rep_.max_violation) rep_.max_violation = r.max_violation;
    if (!r.pass() && rep_.detail.empty()) rep_.detail = "first failure: " + label;
  }

  // A scalar check folded in directly.
  void add_value(double violation, const std::string& label) {
    CheckReport r = make_report(label, rep_.tolerance);
    r.record(violation, 0.0, violation);
    r.finish();
    add(r, label);
  }

  CheckReport finish() {
    CheckReport out = rep_;
    if (cases_ > 0 && skipped_ == cases_) {
      out.status = CheckStatus::skipped;
      out.detail = first_skip_;
      return out;
    }
    out.finish();
    std::string summary = std::to_string(cases_) + " cases";
    if (skipped_) summary += ", " + std::to_string(skipped_) + " skipped (" + first_skip_ + ")";
    out.detail = out.detail.empty() ? summary : summary + "; " + out.detail;
    return out;
  }

 private:
  CheckReport rep_;
  std::size_t cases_ = 0;
  std::size_t skipped_ = 0;
  std::string first_skip_;
};

/// Seeded forecast pairs over m in {2..6} from the drift, timid and
/// zero-carrying regimes.
inline std::vector<std::pair<Distribution, Distribution>> random_pairs(std::uint64_t seed,
                                                                       std::size_t count,
                                                                       bool full_support_only) {
  Rng pick(seed);
  std::vector<std::pair<Distribution, Distribution>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t m = 2 + pick.index(5);
    const Regime regimes[] = {Regime::drift, Regime::timid, Regime::zero_mixed, Regime::singular,
                              Regime::agree};
    const Regime r = full_support_only ? (i % 2 ? Regime::drift : Regime::timid) : regimes[i % 5];
    ScenarioForecasts gen(seed * 1000003ULL + i, m, r, 4.0);
    out.push_back(gen.next());
  }
  return out;
}

inline std::string case_label(const std::string& what, std::uint64_t seed, double alpha,
                              std::size_t m) {
  return what + " seed=" + std::to_string(seed) + " alpha=" + format_number(alpha) +
         " m=" + std::to_string(m);
}

// ---------------------------------------------------------------------------
// Power strategies

/// Joint power strategy against every regime and both kinds of Reality.
inline CheckReport suite_small_alpha_identity(const std::vector<std::uint64_t>& seeds,
                                              std::size_t horizon = 200) {
  Aggregate agg("power_pair_identity", kIdentityTolerance);
  for (double a : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    for (std::size_t m : {2u, 5u}) {
      for (Regime regime : {Regime::agree, Regime::drift, Regime::timid}) {
        for (bool adversarial : {true, false}) {
          for (std::uint64_t seed : seeds) {
            ScenarioForecasts fc(seed, m, regime, 2.0);
            ScepticPair pair = alpha_pair(AlphaParam(a));
            std::unique_ptr<Reality> reality;
            if (adversarial) {
              reality = std::make_unique<AdversarialReality>(RealityObjective::max_ratio);
            } else {
              reality = std::make_unique<SamplingReality>(Side::I, seed + 77);
            }
            const Transcript t = run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, *reality, horizon);
            agg.add(check_small_alpha_identity(t, AlphaParam(a)),
                    case_label(std::string(regime_name(regime)) + (adversarial ? " max_ratio" : " sample_I"),
                               seed, a, m));
          }
        }
      }
    }
  }
  return agg.finish();
}

/// Closed-form one-round anchor at alpha = 0 on (0.5,0.5)/(0.9,0.1).
inline CheckReport suite_one_round_anchor() {
  Aggregate agg("one_round_anchor", 1e-6);
  const Distribution p_I{0.5, 0.5};
  const Distribution p_II{0.9, 0.1};
  const DensityPair dp = mixture_densities(p_I, p_II);
  const AlphaPairRule rule(AlphaParam(0.0), AlphaPairMode::joint);
  const AlphaMoves mv = rule.moves(dp);
  const double want_I[] = {1.5, 0.5};
  const double want_II[] = {0.8333333, 2.5};
  for (std::size_t i = 0; i < 2; ++i) {
    agg.add_value(std::abs(mv.f_I[i].value() - want_I[i]), "f_I[" + std::to_string(i) + "]");
    agg.add_value(std::abs(mv.f_II[i].value() - want_II[i]), "f_II[" + std::to_string(i) + "]");
    const double lhs = 2.0 * std::log(mv.f_I[i].value()) + 2.0 * std::log(mv.f_II[i].value());
    agg.add_value(std::abs(lhs - 0.4462871), "log combination at outcome " + std::to_string(i));
  }
  return agg.finish();
}

/// Sceptic I alone with alpha < -1 against seeded random Sceptic II bets.
inline CheckReport suite_big_alpha_bound(const std::vector<std::uint64_t>& seeds,
                                         std::size_t horizon = 200) {
  Aggregate agg("big_alpha_bound_sweep", kInequalitySlack);
  for (double a : {-3.0, -2.0, -1.5}) {
    for (std::size_t m : {2u, 5u}) {
      for (Regime regime : {Regime::drift, Regime::timid, Regime::zero_mixed}) {
        for (std::uint64_t seed : seeds) {
          ScenarioForecasts fc(seed, m, regime, 2.0);
          auto sceptic_I = big_alpha_sceptic_I(a);
          RandomSceptic<CompetitiveContext> sceptic_II(seed + 1000);
          SamplingReality reality(seed % 2 ? Side::I : Side::II, seed + 2000);
          const Transcript t = run_competitive(fc, *sceptic_I, sceptic_II, reality, horizon);
          agg.add(check_big_alpha_bound(t, a), case_label(regime_name(regime), seed, a, m));
        }
      }
    }
  }
  return agg.finish();
}

/// Singular rounds send exactly one capital to +inf with the identity
/// intact; one-sided zeros set the stop flag and the identity holds with
/// indefinite left sides.
inline CheckReport suite_exceptional_paths() {
  Aggregate agg("exceptional_paths", kIdentityTolerance);
  for (double a : {-0.5, 0.0, 0.5}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ScenarioForecasts fc(seed, 2 + seed % 3, Regime::singular);
      ScepticPair pair = alpha_pair(AlphaParam(a));
      SamplingReality reality(Side::I, seed);
      const Transcript t = run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, reality, 20);
      const bool inf_I = t.rounds[0].log_K_I.state() == LogCapital::State::pos_inf;
      const bool inf_II = t.rounds[0].log_K_II.state() == LogCapital::State::pos_inf;
      const std::string label = case_label("singular", seed, a, t.rounds[0].p_I.size());
      agg.add_value(inf_I != inf_II ? 0.0 : 1.0, label + " exactly one infinite capital");
      agg.add(check_small_alpha_identity(t, AlphaParam(a)), label);
    }
  }
  for (double a : {-3.0, -0.5, 0.0, 0.5, 3.0}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      ScenarioForecasts fc(seed, 3, Regime::zero_mixed);
      auto s_I = std::make_unique<AlphaSceptic>(AlphaParam(a), Side::I);
      auto s_II = std::make_unique<AlphaSceptic>(AlphaParam(a), Side::II);
      AdversarialReality reality(RealityObjective::max_ratio);
      const Transcript t = run_competitive(fc, *s_I, *s_II, reality, 50);
      const std::string label = case_label("zero_mixed", seed, a, 3);
      const bool stopped = s_I->rule().stopped() && s_II->rule().stopped();
      agg.add_value(stopped ? 0.0 : 1.0, label + " stop flag");
      const CheckReport rep = check_small_alpha_identity(t, AlphaParam(a));
      bool indefinite = false;
      for (double l : rep.left) indefinite = indefinite || std::isnan(l);
      if (std::abs(a) < 1.0) agg.add_value(indefinite ? 0.0 : 1.0, label + " indefinite round");
      agg.add(rep, label);
    }
  }
  return agg.finish();
}

// ---------------------------------------------------------------------------
// Growth rates on c-timid plays

inline CheckReport suite_fixed_growth(const std::vector<std::uint64_t>& seeds, double c = 2.0) {
  Aggregate agg("fixed_horizon_growth", kInequalitySlack);
  GrowthParams prm;
  prm.c = c;
  for (std::size_t horizon : {4u, 25u, 100u, 400u}) {
    prm.horizon = horizon;
    for (std::size_t m : {2u, 5u}) {
      for (std::uint64_t seed : seeds) {
        const std::string label = "N=" + std::to_string(horizon) + " m=" + std::to_string(m) +
                                  " seed=" + std::to_string(seed);
        {
          ScenarioForecasts fc(seed, m, Regime::timid, c);
          ScepticPair pair = growth_joint_fixed(horizon);
          SamplingReality reality(Side::II, seed + 5);
          const Transcript t = run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, reality, horizon);
          agg.add(check_growth_bounds(t, GrowthVariant::fixed_growth_lower, prm), label + " lower");
        }
        {
          ScenarioForecasts fc(seed, m, Regime::timid, c);
          auto sceptic_I = growth_sceptic_I_fixed(horizon);
          RandomSceptic<CompetitiveContext> sceptic_II(seed + 9);
          AdversarialReality reality(RealityObjective::min_ratio);
          const Transcript t = run_competitive(fc, *sceptic_I, sceptic_II, reality, horizon);
          agg.add(check_growth_bounds(t, GrowthVariant::fixed_growth_upper, prm), label + " upper");
        }
      }
    }
  }
  return agg.finish();
}

/// Anytime strategies: the fixed-epsilon bound for every component and the
/// 2 ln k penalized bound for the mixtures.
inline CheckReport suite_anytime_growth(const std::vector<std::uint64_t>& seeds, std::size_t horizon = 2000,
                              std::size_t k_max = 16, double c = 2.0) {
  Aggregate agg("anytime_growth", kInequalitySlack);
  GrowthParams prm;
  prm.c = c;
  prm.k_max = k_max;
  for (std::uint64_t seed : seeds) {
    const std::size_t m = 2 + seed % 3;
    const std::string label = "seed=" + std::to_string(seed) + " m=" + std::to_string(m);
    {
      ScenarioForecasts fc(seed, m, Regime::timid, c);
      AnytimePair pair = growth_joint_anytime(k_max);
      pair.sceptic_I->record_history(true);
      pair.sceptic_II->record_history(true);
      SamplingReality reality(Side::II, seed + 3);
      const Transcript t = run_competitive(fc, *pair.sceptic_I, *pair.sceptic_II, reality, horizon);
      agg.add(check_growth_bounds(t, GrowthVariant::anytime_growth_lower, prm), label + " anytime lower");
      const GrowthSeries master = growth_series(t);
      for (std::size_t j = 0; j + 2 <= k_max; ++j) {
        GrowthSeries s;
        s.kl_cum = master.kl_cum;
        for (std::size_t n = 0; n < t.size(); ++n) {
          s.log_K_I.push_back(pair.sceptic_I->history()[n][j]);
          s.log_K_II.push_back(pair.sceptic_II->history()[n][j]);
        }
        GrowthParams one = prm;
        one.epsilon = anytime_epsilon(j + 2);
        agg.add(check_growth_series(s, GrowthVariant::eps_growth_lower, one),
                label + " k=" + std::to_string(j + 2) + " lower");
      }
    }
    {
      ScenarioForecasts fc(seed, m, Regime::timid, c);
      auto sceptic_I = growth_sceptic_I_anytime(k_max);
      sceptic_I->record_history(true);
      RandomSceptic<CompetitiveContext> sceptic_II(seed + 4);
      SamplingReality reality(Side::I, seed + 6);
      const Transcript t = run_competitive(fc, *sceptic_I, sceptic_II, reality, horizon);
      agg.add(check_growth_bounds(t, GrowthVariant::anytime_growth_upper, prm), label + " anytime upper");
      const GrowthSeries master = growth_series(t);
      for (std::size_t j = 0; j + 2 <= k_max; ++j) {
        GrowthSeries s;
        s.kl_cum = master.kl_cum;
        s.log_K_II = master.log_K_II;
        for (std::size_t n = 0; n < t.size(); ++n) s.log_K_I.push_back(sceptic_I->history()[n][j]);
        GrowthParams one = prm;
        one.epsilon = anytime_epsilon(j + 2);
        agg.add(check_growth_series(s, GrowthVariant::eps_growth_upper, one),
                label + " k=" + std::to_string(j + 2) + " upper");
      }
    }
  }
  return agg.finish();
}

// ---------------------------------------------------------------------------
// Set-aside, mixtures, forcers and constants

/// Seeded martingale opponent: interior forecasts, centered random xi,
/// outcomes drawn from the forecast.
class RandomMartingaleOpponents final : public SemimartingaleOpponents {
 public:
  RandomMartingaleOpponents(std::uint64_t seed, std::size_t m, double scale)
      : rng_(seed), m_(m), scale_(scale) {}

  Distribution forecast(const SemimartingaleTranscript&) override { return interior_point(rng_, m_); }

  std::vector<double> test_function(const SemimartingaleTranscript&, const Distribution& p) override {
    std::vector<double> xi(m_);
    for (double& v : xi) v = rng_.uniform(-scale_, scale_);
    return submartingale_center(xi, p);
  }

  std::size_t outcome(const SemimartingaleContext& ctx, const BettingFunction&) override {
    return sample_outcome(rng_, ctx.p);
  }

 private:
  Rng rng_;
  std::size_t m_;
  double scale_;
};

/// Quadratic forcer capital against 1 + (S^2 - V)/C recomputed from the
/// transcript, frozen once V exceeds C.
inline CheckReport suite_forcer(std::size_t runs = 100, std::size_t horizon = 60) {
  Aggregate agg("forcer_closed_form", kCrossCheckTolerance);
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    Rng pick(seed);
    const std::size_t m = 2 + pick.index(4);
    const double budget = pick.uniform(1.0, 20.0);
    RandomMartingaleOpponents opp(seed, m, pick.uniform(0.2, 1.5));
    auto forcer = quadratic_forcer(budget);
    const Representation rep = seed % 2 ? Representation::multiplicative : Representation::additive;
    const SemimartingaleTranscript t =
        run_semimartingale(MeanConstraint::martingale, rep, opp, *forcer, horizon);
    double s = 0.0;
    double v = 0.0;
    double expected = 1.0;
    bool within = true;
    double worst = 0.0;
    for (const auto& r : t.rounds) {
      double second = 0.0;
      for (std::size_t i = 0; i < r.p.size(); ++i) second += r.xi[i] * r.xi[i] * r.p[i];
      if (within && v + second <= budget) {
        s += r.xi[r.outcome];
        v += second;
        expected = 1.0 + (s * s - v) / budget;
      } else {
        within = false;
      }
      const double got = std::exp(r.log_K.log_value().value());
      worst = std::max(worst, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
    }
    agg.add_value(worst, "seed=" + std::to_string(seed));
  }
  return agg.finish();
}

/// Inner bets (2, 0) for k + 1 rounds and then (0, 2) on a fair coin with
/// Reality always choosing outcome 0: the inner capital doubles and then
/// collapses, crossing the threshold k times.
class ThresholdCrosser final : public SemimartingaleStrategy {
 public:
  explicit ThresholdCrosser(std::size_t rises) : rises_(rises) {}
  BettingFunction bet(const SemimartingaleContext& ctx) override {
    if (ctx.round <= rises_) return BettingFunction{2.0, 0.0};
    if (ctx.round == rises_ + 1) return BettingFunction{0.0, 2.0};
    return BettingFunction::constant(2);
  }

 private:
  std::size_t rises_;
};

class FairCoinOpponents final : public SemimartingaleOpponents {
 public:
  Distribution forecast(const SemimartingaleTranscript&) override { return Distribution::uniform(2); }
  std::vector<double> test_function(const SemimartingaleTranscript&, const Distribution&) override {
    return {0.0, 0.0};
  }
  std::size_t outcome(const SemimartingaleContext&, const BettingFunction&) override { return 0; }
};

inline CheckReport suite_set_aside() {
  Aggregate agg("set_aside_reserve", 0.0);
  for (std::size_t k : {1u, 5u, 20u}) {
    FairCoinOpponents opp;
    auto sa = set_aside_transform<SemimartingaleContext>(std::make_unique<ThresholdCrosser>(k + 1));
    // Watch the reserve after every round through a thin observer.
    struct Watch final : SemimartingaleStrategy {
      SetAside<SemimartingaleContext>* inner;
      std::vector<double> reserves;
      BettingFunction bet(const SemimartingaleContext& ctx) override { return inner->bet(ctx); }
      void observe(const SemimartingaleContext& ctx, std::size_t outcome) override {
        inner->observe(ctx, outcome);
        reserves.push_back(inner->reserve());
      }
    } watch;
    watch.inner = sa.get();
    const SemimartingaleTranscript t = run_semimartingale(
        MeanConstraint::martingale, Representation::multiplicative, opp, watch, k + 10);
    double worst = 0.0;
    double previous = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      const double capital = std::exp(t.rounds[n].log_K.log_value().value());
      const double reserve = watch.reserves[n];
      worst = std::max(worst, reserve - capital);  // capital >= reserve
      worst = std::max(worst, previous - reserve);  // reserve never decreases
      previous = reserve;
    }
    agg.add_value(worst > 1e-12 ? worst : 0.0, "k=" + std::to_string(k) + " capital vs reserve");
    agg.add_value(std::abs(sa->reserve() - static_cast<double>(k)),
                  "k=" + std::to_string(k) + " crossings");
  }
  return agg.finish();
}

/// Master capital against sum_k p_k K_k, every round, for 3-way mixtures.
inline CheckReport suite_mixture(std::size_t runs = 50, std::size_t horizon = 100) {
  Aggregate agg("mixture_capital", kCrossCheckTolerance);
  for (std::uint64_t seed = 1; seed <= runs; ++seed) {
    Rng pick(seed);
    const std::vector<double> w = dirichlet1(pick, 3);
    const double a = pick.uniform(-0.95, 0.95);
    std::vector<std::unique_ptr<ScepticStrategy>> parts;
    parts.push_back(std::make_unique<AlphaSceptic>(AlphaParam(a), Side::I));
    parts.push_back(std::make_unique<RatioTracker>());
    parts.push_back(std::make_unique<RandomSceptic<CompetitiveContext>>(seed + 17));
    auto mix = mix_strategies(std::move(parts), {w[0], w[1], 1.0 - w[0] - w[1]});
    mix->record_history(true);
    ScenarioForecasts fc(seed, 3, Regime::drift);
    RandomSceptic<CompetitiveContext> sceptic_II(seed + 31);
    SamplingReality reality(Side::II, seed + 43);
    const Transcript t = run_competitive(fc, *mix, sceptic_II, reality, horizon);
    double worst = 0.0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      std::vector<double> logs;
      for (std::size_t k = 0; k < 3; ++k) {
        logs.push_back(std::log(mix->weights()[k]) + mix->history()[n][k].log_value().value());
      }
      const double want = log_sum_exp(logs).value();
      const double got = t.rounds[n].log_K_I.log_value().value();
      worst = std::max(worst, relative_gap(got, want));
    }
    agg.add_value(worst, "seed=" + std::to_string(seed));
  }
  return agg.finish();
}

inline CheckReport suite_large_ratio(std::uint64_t seed = 2024, std::size_t count = 1000) {
  Aggregate agg("lemma6", kCrossCheckTolerance);
  const auto pairs = random_pairs(seed, count, false);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const DensityPair dp = mixture_densities(pairs[i].first, pairs[i].second);
    for (double a : {-0.9, -0.5, 0.0, 0.5, 0.9}) {
      agg.add(check_lemma6(dp, a), "pair " + std::to_string(i) + " alpha=" + format_number(a));
    }
  }
  agg.add_value(std::abs(lemma6_constant(0.0) - 3.2295970) > 1e-6 ? 1.0 : 0.0, "C(0) = 3.2295970");
  return agg.finish();
}

inline CheckReport suite_truncated_log() {
  Aggregate agg("lemma7", kInequalitySlack);
  const std::vector<double> grid = log_spaced(1e-6, 1e3, 10000);
  for (double g : {0.1, 0.3, 0.5, 0.7, 0.9}) agg.add(check_lemma7(g, grid), "gamma=" + format_number(g));
  agg.add_value(std::abs(lemma7_constant(0.5) - 17.4872127) > 1e-6 ? 1.0 : 0.0, "B(0.5) = 17.4872127");
  return agg.finish();
}

inline std::vector<CheckReport> suite_divergence(std::uint64_t seed = 7, std::size_t count = 1000) {
  std::vector<double> grid = default_alpha_grid();
  for (double a : {-3.0, -2.0, -1.5, 1.5, 2.0, 3.0}) grid.push_back(a);
  return check_divergence_relations(random_pairs(seed, count, false), grid);
}

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = first; s <= last; ++s) out.push_back(s);
  return out;
}

/// The named suite; `seed` offsets the seeded runs.
inline std::vector<CheckReport> run_suite(const std::string& name, std::uint64_t seed) {
  std::vector<CheckReport> out;
  const bool all = name == "all";
  if (all || name == "divergence") {
    for (auto& r : suite_divergence(seed)) out.push_back(std::move(r));
  }
  if (all || name == "theorem2") {
    const auto seeds = seed_range(seed, seed + 9);
    out.push_back(suite_one_round_anchor());
    out.push_back(suite_small_alpha_identity(seeds));
    out.push_back(suite_big_alpha_bound(seeds));
    out.push_back(suite_exceptional_paths());
  }
  if (all || name == "lemmas") {
    out.push_back(suite_set_aside());
    out.push_back(suite_mixture());
    out.push_back(suite_forcer());
    out.push_back(suite_large_ratio(seed));
    out.push_back(suite_truncated_log());
  }
  if (all || name == "growth") {
    out.push_back(suite_fixed_growth(seed_range(seed, seed + 9)));
    out.push_back(suite_anytime_growth(seed_range(seed, seed + 2)));
  }
  if (out.empty()) throw Error(ErrorCode::invalid_parameter, "unknown suite '" + name + "'");
  return out;
}

}  // namespace opinion_merge
