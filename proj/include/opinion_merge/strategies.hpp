#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <utility>
#include <vector>

#include "opinion_merge/divergence.hpp"
#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/forcers.hpp"
#include "opinion_merge/measures.hpp"
#include "opinion_merge/mixing.hpp"

namespace opinion_merge {

struct ScepticPair {
  std::unique_ptr<ScepticStrategy> sceptic_I;
  std::unique_ptr<ScepticStrategy> sceptic_II;
};

// ---------------------------------------------------------------------------
// Power strategies

enum class AlphaPairMode {
  // Played jointly by both Sceptics: keeps the log-capital identity exact,
  // including the stopping rule and the singular and infinite-integral rounds.
  joint,
  // Sceptic I's power bet inside the big-alpha mixture: +inf where
  // beta_I = 0, constant 1 when the integral is infinite, never stops.
  big_alpha_component,
};

struct AlphaMoves {
  BettingFunction f_I;
  BettingFunction f_II;
};

/// The power bets of both Sceptics for one value of alpha. Each Sceptic
/// runs its own copy; the rule is deterministic so the copies agree.
class AlphaPairRule {
 public:
  AlphaPairRule(AlphaParam alpha, AlphaPairMode mode) : alpha_(alpha), mode_(mode) {}

  AlphaMoves moves(const DensityPair& dp) const {
    const std::size_t m = dp.size();
    if (stopped_) return {BettingFunction::constant(m), BettingFunction::constant(m)};
    const ExtReal h = hellinger_integral(dp, alpha_);
    if (h.value() == 0.0) return singular_moves(dp);
    if (h.is_pos_inf()) {
      if (mode_ == AlphaPairMode::big_alpha_component) {
        return {BettingFunction::constant(m), BettingFunction::constant(m)};
      }
      return infinite_moves(dp);
    }

    std::vector<ExtReal> f_I(m);
    std::vector<ExtReal> f_II(m);
    for (std::size_t i = 0; i < m; ++i) {
      const ExtReal up_I = ext_pow(safe_ratio(dp.beta_II[i], dp.beta_I[i]), alpha_.exponent_II());
      const ExtReal up_II = ext_pow(safe_ratio(dp.beta_I[i], dp.beta_II[i]), alpha_.exponent_I());
      f_I[i] = up_I.value() / h.value();
      f_II[i] = up_II.value() / h.value();
      if (mode_ == AlphaPairMode::big_alpha_component && dp.charged(i) && dp.beta_I[i] == 0.0) {
        f_I[i] = ExtReal::infinity();
      }
    }
    return {BettingFunction(std::move(f_I)), BettingFunction(std::move(f_II))};
  }

  void observe(const DensityPair& dp, std::size_t outcome) {
    if (stopped_ || mode_ != AlphaPairMode::joint) return;
    const ExtReal h = hellinger_integral(dp, alpha_);
    if (h.is_pos_inf()) {
      stopped_ = true;
    } else if (h.value() > 0.0 && dp.charged(outcome) &&
               ((dp.beta_I[outcome] == 0.0) != (dp.beta_II[outcome] == 0.0))) {
      stopped_ = true;
    }
  }

  AlphaParam alpha() const { return alpha_; }
  bool stopped() const { return stopped_; }

 private:
  // Mutually singular forecasts: E = {beta_I = 0} is P^I-null and carries
  // all of P^II.
  static AlphaMoves singular_moves(const DensityPair& dp) {
    const std::size_t m = dp.size();
    std::vector<ExtReal> f_I(m, ExtReal(1.0));
    std::vector<ExtReal> f_II(m, ExtReal::infinity());
    for (std::size_t i : dp.zero_I) {
      f_I[i] = ExtReal::infinity();
      f_II[i] = 1.0;
    }
    return {BettingFunction(std::move(f_I)), BettingFunction(std::move(f_II))};
  }

  // |alpha| > 1 and the integral is infinite. The Sceptic whose opponent's
  // forecast misses a charged outcome bets everything on it; the other
  // bets +inf there.
  AlphaMoves infinite_moves(const DensityPair& dp) const {
    const std::size_t m = dp.size();
    const bool below = alpha_.value() < -1.0;
    const OutcomeSet& event = below ? dp.zero_II : dp.zero_I;
    double mass = 0.0;
    for (std::size_t i : event) mass += below ? dp.p_I(i) : dp.p_II(i);

    std::vector<ExtReal> all_in(m, ExtReal(0.0));
    std::vector<ExtReal> sure(m, ExtReal(1.0));
    for (std::size_t i : event) {
      all_in[i] = 1.0 / mass;
      sure[i] = ExtReal::infinity();
    }
    if (below) return {BettingFunction(std::move(all_in)), BettingFunction(std::move(sure))};
    return {BettingFunction(std::move(sure)), BettingFunction(std::move(all_in))};
  }

  AlphaParam alpha_;
  AlphaPairMode mode_;
  bool stopped_ = false;
};

class AlphaSceptic final : public ScepticStrategy {
 public:
  AlphaSceptic(AlphaParam alpha, Side side, AlphaPairMode mode = AlphaPairMode::joint)
      : rule_(alpha, mode), side_(side) {}

  BettingFunction bet(const CompetitiveContext& ctx) override {
    AlphaMoves mv = rule_.moves(ctx.density);
    return side_ == Side::I ? std::move(mv.f_I) : std::move(mv.f_II);
  }

  void observe(const CompetitiveContext& ctx, std::size_t outcome) override {
    rule_.observe(ctx.density, outcome);
  }

  const AlphaPairRule& rule() const { return rule_; }

 private:
  AlphaPairRule rule_;
  Side side_;
};

inline ScepticPair alpha_pair(AlphaParam alpha) {
  return {std::make_unique<AlphaSceptic>(alpha, Side::I),
          std::make_unique<AlphaSceptic>(alpha, Side::II)};
}

// ---------------------------------------------------------------------------
// Ratio tracker

/// Sceptic I copies Sceptic II's bet rescaled by beta_II/beta_I, with +inf
/// where beta_I = 0. Any shortfall of the mean under P^I is added back as a
/// constant.
inline BettingFunction ratio_tracker(const BettingFunction& f_II, const DensityPair& dp) {
  const std::size_t m = dp.size();
  if (f_II.size() != m) throw Error(ErrorCode::dimension_mismatch, "bet vs density pair");
  std::vector<ExtReal> f(m);
  ExtReal mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (dp.charged(i) && dp.beta_I[i] == 0.0) {
      f[i] = ExtReal::infinity();
    } else {
      f[i] = ext_mul(safe_ratio(dp.beta_II[i], dp.beta_I[i]), f_II[i]);
    }
    mean = ext_add(mean, ext_mul(f[i], dp.p_I(i)));
  }
  const double deficit = 1.0 - mean.value();
  if (deficit > 0.0) {
    for (ExtReal& v : f) {
      if (v.is_finite()) v = v.value() + deficit;
    }
  }
  return BettingFunction(std::move(f));
}

class RatioTracker final : public ScepticStrategy {
 public:
  BettingFunction bet(const CompetitiveContext& ctx) override {
    if (ctx.f_II == nullptr) {
      throw Error(ErrorCode::invalid_parameter, "ratio tracker must play as Sceptic I");
    }
    return ratio_tracker(*ctx.f_II, ctx.density);
  }
};

// ---------------------------------------------------------------------------
// Sceptic I alone, alpha < -1

inline double big_alpha_fraction(double alpha) {
  if (!(alpha < -1.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "big-alpha strategy needs alpha < -1");
  }
  return 2.0 / (1.0 - alpha);
}

inline std::unique_ptr<Mixture<CompetitiveContext>> big_alpha_sceptic_I(double alpha) {
  const double c = big_alpha_fraction(alpha);
  std::vector<std::unique_ptr<ScepticStrategy>> parts;
  parts.push_back(
      std::make_unique<AlphaSceptic>(AlphaParam(alpha), Side::I, AlphaPairMode::big_alpha_component));
  parts.push_back(std::make_unique<RatioTracker>());
  return mix_strategies(std::move(parts), {c, 1.0 - c});
}

// ---------------------------------------------------------------------------
// Criterion strategy for Sceptic I, alpha in (-1, 1)

// U(ln(beta_I / beta_II)): 1 where only beta_II vanishes, 0 on P^I-null
// outcomes.
inline std::vector<double> truncated_log_ratio(const DensityPair& dp) {
  std::vector<double> xi(dp.size(), 0.0);
  for (std::size_t i = 0; i < dp.size(); ++i) {
    if (!dp.charged(i) || dp.beta_I[i] == 0.0) continue;
    if (dp.beta_II[i] == 0.0) {
      xi[i] = 1.0;
    } else {
      xi[i] = truncate_U(std::log(dp.beta_I[i] / dp.beta_II[i]));
    }
  }
  return xi;
}

// {beta_I > e * beta_II}.
inline OutcomeSet large_ratio_event(const DensityPair& dp) {
  OutcomeSet out;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    if (dp.charged(i) && dp.beta_I[i] > std::numbers::e * dp.beta_II[i]) out.push_back(i);
  }
  return out;
}

inline std::unique_ptr<Mixture<CompetitiveContext>> criterion_sceptic_I(double alpha,
                                                                       std::size_t c_max) {
  if (!(alpha > -1.0 && alpha < 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "criterion strategy needs alpha in (-1, 1)");
  }
  using Ctx = CompetitiveContext;
  std::vector<std::unique_ptr<ScepticStrategy>> parts;
  parts.push_back(budget_mixture<Ctx>(c_max, [](double c) -> std::unique_ptr<ScepticStrategy> {
    return std::make_unique<ForcerStrategy<Ctx>>(
        c, [](const Ctx& ctx) { return truncated_log_ratio(ctx.density); }, true);
  }));
  parts.push_back(borel_cantelli_mixture<Ctx>(
      c_max, [](const Ctx& ctx) { return large_ratio_event(ctx.density); }));
  parts.push_back(std::make_unique<RatioTracker>());
  return mix_strategies(std::move(parts), {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
}

// ---------------------------------------------------------------------------
// Growth-rate strategies

inline double fixed_horizon_epsilon(std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_parameter, "horizon must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(horizon));
}

inline ScepticPair growth_joint_fixed(std::size_t horizon) {
  if (horizon < 2) throw Error(ErrorCode::invalid_parameter, "joint growth strategy needs N >= 2");
  return alpha_pair(AlphaParam(-1.0 + 2.0 * fixed_horizon_epsilon(horizon)));
}

inline std::unique_ptr<Mixture<CompetitiveContext>> growth_sceptic_I_fixed(std::size_t horizon) {
  return big_alpha_sceptic_I(-1.0 - 2.0 * fixed_horizon_epsilon(horizon));
}

/// sqrt(ln k / e^k).
inline double anytime_epsilon(std::size_t k) {
  if (k < 2) throw Error(ErrorCode::invalid_parameter, "anytime index must be >= 2");
  const double kd = static_cast<double>(k);
  return std::sqrt(std::log(kd) / std::exp(kd));
}

/// ceil(ln N), raised to 2 for N < 8 where the formula gives an unusable index.
inline std::size_t anytime_index(std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_parameter, "horizon must be >= 1");
  const auto k = static_cast<std::size_t>(std::ceil(std::log(static_cast<double>(horizon))));
  return k < 2 ? 2 : k;
}

/// Weights proportional to k^-2 over k = 2..k_max.
inline std::vector<double> anytime_weights(std::size_t k_max) {
  if (k_max < 2) throw Error(ErrorCode::invalid_parameter, "k_max must be >= 2");
  return inverse_square_weights(2, k_max);
}

struct AnytimePair {
  std::unique_ptr<Mixture<CompetitiveContext>> sceptic_I;
  std::unique_ptr<Mixture<CompetitiveContext>> sceptic_II;
};

/// Component k - 2 of each mixture plays alpha_pair(-1 + 2 eps_k).
inline AnytimePair growth_joint_anytime(std::size_t k_max) {
  const std::vector<double> w = anytime_weights(k_max);
  std::vector<std::unique_ptr<ScepticStrategy>> side_I;
  std::vector<std::unique_ptr<ScepticStrategy>> side_II;
  for (std::size_t k = 2; k <= k_max; ++k) {
    const AlphaParam alpha(-1.0 + 2.0 * anytime_epsilon(k));
    side_I.push_back(std::make_unique<AlphaSceptic>(alpha, Side::I));
    side_II.push_back(std::make_unique<AlphaSceptic>(alpha, Side::II));
  }
  return {mix_strategies(std::move(side_I), w), mix_strategies(std::move(side_II), w)};
}

inline std::unique_ptr<Mixture<CompetitiveContext>> growth_sceptic_I_anytime(std::size_t k_max) {
  const std::vector<double> w = anytime_weights(k_max);
  std::vector<std::unique_ptr<ScepticStrategy>> parts;
  for (std::size_t k = 2; k <= k_max; ++k) {
    parts.push_back(big_alpha_sceptic_I(-1.0 - 2.0 * anytime_epsilon(k)));
  }
  return mix_strategies(std::move(parts), w);
}

}  // namespace opinion_merge
