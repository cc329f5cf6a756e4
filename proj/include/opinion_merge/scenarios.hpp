#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"

namespace opinion_merge {

/// 64-bit Mersenne twister with a bit-exact uniform draw, so a seed gives
/// the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  double exponential() { return -std::log1p(-uniform01()); }
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr double kInteriorFloor = 1e-6;

/// Uniform point of the simplex (symmetric Dirichlet with concentration 1).
inline std::vector<double> dirichlet1(Rng& rng, std::size_t m) {
  std::vector<double> w(m);
  double total = 0.0;
  for (double& v : w) {
    v = rng.exponential();
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

inline Distribution normalized(std::vector<double> w) {
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return Distribution(std::move(w));
}

/// Dirichlet draw with every entry at least 1e-6.
inline Distribution interior_point(Rng& rng, std::size_t m) {
  std::vector<double> w = dirichlet1(rng, m);
  for (double& v : w) v = std::max(v, kInteriorFloor);
  return normalized(std::move(w));
}

enum class Regime { agree, drift, singular, zero_mixed, timid };

inline Regime parse_regime(std::string_view s) {
  if (s == "agree") return Regime::agree;
  if (s == "drift") return Regime::drift;
  if (s == "singular") return Regime::singular;
  if (s == "zero_mixed") return Regime::zero_mixed;
  if (s == "timid") return Regime::timid;
  throw Error(ErrorCode::invalid_parameter, "unknown regime '" + std::string(s) + "'");
}

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::agree: return "agree";
    case Regime::drift: return "drift";
    case Regime::singular: return "singular";
    case Regime::zero_mixed: return "zero_mixed";
    case Regime::timid: return "timid";
  }
  return "unknown";
}

inline constexpr int kMaxTimidAttempts = 1000;

/// One c-timid pair: P^I in the interior, P^II = P^I scaled by factors in
/// [c^-1/2, c^1/2] and renormalized, redrawn until the predicate holds.
inline std::pair<Distribution, Distribution> draw_timid_pair(Rng& rng, std::size_t m, double c) {
  if (!(c > 1.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::invalid_parameter, "timidity constant must exceed 1");
  }
  const double half = 0.5 * std::log(c);
  for (int attempt = 0; attempt < kMaxTimidAttempts; ++attempt) {
    Distribution p_I = interior_point(rng, m);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = p_I[i] * std::exp(rng.uniform(-half, half));
    Distribution p_II = normalized(std::move(w));
    if (is_c_timid(mixture_densities(p_I, p_II), c)) return {std::move(p_I), std::move(p_II)};
  }
  throw Error(ErrorCode::generation_failed,
              "no " + std::to_string(c) + "-timid pair after " + std::to_string(kMaxTimidAttempts) +
                  " draws");
}

/// Seeded forecasts, a fresh pair every round independent of the history.
class ScenarioForecasts final : public ForecastPair {
 public:
  ScenarioForecasts(std::uint64_t seed, std::size_t m, Regime regime, double c = 2.0)
      : rng_(seed), m_(m), regime_(regime), c_(c) {
    if (m < 2) throw Error(ErrorCode::invalid_parameter, "outcome space needs m >= 2");
    if (regime == Regime::timid && !(c > 1.0)) {
      throw Error(ErrorCode::invalid_parameter, "timidity constant must exceed 1");
    }
  }

  std::pair<Distribution, Distribution> announce(const Transcript&) override { return next(); }

  std::pair<Distribution, Distribution> next() {
    switch (regime_) {
      case Regime::agree: {
        Distribution p = interior_point(rng_, m_);
        return {p, p};
      }
      case Regime::drift: {
        Distribution a = interior_point(rng_, m_);
        return {std::move(a), interior_point(rng_, m_)};
      }
      case Regime::singular: return singular_pair();
      case Regime::zero_mixed: return zero_mixed_pair();
      case Regime::timid: return draw_timid_pair(rng_, m_, c_);
    }
    throw Error(ErrorCode::invalid_parameter, "unknown regime");
  }

 private:
  // Disjoint nonempty supports.
  std::pair<Distribution, Distribution> singular_pair() {
    std::vector<bool> side(m_);
    for (std::size_t i = 0; i < m_; ++i) side[i] = rng_.uniform01() < 0.5;
    const std::size_t a = rng_.index(m_);
    std::size_t b = rng_.index(m_ - 1);
    if (b >= a) ++b;
    side[a] = true;
    side[b] = false;
    std::vector<double> w_I = dirichlet1(rng_, m_);
    std::vector<double> w_II = dirichlet1(rng_, m_);
    for (std::size_t i = 0; i < m_; ++i) (side[i] ? w_II[i] : w_I[i]) = 0.0;
    return {normalized(std::move(w_I)), normalized(std::move(w_II))};
  }

  // Interior pair except one outcome where one of the two forecasts is 0.
  std::pair<Distribution, Distribution> zero_mixed_pair() {
    Distribution p_I = interior_point(rng_, m_);
    Distribution p_II = interior_point(rng_, m_);
    const std::size_t hole = rng_.index(m_);
    const bool hole_in_II = rng_.uniform01() < 0.5;
    std::vector<double> a(p_I.probs().begin(), p_I.probs().end());
    std::vector<double> b(p_II.probs().begin(), p_II.probs().end());
    (hole_in_II ? b : a)[hole] = 0.0;
    return {normalized(std::move(a)), normalized(std::move(b))};
  }

  Rng rng_;
  std::size_t m_;
  Regime regime_;
  double c_;
};

/// The same pair every round.
class FixedForecasts final : public ForecastPair {
 public:
  FixedForecasts(Distribution p_I, Distribution p_II) : p_I_(std::move(p_I)), p_II_(std::move(p_II)) {
    require_same_space(p_I_, p_II_);
  }
  std::pair<Distribution, Distribution> announce(const Transcript&) override { return {p_I_, p_II_}; }

 private:
  Distribution p_I_;
  Distribution p_II_;
};

/// Replays a list of pairs, one per round, cycling if the run is longer.
class ScriptedForecasts final : public ForecastPair {
 public:
  explicit ScriptedForecasts(std::vector<std::pair<Distribution, Distribution>> pairs)
      : pairs_(std::move(pairs)) {
    if (pairs_.empty()) throw Error(ErrorCode::invalid_parameter, "no scripted forecasts");
  }
  std::pair<Distribution, Distribution> announce(const Transcript& history) override {
    return pairs_[history.size() % pairs_.size()];
  }

 private:
  std::vector<std::pair<Distribution, Distribution>> pairs_;
};

// ---------------------------------------------------------------------------
// Reality

inline std::size_t sample_outcome(Rng& rng, const Distribution& p) {
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    acc += p[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

/// Draws each outcome from Forecaster I's or II's current forecast.
class SamplingReality final : public Reality {
 public:
  SamplingReality(Side source, std::uint64_t seed) : source_(source), rng_(seed) {}

  std::size_t choose(const CompetitiveContext& ctx, const BettingFunction&,
                     const BettingFunction&) override {
    return sample_outcome(rng_, source_ == Side::I ? ctx.p_I : ctx.p_II);
  }

 private:
  Side source_;
  Rng rng_;
};

enum class RealityObjective { max_ratio, min_ratio, fixed };

/// Deterministic Reality. max_ratio and min_ratio pick the charged outcome
/// with the extreme beta_I/beta_II, lowest index on ties.
class AdversarialReality final : public Reality {
 public:
  explicit AdversarialReality(RealityObjective objective, std::size_t outcome = 0)
      : objective_(objective), outcome_(outcome) {}

  std::size_t choose(const CompetitiveContext& ctx, const BettingFunction&,
                     const BettingFunction&) override {
    if (objective_ == RealityObjective::fixed) return outcome_;
    return extreme_ratio_outcome(ctx.density, objective_ == RealityObjective::max_ratio);
  }

  static std::size_t extreme_ratio_outcome(const DensityPair& dp, bool maximize) {
    std::size_t best = dp.size();
    double best_value = 0.0;
    for (std::size_t i = 0; i < dp.size(); ++i) {
      if (!dp.charged(i)) continue;
      const double v = safe_ratio(dp.beta_I[i], dp.beta_II[i]).value();
      if (best == dp.size() || (maximize ? v > best_value : v < best_value)) {
        best = i;
        best_value = v;
      }
    }
    return best;
  }

 private:
  RealityObjective objective_;
  std::size_t outcome_;
};

/// Replays a fixed outcome sequence, cycling.
class ScriptedReality final : public Reality {
 public:
  explicit ScriptedReality(std::vector<std::size_t> outcomes) : outcomes_(std::move(outcomes)) {
    if (outcomes_.empty()) throw Error(ErrorCode::invalid_parameter, "no scripted outcomes");
  }
  std::size_t choose(const CompetitiveContext& ctx, const BettingFunction&,
                     const BettingFunction&) override {
    return outcomes_[ctx.history.size() % outcomes_.size()];
  }

 private:
  std::vector<std::size_t> outcomes_;
};

// ---------------------------------------------------------------------------
// Random Sceptic

/// Seeded random valid bets against the player's own forecast. Outcomes
/// the forecast deems impossible sometimes get +inf.
template <class Context>
class RandomSceptic final : public Strategy<Context> {
 public:
  explicit RandomSceptic(std::uint64_t seed) : rng_(seed) {}

  BettingFunction bet(const Context& ctx) override {
    const Distribution& p = ctx.own_forecast();
    std::vector<ExtReal> f(p.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double draw = rng_.uniform01() < 0.1 ? 0.0 : rng_.exponential();
      f[i] = draw;
      mean += draw * p[i];
    }
    if (mean == 0.0) return BettingFunction::constant(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] == 0.0) {
        f[i] = rng_.uniform01() < 0.5 ? ExtReal::infinity() : ExtReal(rng_.exponential());
      } else {
        f[i] = f[i].value() / mean;
      }
    }
    return BettingFunction(std::move(f));
  }

 private:
  Rng rng_;
};

}  // namespace opinion_merge
