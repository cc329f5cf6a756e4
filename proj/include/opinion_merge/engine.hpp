#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"

namespace opinion_merge {

// ---------------------------------------------------------------------------
// Player interfaces

/// A betting policy. `bet` is called once per round; `observe` follows
/// with the realized outcome of that same round.
template <class Context>
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual BettingFunction bet(const Context& ctx) = 0;
  virtual void observe(const Context& /*ctx*/, std::size_t /*outcome*/) {}
};

/// Bets 1 on every outcome.
template <class Context>
class ConstantStrategy final : public Strategy<Context> {
 public:
  BettingFunction bet(const Context& ctx) override {
    return BettingFunction::constant(ctx.own_forecast().size());
  }
};

// One capital step. Capitals at 0 or +inf are absorbing.
inline LogCapital advance(const LogCapital& previous, ExtReal payoff) {
  if (!previous.is_finite()) return previous;
  return previous.plus(ext_log(payoff));
}

// ---------------------------------------------------------------------------
// Competitive testing protocol

enum class ProtocolKind { competitive, modified };
enum class Side { I, II };

struct RoundRecord {
  std::size_t index;  // 1-based
  Distribution p_I;
  Distribution p_II;
  DensityPair density;
  std::optional<ExceptionalPair> exceptional;  // modified protocol only
  BettingFunction f_I;
  BettingFunction f_II;
  std::size_t outcome;
  LogCapital log_K_I;
  LogCapital log_K_II;

  // Outcome landed in E^I u E^II, which breaks the agreement condition of
  // the modified protocol.
  bool hit_exceptional() const { return exceptional && exceptional->contains_outcome(outcome); }

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Transcript {
  ProtocolKind kind = ProtocolKind::competitive;
  std::vector<RoundRecord> rounds;

  std::size_t size() const { return rounds.size(); }
  bool empty() const { return rounds.empty(); }
  LogCapital log_K_I() const { return rounds.empty() ? LogCapital{} : rounds.back().log_K_I; }
  LogCapital log_K_II() const { return rounds.empty() ? LogCapital{} : rounds.back().log_K_II; }

  bool agreement_violated() const {
    for (const auto& r : rounds) {
      if (r.hit_exceptional()) return true;
    }
    return false;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

/// What a Sceptic sees when choosing a move. Sceptic II moves before
/// Sceptic I, so only Sceptic I's context carries the opponent's bet.
struct CompetitiveContext {
  std::size_t round;
  Side side;
  const Distribution& p_I;
  const Distribution& p_II;
  const DensityPair& density;
  const ExceptionalPair* exceptional;
  const BettingFunction* f_II;
  const Transcript& history;

  const Distribution& own_forecast() const { return side == Side::I ? p_I : p_II; }
};

using ScepticStrategy = Strategy<CompetitiveContext>;

/// Forecasters I and II; both announce before any Sceptic moves.
class ForecastPair {
 public:
  virtual ~ForecastPair() = default;
  virtual std::pair<Distribution, Distribution> announce(const Transcript& history) = 0;
};

class Reality {
 public:
  virtual ~Reality() = default;
  virtual std::size_t choose(const CompetitiveContext& ctx, const BettingFunction& f_I,
                             const BettingFunction& f_II) = 0;
};

using ExceptionalProvider = std::function<ExceptionalPair(
    const Distribution& p_I, const Distribution& p_II, const DensityPair& dp)>;

inline ExceptionalPair default_exceptional(const Distribution&, const Distribution&,
                                           const DensityPair& dp) {
  return exceptional_pair(dp);
}

namespace detail {

inline void require_valid_bet(const BettingFunction& f, const Distribution& p, const char* player,
                              std::size_t round) {
  if (!validate_betting(f, p)) {
    const ExtReal mean = f.size() == p.size() ? f.expectation(p) : ExtReal(0.0);
    throw Error(ErrorCode::invalid_bet, std::string(player) + " in round " +
                                            std::to_string(round) + " (mean " +
                                            std::to_string(mean.value()) + ")");
  }
}

inline Transcript run_protocol(ForecastPair& forecasters, ScepticStrategy& sceptic_I,
                               ScepticStrategy& sceptic_II, Reality& reality,
                               std::size_t horizon, const ExceptionalProvider* provider) {
  if (horizon < 1) throw Error(ErrorCode::invalid_parameter, "horizon must be >= 1");
  Transcript t;
  t.kind = provider ? ProtocolKind::modified : ProtocolKind::competitive;
  t.rounds.reserve(horizon);
  LogCapital log_K_I;
  LogCapital log_K_II;

  for (std::size_t n = 1; n <= horizon; ++n) {
    auto [p_I, p_II] = forecasters.announce(t);
    require_same_space(p_I, p_II);
    DensityPair dp = mixture_densities(p_I, p_II);

    std::optional<ExceptionalPair> exceptional;
    if (provider) {
      exceptional = (*provider)(p_I, p_II, dp);
      if (!exceptional->is_valid_for(p_I, p_II)) {
        throw Error(ErrorCode::invalid_exceptional, "round " + std::to_string(n));
      }
    }
    const ExceptionalPair* e = exceptional ? &*exceptional : nullptr;

    const CompetitiveContext ctx_II{n, Side::II, p_I, p_II, dp, e, nullptr, t};
    BettingFunction f_II = sceptic_II.bet(ctx_II);
    require_valid_bet(f_II, p_II, "Sceptic II", n);

    const CompetitiveContext ctx_I{n, Side::I, p_I, p_II, dp, e, &f_II, t};
    BettingFunction f_I = sceptic_I.bet(ctx_I);
    require_valid_bet(f_I, p_I, "Sceptic I", n);

    const std::size_t omega = reality.choose(ctx_I, f_I, f_II);
    if (omega >= p_I.size()) {
      throw Error(ErrorCode::invalid_parameter, "Reality chose outcome " + std::to_string(omega));
    }

    log_K_I = advance(log_K_I, f_I[omega]);
    log_K_II = advance(log_K_II, f_II[omega]);
    sceptic_II.observe(ctx_II, omega);
    sceptic_I.observe(ctx_I, omega);

    t.rounds.push_back(RoundRecord{n, std::move(p_I), std::move(p_II), std::move(dp),
                                   std::move(exceptional), std::move(f_I), std::move(f_II), omega,
                                   log_K_I, log_K_II});
  }
  return t;
}

}  // namespace detail

/// Runs the competitive testing protocol for `horizon` rounds.
///
/// Move order per round: Forecaster I, Forecaster II, Sceptic II,
/// Sceptic I (who sees Sceptic II's bet), Reality. Both capitals start at 1.
/// Throws Error(invalid_bet) naming the offending Sceptic.
inline Transcript run_competitive(ForecastPair& forecasters, ScepticStrategy& sceptic_I,
                                  ScepticStrategy& sceptic_II, Reality& reality,
                                  std::size_t horizon) {
  return detail::run_protocol(forecasters, sceptic_I, sceptic_II, reality, horizon, nullptr);
}

/// The modified protocol: an exceptional pair is announced after the
/// forecasts and before the Sceptics move.
inline Transcript run_modified(ForecastPair& forecasters, ScepticStrategy& sceptic_I,
                               ScepticStrategy& sceptic_II, Reality& reality, std::size_t horizon,
                               const ExceptionalProvider& provider = default_exceptional) {
  return detail::run_protocol(forecasters, sceptic_I, sceptic_II, reality, horizon, &provider);
}

// ---------------------------------------------------------------------------
// Semimartingale protocol

enum class MeanConstraint { martingale, submartingale, supermartingale };
enum class Representation { multiplicative, additive };

inline constexpr double kXiMeanTolerance = 1e-9;

struct SemimartingaleRound {
  std::size_t index;
  Distribution p;
  std::vector<double> xi;
  BettingFunction f;
  std::vector<ExtReal> g;  // additive form of f, (f - 1) * K_{n-1}
  std::size_t outcome;
  LogCapital log_K;
};

struct SemimartingaleTranscript {
  MeanConstraint constraint = MeanConstraint::martingale;
  Representation representation = Representation::multiplicative;
  std::vector<SemimartingaleRound> rounds;

  std::size_t size() const { return rounds.size(); }
  LogCapital log_K() const { return rounds.empty() ? LogCapital{} : rounds.back().log_K; }
};

struct SemimartingaleContext {
  std::size_t round;
  const Distribution& p;
  std::span<const double> xi;
  const SemimartingaleTranscript& history;

  const Distribution& own_forecast() const { return p; }
};

using SemimartingaleStrategy = Strategy<SemimartingaleContext>;

/// Forecaster plus Reality of the semimartingale protocol.
class SemimartingaleOpponents {
 public:
  virtual ~SemimartingaleOpponents() = default;
  virtual Distribution forecast(const SemimartingaleTranscript& history) = 0;
  virtual std::vector<double> test_function(const SemimartingaleTranscript& history,
                                            const Distribution& p) = 0;
  virtual std::size_t outcome(const SemimartingaleContext& ctx, const BettingFunction& f) = 0;
};

inline double xi_mean(std::span<const double> xi, const Distribution& p) {
  double mean = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) mean += xi[i] * p[i];
  return mean;
}

/// g = (f - 1) K_{n-1}; requires a finite, positive previous capital.
inline std::vector<ExtReal> additive_from_multiplicative(const BettingFunction& f,
                                                         const LogCapital& log_K_prev) {
  if (!log_K_prev.is_finite()) {
    throw Error(ErrorCode::nonfinite_capital, "additive bet needs a finite log capital");
  }
  const double k = std::exp(log_K_prev.log_value().value());
  std::vector<ExtReal> g;
  g.reserve(f.size());
  for (ExtReal v : f.payoff()) {
    g.push_back(v.is_pos_inf() ? ExtReal::infinity() : ExtReal((v.value() - 1.0) * k));
  }
  return g;
}

inline SemimartingaleTranscript run_semimartingale(MeanConstraint constraint,
                                                   Representation representation,
                                                   SemimartingaleOpponents& opponents,
                                                   SemimartingaleStrategy& sceptic,
                                                   std::size_t horizon) {
  if (horizon < 1) throw Error(ErrorCode::invalid_parameter, "horizon must be >= 1");
  SemimartingaleTranscript t;
  t.constraint = constraint;
  t.representation = representation;
  t.rounds.reserve(horizon);
  LogCapital log_K;
  double capital = 1.0;  // linear capital, used by the additive representation

  for (std::size_t n = 1; n <= horizon; ++n) {
    Distribution p = opponents.forecast(t);
    std::vector<double> xi = opponents.test_function(t, p);
    if (xi.size() != p.size()) throw Error(ErrorCode::dimension_mismatch, "xi vs forecast");
    for (double v : xi) {
      if (!std::isfinite(v)) throw Error(ErrorCode::invalid_xi, "xi must be finite");
    }
    const double mean = xi_mean(xi, p);
    const bool ok = constraint == MeanConstraint::martingale   ? std::abs(mean) <= kXiMeanTolerance
                    : constraint == MeanConstraint::submartingale ? mean >= -kXiMeanTolerance
                                                                  : mean <= kXiMeanTolerance;
    if (!ok) {
      throw Error(ErrorCode::invalid_xi,
                  "round " + std::to_string(n) + ": mean " + std::to_string(mean));
    }

    const SemimartingaleContext ctx{n, p, xi, t};
    BettingFunction f = sceptic.bet(ctx);
    detail::require_valid_bet(f, p, "Sceptic", n);
    const std::size_t omega = opponents.outcome(ctx, f);
    if (omega >= p.size()) throw Error(ErrorCode::invalid_parameter, "outcome out of range");

    std::vector<ExtReal> g(p.size(), ExtReal(0.0));
    if (log_K.is_finite()) g = additive_from_multiplicative(f, log_K);

    if (representation == Representation::multiplicative) {
      log_K = advance(log_K, f[omega]);
    } else if (log_K.is_finite()) {
      const ExtReal step = g[omega];
      if (step.is_pos_inf()) {
        capital = kInfinity;
      } else {
        // f >= 0 gives g >= -K; clamp the rounding residue at exactly zero.
        capital = std::max(0.0, capital + step.value());
      }
      log_K = LogCapital::from_capital(capital);
    }
    sceptic.observe(ctx, omega);
    t.rounds.push_back(
        SemimartingaleRound{n, std::move(p), std::move(xi), std::move(f), std::move(g), omega, log_K});
  }
  return t;
}

}  // namespace opinion_merge
