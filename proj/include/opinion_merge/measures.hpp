#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"

namespace opinion_merge {

/// Sorted outcome indices.
using OutcomeSet = std::vector<std::size_t>;

inline bool contains(const OutcomeSet& set, std::size_t outcome) {
  return std::binary_search(set.begin(), set.end(), outcome);
}

/// Probability vector over a finite outcome space of size >= 2.
///
/// Input within 1e-9 of summing to one is renormalized; anything further
/// off is rejected as malformed.
class Distribution {
 public:
  static constexpr double kNormalizationSlack = 1e-9;

  explicit Distribution(std::vector<double> probs) : Distribution(std::move(probs), true) {}
  Distribution(std::initializer_list<double> probs) : Distribution(std::vector<double>(probs)) {}

  /// Keeps already-normalized probabilities as they are, skipping the
  /// rescaling step, so stored forecasts reload bit for bit.
  static Distribution exact(std::vector<double> probs) { return Distribution(std::move(probs), false); }

  static Distribution uniform(std::size_t m) {
    return Distribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  double mass(const OutcomeSet& set) const {
    double total = 0.0;
    for (std::size_t i : set) total += probs_.at(i);
    return total;
  }

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(std::vector<double> probs, bool rescale) : probs_(std::move(probs)) {
    if (probs_.size() < 2) {
      throw Error(ErrorCode::malformed_distribution, "outcome space needs at least 2 outcomes");
    }
    double total = 0.0;
    for (double p : probs_) {
      if (!std::isfinite(p) || p < 0.0) {
        throw Error(ErrorCode::malformed_distribution, "probabilities must be finite and >= 0");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kNormalizationSlack) {
      throw Error(ErrorCode::malformed_distribution,
                  "probabilities sum to " + std::to_string(total));
    }
    if (rescale && total != 1.0) {
      for (double& p : probs_) p /= total;
    }
  }

  std::vector<double> probs_;
};

/// Densities of two forecasts with respect to their half-half mixture.
///
/// Outcomes where the mixture has no mass keep their index but carry zero
/// densities and are excluded from every integral and from the zero sets.
struct DensityPair {
  std::vector<double> beta_I;
  std::vector<double> beta_II;
  std::vector<double> q;
  std::vector<double> prob_I;   // original forecasts, kept exact
  std::vector<double> prob_II;
  OutcomeSet zero_I;   // {q > 0 and beta_I = 0}
  OutcomeSet zero_II;  // {q > 0 and beta_II = 0}

  std::size_t size() const { return q.size(); }
  bool charged(std::size_t i) const { return q[i] > 0.0; }
  double p_I(std::size_t i) const { return prob_I[i]; }
  double p_II(std::size_t i) const { return prob_II[i]; }

  friend bool operator==(const DensityPair&, const DensityPair&) = default;
};

inline void require_same_space(const Distribution& a, const Distribution& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch, "distributions of sizes " +
                                                   std::to_string(a.size()) + " and " +
                                                   std::to_string(b.size()));
  }
}

inline DensityPair mixture_densities(const Distribution& p_I, const Distribution& p_II) {
  require_same_space(p_I, p_II);
  const std::size_t m = p_I.size();
  DensityPair dp;
  dp.beta_I.resize(m);
  dp.beta_II.resize(m);
  dp.q.resize(m);
  dp.prob_I.assign(p_I.probs().begin(), p_I.probs().end());
  dp.prob_II.assign(p_II.probs().begin(), p_II.probs().end());
  for (std::size_t i = 0; i < m; ++i) {
    const double q = 0.5 * (p_I[i] + p_II[i]);
    dp.q[i] = q;
    if (q == 0.0) continue;
    dp.beta_I[i] = p_I[i] / q;
    dp.beta_II[i] = p_II[i] / q;
    if (p_I[i] == 0.0) dp.zero_I.push_back(i);
    if (p_II[i] == 0.0) dp.zero_II.push_back(i);
  }
  return dp;
}

/// Nonnegative payoff vector, possibly +inf on some outcomes.
class BettingFunction {
 public:
  BettingFunction() = default;
  explicit BettingFunction(std::vector<ExtReal> payoff) : payoff_(std::move(payoff)) {
    for (ExtReal v : payoff_) {
      if (std::isnan(v.value()) || v.value() < 0.0) {
        throw Error(ErrorCode::invalid_bet, "payoffs must lie in [0, inf]");
      }
    }
  }
  BettingFunction(std::initializer_list<ExtReal> payoff)
      : BettingFunction(std::vector<ExtReal>(payoff)) {}

  static BettingFunction constant(std::size_t m, ExtReal value = 1.0) {
    return BettingFunction(std::vector<ExtReal>(m, value));
  }

  std::size_t size() const { return payoff_.size(); }
  ExtReal operator[](std::size_t i) const { return payoff_[i]; }
  std::span<const ExtReal> payoff() const { return payoff_; }

  /// Expectation under p with 0 * inf = 0.
  ExtReal expectation(const Distribution& p) const {
    if (p.size() != size()) throw Error(ErrorCode::dimension_mismatch, "bet vs distribution");
    ExtReal total = 0.0;
    for (std::size_t i = 0; i < size(); ++i) total = ext_add(total, ext_mul(payoff_[i], p[i]));
    return total;
  }

  friend bool operator==(const BettingFunction&, const BettingFunction&) = default;

 private:
  std::vector<ExtReal> payoff_;
};

inline constexpr double kBetMeanTolerance = 1e-9;

inline bool validate_betting(const BettingFunction& f, const Distribution& p) {
  if (f.size() != p.size()) return false;
  const ExtReal mean = f.expectation(p);
  return mean.is_finite() && std::abs(mean.value() - 1.0) <= kBetMeanTolerance;
}

struct ExceptionalPair {
  OutcomeSet e_I;
  OutcomeSet e_II;

  /// P^I(E^I) = 0, P^II(E^II) = 0, and the two forecasts share their null
  /// outcomes outside E^I u E^II.
  bool is_valid_for(const Distribution& p_I, const Distribution& p_II) const {
    if (p_I.size() != p_II.size()) return false;
    for (std::size_t i : e_I) {
      if (i >= p_I.size() || p_I[i] != 0.0) return false;
    }
    for (std::size_t i : e_II) {
      if (i >= p_II.size() || p_II[i] != 0.0) return false;
    }
    for (std::size_t i = 0; i < p_I.size(); ++i) {
      if (contains(e_I, i) || contains(e_II, i)) continue;
      if ((p_I[i] == 0.0) != (p_II[i] == 0.0)) return false;
    }
    return true;
  }

  bool contains_outcome(std::size_t outcome) const {
    return contains(e_I, outcome) || contains(e_II, outcome);
  }

  friend bool operator==(const ExceptionalPair&, const ExceptionalPair&) = default;
};

inline ExceptionalPair exceptional_pair(const DensityPair& dp) { return {dp.zero_I, dp.zero_II}; }

/// 1/c <= beta_II / beta_I <= c everywhere, with 0/0 read as 1.
inline bool is_c_timid(const DensityPair& dp, double c) {
  if (!(c > 1.0)) throw Error(ErrorCode::invalid_parameter, "timidity constant must exceed 1");
  for (std::size_t i = 0; i < dp.size(); ++i) {
    const double a = dp.p_I(i);
    const double b = dp.p_II(i);
    if (b > c * a || a > c * b) return false;
  }
  return true;
}

/// p_I << p_II: every p_II-null outcome is p_I-null.
inline bool is_absolutely_continuous(const Distribution& p_I, const Distribution& p_II) {
  require_same_space(p_I, p_II);
  for (std::size_t i = 0; i < p_I.size(); ++i) {
    if (p_II[i] == 0.0 && p_I[i] > 0.0) return false;
  }
  return true;
}

}  // namespace opinion_merge
