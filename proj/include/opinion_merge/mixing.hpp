#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"

namespace opinion_merge {

inline constexpr double kWeightSumTolerance = 1e-12;

inline void validate_weights(const std::vector<double>& weights) {
  if (weights.empty()) throw Error(ErrorCode::weight_sum, "no weights");
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || !(w > 0.0)) throw Error(ErrorCode::weight_sum, "weights must be > 0");
    total += w;
  }
  if (std::abs(total - 1.0) > kWeightSumTolerance) {
    throw Error(ErrorCode::weight_sum, "weights sum to " + std::to_string(total));
  }
}

/// Weights proportional to k^-2 over k = first..last, normalized.
inline std::vector<double> inverse_square_weights(std::size_t first, std::size_t last) {
  if (first < 1 || last < first) throw Error(ErrorCode::invalid_parameter, "empty weight range");
  std::vector<double> w;
  double total = 0.0;
  for (std::size_t k = first; k <= last; ++k) {
    const double v = 1.0 / (static_cast<double>(k) * static_cast<double>(k));
    w.push_back(v);
    total += v;
  }
  for (double& v : w) v /= total;
  return w;
}

/// log(sum_k exp(x_k)) over extended reals.
inline ExtReal log_sum_exp(const std::vector<double>& xs) {
  double top = -kInfinity;
  for (double x : xs) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - top);
  return top + std::log(s);
}

/// Mixture of strategies: the master capital is sum_k p_k K_k, where K_k
/// is the capital component k would have earned playing alone.
template <class Context>
class Mixture final : public Strategy<Context> {
 public:
  Mixture(std::vector<std::unique_ptr<Strategy<Context>>> components, std::vector<double> weights)
      : components_(std::move(components)), weights_(std::move(weights)) {
    if (components_.size() != weights_.size()) {
      throw Error(ErrorCode::weight_sum, "one weight per component required");
    }
    validate_weights(weights_);
    log_capitals_.assign(components_.size(), LogCapital{});
  }

  BettingFunction bet(const Context& ctx) override {
    bets_.clear();
    for (auto& c : components_) bets_.push_back(c->bet(ctx));
    const std::size_t m = ctx.own_forecast().size();

    const std::vector<double> mix = current_weights();
    if (mix.empty()) return BettingFunction::constant(m);
    std::vector<ExtReal> payoff(m, ExtReal(0.0));
    for (std::size_t k = 0; k < bets_.size(); ++k) {
      if (mix[k] == 0.0) continue;
      for (std::size_t i = 0; i < m; ++i) payoff[i] = ext_add(payoff[i], ext_mul(mix[k], bets_[k][i]));
    }
    return BettingFunction(std::move(payoff));
  }

  void observe(const Context& ctx, std::size_t outcome) override {
    for (std::size_t k = 0; k < components_.size(); ++k) {
      log_capitals_[k] = advance(log_capitals_[k], bets_[k][outcome]);
      components_[k]->observe(ctx, outcome);
    }
    if (recording_) history_.push_back(log_capitals_);
  }

  // Keep the component log capitals after every round.
  void record_history(bool on) { recording_ = on; }
  const std::vector<std::vector<LogCapital>>& history() const { return history_; }

  /// log sum_k p_k K_k.
  LogCapital log_capital() const { return LogCapital::from_log(log_sum_exp(weighted_logs())); }

  const std::vector<LogCapital>& component_log_capitals() const { return log_capitals_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return components_.size(); }
  Strategy<Context>& component(std::size_t k) { return *components_.at(k); }

 private:
  std::vector<double> weighted_logs() const {
    std::vector<double> out;
    out.reserve(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      out.push_back(std::log(weights_[k]) + log_capitals_[k].log_value().value());
    }
    return out;
  }

  // Current share of the master capital held by each component. Empty when
  // every component is bankrupt.
  std::vector<double> current_weights() const {
    const std::vector<double> logs = weighted_logs();
    const double top = *std::max_element(logs.begin(), logs.end());
    std::vector<double> w(logs.size(), 0.0);
    if (top == -kInfinity) return {};
    if (top == kInfinity) {
      const auto n = std::count(logs.begin(), logs.end(), kInfinity);
      for (std::size_t k = 0; k < logs.size(); ++k) {
        if (logs[k] == kInfinity) w[k] = 1.0 / static_cast<double>(n);
      }
      return w;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
      w[k] = std::exp(logs[k] - top);
      total += w[k];
    }
    for (double& v : w) v /= total;
    return w;
  }

  std::vector<std::unique_ptr<Strategy<Context>>> components_;
  std::vector<double> weights_;
  std::vector<LogCapital> log_capitals_;
  std::vector<BettingFunction> bets_;
  bool recording_ = false;
  std::vector<std::vector<LogCapital>> history_;
};

template <class Context>
std::unique_ptr<Mixture<Context>> mix_strategies(
    std::vector<std::unique_ptr<Strategy<Context>>> components, std::vector<double> weights) {
  return std::make_unique<Mixture<Context>>(std::move(components), std::move(weights));
}

/// Banks one unit of capital every time the active part exceeds 2, so the
/// capital never falls below the number of units banked.
template <class Context>
class SetAside final : public Strategy<Context> {
 public:
  explicit SetAside(std::unique_ptr<Strategy<Context>> inner) : inner_(std::move(inner)) {}

  BettingFunction bet(const Context& ctx) override {
    inner_bet_ = inner_->bet(ctx);
    const ExtReal k = capital();
    if (k.value() == 0.0 || k.is_pos_inf()) return BettingFunction::constant(inner_bet_.size());
    const double share = active_.value() / k.value();
    const double reserve_share = reserve_ / k.value();
    std::vector<ExtReal> payoff;
    payoff.reserve(inner_bet_.size());
    for (ExtReal f : inner_bet_.payoff()) payoff.push_back(ext_add(ext_mul(share, f), reserve_share));
    return BettingFunction(std::move(payoff));
  }

  void observe(const Context& ctx, std::size_t outcome) override {
    if (capital().value() > 0.0 && capital().is_finite()) {
      active_ = ext_mul(active_, inner_bet_[outcome]);
      if (active_.value() > 2.0) {
        reserve_ += 1.0;
        if (active_.is_finite()) active_ = active_.value() - 1.0;
      }
    }
    inner_->observe(ctx, outcome);
  }

  ExtReal capital() const { return ext_add(active_, reserve_); }
  ExtReal active() const { return active_; }
  double reserve() const { return reserve_; }
  Strategy<Context>& inner() { return *inner_; }

 private:
  std::unique_ptr<Strategy<Context>> inner_;
  BettingFunction inner_bet_;
  ExtReal active_ = 1.0;
  double reserve_ = 0.0;
};

template <class Context>
std::unique_ptr<SetAside<Context>> set_aside_transform(std::unique_ptr<Strategy<Context>> inner) {
  return std::make_unique<SetAside<Context>>(std::move(inner));
}

}  // namespace opinion_merge
