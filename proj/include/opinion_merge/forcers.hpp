#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/measures.hpp"
#include "opinion_merge/mixing.hpp"

namespace opinion_merge {

/// xi - E_p[xi].
inline std::vector<double> submartingale_center(std::span<const double> xi, const Distribution& p) {
  if (xi.size() != p.size()) throw Error(ErrorCode::dimension_mismatch, "xi vs distribution");
  const double mean = xi_mean(xi, p);
  std::vector<double> out(xi.begin(), xi.end());
  for (double& v : out) v -= mean;
  return out;
}

inline std::vector<double> indicator(const OutcomeSet& event, std::size_t m) {
  std::vector<double> xi(m, 0.0);
  for (std::size_t i : event) xi.at(i) = 1.0;
  return xi;
}

/// Capital 1 + (S_n^2 - V_n)/C for S_n = sum of xi_k(omega_k) and
/// V_n = sum of E_p[xi_k^2], kept while V_n <= C and frozen after that.
/// Requires martingale test functions.
class QuadraticForcer {
 public:
  explicit QuadraticForcer(double budget) : budget_(budget) {
    if (!(budget > 0.0) || !std::isfinite(budget)) {
      throw Error(ErrorCode::invalid_parameter, "forcer budget must be positive");
    }
  }

  // Additive bet g for this round; all zeros once the budget is spent.
  std::vector<double> additive_bet(std::span<const double> xi, const Distribution& p) const {
    std::vector<double> g(p.size(), 0.0);
    const double v = second_moment(xi, p);
    if (frozen_ || variance_sum_ + v > budget_) return g;
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = (2.0 * sum_ * xi[i] + xi[i] * xi[i] - v) / budget_;
    }
    return g;
  }

  BettingFunction bet(std::span<const double> xi, const Distribution& p) const {
    const std::vector<double> g = additive_bet(xi, p);
    std::vector<ExtReal> f(g.size(), ExtReal(1.0));
    if (capital_ > 0.0) {
      for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::max(0.0, 1.0 + g[i] / capital_);
    }
    return BettingFunction(std::move(f));
  }

  void observe(std::span<const double> xi, const Distribution& p, std::size_t outcome) {
    const double v = second_moment(xi, p);
    if (frozen_ || variance_sum_ + v > budget_) {
      frozen_ = true;
      return;
    }
    const double g = (2.0 * sum_ * xi[outcome] + xi[outcome] * xi[outcome] - v) / budget_;
    capital_ = std::max(0.0, capital_ + g);
    sum_ += xi[outcome];
    variance_sum_ += v;
  }

  double budget() const { return budget_; }
  double capital() const { return capital_; }
  double sum() const { return sum_; }
  double variance_sum() const { return variance_sum_; }
  bool frozen() const { return frozen_; }

 private:
  static double second_moment(std::span<const double> xi, const Distribution& p) {
    double v = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) v += xi[i] * xi[i] * p[i];
    return v;
  }

  double budget_;
  double capital_ = 1.0;
  double sum_ = 0.0;
  double variance_sum_ = 0.0;
  bool frozen_ = false;
};

/// Quadratic forcer driven by a test function read off the round context,
/// optionally centered under the player's own forecast first.
template <class Context>
class ForcerStrategy final : public Strategy<Context> {
 public:
  using XiFunction = std::function<std::vector<double>(const Context&)>;

  ForcerStrategy(double budget, XiFunction xi, bool center)
      : forcer_(budget), xi_fn_(std::move(xi)), center_(center) {}

  BettingFunction bet(const Context& ctx) override {
    xi_ = xi_fn_(ctx);
    if (center_) xi_ = submartingale_center(xi_, ctx.own_forecast());
    return forcer_.bet(xi_, ctx.own_forecast());
  }

  void observe(const Context& ctx, std::size_t outcome) override {
    forcer_.observe(xi_, ctx.own_forecast(), outcome);
  }

  const QuadraticForcer& forcer() const { return forcer_; }

 private:
  QuadraticForcer forcer_;
  XiFunction xi_fn_;
  bool center_;
  std::vector<double> xi_;
};

inline std::vector<double> context_xi(const SemimartingaleContext& ctx) {
  return {ctx.xi.begin(), ctx.xi.end()};
}

inline std::unique_ptr<ForcerStrategy<SemimartingaleContext>> quadratic_forcer(double budget) {
  return std::make_unique<ForcerStrategy<SemimartingaleContext>>(budget, context_xi, false);
}

/// Forcer for the submartingale protocol: centers each xi first.
inline std::unique_ptr<ForcerStrategy<SemimartingaleContext>> centered_forcer(double budget) {
  return std::make_unique<ForcerStrategy<SemimartingaleContext>>(budget, context_xi, true);
}

template <class Context>
using EventProvider = std::function<OutcomeSet(const Context&)>;

/// Quadratic forcer on the centered indicators of the events E_n.
template <class Context>
std::unique_ptr<ForcerStrategy<Context>> borel_cantelli_forcer(double budget,
                                                               EventProvider<Context> events) {
  auto xi = [events = std::move(events)](const Context& ctx) {
    return indicator(events(ctx), ctx.own_forecast().size());
  };
  return std::make_unique<ForcerStrategy<Context>>(budget, std::move(xi), true);
}

/// Mixture over budgets C = 1..c_max with weights proportional to C^-2.
template <class Context>
std::unique_ptr<Mixture<Context>> budget_mixture(
    std::size_t c_max, const std::function<std::unique_ptr<Strategy<Context>>(double)>& make) {
  if (c_max < 1) throw Error(ErrorCode::invalid_parameter, "c_max must be >= 1");
  std::vector<std::unique_ptr<Strategy<Context>>> parts;
  for (std::size_t c = 1; c <= c_max; ++c) parts.push_back(make(static_cast<double>(c)));
  return mix_strategies(std::move(parts), inverse_square_weights(1, c_max));
}

template <class Context>
std::unique_ptr<Mixture<Context>> borel_cantelli_mixture(std::size_t c_max,
                                                         const EventProvider<Context>& events) {
  return budget_mixture<Context>(c_max, [&events](double c) -> std::unique_ptr<Strategy<Context>> {
    return borel_cantelli_forcer<Context>(c, events);
  });
}

}  // namespace opinion_merge
