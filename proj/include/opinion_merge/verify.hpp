#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opinion_merge/divergence.hpp"
#include "opinion_merge/engine.hpp"
#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"
#include "opinion_merge/strategies.hpp"

namespace opinion_merge {

inline constexpr double kIdentityTolerance = 1e-9;     // relative
inline constexpr double kInequalitySlack = 1e-9;       // additive
inline constexpr double kCrossCheckTolerance = 1e-12;  // relative
inline constexpr double kMonotoneSlack = 1e-10;

enum class CheckStatus { pass, fail, skipped };

inline const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "PASS";
    case CheckStatus::fail: return "FAIL";
    case CheckStatus::skipped: return "SKIPPED";
  }
  return "UNKNOWN";
}

/// Both sides of a checked relation at every round or grid point. A NaN on
/// the left side marks an indefinite inf - inf expression.
struct CheckReport {
  std::string name;
  std::vector<double> left;
  std::vector<double> right;
  CheckStatus status = CheckStatus::pass;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::string detail;

  bool pass() const { return status != CheckStatus::fail; }

  void record(double l, double r, double violation) {
    left.push_back(l);
    right.push_back(r);
    if (violation > max_violation) max_violation = violation;
  }
  void finish() {
    if (status != CheckStatus::skipped) {
      status = max_violation <= tolerance ? CheckStatus::pass : CheckStatus::fail;
    }
  }
};

inline CheckReport make_report(std::string name, double tolerance) {
  CheckReport rep;
  rep.name = std::move(name);
  rep.tolerance = tolerance;
  return rep;
}

inline double log_of(const LogCapital& k) {
  return k.is_indefinite() ? std::nan("") : k.log_value().value();
}

// a * x with 0 * inf = 0, propagating NaN.
inline double ext_scale(double a, double x) {
  if (std::isnan(x)) return x;
  return ext_mul(a, x).value();
}

// Excess of `smaller` over `larger` for a relation smaller <= larger over
// the extended reals; 0 when the relation holds or either side is NaN.
inline double excess(double smaller, double larger) {
  if (std::isnan(smaller) || std::isnan(larger)) return 0.0;
  if (smaller <= larger) return 0.0;
  if (std::isinf(smaller) || std::isinf(larger)) return kInfinity;
  return smaller - larger;
}

/// Running sums of a per-round divergence over a transcript.
template <class F>
std::vector<ExtReal> cumulative(const Transcript& t, F&& per_round) {
  std::vector<ExtReal> out;
  out.reserve(t.size());
  ExtReal total = 0.0;
  for (const auto& r : t.rounds) {
    total = ext_add(total, per_round(r.density));
    out.push_back(total);
  }
  return out;
}

inline std::vector<ExtReal> cumulative_bracket(const Transcript& t, AlphaParam alpha) {
  return cumulative(t, [alpha](const DensityPair& dp) { return div_bracket(dp, alpha); });
}

inline std::vector<ExtReal> cumulative_kl(const Transcript& t) {
  return cumulative(t, [](const DensityPair& dp) { return kl_divergence(dp); });
}

/// (2/(1+a)) ln K_I + (2/(1-a)) ln K_II.
inline LogCapital alpha_combination(const LogCapital& log_K_I, const LogCapital& log_K_II,
                                    AlphaParam alpha) {
  const double a = alpha.value();
  return log_K_I.scaled(2.0 / (1.0 + a)) + log_K_II.scaled(2.0 / (1.0 - a));
}

/// The log-capital identity of the joint power strategy. Indefinite left
/// sides and rounds where both sides are +inf pass.
inline CheckReport check_small_alpha_identity(const Transcript& t, AlphaParam alpha) {
  CheckReport rep = make_report("small_alpha_identity", kIdentityTolerance);
  const std::vector<ExtReal> rhs = cumulative_bracket(t, alpha);
  for (std::size_t n = 0; n < t.size(); ++n) {
    const LogCapital lhs = alpha_combination(t.rounds[n].log_K_I, t.rounds[n].log_K_II, alpha);
    const double r = rhs[n].value();
    double violation = 0.0;
    if (!lhs.is_indefinite()) {
      const double l = lhs.log_value().value();
      if (std::isinf(l) || std::isinf(r)) {
        violation = l == r ? 0.0 : kInfinity;
      } else {
        violation = std::abs(l - r) / std::max(1.0, std::abs(r));
      }
    }
    rep.record(log_of(lhs), r, violation);
  }
  rep.finish();
  return rep;
}

/// The upper bound on the same combination for alpha < -1.
inline CheckReport check_big_alpha_bound(const Transcript& t, double alpha) {
  big_alpha_fraction(alpha);
  const AlphaParam a(alpha);
  CheckReport rep = make_report("big_alpha_bound", kInequalitySlack);
  const std::vector<ExtReal> rhs = cumulative_bracket(t, a);
  for (std::size_t n = 0; n < t.size(); ++n) {
    const double l = log_of(alpha_combination(t.rounds[n].log_K_I, t.rounds[n].log_K_II, a));
    const double r = rhs[n].value();
    rep.record(l, r, excess(l, r));
  }
  rep.finish();
  return rep;
}

// ---------------------------------------------------------------------------
// Growth-rate bounds on c-timid plays

enum class GrowthVariant {
  fixed_growth_lower,         // joint fixed-horizon strategy, C = 2c ln^2 c
  fixed_growth_upper,         // Sceptic I fixed-horizon strategy, C = c ln^2 c
  eps_growth_lower,   // lower bound for a fixed epsilon
  eps_growth_upper,
  anytime_growth_lower,  // mixture over k, penalty 2 ln k
  anytime_growth_upper,
};

inline const char* growth_variant_name(GrowthVariant v) {
  switch (v) {
    case GrowthVariant::fixed_growth_lower: return "fixed_growth_lower";
    case GrowthVariant::fixed_growth_upper: return "fixed_growth_upper";
    case GrowthVariant::eps_growth_lower: return "eps_growth_lower";
    case GrowthVariant::eps_growth_upper: return "eps_growth_upper";
    case GrowthVariant::anytime_growth_lower: return "anytime_growth_lower";
    case GrowthVariant::anytime_growth_upper: return "anytime_growth_upper";
  }
  return "unknown";
}

struct GrowthParams {
  double c = 2.0;
  double epsilon = 0.0;       // fixed-epsilon variants
  std::size_t horizon = 0;    // fixed-horizon variants; 0 means the transcript length
  std::size_t k_max = 0;      // anytime variants
};

/// Per-round inputs of a growth bound. The capitals may be the Sceptics'
/// own or those of one component of a mixture.
struct GrowthSeries {
  std::vector<LogCapital> log_K_I;
  std::vector<LogCapital> log_K_II;
  std::vector<ExtReal> kl_cum;
};

inline GrowthSeries growth_series(const Transcript& t) {
  GrowthSeries s;
  for (const auto& r : t.rounds) {
    s.log_K_I.push_back(r.log_K_I);
    s.log_K_II.push_back(r.log_K_II);
  }
  s.kl_cum = cumulative_kl(t);
  return s;
}

inline CheckReport check_growth_series(const GrowthSeries& s, GrowthVariant variant,
                                       const GrowthParams& prm) {
  if (!(prm.c > 1.0)) throw Error(ErrorCode::invalid_parameter, "timidity constant must exceed 1");
  CheckReport rep = make_report(growth_variant_name(variant), kInequalitySlack);
  const double c = prm.c;
  const double ln2c = std::log(c) * std::log(c);
  const std::size_t rounds = s.kl_cum.size();
  const double big_n = static_cast<double>(prm.horizon ? prm.horizon : rounds);

  for (std::size_t idx = 0; idx < rounds; ++idx) {
    const double n = static_cast<double>(idx + 1);
    const double k_I = log_of(s.log_K_I[idx]);
    const double k_II = log_of(s.log_K_II[idx]);
    const double kl = s.kl_cum[idx].value();
    double l = k_II;
    double r = 0.0;
    bool lower = true;

    switch (variant) {
      case GrowthVariant::fixed_growth_lower:
        r = kl - (std::sqrt(big_n) - 1.0) * (k_I + 2.0 * c * ln2c);
        break;
      case GrowthVariant::fixed_growth_upper:
        r = kl + (std::sqrt(big_n) + 1.0) * (k_I + c * ln2c);
        lower = false;
        break;
      case GrowthVariant::eps_growth_lower:
      case GrowthVariant::eps_growth_upper: {
        const double e = prm.epsilon;
        if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::invalid_parameter, "epsilon in (0, 1)");
        const double drift = 0.5 * n * e * std::pow(c, e) * ln2c;
        if (variant == GrowthVariant::eps_growth_lower) {
          r = kl - drift - ext_scale((1.0 - e) / e, k_I);
        } else {
          r = kl + drift + ext_scale((1.0 + e) / e, k_I);
          lower = false;
        }
        break;
      }
      case GrowthVariant::anytime_growth_lower:
      case GrowthVariant::anytime_growth_upper: {
        if (prm.k_max < 2) throw Error(ErrorCode::invalid_parameter, "k_max must be >= 2");
        const std::size_t k = std::min(anytime_index(idx + 1), prm.k_max);
        const double e = anytime_epsilon(k);
        const double penalty = 2.0 * std::log(static_cast<double>(k));
        const double drift = 0.5 * n * e * std::pow(c, e) * ln2c;
        if (variant == GrowthVariant::anytime_growth_lower) {
          l = k_II + penalty;
          r = kl - drift - ext_scale((1.0 - e) / e, k_I + penalty);
        } else {
          r = kl + drift + ext_scale((1.0 + e) / e, k_I + penalty);
          lower = false;
        }
        break;
      }
    }
    rep.record(l, r, lower ? excess(r, l) : excess(l, r));
  }
  rep.finish();
  return rep;
}

/// Growth bound on a transcript; SKIPPED with detail NOT_TIMID unless
/// every round is c-timid.
inline CheckReport check_growth_bounds(const Transcript& t, GrowthVariant variant,
                                       const GrowthParams& prm) {
  for (const auto& r : t.rounds) {
    if (!is_c_timid(r.density, prm.c)) {
      CheckReport rep = make_report(growth_variant_name(variant), kInequalitySlack);
      rep.status = CheckStatus::skipped;
      rep.detail = std::string(error_code_name(ErrorCode::not_timid)) + " in round " +
                   std::to_string(r.index);
      return rep;
    }
  }
  return check_growth_series(growth_series(t), variant, prm);
}

// ---------------------------------------------------------------------------
// Constants

inline double lemma6_constant(double alpha) {
  if (!(alpha > -1.0 && alpha < 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "large-ratio constant needs alpha in (-1, 1)");
  }
  const double e = std::numbers::e;
  const double denom = 0.5 * (1.0 - alpha) + (1.0 + alpha) / (2.0 * e) - std::exp(-0.5 * (1.0 + alpha));
  return 0.25 * (1.0 - alpha * alpha) / denom;
}

inline double lemma7_first_bound(double gamma) {
  return 5.0 * std::exp(1.0 - gamma) / (1.0 - gamma) + 1.0;
}

inline double lemma7_second_bound(double gamma) {
  const double e = std::numbers::e;
  return (2.0 * e - std::exp(gamma)) / (e - std::exp(gamma));
}

inline double lemma7_constant(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::invalid_parameter, "truncated-log constant needs gamma in (0, 1)");
  }
  return std::max(lemma7_first_bound(gamma), lemma7_second_bound(gamma));
}

/// P^I{beta_I > e beta_II} <= C(alpha) D^(alpha).
inline CheckReport check_lemma6(const DensityPair& dp, double alpha) {
  const double constant = lemma6_constant(alpha);
  CheckReport rep = make_report("lemma6", kCrossCheckTolerance);
  double l = 0.0;
  for (std::size_t i : large_ratio_event(dp)) l += dp.p_I(i);
  const double r = ext_mul(constant, div_paren(dp, AlphaParam(alpha))).value();
  rep.record(l, r, excess(l, r));
  rep.finish();
  return rep;
}

/// x U(ln x) + x U(ln x)^2 <= B (x - 1) + ((B - 1)/gamma)(1 - x^gamma).
inline CheckReport check_lemma7(double gamma, std::span<const double> x_grid) {
  const double b = lemma7_constant(gamma);
  CheckReport rep = make_report("lemma7", kInequalitySlack);
  for (double x : x_grid) {
    if (!(x > 0.0)) throw Error(ErrorCode::invalid_parameter, "truncated-log grid must be positive");
    const double u = truncate_U(std::log(x));
    const double l = x * u + x * u * u;
    const double r = b * (x - 1.0) + ((b - 1.0) / gamma) * (1.0 - std::pow(x, gamma));
    rep.record(l, r, excess(l, r));
  }
  rep.finish();
  return rep;
}

inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(a + t * (b - a));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divergence relations

inline std::vector<double> default_alpha_grid() {
  return {-0.99, -0.9, -0.8, -0.7, -0.6, -0.5, -0.4, -0.3, -0.2, -0.1, 0.0,
          0.1,   0.2,  0.3,  0.4,  0.5,  0.6,  0.7,  0.8,  0.9,  0.99};
}

inline double relative_gap(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : kInfinity;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

/// One report per relation: nonnegativity, the paren/bracket ordering, the
/// Hellinger and chi-squared special cases, symmetry under swapping the
/// forecasts, and monotonicity of (1 -+ alpha) D^(alpha) on (-1, 1).
inline std::vector<CheckReport> check_divergence_relations(
    const std::vector<std::pair<Distribution, Distribution>>& pairs,
    const std::vector<double>& alpha_grid) {
  CheckReport nonneg = make_report("nonnegativity", kInequalitySlack);
  CheckReport order = make_report("paren_bracket_order", kInequalitySlack);
  CheckReport hell = make_report("hellinger_special_case", kCrossCheckTolerance);
  CheckReport chi2 = make_report("chi2_special_case", kCrossCheckTolerance);
  CheckReport sym = make_report("swap_symmetry", kCrossCheckTolerance);
  CheckReport mono = make_report("fujiwara_monotonicity", kMonotoneSlack);

  std::vector<double> inner;
  for (double a : alpha_grid) {
    if (a > -1.0 && a < 1.0) inner.push_back(a);
  }
  std::sort(inner.begin(), inner.end());

  for (const auto& [p_I, p_II] : pairs) {
    const DensityPair dp = mixture_densities(p_I, p_II);
    const DensityPair swapped = mixture_densities(p_II, p_I);
    for (double a : alpha_grid) {
      if (a == 1.0 || a == -1.0) continue;
      const AlphaParam alpha(a);
      const double paren = div_paren(dp, alpha).value();
      const double bracket = div_bracket(dp, alpha).value();
      nonneg.record(paren, 0.0, excess(0.0, paren));
      nonneg.record(bracket, 0.0, excess(0.0, bracket));
      if (std::abs(a) < 1.0) {
        order.record(paren, bracket, excess(paren, bracket));
      } else {
        order.record(paren, bracket, excess(bracket, paren));
      }
      const double mirrored = div_paren(swapped, AlphaParam(-a)).value();
      sym.record(paren, mirrored, relative_gap(paren, mirrored));
    }

    double hell_direct = 0.0;
    bool full_support = true;
    for (std::size_t i = 0; i < dp.size(); ++i) {
      if (!dp.charged(i)) continue;
      const double d = std::sqrt(dp.beta_I[i]) - std::sqrt(dp.beta_II[i]);
      hell_direct += d * d * dp.q[i];
      if (dp.p_I(i) == 0.0 || dp.p_II(i) == 0.0) full_support = false;
    }
    hell_direct *= 2.0;
    const double hell_paren = div_paren(dp, AlphaParam(0.0)).value();
    hell.record(hell_paren, hell_direct, relative_gap(hell_paren, hell_direct));
    if (full_support) {
      const double c2 = chi2_divergence(dp).value();
      const double c2_paren = div_paren(dp, AlphaParam(-3.0)).value();
      chi2.record(c2, c2_paren, relative_gap(c2, c2_paren));
    }

    double prev_down = kInfinity;
    double prev_up = -kInfinity;
    for (double a : inner) {
      const double paren = div_paren(dp, AlphaParam(a)).value();
      const double down = (1.0 - a) * paren;  // non-increasing
      const double up = (1.0 + a) * paren;    // non-decreasing
      mono.record(down, prev_down, excess(down, prev_down));
      mono.record(up, prev_up, excess(prev_up, up));
      prev_down = down;
      prev_up = up;
    }
  }

  std::vector<CheckReport> out{nonneg, order, hell, chi2, sym, mono};
  for (auto& r : out) r.finish();
  return out;
}

}  // namespace opinion_merge
