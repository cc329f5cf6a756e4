#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "opinion_merge/errors.hpp"
#include "opinion_merge/extmath.hpp"
#include "opinion_merge/measures.hpp"

namespace opinion_merge {

/// Order of an alpha-divergence; alpha = +-1 has no paren/bracket form.
class AlphaParam {
 public:
  explicit AlphaParam(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha)) throw Error(ErrorCode::invalid_parameter, "alpha must be finite");
    if (alpha == 1.0 || alpha == -1.0) {
      throw Error(ErrorCode::invalid_parameter,
                  "alpha must differ from -1 and 1 (got " + std::to_string(alpha) + ")");
    }
  }

  double value() const { return alpha_; }
  // Exponent on beta_I in the Hellinger integrand.
  double exponent_I() const { return 0.5 * (1.0 - alpha_); }
  // Exponent on beta_II.
  double exponent_II() const { return 0.5 * (1.0 + alpha_); }

 private:
  double alpha_;
};

/// Sum over charged outcomes of beta_I^a * beta_II^b * q, using 0^0 = 1,
/// 0^(negative) = inf and 0 * inf = 0.
inline ExtReal power_integral(const DensityPair& dp, double exponent_I, double exponent_II) {
  ExtReal total = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    if (!dp.charged(i)) continue;
    const ExtReal term =
        ext_mul(ext_pow(dp.beta_I[i], exponent_I), ext_pow(dp.beta_II[i], exponent_II));
    total = ext_add(total, ext_mul(term, dp.q[i]));
  }
  return total;
}

inline ExtReal hellinger_integral(const DensityPair& dp, AlphaParam alpha) {
  return power_integral(dp, alpha.exponent_I(), alpha.exponent_II());
}

inline ExtReal div_paren(const DensityPair& dp, AlphaParam alpha) {
  const double a = alpha.value();
  const ExtReal h = hellinger_integral(dp, alpha);
  return ext_mul(4.0 / (1.0 - a * a), ext_add(1.0, -h.value()));
}

inline ExtReal div_bracket(const DensityPair& dp, AlphaParam alpha) {
  const double a = alpha.value();
  const ExtReal h = hellinger_integral(dp, alpha);
  return ext_mul(4.0 / (a * a - 1.0), ext_log(h));
}

// Kullback-Leibler divergence of P^I from P^II; +inf when P^I charges a
// P^II-null outcome.
inline ExtReal kl_divergence(const DensityPair& dp) {
  ExtReal total = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    const double p = dp.p_I(i);
    if (p == 0.0) continue;
    const ExtReal log_ratio = ext_log(safe_ratio(dp.beta_I[i], dp.beta_II[i]));
    total = ext_add(total, ext_mul(log_ratio, p));
  }
  return total;
}

inline ExtReal chi2_divergence(const DensityPair& dp) {
  ExtReal total = 0.0;
  for (std::size_t i = 0; i < dp.size(); ++i) {
    if (!dp.charged(i)) continue;
    const double diff = dp.beta_I[i] - dp.beta_II[i];
    total = ext_add(total, ext_mul(safe_ratio(diff * diff, dp.beta_II[i]), dp.q[i]));
  }
  return ext_mul(0.5, total);
}

/// Renyi information gain of order alpha > 0, alpha != 1, in bits.
inline ExtReal renyi_info_gain(const DensityPair& dp, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "Renyi order must be positive and differ from 1");
  }
  const ExtReal integral = power_integral(dp, alpha, 1.0 - alpha);
  const ExtReal log2_integral = ext_mul(ext_log(integral), 1.0 / std::numbers::ln2);
  return ext_mul(1.0 / (alpha - 1.0), log2_integral);
}

}  // namespace opinion_merge
