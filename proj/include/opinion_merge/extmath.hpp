#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>

namespace opinion_merge {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A value in [-inf, +inf] that is never NaN.
///
/// Products follow the measure-theoretic convention 0 * inf = 0, so a
/// payoff of +inf on an outcome of probability zero contributes nothing
/// to an expectation.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  constexpr ExtReal(double v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() { return ExtReal(kInfinity); }
  static constexpr ExtReal neg_infinity() { return ExtReal(-kInfinity); }

  constexpr double value() const { return value_; }
  bool is_finite() const { return std::isfinite(value_); }
  bool is_pos_inf() const { return value_ == kInfinity; }
  bool is_neg_inf() const { return value_ == -kInfinity; }

  friend constexpr auto operator<=>(ExtReal, ExtReal) = default;

 private:
  double value_ = 0.0;
};

inline ExtReal ext_mul(ExtReal a, ExtReal b) {
  if (a.value() == 0.0 || b.value() == 0.0) return 0.0;
  return a.value() * b.value();
}

// inf + (-inf) has no value; callers that can meet it use LogCapital instead.
inline ExtReal ext_add(ExtReal a, ExtReal b) {
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf())) {
    throw std::domain_error("ext_add: indefinite sum inf - inf");
  }
  return a.value() + b.value();
}

inline ExtReal ext_log(ExtReal x) {
  if (x.value() < 0.0) throw std::domain_error("ext_log: negative argument");
  return std::log(x.value());  // log(0) = -inf, log(inf) = inf
}

inline ExtReal ext_exp(ExtReal x) { return std::exp(x.value()); }

/// num / den for nonnegative operands with 0/0 = 1 and t/0 = +inf.
inline ExtReal safe_ratio(double num, double den) {
  if (num < 0.0 || den < 0.0) throw std::domain_error("safe_ratio: negative operand");
  if (den == 0.0) return num == 0.0 ? ExtReal(1.0) : ExtReal::infinity();
  return num / den;
}

/// base^exponent for base in [0, inf] with 0^0 = 1, 0^(neg) = inf,
/// inf^(pos) = inf, inf^(neg) = 0.
inline ExtReal ext_pow(ExtReal base, double exponent) {
  const double b = base.value();
  if (b < 0.0) throw std::domain_error("ext_pow: negative base");
  if (exponent == 0.0) return 1.0;
  if (b == 0.0) return exponent > 0.0 ? ExtReal(0.0) : ExtReal::infinity();
  if (base.is_pos_inf()) return exponent > 0.0 ? ExtReal::infinity() : ExtReal(0.0);
  return std::pow(b, exponent);
}

// Truncation U(x) = min(x, 1).
inline double truncate_U(double x) { return x <= 1.0 ? x : 1.0; }

// U extended to +-inf; U(+inf) = 1.
inline ExtReal truncate_U(ExtReal x) { return x.value() <= 1.0 ? x : ExtReal(1.0); }

inline double pos_part(double x) { return x > 0.0 ? x : 0.0; }

/// Natural logarithm of a nonnegative capital.
///
/// -inf encodes capital 0 and +inf encodes capital +inf. Linear
/// combinations of log capitals can meet inf - inf; that result is kept as
/// the distinct state `indefinite` instead of collapsing to a number.
class LogCapital {
 public:
  enum class State { finite, pos_inf, neg_inf, indefinite };

  constexpr LogCapital() = default;

  static LogCapital from_log(ExtReal log_value) { return LogCapital(log_value.value(), false); }
  static LogCapital from_capital(ExtReal capital) { return from_log(ext_log(capital)); }
  static LogCapital indefinite() { return LogCapital(0.0, true); }

  State state() const {
    if (indefinite_) return State::indefinite;
    if (log_ == kInfinity) return State::pos_inf;
    if (log_ == -kInfinity) return State::neg_inf;
    return State::finite;
  }
  bool is_indefinite() const { return indefinite_; }
  bool is_finite() const { return !indefinite_ && std::isfinite(log_); }

  ExtReal log_value() const {
    if (indefinite_) throw std::domain_error("LogCapital: value of an indefinite expression");
    return log_;
  }
  ExtReal capital() const { return ext_exp(log_value()); }

  /// Adds a log increment; +inf plus -inf yields the indefinite state.
  LogCapital plus(ExtReal increment) const {
    if (indefinite_) return *this;
    const double inc = increment.value();
    if ((log_ == kInfinity && inc == -kInfinity) || (log_ == -kInfinity && inc == kInfinity)) {
      return indefinite();
    }
    return from_log(log_ + inc);
  }

  /// Multiplies the log value by a coefficient with 0 * inf = 0.
  LogCapital scaled(double coefficient) const {
    if (indefinite_) return *this;
    return from_log(ext_mul(coefficient, log_));
  }

  friend LogCapital operator+(const LogCapital& a, const LogCapital& b) {
    if (a.indefinite_ || b.indefinite_) return indefinite();
    return a.plus(b.log_);
  }

  friend bool operator==(const LogCapital&, const LogCapital&) = default;

 private:
  LogCapital(double log_value, bool indefinite) : log_(log_value), indefinite_(indefinite) {
    if (std::isnan(log_value)) throw std::domain_error("LogCapital: NaN log value");
  }

  double log_ = 0.0;
  bool indefinite_ = false;
};

inline std::string to_string(const LogCapital& k) {
  switch (k.state()) {
    case LogCapital::State::indefinite: return "indefinite";
    case LogCapital::State::pos_inf: return "inf";
    case LogCapital::State::neg_inf: return "-inf";
    case LogCapital::State::finite: break;
  }
  return std::to_string(k.log_value().value());
}

}  // namespace opinion_merge
