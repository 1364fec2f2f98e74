#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "agt/exact.hpp"

namespace agt::padic {

/// Truncated p-adic number p^v * u with the unit u known modulo p^N (N is the
/// relative precision). Zero comes in two forms: exact (from the rational 0)
/// and inexact, i.e. O(p^A) produced by cancellation, where only the absolute
/// precision A is known.
class Padic {
 public:
  /// Throws Error(NotPrime) unless p is prime, Error(InvalidArgument) for N < 1.
  static Padic from_rational(const Rational& q, std::int64_t p, std::int64_t precision);
  static Padic from_integer(std::int64_t n, std::int64_t p, std::int64_t precision) {
    return from_rational(Rational(n), p, precision);
  }

  std::int64_t prime() const noexcept { return p_; }
  bool is_zero() const noexcept { return zero_; }
  bool is_exact_zero() const noexcept { return zero_ && exact_; }
  /// Valuation; for an inexact zero this is the absolute precision A.
  std::int64_t valuation() const noexcept { return v_; }
  /// Relative precision N (0 for zeros).
  std::int64_t precision() const noexcept { return zero_ ? 0 : n_; }
  /// v + N: the number is known modulo p^(v+N).
  std::int64_t absolute_precision() const;
  const BigInt& unit() const noexcept { return unit_; }

  /// Base-p digits of the unit, least significant first (N of them).
  std::vector<int> digits() const;

  /// |x|_p = p^-v, and 0 for zero.
  Rational abs_value() const;

  /// The value as an exact rational p^v * u with 0 <= u < p^N.
  Rational truncated_value() const;

  /// Equal modulo the smaller absolute precision.
  bool congruent(const Padic& other) const;

  std::string str() const;

  friend Padic operator+(const Padic& x, const Padic& y);
  friend Padic operator-(const Padic& x);
  friend Padic operator-(const Padic& x, const Padic& y) { return x + (-y); }
  friend Padic operator*(const Padic& x, const Padic& y);
  /// Throws Error(DivisionByZero) for exact zero and Error(PrecisionExhausted)
  /// for an inexact zero.
  friend Padic inv(const Padic& x);
  friend Padic operator/(const Padic& x, const Padic& y) { return x * inv(y); }

 private:
  Padic() = default;
  static Padic make(std::int64_t p, std::int64_t v, BigInt scaled, std::int64_t abs_prec);
  static Padic inexact_zero(std::int64_t p, std::int64_t abs_prec);

  std::int64_t p_ = 2;
  std::int64_t v_ = 0;
  std::int64_t n_ = 0;
  BigInt unit_ = 0;
  bool zero_ = false;
  bool exact_ = false;
};

/// Exact rational |q|_p.
Rational abs_p(const Rational& q, std::int64_t p);

struct ProductFormulaReport {
  Rational q;
  Rational archimedean;
  std::vector<std::pair<std::int64_t, Rational>> local;  // (p, |q|_p) for p | num * den
  Rational product;
  bool passed = false;
};

/// |q|_inf * prod_p |q|_p, computed exactly. Throws Error(InvalidArgument) for 0.
ProductFormulaReport product_formula_check(const Rational& q);

/// Prime factors of n > 0 by trial division, ascending.
std::vector<std::int64_t> prime_factors(BigInt n);

/// Evaluates an arithmetic expression over integer literals with + - * /,
/// unary minus, ^ with an integer exponent and parentheses, in Q_p at the
/// given precision.
Padic eval_expression(const std::string& expr, std::int64_t p, std::int64_t precision);

}  // namespace agt::padic
