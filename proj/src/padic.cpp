#include "agt/padic.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "agt/error.hpp"

namespace agt::padic {

namespace {

constexpr std::int64_t kInfinitePrecision = std::numeric_limits<std::int64_t>::max() / 4;

void require_same_prime(const Padic& x, const Padic& y) {
  if (x.prime() != y.prime()) {
    throw Error(ErrorKind::PrimeMismatch,
                "p-adic numbers over " + std::to_string(x.prime()) + " and " + std::to_string(y.prime()));
  }
}

// Splits n != 0 into p^k * m with p not dividing m.
std::int64_t strip(BigInt& n, std::int64_t p) {
  std::int64_t k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace

Padic Padic::inexact_zero(std::int64_t p, std::int64_t abs_prec) {
  Padic z;
  z.p_ = p;
  z.zero_ = true;
  z.v_ = abs_prec;
  return z;
}

// scaled is the value divided by p^v, known modulo p^(abs_prec - v).
Padic Padic::make(std::int64_t p, std::int64_t v, BigInt scaled, std::int64_t abs_prec) {
  if (abs_prec - v <= 0) return inexact_zero(p, abs_prec);
  const BigInt modulus = pow_int(p, abs_prec - v);
  scaled = mod_floor(scaled, modulus);
  if (scaled == 0) return inexact_zero(p, abs_prec);
  const std::int64_t k = strip(scaled, p);
  Padic x;
  x.p_ = p;
  x.v_ = v + k;
  x.n_ = abs_prec - x.v_;
  x.unit_ = mod_floor(scaled, pow_int(p, x.n_));
  return x;
}

Padic Padic::from_rational(const Rational& q, std::int64_t p, std::int64_t precision) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (precision < 1) throw Error(ErrorKind::InvalidArgument, "precision must be >= 1");
  if (q == 0) {
    Padic z;
    z.p_ = p;
    z.zero_ = true;
    z.exact_ = true;
    z.v_ = kInfinitePrecision;
    return z;
  }
  BigInt num = numerator(q), den = denominator(q);
  const std::int64_t v = strip(num, p) - strip(den, p);
  const BigInt modulus = pow_int(p, precision);
  const auto den_inv = mod_inverse(den, modulus);
  Padic x;
  x.p_ = p;
  x.v_ = v;
  x.n_ = precision;
  x.unit_ = mod_floor(num * *den_inv, modulus);
  return x;
}

std::int64_t Padic::absolute_precision() const {
  if (zero_) return v_;
  return v_ + n_;
}

std::vector<int> Padic::digits() const {
  std::vector<int> out;
  if (zero_) return out;
  BigInt u = unit_;
  for (std::int64_t i = 0; i < n_; ++i) {
    out.push_back(static_cast<int>(u % p_));
    u /= p_;
  }
  return out;
}

Rational Padic::abs_value() const {
  if (zero_) return Rational(0);
  if (v_ >= 0) return Rational(BigInt(1), pow_int(p_, v_));
  return Rational(pow_int(p_, -v_));
}

Rational Padic::truncated_value() const {
  if (zero_) return Rational(0);
  if (v_ >= 0) return Rational(unit_ * pow_int(p_, v_));
  return Rational(unit_, pow_int(p_, -v_));
}

bool Padic::congruent(const Padic& other) const {
  require_same_prime(*this, other);
  return (*this - other).is_zero();
}

std::string Padic::str() const {
  if (is_exact_zero()) return "0";
  if (zero_) return "O(" + std::to_string(p_) + "^" + std::to_string(v_) + ")";
  std::string s = "v=" + std::to_string(v_) + " digits=[";
  const auto ds = digits();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(ds[i]);
  }
  return s + "] + O(" + std::to_string(p_) + "^" + std::to_string(absolute_precision()) + ")";
}

Padic operator+(const Padic& x, const Padic& y) {
  require_same_prime(x, y);
  if (x.is_exact_zero()) return y;
  if (y.is_exact_zero()) return x;
  const std::int64_t p = x.p_;
  const std::int64_t abs_prec = std::min(x.absolute_precision(), y.absolute_precision());
  if (x.zero_ && y.zero_) return Padic::inexact_zero(p, abs_prec);
  if (x.zero_ || y.zero_) {
    const Padic& w = x.zero_ ? y : x;
    return Padic::make(p, w.v_, w.unit_, abs_prec);
  }
  const std::int64_t v0 = std::min(x.v_, y.v_);
  if (abs_prec <= v0) return Padic::inexact_zero(p, abs_prec);
  const BigInt sum = x.unit_ * pow_int(p, x.v_ - v0) + y.unit_ * pow_int(p, y.v_ - v0);
  return Padic::make(p, v0, sum, abs_prec);
}

Padic operator-(const Padic& x) {
  if (x.zero_) return x;
  Padic r = x;
  r.unit_ = mod_floor(-x.unit_, pow_int(x.p_, x.n_));
  return r;
}

Padic operator*(const Padic& x, const Padic& y) {
  require_same_prime(x, y);
  if (x.is_exact_zero()) return x;
  if (y.is_exact_zero()) return y;
  const std::int64_t p = x.p_;
  if (x.zero_ && y.zero_) return Padic::inexact_zero(p, x.v_ + y.v_);
  if (x.zero_) return Padic::inexact_zero(p, x.v_ + y.v_);
  if (y.zero_) return Padic::inexact_zero(p, x.v_ + y.v_);
  const std::int64_t n = std::min(x.n_, y.n_);
  const std::int64_t v = x.v_ + y.v_;
  return Padic::make(p, v, x.unit_ * y.unit_, v + n);
}

Padic inv(const Padic& x) {
  if (x.is_exact_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of exact zero");
  if (x.zero_) {
    throw Error(ErrorKind::PrecisionExhausted, "inverse of " + x.str() + ": no significant digits left");
  }
  Padic r = x;
  r.v_ = -x.v_;
  r.unit_ = *mod_inverse(x.unit_, pow_int(x.p_, x.n_));
  return r;
}

Rational abs_p(const Rational& q, std::int64_t p) {
  if (q == 0) return Rational(0);
  const std::int64_t v = valuation(numerator(q), p) - valuation(denominator(q), p);
  if (v >= 0) return Rational(BigInt(1), pow_int(p, v));
  return Rational(pow_int(p, -v));
}

std::vector<std::int64_t> prime_factors(BigInt n) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "prime_factors needs n > 0");
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; BigInt(p) * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(static_cast<std::int64_t>(n));
  return ps;
}

ProductFormulaReport product_formula_check(const Rational& q) {
  if (q == 0) throw Error(ErrorKind::InvalidArgument, "product formula needs q != 0");
  ProductFormulaReport r;
  r.q = q;
  r.archimedean = q < 0 ? Rational(-q) : q;
  r.product = r.archimedean;
  std::vector<std::int64_t> ps = prime_factors(abs(numerator(q)) * denominator(q));
  for (std::int64_t p : ps) {
    const Rational a = abs_p(q, p);
    r.local.emplace_back(p, a);
    r.product *= a;
  }
  r.passed = r.product == 1;
  return r;
}

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& text, std::int64_t p, std::int64_t prec) : s_(text), p_(p), prec_(prec) {}

  Padic parse() {
    Padic r = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::InvalidArgument, "expression: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Padic expr() {
    Padic r = term();
    for (;;) {
      if (eat('+')) r = r + term();
      else if (eat('-')) r = r - term();
      else return r;
    }
  }
  Padic term() {
    Padic r = unary();
    for (;;) {
      if (eat('*')) r = r * unary();
      else if (eat('/')) r = r / unary();
      else return r;
    }
  }
  Padic unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Padic power() {
    Padic base = atom();
    if (!eat('^')) return base;
    skip();
    bool negative = eat('-');
    const BigInt e = integer();
    if (e > 4096) fail("exponent too large");
    Padic r = Padic::from_integer(1, p_, prec_);
    for (BigInt i = 0; i < e; ++i) r = r * base;
    return negative ? inv(r) : r;
  }
  Padic atom() {
    if (eat('(')) {
      Padic r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    return Padic::from_rational(Rational(integer()), p_, prec_);
  }
  BigInt integer() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a number");
    return BigInt(s_.substr(start, pos_ - start));
  }

  std::string s_;
  std::size_t pos_ = 0;
  std::int64_t p_;
  std::int64_t prec_;
};

}  // namespace

Padic eval_expression(const std::string& expr, std::int64_t p, std::int64_t precision) {
  return ExprParser(expr, p, precision).parse();
}

}  // namespace agt::padic
