#include "agt/exact.hpp"

#include <cctype>

#include "agt/error.hpp"

namespace agt {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) {
    throw Error(ErrorKind::InvalidArgument, "malformed rational '" + std::string(whole) + "'");
  }
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw Error(ErrorKind::InvalidArgument, "malformed rational '" + std::string(whole) + "'");
    }
    value = value * 10 + (text[i] - '0');
  }
  return negative ? BigInt(-value) : value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto body = trim(text);
  const auto slash = body.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(body, text));
  const BigInt num = parse_integer(trim(body.substr(0, slash)), text);
  const BigInt den = parse_integer(trim(body.substr(slash + 1)), text);
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::string to_string(const BigInt& n) { return n.str(); }

std::int64_t valuation(BigInt n, std::int64_t p) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  std::int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

std::optional<BigInt> mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt old_r = mod_floor(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    const BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) return std::nullopt;
  return mod_floor(old_s, m);
}

BigInt pow_int(std::int64_t base, std::int64_t exponent) {
  if (exponent < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  BigInt result = 1;
  BigInt b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    b *= b;
    exponent >>= 1;
  }
  return result;
}

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::int64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace agt
