#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace agt {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

/// Parses "p/q", "p" or "-p/q". Throws Error(InvalidArgument) on malformed input
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// "p/q" or "p" when the denominator is one.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& n);

/// Exponent of the prime p in n (n != 0).
std::int64_t valuation(BigInt n, std::int64_t p);

/// Positive remainder of a modulo m (m > 0).
BigInt mod_floor(const BigInt& a, const BigInt& m);

/// Inverse of a modulo m; nullopt when gcd(a, m) != 1.
std::optional<BigInt> mod_inverse(const BigInt& a, const BigInt& m);

BigInt pow_int(std::int64_t base, std::int64_t exponent);

bool is_prime(std::int64_t n);

}  // namespace agt
