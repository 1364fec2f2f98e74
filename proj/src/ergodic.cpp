#include "agt/ergodic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "agt/error.hpp"

namespace agt::ergodic {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// x - floor(x), exactly.
Rational frac(const Rational& x) {
  BigInt fl = numerator(x) / denominator(x);
  if (x < 0 && Rational(fl) != x) fl -= 1;
  return x - Rational(fl);
}

BigInt floor_of(const Rational& x) {
  BigInt fl = numerator(x) / denominator(x);
  if (x < 0 && Rational(fl) != x) fl -= 1;
  return fl;
}

double to_double(const Rational& q) { return static_cast<double>(q); }

// Continued fraction [a0; a1, a2, ...] with constant tail until q exceeds the limit.
Rational convergent(std::int64_t a0, std::int64_t tail, const BigInt& limit) {
  BigInt p_prev = 1, q_prev = 0, p = a0, q = 1;
  while (q < limit) {
    const BigInt pn = tail * p + p_prev, qn = tail * q + q_prev;
    p_prev = p, q_prev = q, p = pn, q = qn;
  }
  return Rational(p, q);
}

}  // namespace

double TrigPoly::norm() const {
  double s = 0;
  for (const auto& [k, c] : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

Complex TrigPoly::mean() const {
  const auto it = coeffs.find(0);
  return it == coeffs.end() ? Complex{} : it->second;
}

TrigPoly TrigPoly::parse(const std::string& text) {
  TrigPoly f;
  std::stringstream items(text);
  std::string item;
  while (std::getline(items, item, ',')) {
    if (item.empty()) continue;
    std::stringstream parts(item);
    std::string k, re, im;
    std::getline(parts, k, ':');
    std::getline(parts, re, ':');
    std::getline(parts, im, ':');
    try {
      std::size_t used = 0;
      const std::int64_t freq = std::stoll(k, &used);
      if (used != k.size() || re.empty()) throw std::invalid_argument(item);
      f.coeffs[freq] += Complex(std::stod(re), im.empty() ? 0.0 : std::stod(im));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad frequency item '" + item + "' (expected k:re or k:re:im)");
    }
  }
  return f;
}

Rational sqrt2_approximant() { return convergent(1, 2, BigInt(1'000'000'000'000)); }

Rational golden_approximant() { return convergent(1, 1, BigInt(1'000'000'000'000)); }

Rational parse_alpha(const std::string& text) {
  if (text == "sqrt2") return sqrt2_approximant();
  if (text == "golden") return golden_approximant();
  return parse_rational(text);
}

TrigPoly koopman(const TrigPoly& f, const Rational& alpha) {
  TrigPoly g;
  for (const auto& [k, c] : f.coeffs) {
    const double t = 2 * kPi * to_double(frac(alpha * k));
    g.coeffs[k] = c * Complex(std::cos(t), std::sin(t));
  }
  return g;
}

Complex dirichlet_mean(const Rational& theta, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const Rational t = frac(theta);
  if (t == 0) return Complex(1.0, 0.0);
  // (1/n) e^(pi i (n+1) t) sin(pi n t) / sin(pi t)
  const Rational nt = t * n;
  const double sign = (floor_of(nt) % 2 == 0) ? 1.0 : -1.0;
  const double num = sign * std::sin(kPi * to_double(frac(nt)));
  const double den = std::sin(kPi * to_double(t));
  const Rational half_turns = t * (n + 1);  // phase = pi * half_turns, reduced mod 2
  const Rational reduced = half_turns - Rational(2 * floor_of(half_turns / 2));
  const double phase = kPi * to_double(reduced);
  return Complex(std::cos(phase), std::sin(phase)) * (num / (static_cast<double>(n) * den));
}

Complex dirichlet_mean_direct(double theta, std::int64_t n) {
  Complex s{};
  for (std::int64_t j = 1; j <= n; ++j) {
    const double a = 2 * kPi * std::fmod(static_cast<double>(j) * theta, 1.0);
    s += Complex(std::cos(a), std::sin(a));
  }
  return s / static_cast<double>(n);
}

TrigPoly ergodic_average(const TrigPoly& f, const Rational& alpha, std::int64_t n) {
  TrigPoly g;
  for (const auto& [k, c] : f.coeffs) g.coeffs[k] = k == 0 ? c : c * dirichlet_mean(alpha * k, n);
  return g;
}

double l2_distance_to_mean(const TrigPoly& f, const Rational& alpha, std::int64_t n) {
  double s = 0;
  for (const auto& [k, c] : f.coeffs) {
    if (k != 0) s += std::norm(c) * std::norm(dirichlet_mean(alpha * k, n));
  }
  return std::sqrt(s);
}

double envelope(const TrigPoly& f, const Rational& alpha, std::int64_t n) {
  double worst = 0, mass = 0;
  for (const auto& [k, c] : f.coeffs) {
    if (k == 0 || c == Complex{}) continue;
    mass += std::norm(c);
    const Rational t = frac(alpha * k);
    if (t == 0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, 1.0 / std::abs(std::sin(kPi * to_double(t))));
  }
  return std::sqrt(mass) / static_cast<double>(n) * worst;
}

}  // namespace agt::ergodic
