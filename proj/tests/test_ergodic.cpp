#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "agt/error.hpp"
#include "agt/ergodic.hpp"

using namespace agt;
using namespace agt::ergodic;

namespace {

TrigPoly single(std::int64_t k, Complex c = 1.0) {
  TrigPoly f;
  f.coeffs[k] = c;
  return f;
}

double to_double(const Rational& q) { return static_cast<double>(q); }

}  // namespace

TEST_CASE("Koopman operator") {
  const auto c = single(0, 2.5);
  CHECK(koopman(c, Rational(1, 7)).coeffs.at(0) == c.coeffs.at(0));
  const auto u = koopman(single(1), Rational(1, 4));
  CHECK(std::abs(u.coeffs.at(1) - Complex(0, 1)) < 1e-15);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 100; ++trial) {
    TrigPoly f;
    for (int k = -5; k <= 5; ++k) f.coeffs[k] = Complex(n(rng), n(rng));
    CHECK(koopman(f, sqrt2_approximant()).norm() == doctest::Approx(f.norm()).epsilon(1e-14));
  }
}

TEST_CASE("Dirichlet means") {
  for (std::int64_t num : {1, 2, 3, 5, 8, 13}) {
    const Rational theta(num, 17);
    for (std::int64_t nn : {1, 2, 7, 50, 333}) {
      const auto closed = dirichlet_mean(theta, nn);
      CHECK(std::abs(closed - dirichlet_mean_direct(to_double(theta), nn)) < 1e-12);
      CHECK(std::abs(closed) <= 1 + 1e-15);
    }
  }
  CHECK(dirichlet_mean(Rational(3), 10) == Complex(1.0, 0.0));
  CHECK(std::abs(dirichlet_mean(Rational(1, 3), 3)) < 1e-15);
}

TEST_CASE("ergodic averages preserve the mean") {
  TrigPoly f = TrigPoly::parse("0:2,1:1,-3:0.5:0.25");
  CHECK(f.coeffs.size() == 3);
  CHECK(f.coeffs.at(-3) == Complex(0.5, 0.25));
  for (std::int64_t n : {1, 10, 1000}) {
    const auto g = ergodic_average(f, golden_approximant(), n);
    CHECK(g.coeffs.at(0) == f.coeffs.at(0));
  }
  const auto c = single(0, 4.0);
  CHECK(ergodic_average(c, sqrt2_approximant(), 17).coeffs.at(0) == Complex(4.0));
  CHECK(l2_distance_to_mean(c, sqrt2_approximant(), 17) == 0.0);
  CHECK_THROWS_AS(TrigPoly::parse("1"), Error);
}

TEST_CASE("closed form for a single character") {
  const auto f = single(1);
  for (const auto& alpha : {golden_approximant(), sqrt2_approximant()}) {
    const double a = to_double(alpha);
    for (std::int64_t n : {10, 100, 1000, 10000}) {
      const double expect = std::abs(std::sin(std::numbers::pi * n * a)) / (n * std::abs(std::sin(std::numbers::pi * a)));
      CHECK(l2_distance_to_mean(f, alpha, n) == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("resonant frequencies do not average out") {
  const auto f = single(3, 0.75);
  for (std::int64_t n : {1, 10, 1000}) {
    CHECK(l2_distance_to_mean(f, Rational(1, 3), n) == doctest::Approx(0.75).epsilon(1e-15));
  }
}

TEST_CASE("decay for approximately irrational rotations") {
  const auto f = TrigPoly::parse("1:1,3:0.5,-2:0.3:0.1");
  const Rational alpha = sqrt2_approximant();
  double prev = 2;
  for (int j = 0; j <= 20; ++j) {
    const std::int64_t n = std::int64_t{1} << j;
    const double d = l2_distance_to_mean(f, alpha, n);
    CHECK(d < envelope(f, alpha, n));
    if (j >= 4) CHECK(d <= prev * 1.5);
    prev = d;
  }
  for (std::int64_t n : {10, 100, 1000, 10000}) CHECK(l2_distance_to_mean(f, alpha, n) < envelope(f, alpha, n));
  CHECK(std::isinf(envelope(single(3), Rational(1, 3), 10)));
}

TEST_CASE("approximants") {
  CHECK(denominator(sqrt2_approximant()) >= BigInt(1000000000000LL));
  CHECK(std::abs(to_double(sqrt2_approximant()) - std::sqrt(2.0)) < 1e-15);
  CHECK(parse_alpha("3/7") == Rational(3, 7));
  CHECK(parse_alpha("golden") == golden_approximant());
}
