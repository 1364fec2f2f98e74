#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "agt/exact.hpp"

namespace agt::ergodic {

using Complex = std::complex<double>;

/// Finitely supported Fourier series sum_k c_k e^(2 pi i k x) on R/Z.
struct TrigPoly {
  std::map<std::int64_t, Complex> coeffs;

  /// L2 norm via Parseval.
  double norm() const;
  Complex mean() const;
  /// Parses "k:re" or "k:re:im" items separated by commas, e.g. "1:1,3:0.5".
  static TrigPoly parse(const std::string& text);
};

/// Continued-fraction convergent of sqrt(2) with denominator near 10^12.
Rational sqrt2_approximant();
/// Ratio of consecutive Fibonacci numbers near 10^12, approximating the
/// golden ratio.
Rational golden_approximant();
/// "sqrt2", "golden" or a rational "p/q".
Rational parse_alpha(const std::string& text);

/// U f = f o T_alpha: c_k -> c_k e^(2 pi i k alpha).
TrigPoly koopman(const TrigPoly& f, const Rational& alpha);

/// D_n(theta) = (1/n) sum_{j=1..n} e^(2 pi i j theta), in closed form with
/// the fractional parts of theta and n theta reduced exactly.
Complex dirichlet_mean(const Rational& theta, std::int64_t n);

/// Reference value by direct summation, for cross-checks.
Complex dirichlet_mean_direct(double theta, std::int64_t n);

/// (1/n) sum_{i=1..n} f o T^i: c_k -> c_k D_n(k alpha).
TrigPoly ergodic_average(const TrigPoly& f, const Rational& alpha, std::int64_t n);

/// || g_n - c_0 ||_2, exact up to rounding through Parseval.
double l2_distance_to_mean(const TrigPoly& f, const Rational& alpha, std::int64_t n);

/// ||f - c_0||_2 / n * max_{k != 0, c_k != 0} 1 / |sin(pi k alpha)|, an upper
/// bound for l2_distance_to_mean since |D_n(theta)| <= 1/(n |sin(pi theta)|).
/// Infinite when some k alpha is an integer.
double envelope(const TrigPoly& f, const Rational& alpha, std::int64_t n);

}  // namespace agt::ergodic
