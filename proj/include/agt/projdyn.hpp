#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "agt/words.hpp"

namespace agt::projdyn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// g = k1 * diag(alphas) * k2 with k1, k2 special orthogonal and alphas
/// descending.
struct KAK {
  Mat k1;
  Mat k2;
  Vec alphas;
};

/// Throws Error(InvalidArgument) unless det g > 0 and 2 <= d <= 20, and
/// Error(NumericalFailure) if the factors do not reproduce g to 1e-9 |g|.
KAK kak(const Mat& g);

/// Operator (spectral) norm.
double op_norm(const Mat& g);

/// |v ^ w| / (|v| |w|): the sine of the angle between the lines.
double proj_metric(const Vec& x, const Vec& y);

/// Distance from [x] to the projective hyperplane with the given normal:
/// |<x, n>| / (|x| |n|).
double hyperplane_distance(const Vec& x, const Vec& normal);

/// Matrix of the l-th exterior power in the basis e_I, I ranging over
/// increasing l-subsets in lexicographic order. Requires 1 <= l <= d - 1.
Mat exterior_power(const Mat& g, int l);

/// Index l (1-based) maximizing the growth of alpha_l / alpha_(l+1) along the
/// sequence; ties go to the smallest l. Throws Error(NotDiverging) when no
/// ratio grows.
int pick_contracting_level(const std::vector<Mat>& gs);

/// Deterministic quasi-uniform unit vectors in R^d (Halton points pushed
/// through Box-Muller), `offset` selects a disjoint stretch of the sequence.
std::vector<Vec> sphere_samples(int d, std::size_t count, std::size_t offset = 0);

/// A projective map given as a product of factors, applied right to left.
/// Evaluating vectors factor by factor keeps strongly contracting products
/// accurate where the assembled matrix would lose its small singular values.
struct ProductMap {
  std::vector<Mat> factors;  // map = factors[0] * factors[1] * ...

  static ProductMap of(const Mat& g) { return ProductMap{{g}}; }
  Vec apply(const Vec& x) const;
  Mat matrix() const;
  ProductMap inverse() const;
  /// alpha_1 / alpha_2, with alpha_1 alpha_2 taken from the product of the
  /// exterior squares of the factors.
  double top_ratio() const;
  friend ProductMap operator*(const ProductMap& x, const ProductMap& y);
};

/// Worst-case epsilon for which the KAK pair of a map with top ratio R is
/// epsilon-contracting: 1 / sqrt(R + 1).
double contraction_frontier(double ratio);

struct ContractionCertificate {
  bool certified = false;
  double epsilon = 0;
  Vec v;       // attracting point
  Vec normal;  // normal of the repelling hyperplane
  std::size_t samples = 0;
  double max_image_distance = 0;
  /// Sample whose image landed farthest from v, when certification failed.
  std::optional<Vec> witness;
};

/// Samples points x with d(x, H) > eps (uniform plus a shell just outside the
/// eps-neighborhood of H) and checks d(g x, v) <= eps, where v = k1 e1 and H
/// has normal k2^T e1.
ContractionCertificate contraction_check(const Mat& g, double eps, std::size_t nsamples);

/// Same check for a product map and a given pair (v, H).
ContractionCertificate contraction_check(const ProductMap& g, const Vec& v, const Vec& normal, double eps,
                                         std::size_t nsamples);

/// sqrt(1 - delta^2) / delta for 0 < delta < 1.
double lipschitz_ratio_bound(double delta);

/// Upper bound for the Lipschitz constant of [x] -> [g x] on all of P(R^d):
/// alpha_1 alpha_2 / alpha_d^2.
double global_lipschitz_bound(const Mat& g);

/// Max of d(gx, gy) / d(x, y) over sampled pairs in the ball of the given
/// radius around center.
double local_lipschitz(const ProductMap& g, const Vec& center, double radius, std::size_t nsamples);
inline double local_lipschitz(const Mat& g, const Vec& center, double radius, std::size_t nsamples) {
  return local_lipschitz(ProductMap::of(g), center, radius, nsamples);
}

struct Configuration {
  std::vector<Vec> points;
  std::vector<Vec> normals;
};

/// min over i, j of d(f v_i, H_j) and d(f^-1 v_i, H_j).
double separation_score(const Mat& f, const Mat& f_inv, const Configuration& c);

struct SeparationResult {
  std::vector<std::size_t> chosen;  // indices into the candidates
  double r = 0;
  std::size_t configurations = 0;
};

/// Greedy search for a finite F among the candidates that is (n, r)-separating
/// on a fixed family of random and adversarial configurations. r is a measured
/// value, not a bound. Throws Error(SearchExhausted) when r < 1e-3.
SeparationResult separating_search(const std::vector<Mat>& candidates, int n, std::size_t trial_configs,
                                   std::size_t max_size = 6);

struct FreePairParams {
  std::uint32_t word_length = 4;        // words searched for the contracting element
  std::uint32_t separation_length = 2;  // words used as separating candidates
  std::size_t separation_configs = 200;
  std::uint32_t max_power = 40;
  std::size_t samples = 2000;
  std::uint32_t exact_check_length = 10;
};

struct Player {
  std::string name;
  words::Word word;  // in the input generators
  Mat matrix;
  Vec v;       // attracting point
  Vec normal;  // repelling hyperplane
  double epsilon = 0;
};

struct PingPongCert {
  std::vector<Player> players;  // gamma1, gamma1^-1, gamma2, gamma2^-1
  words::Word gamma;
  std::uint32_t gamma_power = 1;
  std::vector<words::Word> separating_family;
  double C = 0;
  double r = 0;
  double epsilon = 0;
  double neighborhood = 0;  // C^2 epsilon, radius of the ping-pong sets
  std::size_t samples_checked = 0;
  double worst_table_distance = 0;
  std::vector<std::string> checks;  // human-readable list of verified inequalities
  /// Set when every generator is integral and the exact oracle ran.
  std::optional<bool> exact_check_passed;
  std::uint32_t exact_check_length = 0;
};

/// Builds two players of a free subgroup following the staged construction
/// gamma0 = gamma f gamma^-1, gamma1 = f0 gamma0, gamma2 = f1 gamma1 f1^-1,
/// then verifies the proximality inequalities, C^4 eps < r and a sampled
/// ping-pong table. Throws Error(PipelineStuck) naming the failing stage.
PingPongCert construct_free_pair(const std::vector<Mat>& gens, const FreePairParams& params = {});

/// Evaluates a word in the given generators.
Mat evaluate(const words::Word& w, const std::vector<Mat>& gens);

struct CommutatorDefect {
  double defect = 0;  // |[x, y] - I|
  double bound = 0;   // 8 |x - I| |y - I|
  bool within_bound() const { return defect <= bound * (1 + 1e-12) + 1e-15; }
};

/// Throws Error(NormsTooLarge) unless |x^-1| < 2 and |y^-1| < 2.
CommutatorDefect commutator_defect(const Mat& x, const Mat& y);

/// y_0 = y, y_n = [x_n, y_(n-1)]; returns |y_n - I| for n = 0..xs.size().
std::vector<double> iterated_commutator_norms(const std::vector<Mat>& xs, const Mat& y);

}  // namespace agt::projdyn
