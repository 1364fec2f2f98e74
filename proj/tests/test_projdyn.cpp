#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "agt/error.hpp"
#include "agt/projdyn.hpp"

using namespace agt;
using namespace agt::projdyn;

namespace {

Mat random_matrix(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = n(rng);
  }
  return g;
}

Mat random_orthogonal(int d, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Mat> qr(random_matrix(d, rng));
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

Mat positive_det(int d, std::mt19937_64& rng) {
  Mat g = random_matrix(d, rng);
  if (g.determinant() < 0) g.col(0) *= -1;
  return g;
}

Mat rotation(double t) {
  Mat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return r;
}

Vec unit(Vec v) { return v / v.norm(); }

Vec basis(int d, int i) { return Vec::Unit(d, i); }

}  // namespace

TEST_CASE("KAK decomposition") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const Mat g = positive_det(d, rng);
    const auto k = kak(g);
    const Mat back = k.k1 * k.alphas.asDiagonal() * k.k2;
    CHECK((back - g).norm() <= 1e-9 * g.norm());
    CHECK(k.k1.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(k.k2.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i + 1 < d; ++i) CHECK(k.alphas(i) >= k.alphas(i + 1));
  }
  Mat neg = Mat::Identity(3, 3);
  neg(0, 0) = -1;
  CHECK_THROWS_AS(kak(neg), Error);
}

TEST_CASE("projective metric") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Vec x = random_matrix(d, rng).col(0), y = random_matrix(d, rng).col(0), z = random_matrix(d, rng).col(0);
    CHECK(proj_metric(x, z) <= proj_metric(x, y) + proj_metric(y, z) + 1e-12);
    CHECK(proj_metric(x, -3.0 * x) == doctest::Approx(0.0).scale(1.0));
    const Mat k = random_orthogonal(d, rng);
    CHECK(proj_metric(k * x, k * y) == doctest::Approx(proj_metric(x, y)).epsilon(1e-12).scale(1.0));
    CHECK(proj_metric(x, y) <= 1.0 + 1e-15);
  }
  CHECK(proj_metric(basis(2, 0), basis(2, 1)) == doctest::Approx(1.0));
}

TEST_CASE("hyperplane distance is the nearest-point distance") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x = random_matrix(3, rng).col(0);
    const Vec n = unit(random_matrix(3, rng).col(0));
    // Minimise over points of H = n^perp by projecting and by sampling the plane.
    const Vec proj = x - x.dot(n) * n;
    double best = proj_metric(x, proj);
    const Mat k = random_orthogonal(3, rng);
    for (int i = 0; i < 200; ++i) {
      Vec h = k.col(0) * std::cos(0.0314 * i) + k.col(1) * std::sin(0.0314 * i);
      h -= h.dot(n) * n;
      if (h.norm() > 1e-9) best = std::min(best, proj_metric(x, h));
    }
    CHECK(hyperplane_distance(x, n) == doctest::Approx(best).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("exterior powers") {
  std::mt19937_64 rng(4);
  const Mat g = random_matrix(4, rng);
  CHECK((exterior_power(g, 1) - g).norm() <= 1e-12);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const Mat x = random_matrix(d, rng), y = random_matrix(d, rng);
    for (int l = 1; l < d; ++l) {
      const Mat lhs = exterior_power(x * y, l);
      const Mat rhs = exterior_power(x, l) * exterior_power(y, l);
      CHECK((lhs - rhs).norm() <= 1e-9 * rhs.norm());
      // Top singular value of the l-th power is the product of the top l singular values.
      Eigen::JacobiSVD<Mat> s(x);
      double prod = 1;
      for (int i = 0; i < l; ++i) prod *= s.singularValues()(i);
      CHECK(op_norm(exterior_power(x, l)) == doctest::Approx(prod).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(exterior_power(g, 0), Error);
  CHECK_THROWS_AS(exterior_power(g, 4), Error);
}

TEST_CASE("contracting level") {
  std::vector<Mat> a, b, c;
  for (int m = 1; m <= 6; ++m) {
    const double t = std::pow(2.0, m);
    a.push_back(Vec((Vec(3) << t, 1, 1 / t).finished()).asDiagonal());
    b.push_back(Vec((Vec(3) << t, t, 1 / (t * t)).finished()).asDiagonal());
    c.push_back(Mat::Identity(3, 3));
  }
  CHECK(pick_contracting_level(a) == 1);
  CHECK(pick_contracting_level(b) == 2);
  CHECK_THROWS_AS(pick_contracting_level(c), Error);
}

TEST_CASE("contraction certificates") {
  const Mat g = Vec((Vec(3) << 100, 0.1, 0.1).finished()).asDiagonal();
  const auto cert = contraction_check(g, 0.2, 4000);
  CHECK(cert.certified);
  CHECK(proj_metric(cert.v, basis(3, 0)) <= 1e-12);
  CHECK(std::abs(cert.normal.dot(basis(3, 0))) == doctest::Approx(1.0));

  const auto rot = contraction_check(rotation(0.7), 0.1, 2000);
  CHECK(!rot.certified);
  CHECK(rot.witness.has_value());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat k1 = random_orthogonal(3, rng), k2 = random_orthogonal(3, rng);
    const auto c = contraction_check(k1 * g * k2, 0.2, 3000);
    CHECK(c.certified);
    CHECK(proj_metric(c.v, k1.col(0)) <= 1e-9);
    CHECK(proj_metric(c.normal, k2.transpose().col(0)) <= 1e-9);
  }
  // For diag(a, 1/a) the frontier 1/sqrt(R+1), R = a^2, is sharp.
  const double ratio = 50;
  const Mat h = Vec((Vec(2) << std::sqrt(ratio), 1 / std::sqrt(ratio)).finished()).asDiagonal();
  const double eps = contraction_frontier(ratio);
  CHECK(contraction_check(h, eps * 1.05, 4000).certified);
  CHECK(!contraction_check(h, eps * 0.9, 4000).certified);
}

TEST_CASE("Lipschitz bounds") {
  CHECK(lipschitz_ratio_bound(1 / std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lipschitz_ratio_bound(1e-6) == doctest::Approx(1e6).epsilon(1e-6));

  const Vec e1 = basis(2, 0);
  CHECK(local_lipschitz(Mat::Identity(2, 2), e1, 0.05, 400) == doctest::Approx(1.0).epsilon(1e-9));
  const Mat a = Vec((Vec(2) << 10, 0.1).finished()).asDiagonal();
  const double delta = 0.01;
  CHECK(local_lipschitz(a, e1, 0.05, 400) <= 0.01 + delta);

  // Measured constants never contradict the ratio bound.
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Mat g = positive_det(d, rng) * (1 + static_cast<double>(trial));
    const auto k = kak(g);
    const Vec center = k.k2.transpose().col(0);
    const double measured = local_lipschitz(g, center, 0.02, 300);
    if (measured < 1) CHECK(k.alphas(0) / k.alphas(1) >= lipschitz_ratio_bound(measured) * (1 - 1e-9));
    CHECK(global_lipschitz_bound(g) >= local_lipschitz(g, sphere_samples(d, 1, trial).front(), 0.05, 200) - 1e-9);
  }
}

TEST_CASE("separation search") {
  const Mat a = (Mat(2, 2) << 1, 2, 0, 1).finished();
  const Mat b = (Mat(2, 2) << 1, 0, 2, 1).finished();
  std::vector<Mat> cands;
  const std::vector<Mat> gens{a, a.inverse(), b, b.inverse()};
  for (const auto& x : gens) {
    cands.push_back(x);
    for (const auto& y : gens) cands.push_back(x * y);
  }
  const auto sep = separating_search(cands, 2, 100);
  CHECK(!sep.chosen.empty());
  CHECK(sep.r >= 1e-2);

  try {
    separating_search({Mat::Identity(2, 2)}, 1, 50);
    FAIL("expected SearchExhausted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SearchExhausted);
  }
  std::vector<Mat> rots;
  for (int i = 1; i <= 5; ++i) rots.push_back(rotation(0.6 * i));
  CHECK(!separating_search(rots, 1, 50).chosen.empty());
}

TEST_CASE("free pair construction") {
  const Mat a = (Mat(2, 2) << 1, 2, 0, 1).finished();
  const Mat b = (Mat(2, 2) << 1, 0, 2, 1).finished();
  const auto cert = construct_free_pair({a, b});
  REQUIRE(cert.players.size() == 4);
  REQUIRE(cert.exact_check_passed.has_value());
  CHECK(*cert.exact_check_passed);
  CHECK(cert.exact_check_length == 10);
  CHECK(std::pow(cert.C, 4) * cert.epsilon < cert.r);
  // Player matrices agree with their words.
  for (const auto& p : cert.players) {
    const Mat w = evaluate(p.word, {a, b});
    CHECK((w / w.norm() - p.matrix / p.matrix.norm()).norm() <= 1e-6);
  }
  // The attracting neighbourhoods are pairwise disjoint.
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      CHECK(proj_metric(cert.players[i].v, cert.players[j].v) > 2 * cert.neighborhood);
    }
  }

  const Mat d = Vec((Vec(2) << 2, 0.5).finished()).asDiagonal();
  const auto mixed = construct_free_pair({d, rotation(1.0)});
  CHECK(mixed.players.size() == 4);
  CHECK(!mixed.exact_check_passed.has_value());

  try {
    construct_free_pair({rotation(0.3), rotation(1.1)});
    FAIL("expected PipelineStuck");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PipelineStuck);
  }
}

TEST_CASE("commutator defect") {
  const Mat id = Mat::Identity(3, 3);
  CHECK(commutator_defect(id, id).defect == doctest::Approx(0.0).scale(1.0));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    Mat x = random_matrix(d, rng), y = random_matrix(d, rng);
    x *= 0.01 / op_norm(x);
    y *= 0.02 / op_norm(y);
    const auto c = commutator_defect(Mat::Identity(d, d) + x, Mat::Identity(d, d) + y);
    CHECK(c.bound == doctest::Approx(8 * 0.01 * 0.02).epsilon(1e-9));
    CHECK(c.within_bound());
  }
  CHECK_THROWS_AS(commutator_defect(0.4 * id, id), Error);

  // Iterated commutators with a fixed element shrink geometrically.
  const double r = 4;
  std::vector<Mat> xs;
  Mat x = random_matrix(3, rng);
  x = id + x * (0.9 / (8 * r) / op_norm(x));
  Mat y = random_matrix(3, rng);
  y = id + y * (0.9 / (8 * r) / op_norm(y));
  const auto norms = iterated_commutator_norms({x, x, x, x, x}, y);
  REQUIRE(norms.size() >= 5);
  for (std::size_t n = 1; n < norms.size(); ++n) CHECK(norms[n] <= norms[n - 1] / r + 1e-15);
}
