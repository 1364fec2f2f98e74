#include <doctest.h>

#include <random>
#include <set>

#include "agt/btree.hpp"
#include "agt/error.hpp"

using namespace agt;
using namespace agt::btree;

namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

}  // namespace

TEST_CASE("canonical forms") {
  for (std::int64_t p : {2, 3, 5}) {
    CHECK(canonicalize(PMatrix::identity(p)) == LatticeClass::base(p));
    const auto x = canonicalize(PMatrix::diag(p, 1, p));
    CHECK(x.a + x.b == 1);
    CHECK(canonicalize(PMatrix::diag(p, p, p)) == LatticeClass::base(p));
    CHECK(canonicalize(PMatrix::of(p, R(1, p), 0, 3, R(1, p))) == canonicalize(PMatrix::of(p, 1, 0, 3 * p, 1)));
  }
  CHECK_THROWS_AS(canonicalize(PMatrix::of(3, 1, 2, 2, 4)), Error);
  CHECK_THROWS_AS(PMatrix::of(3, R(1, 2), 0, 0, 1), Error);
}

TEST_CASE("distances") {
  const std::int64_t p = 3;
  const auto o = LatticeClass::base(p);
  CHECK(class_distance(o, o) == 0);
  CHECK(class_distance(o, canonicalize(PMatrix::diag(p, 1, p))) == 1);
  CHECK(class_distance(o, act(PMatrix::diag(p, p, R(1, p)), o)) == 2);
  CHECK(orbit_parity(act(PMatrix::diag(p, p, R(1, p)), o)) == 0);
}

TEST_CASE("neighbours") {
  for (std::int64_t p : {2, 3, 5}) {
    const auto o = LatticeClass::base(p);
    const auto ns = neighbors(o);
    CHECK(ns.size() == static_cast<std::size_t>(p + 1));
    std::set<std::string> keys;
    for (const auto& y : ns) {
      keys.insert(y.key());
      CHECK(class_distance(o, y) == 1);
      const auto back = neighbors(y);
      CHECK(std::find(back.begin(), back.end(), o) != back.end());
    }
    CHECK(keys.size() == ns.size());
  }
}

TEST_CASE("balls are trees of the right size") {
  CHECK(build_ball(LatticeClass::base(2), 2).vertices.size() == 10);
  CHECK(build_ball(LatticeClass::base(3), 1).vertices.size() == 5);
  const auto r0 = build_ball(LatticeClass::base(5), 0);
  CHECK(r0.vertices.size() == 1);
  CHECK(r0.edge_count() == 0);
  for (std::int64_t p : {2, 3, 5}) {
    for (std::uint32_t r = 0; r <= 3; ++r) {
      const auto ball = build_ball(LatticeClass::base(p), r);
      const auto rep = verify_tree(ball);
      CHECK(rep.passed());
      std::uint64_t expect = 1, sphere = p + 1;
      for (std::uint32_t k = 1; k <= r; ++k, sphere *= p) expect += sphere;
      CHECK(ball.vertices.size() == expect);
      CHECK(expected_ball_size(p, r) == expect);
    }
  }
  // A ball centred away from the base has the same shape.
  const auto off = build_ball(canonicalize(PMatrix::diag(2, 1, 4)), 2);
  CHECK(verify_tree(off).passed());
}

TEST_CASE("stabilizer of the base lattice") {
  for (std::int64_t p : {2, 3}) {
    CHECK(in_stabilizer(PMatrix::of(p, 2, 1, 1, 1)));
    CHECK(in_stabilizer(PMatrix::of(p, 1, 5, 0, 1)));
    CHECK(!in_stabilizer(PMatrix::of(p, 1, R(1, p), 0, 1)));
    CHECK(!in_stabilizer(PMatrix::diag(p, p, R(1, p))));
  }
  CHECK_THROWS_AS(act(PMatrix::diag(3, 3, 1), LatticeClass::base(3)), Error);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto g = random_element(3, rng, 4);
    CHECK(g.det() == 1);
    CHECK(in_stabilizer(g) == g.is_p_integral());
  }
}

TEST_CASE("the action is by isometries and preserves parity") {
  const std::int64_t p = 2;
  const auto ball = build_ball(LatticeClass::base(p), 2);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 60; ++i) {
    const auto g = random_element(p, rng, 3);
    const auto& x = ball.vertices[rng() % ball.vertices.size()];
    const auto& y = ball.vertices[rng() % ball.vertices.size()];
    CHECK(class_distance(act(g, x), act(g, y)) == class_distance(x, y));
    CHECK(orbit_parity(act(g, x)) == orbit_parity(x));
    CHECK(act(g.inverse(), act(g, x)) == x);
  }
  const auto one = neighbors(LatticeClass::base(p)).front();
  CHECK(orbit_parity(one) == 1);
}

TEST_CASE("every even vertex of a ball is reached from the base") {
  CHECK(sampled_transitivity_failures(build_ball(LatticeClass::base(2), 4)) == 0);
  CHECK(sampled_transitivity_failures(build_ball(LatticeClass::base(3), 3)) == 0);
}

TEST_CASE("DOT export lists every vertex") {
  const auto g = build_ball(LatticeClass::base(2), 2).graph();
  const auto dot = g.to_dot("tree");
  CHECK(dot.find("(0,0,0)") != std::string::npos);
  CHECK(g.vertex_count == 10);
}
