#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "agt/error.hpp"
#include "agt/expander.hpp"

using namespace agt;
using namespace agt::expander;

TEST_CASE("SL_k(Z/n) Cayley graphs have the group order") {
  CHECK(build_sl_cayley(2, 3).vertex_count == 24);
  CHECK(build_sl_cayley(3, 2).vertex_count == 168);
  CHECK(build_sl_cayley(2, 2).vertex_count == 6);
  CHECK(build_sl_cayley(2, 4).vertex_count == sl_order(2, 4));
  CHECK(sl_order(2, 4) == 48);
  CHECK(sl_order(2, 9) == 648);
  for (std::int64_t p : {3, 5, 7}) {
    const auto g = build_sl_cayley(2, p);
    CHECK(g.vertex_count == static_cast<std::uint32_t>(p * (p * p - 1)));
    CHECK(g.regular_degree() == 4);
    CHECK(g.is_connected());
  }
  CHECK(build_sl_cayley(3, 3).regular_degree() == 12);
}

TEST_CASE("non-generating sets are rejected") {
  try {
    build_sl_cayley(2, 5, {{1, 1, 0, 1}});
    FAIL("expected NotGenerating");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotGenerating);
  }
}

TEST_CASE("spectra of known graphs") {
  for (std::uint32_t m : {4u, 6u, 9u}) {
    const auto rep = spectral_gap(FiniteGraph::complete(m));
    CHECK(rep.lambda2 == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(rep.gap == doctest::Approx(m).epsilon(1e-10));
  }
  for (std::uint32_t m : {5u, 8u, 13u, 24u}) {
    const auto rep = spectral_gap(FiniteGraph::cycle(m));
    CHECK(rep.lambda2 == doctest::Approx(2 * std::cos(2 * std::numbers::pi / m)).epsilon(1e-10));
  }
  const auto split = spectral_gap(disjoint_union(FiniteGraph::cycle(5), FiniteGraph::cycle(6)));
  CHECK(split.disconnected);
  CHECK(split.gap == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("iterative and dense eigensolvers agree") {
  for (std::int64_t p : {5, 7}) {
    const auto g = build_sl_cayley(2, p);
    const auto dense = spectral_gap(g, true);
    const auto iter = spectral_gap(g, false);
    CHECK(dense.method == "dense");
    CHECK(iter.method == "iterative");
    CHECK(iter.lambda2 == doctest::Approx(dense.lambda2).epsilon(1e-7));
  }
  const auto c = FiniteGraph::cycle(101);
  CHECK(spectral_gap(c, false).lambda2 == doctest::Approx(2 * std::cos(2 * std::numbers::pi / 101)).epsilon(1e-7));
}

TEST_CASE("exact vertex expansion") {
  CHECK(edge_expansion_exact(FiniteGraph::cycle(8)).value == Rational(1, 2));
  CHECK(edge_expansion_exact(FiniteGraph::complete(4)).value == 1);
  // SL2(Z/2) is S3 generated by two involutions, so its Cayley graph is a 6-cycle.
  CHECK(edge_expansion_exact(build_sl_cayley(2, 2)).value == Rational(2, 3));
  for (std::uint32_t m = 3; m <= 16; ++m) {
    CHECK(edge_expansion_exact(FiniteGraph::cycle(m)).value == Rational(2, m / 2));
  }
}

TEST_CASE("displacement identity") {
  const auto c6 = FiniteGraph::cycle(6);
  const auto rep = displacement_identity_check(c6, {0, 1, 2});
  REQUIRE(!rep.per_generator.empty());
  CHECK(rep.per_generator[0].symmetric_difference == 2);
  CHECK(rep.per_generator[0].measured == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(rep.passed());

  // A union of components is invariant under every generator.
  const auto split = disjoint_union(FiniteGraph::cycle(4), FiniteGraph::cycle(5));
  const auto inv = displacement_identity_check(split, {0, 1, 2, 3});
  for (const auto& d : inv.per_generator) CHECK(d.measured == doctest::Approx(0.0).scale(1.0));

  const auto g = build_sl_cayley(2, 3);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::uint32_t> a;
    for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
      if (rng() % 3 == 0) a.push_back(v);
    }
    if (a.empty() || a.size() == g.vertex_count) continue;
    CHECK(displacement_identity_check(g, a).passed());
  }
}
