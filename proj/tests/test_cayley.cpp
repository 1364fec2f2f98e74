#include <doctest.h>

#include <cmath>

#include "agt/cayley.hpp"
#include "agt/error.hpp"
#include "agt/graph.hpp"

using namespace agt;
using namespace agt::cayley;

namespace {

// Number of points of Z^2 with l1 norm at most n.
std::uint64_t l1_ball(std::uint64_t n) { return 2 * n * n + 2 * n + 1; }

}  // namespace

TEST_CASE("ball counts for Z, the trivial group and F2") {
  const LatticeOracle z{1};
  CHECK(ball(z, z.standard_gens(), 3).counts == std::vector<std::uint64_t>{1, 3, 5, 7});

  const TrivialOracle t;
  CHECK(ball(t, std::vector<int>{0}, 5).counts == std::vector<std::uint64_t>(6, 1));

  const FreeGroupOracle f2{2};
  const auto data = ball(f2, f2.standard_gens(), 8);
  CHECK(data.counts[3] == 53);
  for (std::uint32_t n = 0; n <= 8; ++n) CHECK(data.counts[n] == 2 * static_cast<std::uint64_t>(std::pow(3, n)) - 1);

  const LatticeOracle z2{2};
  const auto d2 = ball(z2, z2.standard_gens(), 10);
  for (std::uint32_t n = 0; n <= 10; ++n) CHECK(d2.counts[n] == l1_ball(n));
}

TEST_CASE("generating sets must be symmetric and contain the identity") {
  const LatticeOracle z{1};
  CHECK_THROWS_AS(ball(z, {{0}, {1}}, 2), Error);
  CHECK_THROWS_AS(ball(z, {{1}, {-1}}, 2), Error);
}

TEST_CASE("memory budget is enforced") {
  const FreeGroupOracle f2{2};
  try {
    ball(f2, f2.standard_gens(), 10, 1000);
    FAIL("expected MemoryBudgetExceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MemoryBudgetExceeded);
  }
}

TEST_CASE("growth rate estimates") {
  const FreeGroupOracle f2{2};
  const auto g = growth_rate_estimate(ball(f2, f2.standard_gens(), 10).counts);
  for (std::size_t n = 1; n < g.rate.size(); ++n) {
    CHECK(g.rate[n] == doctest::Approx(std::pow(2 * std::pow(3.0, n) - 1, 1.0 / n)).epsilon(1e-12));
    CHECK(g.running_inf[n] <= g.rate[n]);
    CHECK(g.running_inf[n] >= 3.0);
  }
  CHECK(g.sub_multiplicative);
  CHECK(g.ratio.back() == doctest::Approx(3.0).epsilon(1e-4));

  const LatticeOracle z{1};
  const auto gz = growth_rate_estimate(ball(z, z.standard_gens(), 200).counts);
  CHECK(gz.running_inf.back() == doctest::Approx(std::pow(401.0, 1.0 / 200)).epsilon(1e-12));
  CHECK(gz.fitted_degree == doctest::Approx(1.0).epsilon(0.05));

  const LatticeOracle z2{2};
  const auto g2 = growth_rate_estimate(ball(z2, z2.standard_gens(), 60).counts);
  CHECK(g2.fitted_degree == doctest::Approx(2.0).epsilon(0.05));
  CHECK(g2.running_inf.back() < 1.2);

  CHECK_THROWS_AS(growth_rate_estimate({1, 3}), Error);
}

TEST_CASE("boundaries and Cheeger quotients") {
  const LatticeOracle z{1};
  const auto gens = z.standard_gens();
  for (std::uint32_t n = 0; n <= 30; ++n) {
    const auto a = ball(z, gens, n).elements;
    const auto bd = boundary(z, a, gens);
    REQUIRE(bd.size() == 2);
    CHECK(cheeger_quotient(z, a, gens) == Rational(2, 2 * n + 1));
  }

  const FreeGroupOracle f2{2};
  const auto data = ball(f2, f2.standard_gens(), 6);
  for (std::uint32_t n = 0; n <= 5; ++n) {
    const auto a = data.level(n);
    const std::int64_t p3 = static_cast<std::int64_t>(std::pow(3, n));
    CHECK(boundary(f2, a, f2.standard_gens()).size() == static_cast<std::size_t>(4 * p3));
    CHECK(cheeger_quotient(f2, a, f2.standard_gens()) == Rational(4 * p3, 2 * p3 - 1));
  }

  const ModularMatrixOracle m{2, 3};
  const auto all = ball(m, m.standard_gens(), 20).elements;
  CHECK(all.size() == 24);
  CHECK(boundary(m, all, m.standard_gens()).empty());

  const TrivialOracle t;
  CHECK(cheeger_quotient(t, std::vector<int>{0}, std::vector<int>{0}) == 0);
}

TEST_CASE("Folner checks") {
  const LatticeOracle z{1};
  std::vector<LatticeOracle::Element> f;
  for (int i = -10; i <= 10; ++i) f.push_back({i});
  const auto res = folner_check(z, f, {{1}, {-1}}, Rational(1, 10));
  CHECK(res.max_ratio == Rational(2, 21));
  CHECK(res.folner);

  const auto search = folner_ball_search(z, z.standard_gens(), Rational(1, 100), 150);
  REQUIRE(search.radius);
  CHECK(*search.radius == 100);

  const LatticeOracle z2{2};
  CHECK(folner_ball_search(z2, z2.standard_gens(), Rational(1, 2), 30).radius.has_value());

  const FreeGroupOracle f2{2};
  const auto fs = folner_ball_search(f2, f2.standard_gens(), Rational(1), 8);
  CHECK(fs.exhausted);
  CHECK(!fs.radius);
  for (const auto& q : fs.ratios) CHECK(q >= 1);
}

TEST_CASE("brute-force Cheeger constants") {
  CHECK(cheeger_bruteforce(FiniteGraph::complete(4)).value == 1);
  CHECK(cheeger_bruteforce(FiniteGraph::complete(4)).witness.size() == 2);
  CHECK(cheeger_bruteforce(FiniteGraph::cycle(8)).value == Rational(1, 2));
  CHECK(cheeger_bruteforce(FiniteGraph::complete(2)).value == 1);
  CHECK_THROWS_AS(cheeger_bruteforce(FiniteGraph::cycle(30)), Error);
}

TEST_CASE("oracle axioms on samples") {
  const ModularMatrixOracle m3{3, 2};
  CHECK(check_axioms(m3, ball(m3, m3.standard_gens(), 2).elements));
  const SL2ZOracle s;
  std::vector<pingpong::MatZ> sample{pingpong::MatZ(1, 2, 0, 1), pingpong::MatZ(2, 1, 1, 1),
                                     pingpong::MatZ(0, -1, 1, 0)};
  CHECK(check_axioms(s, sample));
  const FreeGroupOracle f2{2};
  CHECK(check_axioms(f2, ball(f2, f2.standard_gens(), 2).elements));
}

TEST_CASE("ball graphs") {
  const FreeGroupOracle f2{2};
  const auto gens = f2.standard_gens();
  const auto g = ball_graph(f2, ball(f2, gens, 3), gens);
  CHECK(g.vertex_count == 53);
  CHECK(g.edge_count() == 52);
  CHECK(g.is_connected());
  CHECK(g.to_dot("b").find("graph b") != std::string::npos);
}
