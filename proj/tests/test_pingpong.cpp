#include <doctest.h>

#include "agt/error.hpp"
#include "agt/pingpong.hpp"

using namespace agt;
using namespace agt::pingpong;

namespace {

Slope S(const char* t) { return Slope::parse(t); }
Arc arc(const char* lo, const char* hi) { return {S(lo), S(hi)}; }

const MatZ kA(1, 2, 0, 1);
const MatZ kB(1, 0, 2, 1);

SlopeSet a_plus() { return SlopeSet::of({arc("1", "inf")}); }
SlopeSet a_minus() { return SlopeSet::of({arc("inf", "-1")}); }
SlopeSet b_plus() { return SlopeSet::of({arc("0", "1")}); }
SlopeSet b_minus() { return SlopeSet::of({arc("-1", "0")}); }

// Direct Moebius evaluation on a rational, used as an oracle for act_slope.
Rational moebius(const MatZ& g, const Rational& t) {
  return (Rational(g.a()) * t + Rational(g.b())) / (Rational(g.c()) * t + Rational(g.d()));
}

}  // namespace

TEST_CASE("Moebius action on slopes") {
  CHECK(act_slope(kA, S("0")) == S("2"));
  CHECK(act_slope(MatZ::identity(), S("5/7")) == S("5/7"));
  CHECK(act_slope(MatZ(0, 1, -1, 0), Slope::infinity()) == S("0"));
  CHECK(act_slope(kB, S("-1/2")).is_infinite());
  for (int num = -20; num <= 20; ++num) {
    for (int den = 1; den <= 7; ++den) {
      const Rational t(num, den);
      const MatZ g(3, 1, 5, 2);
      if (Rational(g.c()) * t + Rational(g.d()) == 0) continue;
      CHECK(act_slope(g, Slope(t)).value() == moebius(g, t));
    }
  }
}

TEST_CASE("MatZ requires determinant one") {
  CHECK_THROWS_AS(MatZ(2, 0, 0, 1), Error);
  CHECK((kA * kA.inverse()).is_identity());
  CHECK(MatZ(-1, 0, 0, -1).is_projective_identity());
}

TEST_CASE("image of arcs") {
  CHECK(image(kA, SlopeSet::of({arc("-1", "1")})) == SlopeSet::of({arc("1", "3")}));
  const auto s = SlopeSet::of({arc("1", "-1")});
  CHECK(image(MatZ::identity(), s) == s);
  CHECK(image(kB, s).is_subset_of(SlopeSet::of({arc("0", "1")})));
  // Sampled membership check on the image of the outer region under b.
  const auto img = image(kB, s);
  for (int k = 2; k < 40; ++k) {
    CHECK(img.contains(act_slope(kB, Slope(Rational(k, 1)))));
    CHECK(img.contains(act_slope(kB, Slope(Rational(-k, 1)))));
  }
  CHECK(!img.contains(S("-1")));
}

TEST_CASE("slope set algebra") {
  const auto x = SlopeSet::of({arc("0", "2")});
  const auto y = SlopeSet::of({arc("1", "3")});
  CHECK(x.intersects(y));
  CHECK(!x.intersects(SlopeSet::of({arc("2", "3")})));
  CHECK(unite(x, y) == SlopeSet::of({arc("0", "3")}));
  CHECK(SlopeSet::of({arc("1", "2")}).is_subset_of(x));
  const auto wrap = SlopeSet::of({arc("5", "-5")});
  CHECK(wrap.contains(Slope::infinity()));
  CHECK(wrap.contains(S("100")));
  CHECK(!wrap.contains(S("0")));
}

TEST_CASE("first form certificate for the level-two pair") {
  const auto cert = certify_first_form(kA, kB, a_plus(), a_minus(), b_plus(), b_minus());
  CHECK(cert.valid());
  CHECK(cert.checked_inclusions.size() == 12);
  for (const auto& c : cert.checked_inclusions) CHECK(c.holds);
}

TEST_CASE("first form failures") {
  const auto id = MatZ::identity();
  CHECK(certify_first_form(id, id, a_plus(), a_minus(), b_plus(), b_minus()).status == CertStatus::InclusionFailure);
  const auto shifted = certify_first_form(MatZ(1, 1, 0, 1), kB, a_plus(), a_minus(), b_plus(), b_minus());
  CHECK(shifted.status == CertStatus::InclusionFailure);
  const auto overlap = certify_first_form(kA, kB, SlopeSet::of({arc("1/2", "inf")}), a_minus(), b_plus(), b_minus());
  CHECK(overlap.status == CertStatus::DisjointnessViolation);
}

TEST_CASE("second form: C3 * C2 in PSL2(Z)") {
  const std::vector<FactorGenerator> g{{MatZ(0, 1, -1, -1), 3u}};
  const std::vector<FactorGenerator> h{{MatZ(0, 1, -1, 0), 2u}};
  const auto a = SlopeSet::of({arc("inf", "0")});
  const auto b = SlopeSet::of({arc("0", "inf")});
  const auto cert = certify_second_form(g, h, a, b);
  CHECK(cert.valid());
}

TEST_CASE("second form: groups of order two are rejected") {
  const std::vector<FactorGenerator> g{{MatZ(0, 1, -1, 0), 2u}};
  const auto cert =
      certify_second_form(g, g, SlopeSet::of({arc("inf", "0")}), SlopeSet::of({arc("0", "inf")}));
  CHECK(cert.status == CertStatus::OrderTooSmall);
}

TEST_CASE("second form: infinite cyclic factors") {
  const std::vector<FactorGenerator> g{{kA, std::nullopt}};
  const std::vector<FactorGenerator> h{{kB, std::nullopt}};
  const auto cert = certify_second_form(g, h, SlopeSet::of({arc("1", "-1")}), SlopeSet::of({arc("-1", "1")}));
  CHECK(cert.valid());
  // A finite-order matrix cannot be declared infinite.
  const std::vector<FactorGenerator> bad{{MatZ(0, 1, -1, 0), std::nullopt}};
  CHECK_THROWS_AS(certify_second_form(bad, h, SlopeSet::of({arc("1", "-1")}), SlopeSet::of({arc("-1", "1")})),
                  Error);
}

TEST_CASE("ping lemma for affine contractions") {
  const Mat2Q g{Rational(1, 3), 0, 0, 1};
  const Mat2Q h{Rational(1, 3), Rational(2, 3), 0, 1};
  const auto a = SlopeSet::of({arc("-1/2", "1/2")});
  const auto b = SlopeSet::of({arc("1/2", "3/2")});
  CHECK(certify_ping(g, h, a, b).valid());
  CHECK(certify_ping(g, g, a, b).status == CertStatus::InclusionFailure);
  // x -> x/2 maps (1/2, 3/2) onto (1/4, 3/4), which meets the boundary point 1/2 of A.
  const Mat2Q half{Rational(1, 2), 0, 0, 1};
  const Mat2Q half_h{Rational(1, 2), Rational(1, 2), 0, 1};
  CHECK(certify_ping(half, half_h, a, b).status == CertStatus::InclusionFailure);
}

TEST_CASE("exhaustive nontriviality") {
  const auto ok = exhaustive_nontriviality(kA, kB, 8);
  CHECK(ok.passed);
  // Reduced words of length 1..8 in rank 2: 4 * (3^8 - 1) / 2.
  CHECK(ok.words_checked == 4 * (6561 - 1) / 2);

  const auto rot = exhaustive_nontriviality(MatZ(0, 1, -1, 0), kB, 4);
  CHECK(!rot.passed);
  REQUIRE(rot.witness);
  CHECK(evaluate(*rot.witness, std::vector<MatZ>{MatZ(0, 1, -1, 0), kB}).is_identity());
  CHECK(rot.witness->length() == 4);

  const MatZ u(1, 1, 0, 1);
  const auto same = exhaustive_nontriviality(u, u, 2);
  CHECK(!same.passed);
  REQUIRE(same.witness);
  CHECK(same.witness->length() == 2);
}

TEST_CASE("evaluate handles entries beyond 64 bits") {
  // Large powers overflow int64 and must still evaluate exactly.
  const auto w = words::parse("a^30 b^30 a^-30");
  const std::vector<MatZ> gens{kA, kB};
  const auto m = evaluate(w, gens);
  MatZ direct;
  for (int i = 0; i < 30; ++i) direct = direct * kA;
  for (int i = 0; i < 30; ++i) direct = direct * kB;
  for (int i = 0; i < 30; ++i) direct = direct * kA.inverse();
  CHECK(m == direct);
}
