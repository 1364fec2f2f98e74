#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "agt/exact.hpp"
#include "agt/words.hpp"

namespace agt::pingpong {

/// A point of the rational projective line: the slope x/y of the line through
/// (x, y), with a dedicated symbol for y = 0.
class Slope {
 public:
  Slope() = default;
  explicit Slope(Rational value) : value_(std::move(value)) {}
  static Slope infinity();
  /// Slope of the line through (x, y); (0, 0) is rejected.
  static Slope of_vector(const BigInt& x, const BigInt& y);
  static Slope parse(std::string_view text);  // "p/q", "p" or "inf"

  bool is_infinite() const noexcept { return infinite_; }
  /// Finite value; only meaningful when !is_infinite().
  const Rational& value() const noexcept { return value_; }

  std::string str() const;
  friend bool operator==(const Slope&, const Slope&) = default;

 private:
  bool infinite_ = false;
  Rational value_{0};
};

/// 2x2 matrix over Q acting on slopes by Moebius transformations.
struct Mat2Q {
  Rational a{1}, b{0}, c{0}, d{1};

  Rational det() const { return a * d - b * c; }
  friend bool operator==(const Mat2Q&, const Mat2Q&) = default;
};

Mat2Q operator*(const Mat2Q& x, const Mat2Q& y);
Mat2Q inverse(const Mat2Q& g);

/// 2x2 integer matrix of determinant one.
class MatZ {
 public:
  MatZ() = default;
  /// Throws Error(DeterminantNotOne) unless a d - b c = 1.
  MatZ(BigInt a, BigInt b, BigInt c, BigInt d);

  static MatZ identity() { return MatZ(); }

  const BigInt& a() const noexcept { return e_[0]; }
  const BigInt& b() const noexcept { return e_[1]; }
  const BigInt& c() const noexcept { return e_[2]; }
  const BigInt& d() const noexcept { return e_[3]; }

  MatZ inverse() const;
  Mat2Q to_rational() const;
  /// True for +I and -I, the kernel of SL2 -> PSL2.
  bool is_projective_identity() const;
  bool is_identity() const;
  std::string str() const;

  friend MatZ operator*(const MatZ& x, const MatZ& y);
  friend bool operator==(const MatZ&, const MatZ&) = default;

 private:
  BigInt e_[4] = {1, 0, 0, 1};
};

/// Image of a slope; exact, with infinity handled.
Slope act_slope(const Mat2Q& g, const Slope& t);
inline Slope act_slope(const MatZ& g, const Slope& t) { return act_slope(g.to_rational(), t); }

/// Open arc of RP^1 traversed in the increasing direction from lo to hi,
/// wrapping through infinity when lo > hi. Endpoints are excluded.
struct Arc {
  Slope lo;
  Slope hi;

  /// A rational point strictly inside the arc.
  Slope interior_point() const;
  std::string str() const;
};

/// Finite union of open arcs on RP^1, kept normalized as sorted disjoint open
/// intervals of the affine line plus a flag for the point at infinity. A set
/// containing infinity always contains an unbounded piece on both sides, so
/// it can be read back as a single wrapping arc.
class SlopeSet {
 public:
  SlopeSet() = default;
  explicit SlopeSet(std::span<const Arc> arcs);
  static SlopeSet of(std::initializer_list<Arc> arcs);
  /// Parses arcs given as {lo, hi} string pairs.
  static SlopeSet parse(const std::vector<std::pair<std::string, std::string>>& arcs);

  bool empty() const noexcept { return pieces_.empty() && !contains_infinity_; }
  bool contains(const Slope& t) const;
  bool contains_infinity() const noexcept { return contains_infinity_; }
  bool is_subset_of(const SlopeSet& other) const;
  bool intersects(const SlopeSet& other) const;

  /// The set as a list of arcs, with at most one arc wrapping through
  /// infinity.
  std::vector<Arc> arcs() const;
  std::string str() const;

  friend SlopeSet unite(const SlopeSet& x, const SlopeSet& y);
  friend bool operator==(const SlopeSet&, const SlopeSet&) = default;

  /// End of an interval of the affine line: -inf, finite, or +inf.
  struct End {
    int kind = 0;  // -1, 0, +1
    Rational value{0};
    friend bool operator==(const End&, const End&) = default;
  };
  struct Piece {
    End lo, hi;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

 private:
  void add_arc(const Arc& arc);
  void normalize();

  std::vector<Piece> pieces_;
  bool contains_infinity_ = false;
};

/// Exact image g(S). Endpoints are mapped exactly; orientation of every
/// image arc is resolved by mapping an interior rational point.
SlopeSet image(const Mat2Q& g, const SlopeSet& s);
inline SlopeSet image(const MatZ& g, const SlopeSet& s) { return image(g.to_rational(), s); }

enum class CertStatus { Valid, DisjointnessViolation, InclusionFailure, OrderTooSmall };

std::string to_string(CertStatus status);

struct InclusionCheck {
  std::string element;
  std::string source;
  std::string target;
  bool holds = false;
  /// Part of the image that escapes the target, when the inclusion fails.
  std::optional<std::string> witness;
};

struct NamedSet {
  std::string name;
  SlopeSet set;
};

struct NamedMap {
  std::string name;
  Mat2Q matrix;
};

struct FreenessCertificate {
  std::string form;
  std::vector<NamedMap> players;
  std::vector<NamedSet> sets;
  std::vector<InclusionCheck> checked_inclusions;
  CertStatus status = CertStatus::Valid;
  std::string detail;

  bool valid() const noexcept { return status == CertStatus::Valid; }
};

/// First form of the ping-pong lemma for <a, b> = F2:
///   a(A+ u B- u B+) in A+,  a^-1(A- u B- u B+) in A-,
///   b(B+ u A- u A+) in B+,  b^-1(B- u A- u A+) in B-.
FreenessCertificate certify_first_form(const MatZ& a, const MatZ& b, const SlopeSet& a_plus,
                                       const SlopeSet& a_minus, const SlopeSet& b_plus,
                                       const SlopeSet& b_minus);

/// A generator of a cyclic factor together with its order in PSL2 (nullopt
/// for infinite order).
struct FactorGenerator {
  MatZ generator;
  std::optional<std::uint32_t> order;
};

/// Second form of the ping-pong lemma: <G, H> = G * H when |G| >= 3 and every
/// nontrivial g in G maps B into A and every nontrivial h in H maps A into B.
/// A factor is either finite (generated by finite-order elements, enumerated
/// in PSL2) or a single infinite-order generator. Infinite cyclic factors are
/// certified by splitting the target into forward and backward halves T+ and
/// T- at rational fixed points and checking g(S u T+) in T+ and
/// g^-1(S u T-) in T-, which forces g^k(S) in T for every k != 0.
FreenessCertificate certify_second_form(std::span<const FactorGenerator> gens_g,
                                        std::span<const FactorGenerator> gens_h, const SlopeSet& a,
                                        const SlopeSet& b);

/// Ping lemma for free semigroups: a(A u B) in A and b(A u B) in B with A, B
/// disjoint. The maps may be any rational Moebius maps (affine maps x -> ux+v
/// are [[u, v], [0, 1]]).
FreenessCertificate certify_ping(const Mat2Q& a, const Mat2Q& b, const SlopeSet& a_set,
                                 const SlopeSet& b_set);

struct NontrivialityResult {
  bool passed = true;
  std::uint32_t max_length = 0;
  std::uint64_t words_checked = 0;
  /// Shortest reduced word found that evaluates to the identity matrix.
  std::optional<words::Word> witness;
};

/// Evaluates every nonempty reduced word of length <= max_length in the
/// generators (and inverses) as an exact integer matrix; passes iff none is
/// the identity matrix. Throws Error(SizeLimit) past length 14 for two
/// generators (ball of ~10^7 words).
NontrivialityResult exhaustive_nontriviality(std::span<const MatZ> generators, std::uint32_t max_length);
NontrivialityResult exhaustive_nontriviality(const MatZ& a, const MatZ& b, std::uint32_t max_length);

/// Evaluates a word in the given generators.
MatZ evaluate(const words::Word& w, std::span<const MatZ> generators);

}  // namespace agt::pingpong
