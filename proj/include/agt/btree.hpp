#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "agt/exact.hpp"
#include "agt/graph.hpp"

namespace agt::btree {

/// 2x2 matrix over Z[1/p]: rational entries whose denominators are powers of p.
struct PMatrix {
  std::int64_t p = 2;
  Rational a{1}, b{0}, c{0}, d{1};

  /// Throws Error(InvalidArgument) if an entry has a denominator prime to p
  /// or p is not prime.
  static PMatrix of(std::int64_t p, Rational a, Rational b, Rational c, Rational d);
  static PMatrix identity(std::int64_t p) { return of(p, 1, 0, 0, 1); }
  static PMatrix diag(std::int64_t p, Rational x, Rational y) { return of(p, std::move(x), 0, 0, std::move(y)); }

  Rational det() const { return a * d - b * c; }
  /// Every entry lies in Z_p.
  bool is_p_integral() const;
  PMatrix inverse() const;
  std::string str() const;

  friend PMatrix operator*(const PMatrix& x, const PMatrix& y);
  friend bool operator==(const PMatrix&, const PMatrix&) = default;
};

/// Homothety class of a lattice in Q_p^2, stored by its canonical basis:
/// the lattice is spanned by (p^a, c) and (0, p^b) with 0 <= c < p^b, scaled
/// so that it lies in Z_p^2 but not in p Z_p^2 (min(a, b, v_p(c)) = 0).
struct LatticeClass {
  std::int64_t p = 2;
  std::int64_t a = 0;
  std::int64_t b = 0;
  BigInt c = 0;

  static LatticeClass base(std::int64_t p) { return {p, 0, 0, 0}; }
  /// Basis as matrix columns: [[p^a, 0], [c, p^b]].
  PMatrix basis() const;
  std::string key() const;
  std::string label() const;  // "(a,b,c)"

  friend bool operator==(const LatticeClass&, const LatticeClass&) = default;
};

/// Class of the lattice spanned by the columns of `basis`. Throws
/// Error(SingularBasis).
LatticeClass canonicalize(const PMatrix& basis);

/// |a - b| for the elementary divisors p^a, p^b of the change of basis.
/// Throws Error(PrimeMismatch).
std::int64_t class_distance(const LatticeClass& x, const LatticeClass& y);

/// The p + 1 classes between M and pM, one per line of F_p^2.
std::vector<LatticeClass> neighbors(const LatticeClass& x);

/// Class of g M. Throws Error(DeterminantNotOne) unless det g = 1.
LatticeClass act(const PMatrix& g, const LatticeClass& x);
bool in_stabilizer(const PMatrix& g);
int orbit_parity(const LatticeClass& x);

struct TreeBall {
  LatticeClass base;
  std::uint32_t radius = 0;
  std::vector<LatticeClass> vertices;
  std::vector<std::uint32_t> depth;
  std::vector<std::vector<std::uint32_t>> adjacency;

  std::size_t edge_count() const;
  FiniteGraph graph() const;
};

/// 1 + (p + 1)(p^R - 1)/(p - 1).
std::uint64_t expected_ball_size(std::int64_t p, std::uint32_t radius);

/// BFS ball. Throws Error(SizeLimit) past 20000 vertices.
TreeBall build_ball(const LatticeClass& base, std::uint32_t radius);

struct TreeReport {
  bool connected = false;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  bool acyclic = false;            // |E| = |V| - 1
  bool interior_degree_ok = false;  // degree p + 1 below the outer sphere
  bool depth_matches_distance = false;
  bool size_matches_formula = false;

  bool passed() const {
    return connected && acyclic && interior_degree_ok && depth_matches_distance && size_matches_formula;
  }
};

TreeReport verify_tree(const TreeBall& ball);

/// For each even vertex of the ball, builds g in SL2(Z[1/p]) with g(base) =
/// vertex and checks it. Returns the number of vertices that failed.
std::size_t sampled_transitivity_failures(const TreeBall& ball);

/// Random element of SL2(Z[1/p]) as a product of `length` factors drawn from
/// E12(t), E21(t) and diag(p^k, p^-k), with t = m / p^j.
PMatrix random_element(std::int64_t p, std::mt19937_64& rng, int length);

}  // namespace agt::btree
