#include "agt/btree.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "agt/error.hpp"

namespace agt::btree {

namespace {

bool is_p_power(BigInt n, std::int64_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

// v_p of a nonzero rational.
std::int64_t val(const Rational& q, std::int64_t p) {
  return valuation(numerator(q), p) - valuation(denominator(q), p);
}

Rational p_pow(std::int64_t p, std::int64_t k) {
  return k >= 0 ? Rational(pow_int(p, k)) : Rational(BigInt(1), pow_int(p, -k));
}

}  // namespace

PMatrix PMatrix::of(std::int64_t p, Rational a, Rational b, Rational c, Rational d) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  PMatrix m{p, std::move(a), std::move(b), std::move(c), std::move(d)};
  for (const Rational* e : {&m.a, &m.b, &m.c, &m.d}) {
    if (!is_p_power(denominator(*e), p)) {
      throw Error(ErrorKind::InvalidArgument, "entry " + to_string(*e) + " is not in Z[1/" + std::to_string(p) + "]");
    }
  }
  return m;
}

bool PMatrix::is_p_integral() const {
  return denominator(a) == 1 && denominator(b) == 1 && denominator(c) == 1 && denominator(d) == 1;
}

PMatrix PMatrix::inverse() const {
  const Rational dt = det();
  if (dt == 0) throw Error(ErrorKind::SingularBasis, "singular matrix");
  return {p, d / dt, -b / dt, -c / dt, a / dt};
}

std::string PMatrix::str() const {
  return "[[" + to_string(a) + "," + to_string(b) + "],[" + to_string(c) + "," + to_string(d) + "]]";
}

PMatrix operator*(const PMatrix& x, const PMatrix& y) {
  if (x.p != y.p) throw Error(ErrorKind::PrimeMismatch, "matrices over different primes");
  return {x.p, x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

PMatrix LatticeClass::basis() const {
  return PMatrix{p, Rational(pow_int(p, a)), Rational(0), Rational(c), Rational(pow_int(p, b))};
}

std::string LatticeClass::key() const { return std::to_string(a) + "," + std::to_string(b) + "," + c.str(); }

std::string LatticeClass::label() const { return "(" + key() + ")"; }

LatticeClass canonicalize(const PMatrix& m) {
  if (m.det() == 0) throw Error(ErrorKind::SingularBasis, "basis " + m.str() + " is singular");
  const std::int64_t p = m.p;
  // Columns (x0, y0) and (x1, y1); column operations over Z_(p) keep the lattice.
  Rational x0 = m.a, y0 = m.c, x1 = m.b, y1 = m.d;
  const auto v_or_max = [p](const Rational& q) {
    return q == 0 ? std::numeric_limits<std::int64_t>::max() : val(q, p);
  };
  if (v_or_max(x1) < v_or_max(x0)) {
    std::swap(x0, x1);
    std::swap(y0, y1);
  }
  // x0 has minimal valuation in the first row, so x1/x0 is in Z_(p).
  if (x1 != 0) {
    const Rational t = x1 / x0;
    x1 = 0;
    y1 -= t * y0;
  }
  const std::int64_t a = val(x0, p), b = val(y1, p);
  // Scale each column by a unit: x0 -> p^a, y1 -> p^b.
  Rational y = y0 * p_pow(p, a) / x0;
  // y in Q_p; reduce modulo p^b (only the class of y mod p^b Z_(p) matters).
  std::int64_t lo = std::min({a, b, y == 0 ? b : val(y, p)});
  // Shift so everything is p-integral with minimum valuation zero.
  const std::int64_t aa = a - lo, bb = b - lo;
  y *= p_pow(p, -lo);
  const BigInt mod = pow_int(p, bb);
  BigInt c = 0;
  if (y != 0) {
    const BigInt den_inv = *mod_inverse(denominator(y), mod);
    c = mod_floor(numerator(y) * den_inv, mod);
  }
  return LatticeClass{p, aa, bb, c};
}

std::int64_t class_distance(const LatticeClass& x, const LatticeClass& y) {
  if (x.p != y.p) throw Error(ErrorKind::PrimeMismatch, "classes over different primes");
  const PMatrix t = x.basis().inverse() * y.basis();
  const std::int64_t p = x.p;
  std::int64_t minval = std::numeric_limits<std::int64_t>::max();
  for (const Rational* e : {&t.a, &t.b, &t.c, &t.d}) {
    if (*e != 0) minval = std::min(minval, val(*e, p));
  }
  const std::int64_t vdet = val(t.det(), p);
  return std::abs(vdet - 2 * minval);
}

std::vector<LatticeClass> neighbors(const LatticeClass& x) {
  const PMatrix m = x.basis();
  const std::int64_t p = x.p;
  std::vector<LatticeClass> out;
  for (std::int64_t c = 0; c < p; ++c) out.push_back(canonicalize(m * PMatrix{p, 1, 0, c, p}));
  out.push_back(canonicalize(m * PMatrix{p, p, 0, 0, 1}));
  return out;
}

LatticeClass act(const PMatrix& g, const LatticeClass& x) {
  if (g.det() != 1) throw Error(ErrorKind::DeterminantNotOne, "det " + to_string(g.det()) + " != 1");
  return canonicalize(g * x.basis());
}

bool in_stabilizer(const PMatrix& g) {
  const LatticeClass base = LatticeClass::base(g.p);
  return act(g, base) == base;
}

int orbit_parity(const LatticeClass& x) {
  return static_cast<int>(class_distance(LatticeClass::base(x.p), x) % 2);
}

std::size_t TreeBall::edge_count() const {
  std::size_t twice = 0;
  for (const auto& nbrs : adjacency) twice += nbrs.size();
  return twice / 2;
}

FiniteGraph TreeBall::graph() const {
  FiniteGraph g;
  g.vertex_count = static_cast<std::uint32_t>(vertices.size());
  g.adjacency = adjacency;
  for (const auto& v : vertices) g.labels.push_back(v.label());
  return g;
}

std::uint64_t expected_ball_size(std::int64_t p, std::uint32_t radius) {
  const BigInt sphere_sum = (pow_int(p, radius) - 1) / (p - 1);
  return static_cast<std::uint64_t>(1 + (p + 1) * sphere_sum);
}

TreeBall build_ball(const LatticeClass& base, std::uint32_t radius) {
  if (radius > 64 || expected_ball_size(base.p, radius) > 20000) {
    throw Error(ErrorKind::SizeLimit, "tree ball of radius " + std::to_string(radius) + " too large");
  }
  TreeBall ball;
  ball.base = base;
  ball.radius = radius;
  std::unordered_map<std::string, std::uint32_t> index;
  ball.vertices.push_back(base);
  ball.depth.push_back(0);
  ball.adjacency.emplace_back();
  index.emplace(base.key(), 0);
  for (std::uint32_t i = 0; i < ball.vertices.size(); ++i) {
    const LatticeClass v = ball.vertices[i];
    const std::uint32_t dv = ball.depth[i];
    for (const LatticeClass& w : neighbors(v)) {
      auto it = index.find(w.key());
      if (it == index.end()) {
        if (dv == radius) continue;
        const auto id = static_cast<std::uint32_t>(ball.vertices.size());
        it = index.emplace(w.key(), id).first;
        ball.vertices.push_back(w);
        ball.depth.push_back(dv + 1);
        ball.adjacency.emplace_back();
      }
      // Record each edge once, from its lower index.
      if (i < it->second) {
        ball.adjacency[i].push_back(it->second);
        ball.adjacency[it->second].push_back(i);
      }
    }
  }
  return ball;
}

TreeReport verify_tree(const TreeBall& ball) {
  TreeReport r;
  const FiniteGraph g = ball.graph();
  r.vertices = ball.vertices.size();
  r.edges = ball.edge_count();
  r.connected = g.is_connected();
  r.acyclic = r.edges + 1 == r.vertices;
  r.interior_degree_ok = true;
  r.depth_matches_distance = true;
  const auto p = static_cast<std::size_t>(ball.base.p);
  for (std::size_t i = 0; i < ball.vertices.size(); ++i) {
    if (ball.depth[i] < ball.radius && ball.adjacency[i].size() != p + 1) r.interior_degree_ok = false;
    if (class_distance(ball.base, ball.vertices[i]) != ball.depth[i]) r.depth_matches_distance = false;
  }
  r.size_matches_formula = r.vertices == expected_ball_size(ball.base.p, ball.radius);
  return r;
}

std::size_t sampled_transitivity_failures(const TreeBall& ball) {
  const LatticeClass origin = LatticeClass::base(ball.base.p);
  std::size_t failures = 0;
  for (const LatticeClass& x : ball.vertices) {
    const std::int64_t d = class_distance(origin, x);
    if (d % 2) continue;
    // The canonical basis has det p^(a+b) and distance a+b from the origin.
    const PMatrix basis = x.basis();
    const Rational s = p_pow(x.p, -(x.a + x.b) / 2);
    const PMatrix g{x.p, basis.a * s, basis.b * s, basis.c * s, basis.d * s};
    if (g.det() != 1 || !(act(g, origin) == x)) ++failures;
  }
  return failures;
}

PMatrix random_element(std::int64_t p, std::mt19937_64& rng, int length) {
  std::uniform_int_distribution<int> kind(0, 2), expo(0, 2), shift(-2, 2);
  std::uniform_int_distribution<std::int64_t> num(-6, 6);
  PMatrix g = PMatrix::identity(p);
  for (int i = 0; i < length; ++i) {
    const int k = kind(rng);
    if (k == 2) {
      const Rational t = p_pow(p, shift(rng));
      g = g * PMatrix{p, t, 0, 0, 1 / t};
    } else {
      const Rational t = Rational(num(rng)) * p_pow(p, -expo(rng));
      g = g * (k == 0 ? PMatrix{p, 1, t, 0, 1} : PMatrix{p, 1, 0, t, 1});
    }
  }
  return g;
}

}  // namespace agt::btree
