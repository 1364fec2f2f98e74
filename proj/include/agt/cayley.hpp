#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "agt/error.hpp"
#include "agt/exact.hpp"
#include "agt/graph.hpp"
#include "agt/pingpong.hpp"
#include "agt/words.hpp"

namespace agt::cayley {

/// A group given by exact operations. key must be injective on the subgroup
/// being explored; everything below hashes elements by key.
template <class O>
concept GroupOracle = requires(const O& o, const typename O::Element& x) {
  { o.identity() } -> std::convertible_to<typename O::Element>;
  { o.multiply(x, x) } -> std::convertible_to<typename O::Element>;
  { o.invert(x) } -> std::convertible_to<typename O::Element>;
  { o.key(x) } -> std::convertible_to<std::string>;
};

inline constexpr std::size_t kDefaultMemoryBudget = 10'000'000;

// ------------------------------------------------------------ oracles

struct TrivialOracle {
  using Element = int;
  Element identity() const { return 0; }
  Element multiply(Element, Element) const { return 0; }
  Element invert(Element) const { return 0; }
  std::string key(Element) const { return {}; }
};

/// Z^dim under addition.
struct LatticeOracle {
  using Element = std::vector<std::int64_t>;
  std::uint32_t dim = 1;

  Element identity() const { return Element(dim, 0); }
  Element multiply(const Element& x, const Element& y) const;
  Element invert(const Element& x) const;
  std::string key(const Element& x) const;
  /// {0, +-e_1, ..., +-e_dim}.
  std::vector<Element> standard_gens() const;
};

/// Free group on `rank` generators via reduced words.
struct FreeGroupOracle {
  using Element = words::Word;
  std::uint32_t rank = 2;

  Element identity() const { return {}; }
  Element multiply(const Element& x, const Element& y) const { return x * y; }
  Element invert(const Element& x) const { return words::invert(x); }
  std::string key(const Element& x) const { return x.key(); }
  std::vector<Element> standard_gens() const;
};

/// SL_k(Z/n) with row-major entries in [0, n).
struct ModularMatrixOracle {
  using Element = std::vector<std::int64_t>;
  std::uint32_t k = 2;
  std::int64_t n = 2;

  Element identity() const;
  Element multiply(const Element& x, const Element& y) const;
  Element invert(const Element& x) const;
  std::string key(const Element& x) const;
  /// Elementary matrices E_ij(+-1), deduplicated (they coincide mod 2).
  std::vector<Element> elementary_gens() const;
  /// Identity plus elementary_gens().
  std::vector<Element> standard_gens() const;
};

/// SL2(Z) with exact integer entries.
struct SL2ZOracle {
  using Element = pingpong::MatZ;
  Element identity() const { return Element::identity(); }
  Element multiply(const Element& x, const Element& y) const { return x * y; }
  Element invert(const Element& x) const { return x.inverse(); }
  std::string key(const Element& x) const { return x.str(); }
};

// ------------------------------------------------------------ balls

/// Elements of Sigma^radius in BFS order; Sigma^n is the prefix of length
/// counts[n], so the levels are nested by construction.
template <class E>
struct BallData {
  std::vector<E> elements;
  std::vector<std::uint64_t> counts;

  std::uint32_t radius() const { return static_cast<std::uint32_t>(counts.size()) - 1; }
  std::vector<E> level(std::uint32_t n) const {
    return {elements.begin(), elements.begin() + static_cast<std::ptrdiff_t>(counts.at(n))};
  }
};

/// Throws Error(InvalidArgument) unless S contains the identity and is closed
/// under inversion.
template <GroupOracle O>
void check_genset(const O& oracle, const std::vector<typename O::Element>& gens) {
  std::unordered_set<std::string> keys;
  for (const auto& s : gens) keys.insert(oracle.key(s));
  if (!keys.count(oracle.key(oracle.identity()))) {
    throw Error(ErrorKind::InvalidArgument, "generating set must contain the identity");
  }
  for (const auto& s : gens) {
    if (!keys.count(oracle.key(oracle.invert(s)))) {
      throw Error(ErrorKind::InvalidArgument, "generating set must be symmetric");
    }
  }
}

template <GroupOracle O>
BallData<typename O::Element> ball(const O& oracle, const std::vector<typename O::Element>& gens, std::uint32_t n,
                                   std::size_t budget = kDefaultMemoryBudget) {
  check_genset(oracle, gens);
  BallData<typename O::Element> data;
  std::unordered_set<std::string> seen;
  data.elements.push_back(oracle.identity());
  seen.insert(oracle.key(data.elements.back()));
  data.counts.push_back(1);
  std::size_t frontier_begin = 0;
  for (std::uint32_t r = 1; r <= n; ++r) {
    // Since the identity is in S, Sigma^r = Sigma^(r-1) u (new in Sigma^(r-1)) S.
    const std::size_t frontier_end = data.elements.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (const auto& s : gens) {
        auto y = oracle.multiply(data.elements[i], s);
        if (seen.insert(oracle.key(y)).second) {
          if (data.elements.size() >= budget) {
            throw Error(ErrorKind::MemoryBudgetExceeded,
                        "ball of radius " + std::to_string(r) + " exceeds " + std::to_string(budget) + " elements");
          }
          data.elements.push_back(std::move(y));
        }
      }
    }
    frontier_begin = frontier_end;
    data.counts.push_back(data.elements.size());
  }
  return data;
}

struct GrowthEstimate {
  /// rate[n] = |Sigma^n|^(1/n) for n >= 1; rate[0] is unused.
  std::vector<double> rate;
  std::vector<double> running_inf;
  /// |Sigma^n| / |Sigma^(n-1)|, a faster-converging diagnostic.
  std::vector<double> ratio;
  /// Slope of log|Sigma^n| against log n over the upper half of the data;
  /// a fit diagnostic, not a growth-type claim.
  double fitted_degree = 0;
  bool sub_multiplicative = true;
};

GrowthEstimate growth_rate_estimate(const std::vector<std::uint64_t>& counts);

// ------------------------------------------------------- boundaries

/// A S \ A, in discovery order.
template <GroupOracle O>
std::vector<typename O::Element> boundary(const O& oracle, const std::vector<typename O::Element>& a,
                                          const std::vector<typename O::Element>& gens) {
  std::unordered_set<std::string> inside, seen;
  for (const auto& x : a) inside.insert(oracle.key(x));
  std::vector<typename O::Element> out;
  for (const auto& x : a) {
    for (const auto& s : gens) {
      auto y = oracle.multiply(x, s);
      std::string k = oracle.key(y);
      if (!inside.count(k) && seen.insert(std::move(k)).second) out.push_back(std::move(y));
    }
  }
  return out;
}

template <GroupOracle O>
Rational cheeger_quotient(const O& oracle, const std::vector<typename O::Element>& a,
                          const std::vector<typename O::Element>& gens) {
  if (a.empty()) throw Error(ErrorKind::InvalidArgument, "set must be nonempty");
  return Rational(static_cast<std::int64_t>(boundary(oracle, a, gens).size()), static_cast<std::int64_t>(a.size()));
}

struct FolnerResult {
  bool folner = false;
  Rational max_ratio;
  std::size_t worst_generator = 0;
};

/// (S, eps)-Folner test: max_s |F s sym-diff F| / |F| < eps, exactly.
template <GroupOracle O>
FolnerResult folner_check(const O& oracle, const std::vector<typename O::Element>& f,
                          const std::vector<typename O::Element>& gens, const Rational& eps) {
  if (f.empty()) throw Error(ErrorKind::InvalidArgument, "set must be nonempty");
  std::unordered_set<std::string> inside;
  for (const auto& x : f) inside.insert(oracle.key(x));
  FolnerResult r;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::unordered_set<std::string> shifted;
    for (const auto& x : f) shifted.insert(oracle.key(oracle.multiply(x, gens[i])));
    std::size_t outside = 0;
    for (const auto& k : shifted) outside += inside.count(k) ? 0 : 1;
    // Right multiplication is injective, so |FS \ F| = |F \ FS|.
    const Rational q(static_cast<std::int64_t>(2 * outside), static_cast<std::int64_t>(f.size()));
    if (i == 0 || q > r.max_ratio) {
      r.max_ratio = q;
      r.worst_generator = i;
    }
  }
  r.folner = r.max_ratio < eps;
  return r;
}

struct FolnerSearch {
  /// Smallest radius whose ball is (S, eps)-Folner, if any up to max_radius.
  std::optional<std::uint32_t> radius;
  /// Ratio per radius examined.
  std::vector<Rational> ratios;
  /// True when no ball up to max_radius qualified. This says nothing about
  /// amenability.
  bool exhausted = false;
};

template <GroupOracle O>
FolnerSearch folner_ball_search(const O& oracle, const std::vector<typename O::Element>& gens, const Rational& eps,
                                std::uint32_t max_radius, std::size_t budget = kDefaultMemoryBudget) {
  const auto data = ball(oracle, gens, max_radius, budget);
  FolnerSearch out;
  for (std::uint32_t r = 0; r <= max_radius; ++r) {
    const auto res = folner_check(oracle, data.level(r), gens, eps);
    out.ratios.push_back(res.max_ratio);
    if (res.folner) {
      out.radius = r;
      return out;
    }
  }
  out.exhausted = true;
  return out;
}

/// Cayley graph on a computed ball, edges x -- x s inside the ball.
template <GroupOracle O>
FiniteGraph ball_graph(const O& oracle, const BallData<typename O::Element>& data,
                       const std::vector<typename O::Element>& gens) {
  FiniteGraph g;
  g.vertex_count = static_cast<std::uint32_t>(data.elements.size());
  g.adjacency.resize(g.vertex_count);
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < g.vertex_count; ++i) index.emplace(oracle.key(data.elements[i]), i);
  const std::string id = oracle.key(oracle.identity());
  for (std::uint32_t i = 0; i < g.vertex_count; ++i) {
    for (const auto& s : gens) {
      if (oracle.key(s) == id) continue;
      const auto it = index.find(oracle.key(oracle.multiply(data.elements[i], s)));
      if (it != index.end() && i < it->second) {
        g.adjacency[i].push_back(it->second);
        g.adjacency[it->second].push_back(i);
      }
    }
  }
  return g;
}

/// Checks associativity, identity and inverses on every triple drawn from
/// `sample`.
template <GroupOracle O>
bool check_axioms(const O& oracle, const std::vector<typename O::Element>& sample) {
  const std::string id = oracle.key(oracle.identity());
  for (const auto& x : sample) {
    if (oracle.key(oracle.multiply(x, oracle.invert(x))) != id) return false;
    if (oracle.key(oracle.multiply(oracle.identity(), x)) != oracle.key(x)) return false;
    for (const auto& y : sample) {
      const auto xy = oracle.multiply(x, y);
      for (const auto& z : sample) {
        if (oracle.key(oracle.multiply(xy, z)) != oracle.key(oracle.multiply(x, oracle.multiply(y, z)))) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace agt::cayley
