#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "agt/exact.hpp"

namespace agt {

/// Finite undirected graph given by adjacency lists. Cayley graphs also keep
/// the right action of each generator as a permutation of the vertices.
struct FiniteGraph {
  std::uint32_t vertex_count = 0;
  std::vector<std::vector<std::uint32_t>> adjacency;
  /// generator_perms[s][v] = v * s; empty for graphs not built from a group.
  std::vector<std::vector<std::uint32_t>> generator_perms;
  std::vector<std::string> labels;

  static FiniteGraph cycle(std::uint32_t m);
  static FiniteGraph complete(std::uint32_t m);
  static FiniteGraph from_edges(std::uint32_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges);

  /// Common degree, or -1 when the graph is not regular.
  std::int64_t regular_degree() const;
  std::size_t edge_count() const;
  bool is_connected() const;
  std::string to_dot(const std::string& name) const;
};

/// Vertices side by side; generator permutations are kept when both graphs
/// have the same number of them.
FiniteGraph disjoint_union(const FiniteGraph& x, const FiniteGraph& y);

struct CheegerResult {
  Rational value;
  std::vector<std::uint32_t> witness;
};

/// Exact minimum of |dA|/|A| over nonempty A with |A| <= |V|/2, where dA is
/// the set of vertices outside A adjacent to A. Throws Error(SizeLimit) when
/// |V| > 24.
CheegerResult cheeger_bruteforce(const FiniteGraph& g);

}  // namespace agt
