#include "agt/graph.hpp"

#include <algorithm>
#include <bit>
#include <queue>

#include "agt/error.hpp"

namespace agt {

FiniteGraph FiniteGraph::cycle(std::uint32_t m) {
  if (m < 3) throw Error(ErrorKind::InvalidArgument, "cycle needs at least 3 vertices");
  FiniteGraph g;
  g.vertex_count = m;
  g.adjacency.resize(m);
  g.generator_perms.assign(2, std::vector<std::uint32_t>(m));
  for (std::uint32_t v = 0; v < m; ++v) {
    const std::uint32_t next = (v + 1) % m, prev = (v + m - 1) % m;
    g.adjacency[v] = {next, prev};
    g.generator_perms[0][v] = next;
    g.generator_perms[1][v] = prev;
  }
  return g;
}

FiniteGraph FiniteGraph::complete(std::uint32_t m) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "complete graph needs at least 2 vertices");
  FiniteGraph g;
  g.vertex_count = m;
  g.adjacency.resize(m);
  for (std::uint32_t v = 0; v < m; ++v) {
    for (std::uint32_t w = 0; w < m; ++w) {
      if (w != v) g.adjacency[v].push_back(w);
    }
  }
  return g;
}

FiniteGraph FiniteGraph::from_edges(std::uint32_t n,
                                    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
  FiniteGraph g;
  g.vertex_count = n;
  g.adjacency.resize(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw Error(ErrorKind::InvalidArgument, "edge endpoint out of range");
    g.adjacency[u].push_back(v);
    if (u != v) g.adjacency[v].push_back(u);
  }
  return g;
}

std::int64_t FiniteGraph::regular_degree() const {
  if (adjacency.empty()) return 0;
  const std::size_t d = adjacency.front().size();
  for (const auto& nbrs : adjacency) {
    if (nbrs.size() != d) return -1;
  }
  return static_cast<std::int64_t>(d);
}

std::size_t FiniteGraph::edge_count() const {
  std::size_t twice = 0, loops = 0;
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    for (std::uint32_t w : adjacency[v]) (w == v ? loops : twice) += 1;
  }
  return twice / 2 + loops;
}

bool FiniteGraph::is_connected() const {
  if (vertex_count == 0) return true;
  std::vector<bool> seen(vertex_count, false);
  std::queue<std::uint32_t> q;
  q.push(0);
  seen[0] = true;
  std::uint32_t reached = 1;
  while (!q.empty()) {
    const std::uint32_t v = q.front();
    q.pop();
    for (std::uint32_t w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        q.push(w);
      }
    }
  }
  return reached == vertex_count;
}

std::string FiniteGraph::to_dot(const std::string& name) const {
  std::string out = "graph " + name + " {\n";
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    out += "  " + std::to_string(v);
    if (v < labels.size()) out += " [label=\"" + labels[v] + "\"]";
    out += ";\n";
  }
  for (std::uint32_t v = 0; v < vertex_count; ++v) {
    for (std::uint32_t w : adjacency[v]) {
      if (v <= w) out += "  " + std::to_string(v) + " -- " + std::to_string(w) + ";\n";
    }
  }
  return out + "}\n";
}

FiniteGraph disjoint_union(const FiniteGraph& x, const FiniteGraph& y) {
  FiniteGraph g;
  g.vertex_count = x.vertex_count + y.vertex_count;
  g.adjacency = x.adjacency;
  for (const auto& nbrs : y.adjacency) {
    auto shifted = nbrs;
    for (auto& w : shifted) w += x.vertex_count;
    g.adjacency.push_back(std::move(shifted));
  }
  if (!x.generator_perms.empty() && x.generator_perms.size() == y.generator_perms.size()) {
    for (std::size_t s = 0; s < x.generator_perms.size(); ++s) {
      auto perm = x.generator_perms[s];
      for (std::uint32_t w : y.generator_perms[s]) perm.push_back(w + x.vertex_count);
      g.generator_perms.push_back(std::move(perm));
    }
  }
  return g;
}

namespace {

struct CheegerSearch {
  std::uint32_t n;
  std::uint32_t max_size;
  std::vector<std::uint32_t> nbr;  // neighbor bitmasks
  std::uint32_t best_boundary = 1;
  std::uint32_t best_size = 0;  // 0 means nothing found yet
  std::uint32_t best_set = 0;

  void visit(std::uint32_t v, std::uint32_t set, std::uint32_t size, std::uint32_t reach) {
    if (v == n) {
      if (size == 0) return;
      const auto boundary = static_cast<std::uint32_t>(std::popcount(reach & ~set));
      // boundary / size < best_boundary / best_size
      if (best_size == 0 || std::uint64_t{boundary} * best_size < std::uint64_t{best_boundary} * size) {
        best_boundary = boundary;
        best_size = size;
        best_set = set;
      }
      return;
    }
    if (size < max_size) visit(v + 1, set | (1u << v), size + 1, reach | nbr[v]);
    visit(v + 1, set, size, reach);
  }
};

}  // namespace

CheegerResult cheeger_bruteforce(const FiniteGraph& g) {
  if (g.vertex_count > 24) {
    throw Error(ErrorKind::SizeLimit, "exhaustive expansion needs |V| <= 24, got " + std::to_string(g.vertex_count));
  }
  if (g.vertex_count < 2) throw Error(ErrorKind::InvalidArgument, "graph needs at least 2 vertices");
  CheegerSearch search{g.vertex_count, g.vertex_count / 2, std::vector<std::uint32_t>(g.vertex_count, 0)};
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    for (std::uint32_t w : g.adjacency[v]) search.nbr[v] |= 1u << w;
  }
  search.visit(0, 0, 0, 0);
  CheegerResult r{Rational(search.best_boundary, search.best_size), {}};
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    if (search.best_set & (1u << v)) r.witness.push_back(v);
  }
  return r;
}

}  // namespace agt
