#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agt/graph.hpp"

namespace agt::expander {

/// Row-major k x k integer matrix, reduced mod n when used.
using IntMatrix = std::vector<std::int64_t>;

/// Cayley graph of SL_k(Z/n) for k in {2, 3}. An empty generator list means
/// the elementary matrices E_ij(+-1). Generators are reduced mod n, closed
/// under inversion and deduplicated; the identity is dropped. Vertex 0 is the
/// identity. Throws Error(NotGenerating) when the generators miss part of the
/// group.
FiniteGraph build_sl_cayley(std::uint32_t k, std::int64_t n, const std::vector<IntMatrix>& gens = {});

/// |SL_k(Z/n)| = n^(k^2-1) prod_{p | n} prod_{i=2..k} (1 - p^-i).
std::uint64_t sl_order(std::uint32_t k, std::int64_t n);

struct SpectralReport {
  double top = 0;
  double lambda2 = 0;
  double gap = 0;
  std::string method;  // "dense" or "iterative"
  std::uint64_t iterations = 0;
  bool disconnected = false;

  double normalized_gap() const { return top > 0 ? gap / top : 0.0; }
};

inline constexpr std::uint32_t kDenseLimit = 2000;

/// Second largest adjacency eigenvalue of a regular graph. Dense symmetric
/// eigensolve up to kDenseLimit vertices (or when forced), otherwise power
/// iteration on A + dI restricted to the complement of the constants, started
/// from a fixed vector. Throws Error(ConvergenceFailure) past the iteration
/// cap.
SpectralReport spectral_gap(const FiniteGraph& g, std::optional<bool> force_dense = std::nullopt,
                            double tolerance = 1e-10, std::uint64_t max_iterations = 2'000'000);

/// Exact vertex expansion min |dA|/|A|, |A| <= |V|/2 (|V| <= 24).
CheegerResult edge_expansion_exact(const FiniteGraph& g);

struct Displacement {
  std::size_t generator = 0;
  std::size_t symmetric_difference = 0;
  double measured = 0;   // ||rho(s) v - v||^2 for the unit vector v
  double predicted = 0;  // |sA sym-diff A| / (|A| (1 - |A|/|V|))
  double error = 0;
};

struct DisplacementReport {
  std::vector<Displacement> per_generator;
  double max_error = 0;
  bool passed(double tolerance = 1e-12) const { return max_error <= tolerance; }
};

/// For v = 1_A - |A|/|V| normalized, compares the displacement under every
/// generator permutation s (rho(s) f = f o s^-1, so rho(s) 1_A = 1_{sA})
/// with the closed form. A must be a nonempty proper subset.
DisplacementReport displacement_identity_check(const FiniteGraph& g, const std::vector<std::uint32_t>& a);

}  // namespace agt::expander
