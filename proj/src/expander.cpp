#include "agt/expander.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <Eigen/Dense>

#include "agt/cayley.hpp"
#include "agt/error.hpp"
#include "agt/exact.hpp"

namespace agt::expander {

namespace {

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> ps;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::uint64_t pack(const IntMatrix& m, std::int64_t n) {
  std::uint64_t code = 0;
  for (std::int64_t v : m) code = code * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v);
  return code;
}

}  // namespace

std::uint64_t sl_order(std::uint32_t k, std::int64_t n) {
  Rational order = Rational(pow_int(n, static_cast<std::int64_t>(k) * k - 1));
  for (std::int64_t p : prime_divisors(n)) {
    for (std::uint32_t i = 2; i <= k; ++i) {
      const BigInt pi = pow_int(p, i);
      order *= Rational(pi - 1, pi);
    }
  }
  return static_cast<std::uint64_t>(numerator(order));
}

FiniteGraph build_sl_cayley(std::uint32_t k, std::int64_t n, const std::vector<IntMatrix>& gens) {
  if (k != 2 && k != 3) throw Error(ErrorKind::InvalidArgument, "k must be 2 or 3");
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 2");
  const std::uint64_t expected = sl_order(k, n);
  if (expected > 2'000'000) throw Error(ErrorKind::SizeLimit, "group too large: " + std::to_string(expected));
  const cayley::ModularMatrixOracle oracle{k, n};

  std::vector<IntMatrix> s;
  if (gens.empty()) {
    s = oracle.elementary_gens();
  } else {
    const IntMatrix id = oracle.identity();
    const auto add = [&](const IntMatrix& m) {
      if (m != id && std::find(s.begin(), s.end(), m) == s.end()) s.push_back(m);
    };
    for (IntMatrix m : gens) {
      if (m.size() != std::size_t{k} * k) throw Error(ErrorKind::InvalidArgument, "generator has wrong size");
      for (auto& v : m) v = ((v % n) + n) % n;
      // det check through the product with the adjugate
      if (oracle.multiply(m, oracle.invert(m)) != id) {
        throw Error(ErrorKind::DeterminantNotOne, "generator does not have determinant 1 mod n");
      }
      add(m);
      add(oracle.invert(m));
    }
  }

  FiniteGraph g;
  std::vector<IntMatrix> elements{oracle.identity()};
  std::unordered_map<std::uint64_t, std::uint32_t> index{{pack(elements[0], n), 0}};
  g.generator_perms.assign(s.size(), {});
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      IntMatrix y = oracle.multiply(elements[i], s[j]);
      const auto [it, fresh] = index.emplace(pack(y, n), static_cast<std::uint32_t>(elements.size()));
      if (fresh) elements.push_back(std::move(y));
      g.generator_perms[j].push_back(it->second);
    }
  }
  if (elements.size() != expected) {
    throw Error(ErrorKind::NotGenerating, "generators reach " + std::to_string(elements.size()) + " of " +
                                              std::to_string(expected) + " elements");
  }
  g.vertex_count = static_cast<std::uint32_t>(elements.size());
  g.adjacency.resize(g.vertex_count);
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    for (const auto& perm : g.generator_perms) g.adjacency[v].push_back(perm[v]);
  }
  return g;
}

namespace {

SpectralReport dense_spectrum(const FiniteGraph& g, double d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.vertex_count, g.vertex_count);
  for (std::uint32_t v = 0; v < g.vertex_count; ++v) {
    for (std::uint32_t w : g.adjacency[v]) a(v, w) += 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "dense eigensolver failed");
  const auto& ev = solver.eigenvalues();  // ascending
  SpectralReport r;
  r.method = "dense";
  r.top = ev(ev.size() - 1);
  r.lambda2 = ev.size() > 1 ? ev(ev.size() - 2) : r.top;
  r.gap = d - r.lambda2;
  r.disconnected = r.gap < 1e-9;
  return r;
}

SpectralReport iterative_spectrum(const FiniteGraph& g, double d, double tolerance, std::uint64_t cap) {
  const std::uint32_t n = g.vertex_count;
  Eigen::VectorXd x(n), y(n);
  for (std::uint32_t i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + i);
  const auto deflate = [&](Eigen::VectorXd& v) {
    v.array() -= v.mean();
    v /= v.norm();
  };
  deflate(x);
  SpectralReport r;
  r.method = "iterative";
  r.top = d;
  double mu = 0;
  for (std::uint64_t it = 1; it <= cap; ++it) {
    for (std::uint32_t v = 0; v < n; ++v) {
      double acc = d * x(v);
      for (std::uint32_t w : g.adjacency[v]) acc += x(w);
      y(v) = acc;
    }
    y.array() -= y.mean();
    mu = x.dot(y);
    // The residual bounds the distance from mu to the spectrum.
    const double residual = (y - mu * x).norm();
    x = y / y.norm();
    if (residual <= tolerance * d) {
      r.iterations = it;
      r.lambda2 = mu - d;
      r.gap = d - r.lambda2;
      r.disconnected = r.gap < 1e-9;
      return r;
    }
  }
  throw Error(ErrorKind::ConvergenceFailure,
              "power iteration did not converge in " + std::to_string(cap) + " steps (estimate " +
                  std::to_string(mu - d) + ")");
}

}  // namespace

SpectralReport spectral_gap(const FiniteGraph& g, std::optional<bool> force_dense, double tolerance,
                            std::uint64_t max_iterations) {
  const std::int64_t d = g.regular_degree();
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "spectral gap needs a regular graph");
  if (g.vertex_count < 2) throw Error(ErrorKind::InvalidArgument, "graph needs at least 2 vertices");
  const bool dense = force_dense.value_or(g.vertex_count <= kDenseLimit);
  if (dense) return dense_spectrum(g, static_cast<double>(d));
  return iterative_spectrum(g, static_cast<double>(d), tolerance, max_iterations);
}

CheegerResult edge_expansion_exact(const FiniteGraph& g) { return cheeger_bruteforce(g); }

DisplacementReport displacement_identity_check(const FiniteGraph& g, const std::vector<std::uint32_t>& a) {
  const std::uint32_t n = g.vertex_count;
  std::vector<char> in_a(n, 0);
  for (std::uint32_t v : a) {
    if (v >= n) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
    in_a[v] = 1;
  }
  const auto size_a = static_cast<std::size_t>(std::count(in_a.begin(), in_a.end(), 1));
  if (size_a == 0 || size_a == n) throw Error(ErrorKind::InvalidArgument, "A must be a nonempty proper subset");
  if (g.generator_perms.empty()) throw Error(ErrorKind::InvalidArgument, "graph has no generator action");

  const double frac = static_cast<double>(size_a) / n;
  Eigen::VectorXd v(n);
  for (std::uint32_t x = 0; x < n; ++x) v(x) = (in_a[x] ? 1.0 : 0.0) - frac;
  v /= v.norm();

  DisplacementReport report;
  for (std::size_t s = 0; s < g.generator_perms.size(); ++s) {
    const auto& perm = g.generator_perms[s];
    // (rho(s) v)(perm[x]) = v(x)
    Eigen::VectorXd moved(n);
    std::vector<char> in_sa(n, 0);
    for (std::uint32_t x = 0; x < n; ++x) {
      moved(perm[x]) = v(x);
      if (in_a[x]) in_sa[perm[x]] = 1;
    }
    std::size_t sym = 0;
    for (std::uint32_t x = 0; x < n; ++x) sym += in_a[x] != in_sa[x];
    Displacement d;
    d.generator = s;
    d.symmetric_difference = sym;
    d.measured = (moved - v).squaredNorm();
    d.predicted = static_cast<double>(sym) / (static_cast<double>(size_a) * (1.0 - frac));
    d.error = std::abs(d.measured - d.predicted);
    report.max_error = std::max(report.max_error, d.error);
    report.per_generator.push_back(d);
  }
  return report;
}

}  // namespace agt::expander
