#include "agt/cayley.hpp"

#include <numeric>

namespace agt::cayley {

namespace {

void append_int(std::string& out, std::int64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
}

}  // namespace

LatticeOracle::Element LatticeOracle::multiply(const Element& x, const Element& y) const {
  Element r(dim);
  for (std::uint32_t i = 0; i < dim; ++i) r[i] = x[i] + y[i];
  return r;
}

LatticeOracle::Element LatticeOracle::invert(const Element& x) const {
  Element r(dim);
  for (std::uint32_t i = 0; i < dim; ++i) r[i] = -x[i];
  return r;
}

std::string LatticeOracle::key(const Element& x) const {
  std::string k;
  for (std::int64_t v : x) append_int(k, v);
  return k;
}

std::vector<LatticeOracle::Element> LatticeOracle::standard_gens() const {
  std::vector<Element> gens{identity()};
  for (std::uint32_t i = 0; i < dim; ++i) {
    for (std::int64_t sign : {1, -1}) {
      Element e(dim, 0);
      e[i] = sign;
      gens.push_back(e);
    }
  }
  return gens;
}

std::vector<FreeGroupOracle::Element> FreeGroupOracle::standard_gens() const {
  std::vector<Element> gens{identity()};
  for (std::uint32_t i = 0; i < rank; ++i) {
    gens.push_back(words::Word::generator(i, 1));
    gens.push_back(words::Word::generator(i, -1));
  }
  return gens;
}

ModularMatrixOracle::Element ModularMatrixOracle::identity() const {
  Element e(std::size_t{k} * k, 0);
  for (std::uint32_t i = 0; i < k; ++i) e[i * k + i] = 1 % n;
  return e;
}

ModularMatrixOracle::Element ModularMatrixOracle::multiply(const Element& x, const Element& y) const {
  Element r(std::size_t{k} * k, 0);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      __int128 acc = 0;
      for (std::uint32_t l = 0; l < k; ++l) acc += static_cast<__int128>(x[i * k + l]) * y[l * k + j];
      r[i * k + j] = static_cast<std::int64_t>(acc % n);
    }
  }
  return r;
}

ModularMatrixOracle::Element ModularMatrixOracle::invert(const Element& x) const {
  // Adjugate; det = 1 so the inverse is the adjugate itself.
  Element r(std::size_t{k} * k, 0);
  const auto at = [&](std::uint32_t i, std::uint32_t j) { return static_cast<__int128>(x[i * k + j]); };
  const auto mod = [&](__int128 v) { return static_cast<std::int64_t>(((v % n) + n) % n); };
  if (k == 2) {
    r = {mod(at(1, 1)), mod(-at(0, 1)), mod(-at(1, 0)), mod(at(0, 0))};
    return r;
  }
  if (k != 3) throw Error(ErrorKind::InvalidArgument, "only k = 2 or 3 supported");
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 3; ++j) {
      // Cofactor of (j, i).
      const std::uint32_t r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      r[i * 3 + j] = mod(at(r0, c0) * at(r1, c1) - at(r0, c1) * at(r1, c0));
    }
  }
  return r;
}

std::string ModularMatrixOracle::key(const Element& x) const {
  std::string k;
  for (std::int64_t v : x) append_int(k, v);
  return k;
}

std::vector<ModularMatrixOracle::Element> ModularMatrixOracle::elementary_gens() const {
  std::vector<Element> gens;
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < k; ++j) {
      if (i == j) continue;
      for (std::int64_t sign : {1, -1}) {
        Element e = identity();
        e[i * k + j] = ((sign % n) + n) % n;
        if (std::find(gens.begin(), gens.end(), e) == gens.end()) gens.push_back(e);
      }
    }
  }
  return gens;
}

std::vector<ModularMatrixOracle::Element> ModularMatrixOracle::standard_gens() const {
  std::vector<Element> gens{identity()};
  for (auto& e : elementary_gens()) gens.push_back(std::move(e));
  return gens;
}

GrowthEstimate growth_rate_estimate(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 3) throw Error(ErrorKind::InvalidArgument, "growth estimate needs radius >= 2");
  GrowthEstimate g;
  const std::size_t n = counts.size() - 1;
  g.rate.assign(n + 1, 0.0);
  g.running_inf.assign(n + 1, 0.0);
  g.ratio.assign(n + 1, 0.0);
  double inf = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= n; ++k) {
    g.rate[k] = std::pow(static_cast<double>(counts[k]), 1.0 / static_cast<double>(k));
    inf = std::min(inf, g.rate[k]);
    g.running_inf[k] = inf;
    g.ratio[k] = static_cast<double>(counts[k]) / static_cast<double>(counts[k - 1]);
  }
  for (std::size_t a = 0; a <= n; ++a) {
    for (std::size_t b = 0; a + b <= n; ++b) {
      if (static_cast<long double>(counts[a + b]) >
          static_cast<long double>(counts[a]) * static_cast<long double>(counts[b])) {
        g.sub_multiplicative = false;
      }
    }
  }
  // Least squares of log count on log radius over the upper half.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = std::max<std::size_t>(1, n / 2); k <= n; ++k) {
    const double x = std::log(static_cast<double>(k)), y = std::log(static_cast<double>(counts[k]));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++m;
  }
  const double den = static_cast<double>(m) * sxx - sx * sx;
  g.fitted_degree = den > 0 ? (static_cast<double>(m) * sxy - sx * sy) / den : 0.0;
  return g;
}

}  // namespace agt::cayley
