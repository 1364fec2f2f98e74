#include "agt/pingpong.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <unordered_map>

#include <boost/multiprecision/integer.hpp>

#include "agt/error.hpp"
#include "agt/parallel.hpp"

namespace agt::pingpong {

// ---------------------------------------------------------------- slopes

Slope Slope::infinity() {
  Slope s;
  s.infinite_ = true;
  return s;
}

Slope Slope::of_vector(const BigInt& x, const BigInt& y) {
  if (x == 0 && y == 0) throw Error(ErrorKind::InvalidArgument, "zero vector has no slope");
  if (y == 0) return infinity();
  return Slope(Rational(x, y));
}

Slope Slope::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "oo") return infinity();
  return Slope(parse_rational(text));
}

std::string Slope::str() const { return infinite_ ? "inf" : agt::to_string(value_); }

Mat2Q operator*(const Mat2Q& x, const Mat2Q& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2Q inverse(const Mat2Q& g) {
  const Rational det = g.det();
  if (det == 0) throw Error(ErrorKind::InvalidArgument, "singular Moebius matrix");
  return {g.d / det, -g.b / det, -g.c / det, g.a / det};
}

MatZ::MatZ(BigInt a, BigInt b, BigInt c, BigInt d) : e_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  if (e_[0] * e_[3] - e_[1] * e_[2] != 1) {
    throw Error(ErrorKind::DeterminantNotOne, "matrix " + str() + " does not have determinant 1");
  }
}

MatZ MatZ::inverse() const { return MatZ(e_[3], -e_[1], -e_[2], e_[0]); }

Mat2Q MatZ::to_rational() const { return {Rational(e_[0]), Rational(e_[1]), Rational(e_[2]), Rational(e_[3])}; }

bool MatZ::is_identity() const { return e_[0] == 1 && e_[1] == 0 && e_[2] == 0 && e_[3] == 1; }

bool MatZ::is_projective_identity() const {
  return e_[1] == 0 && e_[2] == 0 && e_[0] == e_[3] && (e_[0] == 1 || e_[0] == -1);
}

std::string MatZ::str() const {
  return "[[" + e_[0].str() + "," + e_[1].str() + "],[" + e_[2].str() + "," + e_[3].str() + "]]";
}

MatZ operator*(const MatZ& x, const MatZ& y) {
  MatZ r;
  r.e_[0] = x.e_[0] * y.e_[0] + x.e_[1] * y.e_[2];
  r.e_[1] = x.e_[0] * y.e_[1] + x.e_[1] * y.e_[3];
  r.e_[2] = x.e_[2] * y.e_[0] + x.e_[3] * y.e_[2];
  r.e_[3] = x.e_[2] * y.e_[1] + x.e_[3] * y.e_[3];
  return r;
}

Slope act_slope(const Mat2Q& g, const Slope& t) {
  if (t.is_infinite()) {
    if (g.c == 0) return Slope::infinity();
    return Slope(g.a / g.c);
  }
  const Rational den = g.c * t.value() + g.d;
  if (den == 0) return Slope::infinity();
  return Slope((g.a * t.value() + g.b) / den);
}

// ------------------------------------------------------------------ arcs

Slope Arc::interior_point() const {
  if (lo == hi) return lo.is_infinite() ? Slope(Rational(0)) : Slope::infinity();
  if (lo.is_infinite()) return Slope(hi.value() - 1);
  if (hi.is_infinite()) return Slope(lo.value() + 1);
  if (lo.value() < hi.value()) return Slope((lo.value() + hi.value()) / 2);
  return Slope::infinity();
}

std::string Arc::str() const { return "(" + lo.str() + ", " + hi.str() + ")"; }

namespace {

using End = SlopeSet::End;
using Piece = SlopeSet::Piece;

End minus_inf() { return End{-1, Rational(0)}; }
End plus_inf() { return End{1, Rational(0)}; }
End finite(const Rational& v) { return End{0, v}; }

bool less(const End& x, const End& y) {
  if (x.kind != y.kind) return x.kind < y.kind;
  if (x.kind != 0) return false;
  return x.value < y.value;
}

bool less_equal(const End& x, const End& y) { return !less(y, x); }

Slope end_to_slope(const End& e) { return e.kind == 0 ? Slope(e.value) : Slope::infinity(); }

}  // namespace

SlopeSet::SlopeSet(std::span<const Arc> arcs) {
  for (const Arc& arc : arcs) add_arc(arc);
  normalize();
}

SlopeSet SlopeSet::of(std::initializer_list<Arc> arcs) {
  return SlopeSet(std::span<const Arc>(arcs.begin(), arcs.size()));
}

SlopeSet SlopeSet::parse(const std::vector<std::pair<std::string, std::string>>& arcs) {
  std::vector<Arc> parsed;
  for (const auto& [lo, hi] : arcs) parsed.push_back({Slope::parse(lo), Slope::parse(hi)});
  return SlopeSet(parsed);
}

void SlopeSet::add_arc(const Arc& arc) {
  const Slope& lo = arc.lo;
  const Slope& hi = arc.hi;
  if (lo == hi) {
    // Everything but one point.
    if (lo.is_infinite()) {
      pieces_.push_back({minus_inf(), plus_inf()});
    } else {
      pieces_.push_back({finite(lo.value()), plus_inf()});
      pieces_.push_back({minus_inf(), finite(lo.value())});
      contains_infinity_ = true;
    }
    return;
  }
  if (lo.is_infinite()) {
    pieces_.push_back({minus_inf(), finite(hi.value())});
  } else if (hi.is_infinite()) {
    pieces_.push_back({finite(lo.value()), plus_inf()});
  } else if (lo.value() < hi.value()) {
    pieces_.push_back({finite(lo.value()), finite(hi.value())});
  } else {
    pieces_.push_back({finite(lo.value()), plus_inf()});
    pieces_.push_back({minus_inf(), finite(hi.value())});
    contains_infinity_ = true;
  }
}

void SlopeSet::normalize() {
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& x, const Piece& y) { return less(x.lo, y.lo); });
  std::vector<Piece> merged;
  for (const Piece& p : pieces_) {
    // Open intervals sharing only an endpoint stay separate.
    if (!merged.empty() && less(p.lo, merged.back().hi)) {
      if (less(merged.back().hi, p.hi)) merged.back().hi = p.hi;
    } else {
      merged.push_back(p);
    }
  }
  pieces_ = std::move(merged);
}

bool SlopeSet::contains(const Slope& t) const {
  if (t.is_infinite()) return contains_infinity_;
  const End x = finite(t.value());
  return std::any_of(pieces_.begin(), pieces_.end(),
                     [&](const Piece& p) { return less(p.lo, x) && less(x, p.hi); });
}

bool SlopeSet::is_subset_of(const SlopeSet& other) const {
  if (contains_infinity_ && !other.contains_infinity_) return false;
  for (const Piece& p : pieces_) {
    const bool inside = std::any_of(other.pieces_.begin(), other.pieces_.end(), [&](const Piece& q) {
      return less_equal(q.lo, p.lo) && less_equal(p.hi, q.hi);
    });
    if (!inside) return false;
  }
  return true;
}

bool SlopeSet::intersects(const SlopeSet& other) const {
  if (contains_infinity_ && other.contains_infinity_) return true;
  for (const Piece& p : pieces_) {
    for (const Piece& q : other.pieces_) {
      const End& lo = less(p.lo, q.lo) ? q.lo : p.lo;
      const End& hi = less(p.hi, q.hi) ? p.hi : q.hi;
      if (less(lo, hi)) return true;
    }
  }
  return false;
}

std::vector<Arc> SlopeSet::arcs() const {
  std::vector<Arc> out;
  std::size_t begin = 0, end = pieces_.size();
  if (contains_infinity_) {
    // Normalization leaves unbounded pieces at both ends.
    const Piece& first = pieces_.front();
    const Piece& last = pieces_.back();
    if (pieces_.size() == 1) {
      out.push_back({Slope::infinity(), Slope::infinity()});
      return out;
    }
    out.push_back({end_to_slope(last.lo), end_to_slope(first.hi)});
    begin = 1;
    end = pieces_.size() - 1;
  }
  for (std::size_t i = begin; i < end; ++i) {
    const Piece& p = pieces_[i];
    if (p.lo.kind < 0 && p.hi.kind > 0) {
      out.push_back({Slope::infinity(), Slope::infinity()});
    } else {
      out.push_back({end_to_slope(p.lo), end_to_slope(p.hi)});
    }
  }
  return out;
}

std::string SlopeSet::str() const {
  if (empty()) return "{}";
  std::string s;
  for (const Arc& arc : arcs()) {
    if (!s.empty()) s += " u ";
    s += arc.str();
  }
  return s;
}

SlopeSet unite(const SlopeSet& x, const SlopeSet& y) {
  SlopeSet r = x;
  r.pieces_.insert(r.pieces_.end(), y.pieces_.begin(), y.pieces_.end());
  r.contains_infinity_ = x.contains_infinity_ || y.contains_infinity_;
  r.normalize();
  return r;
}

SlopeSet image(const Mat2Q& g, const SlopeSet& s) {
  if (g.det() == 0) throw Error(ErrorKind::InvalidArgument, "singular Moebius matrix");
  std::vector<Arc> out;
  for (const Arc& arc : s.arcs()) {
    const Slope lo = act_slope(g, arc.lo);
    const Slope hi = act_slope(g, arc.hi);
    if (arc.lo == arc.hi) {
      out.push_back({lo, lo});
      continue;
    }
    const Slope probe = act_slope(g, arc.interior_point());
    const Arc forward{lo, hi};
    if (SlopeSet::of({forward}).contains(probe)) {
      out.push_back(forward);
    } else {
      out.push_back({hi, lo});
    }
  }
  return SlopeSet(out);
}

std::string to_string(CertStatus status) {
  switch (status) {
    case CertStatus::Valid: return "Valid";
    case CertStatus::DisjointnessViolation: return "DisjointnessViolation";
    case CertStatus::InclusionFailure: return "InclusionFailure";
    case CertStatus::OrderTooSmall: return "OrderTooSmall";
  }
  return "?";
}

// ----------------------------------------------------------- certificates

namespace {

std::optional<std::string> escaping_part(const SlopeSet& img, const SlopeSet& target) {
  if (img.is_subset_of(target)) return std::nullopt;
  for (const Arc& arc : img.arcs()) {
    if (!SlopeSet::of({arc}).is_subset_of(target)) return arc.str();
  }
  return img.str();
}

InclusionCheck check_inclusion(const std::string& element, const Mat2Q& g, const NamedSet& source,
                               const NamedSet& target) {
  const SlopeSet img = image(g, source.set);
  InclusionCheck c{element, source.name, target.name, true, std::nullopt};
  c.witness = escaping_part(img, target.set);
  c.holds = !c.witness.has_value();
  return c;
}

// Returns false and records the offending pair when two sets meet.
bool check_disjoint(FreenessCertificate& cert) {
  for (std::size_t i = 0; i < cert.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < cert.sets.size(); ++j) {
      if (cert.sets[i].set.intersects(cert.sets[j].set)) {
        cert.status = CertStatus::DisjointnessViolation;
        cert.detail = cert.sets[i].name + " meets " + cert.sets[j].name;
        return false;
      }
    }
  }
  for (const NamedSet& s : cert.sets) {
    if (s.set.empty()) {
      cert.status = CertStatus::DisjointnessViolation;
      cert.detail = s.name + " is empty";
      return false;
    }
  }
  return true;
}

void finish(FreenessCertificate& cert) {
  for (const InclusionCheck& c : cert.checked_inclusions) {
    if (!c.holds) {
      cert.status = CertStatus::InclusionFailure;
      cert.detail = c.element + "(" + c.source + ") escapes " + c.target + ": " + c.witness.value_or("");
      return;
    }
  }
  cert.status = CertStatus::Valid;
}

}  // namespace

FreenessCertificate certify_first_form(const MatZ& a, const MatZ& b, const SlopeSet& a_plus,
                                       const SlopeSet& a_minus, const SlopeSet& b_plus,
                                       const SlopeSet& b_minus) {
  FreenessCertificate cert;
  cert.form = "first";
  const Mat2Q ma = a.to_rational(), mb = b.to_rational();
  const Mat2Q ma_inv = inverse(ma), mb_inv = inverse(mb);
  cert.players = {{"a", ma}, {"b", mb}};
  const NamedSet ap{"A+", a_plus}, am{"A-", a_minus}, bp{"B+", b_plus}, bm{"B-", b_minus};
  cert.sets = {ap, am, bp, bm};
  if (!check_disjoint(cert)) return cert;

  const struct {
    const char* name;
    const Mat2Q* g;
    const NamedSet* target;
    std::array<const NamedSet*, 3> sources;
  } rules[] = {
      {"a", &ma, &ap, {&ap, &bm, &bp}},
      {"a^-1", &ma_inv, &am, {&am, &bm, &bp}},
      {"b", &mb, &bp, {&bp, &am, &ap}},
      {"b^-1", &mb_inv, &bm, {&bm, &am, &ap}},
  };
  for (const auto& rule : rules) {
    for (const NamedSet* src : rule.sources) {
      cert.checked_inclusions.push_back(check_inclusion(rule.name, *rule.g, *src, *rule.target));
    }
  }
  finish(cert);
  return cert;
}

namespace {

// Sign-normalized key of a matrix in PSL2.
std::string projective_key(const MatZ& m) {
  const BigInt* first = nullptr;
  for (const BigInt* e : {&m.a(), &m.b(), &m.c(), &m.d()}) {
    if (*e != 0) {
      first = e;
      break;
    }
  }
  const bool flip = first && *first < 0;
  std::string k;
  for (const BigInt* e : {&m.a(), &m.b(), &m.c(), &m.d()}) {
    k += (flip ? BigInt(-*e) : *e).str();
    k += ',';
  }
  return k;
}

void validate_order(const FactorGenerator& f) {
  if (f.order) {
    const std::uint32_t n = *f.order;
    if (n == 0) throw Error(ErrorKind::InvalidArgument, "order must be positive");
    MatZ acc = MatZ::identity();
    for (std::uint32_t k = 1; k <= n; ++k) {
      acc = acc * f.generator;
      if (acc.is_projective_identity() != (k == n)) {
        throw Error(ErrorKind::InvalidArgument,
                    "generator " + f.generator.str() + " does not have projective order " + std::to_string(n));
      }
    }
  } else {
    // Torsion in SL2(Z) has order dividing 4 or 6.
    MatZ acc = MatZ::identity();
    for (std::uint32_t k = 1; k <= 12; ++k) {
      acc = acc * f.generator;
      if (acc.is_projective_identity()) {
        throw Error(ErrorKind::InvalidArgument,
                    "generator " + f.generator.str() + " declared infinite but has finite order");
      }
    }
  }
}

struct Factor {
  bool infinite = false;
  MatZ generator;                 // infinite cyclic case
  std::vector<MatZ> nontrivial;   // finite case, in BFS order
  std::size_t order() const { return infinite ? std::numeric_limits<std::size_t>::max() : nontrivial.size() + 1; }
};

Factor build_factor(std::span<const FactorGenerator> gens, const char* label) {
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, std::string("factor ") + label + " has no generators");
  for (const auto& g : gens) validate_order(g);
  Factor f;
  const bool any_infinite = std::any_of(gens.begin(), gens.end(), [](const auto& g) { return !g.order; });
  if (any_infinite) {
    if (gens.size() != 1) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("factor ") + label + ": an infinite factor must be cyclic (one generator)");
    }
    f.infinite = true;
    f.generator = gens[0].generator;
    return f;
  }
  constexpr std::size_t kCap = 10000;
  std::unordered_map<std::string, bool> seen{{projective_key(MatZ::identity()), true}};
  std::vector<MatZ> frontier{MatZ::identity()};
  while (!frontier.empty()) {
    std::vector<MatZ> next;
    for (const MatZ& x : frontier) {
      for (const auto& g : gens) {
        const MatZ y = x * g.generator;
        if (seen.emplace(projective_key(y), true).second) {
          f.nontrivial.push_back(y);
          next.push_back(y);
          if (f.nontrivial.size() > kCap) {
            throw Error(ErrorKind::SizeLimit, std::string("factor ") + label + " exceeds 10000 elements");
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return f;
}

std::vector<Slope> rational_fixed_points(const Mat2Q& g) {
  std::vector<Slope> out;
  if (g.c == 0) {
    out.push_back(Slope::infinity());
    if (g.d != g.a) out.push_back(Slope(g.b / (g.d - g.a)));
    return out;
  }
  // c t^2 + (d - a) t - b = 0
  const Rational disc = (g.d - g.a) * (g.d - g.a) + 4 * g.b * g.c;
  if (disc < 0) return out;
  const BigInt num = numerator(disc), den = denominator(disc);
  const BigInt rn = boost::multiprecision::sqrt(num), rd = boost::multiprecision::sqrt(den);
  if (rn * rn != num || rd * rd != den) return out;
  const Rational root(rn, rd);
  out.push_back(Slope((g.a - g.d + root) / (2 * g.c)));
  if (root != 0) out.push_back(Slope((g.a - g.d - root) / (2 * g.c)));
  return out;
}

std::vector<Arc> split_arc(const Arc& arc, const std::vector<Slope>& cuts) {
  const SlopeSet as_set = SlopeSet::of({arc});
  for (const Slope& c : cuts) {
    if (as_set.contains(c)) {
      std::vector<Arc> out = split_arc({arc.lo, c}, cuts);
      const std::vector<Arc> rest = split_arc({c, arc.hi}, cuts);
      out.insert(out.end(), rest.begin(), rest.end());
      return out;
    }
  }
  return {arc};
}

// Checks g^k(source) in target for every nonzero k, for g of infinite order.
void check_infinite_cyclic(FreenessCertificate& cert, const std::string& gname, const MatZ& gz,
                           const NamedSet& source, const NamedSet& target) {
  const Mat2Q g = gz.to_rational();
  const Mat2Q g_inv = inverse(g);
  std::vector<Arc> parts;
  for (const Arc& arc : target.set.arcs()) {
    const auto split = split_arc(arc, rational_fixed_points(g));
    parts.insert(parts.end(), split.begin(), split.end());
  }
  const SlopeSet forward_image = image(g, source.set);
  const SlopeSet backward_image = image(g_inv, source.set);
  SlopeSet plus, minus;
  for (const Arc& part : parts) {
    const SlopeSet p = SlopeSet::of({part});
    if (forward_image.intersects(p)) plus = unite(plus, p);
    if (backward_image.intersects(p)) minus = unite(minus, p);
  }
  const NamedSet tp{target.name + "+[" + gname + "]", plus};
  const NamedSet tm{target.name + "-[" + gname + "]", minus};
  if (plus.intersects(minus)) {
    cert.checked_inclusions.push_back(
        {gname, source.name, target.name, false,
         "forward and backward images of " + source.name + " meet the same piece of " + target.name});
    return;
  }
  cert.checked_inclusions.push_back(check_inclusion(gname, g, source, tp));
  cert.checked_inclusions.push_back(check_inclusion(gname, g, tp, tp));
  cert.checked_inclusions.push_back(check_inclusion(gname + "^-1", g_inv, source, tm));
  cert.checked_inclusions.push_back(check_inclusion(gname + "^-1", g_inv, tm, tm));
}

void check_factor(FreenessCertificate& cert, const Factor& f, const std::string& label, const NamedSet& source,
                  const NamedSet& target) {
  if (f.infinite) {
    cert.players.push_back({label, f.generator.to_rational()});
    check_infinite_cyclic(cert, label, f.generator, source, target);
    return;
  }
  for (std::size_t i = 0; i < f.nontrivial.size(); ++i) {
    const std::string name = label + "[" + std::to_string(i + 1) + "]";
    cert.players.push_back({name, f.nontrivial[i].to_rational()});
    cert.checked_inclusions.push_back(check_inclusion(name, f.nontrivial[i].to_rational(), source, target));
  }
}

}  // namespace

FreenessCertificate certify_second_form(std::span<const FactorGenerator> gens_g,
                                        std::span<const FactorGenerator> gens_h, const SlopeSet& a,
                                        const SlopeSet& b) {
  FreenessCertificate cert;
  cert.form = "second";
  const NamedSet na{"A", a}, nb{"B", b};
  cert.sets = {na, nb};
  const Factor g = build_factor(gens_g, "G");
  const Factor h = build_factor(gens_h, "H");
  if (g.order() < 3) {
    cert.status = CertStatus::OrderTooSmall;
    cert.detail = "|G| = " + std::to_string(g.order()) + " < 3";
    return cert;
  }
  if (!check_disjoint(cert)) return cert;
  check_factor(cert, g, "g", nb, na);
  check_factor(cert, h, "h", na, nb);
  finish(cert);
  return cert;
}

FreenessCertificate certify_ping(const Mat2Q& a, const Mat2Q& b, const SlopeSet& a_set, const SlopeSet& b_set) {
  FreenessCertificate cert;
  cert.form = "ping";
  cert.players = {{"a", a}, {"b", b}};
  const NamedSet na{"A", a_set}, nb{"B", b_set};
  cert.sets = {na, nb};
  if (!check_disjoint(cert)) return cert;
  for (const NamedSet* src : {&na, &nb}) cert.checked_inclusions.push_back(check_inclusion("a", a, *src, na));
  for (const NamedSet* src : {&na, &nb}) cert.checked_inclusions.push_back(check_inclusion("b", b, *src, nb));
  finish(cert);
  return cert;
}

// ------------------------------------------------------ exhaustive oracle

namespace {

struct Overflow {};

struct M64 {
  std::int64_t a, b, c, d;
};

inline std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) throw Overflow{};
  return static_cast<std::int64_t>(v);
}

struct Ops64 {
  using Mat = M64;
  static Mat mul(const Mat& x, const Mat& y) {
    return {checked(static_cast<__int128>(x.a) * y.a + static_cast<__int128>(x.b) * y.c),
            checked(static_cast<__int128>(x.a) * y.b + static_cast<__int128>(x.b) * y.d),
            checked(static_cast<__int128>(x.c) * y.a + static_cast<__int128>(x.d) * y.c),
            checked(static_cast<__int128>(x.c) * y.b + static_cast<__int128>(x.d) * y.d)};
  }
  static bool is_identity(const Mat& m) { return m.a == 1 && m.b == 0 && m.c == 0 && m.d == 1; }
  static Mat from(const MatZ& z) {
    const auto fits = [](const BigInt& v) {
      return v <= std::numeric_limits<std::int64_t>::max() && v >= std::numeric_limits<std::int64_t>::min();
    };
    if (!fits(z.a()) || !fits(z.b()) || !fits(z.c()) || !fits(z.d())) throw Overflow{};
    return {static_cast<std::int64_t>(z.a()), static_cast<std::int64_t>(z.b()), static_cast<std::int64_t>(z.c()),
            static_cast<std::int64_t>(z.d())};
  }
};

struct OpsBig {
  using Mat = MatZ;
  static Mat mul(const Mat& x, const Mat& y) { return x * y; }
  static bool is_identity(const Mat& m) { return m.is_identity(); }
  static Mat from(const MatZ& z) { return z; }
};

struct SearchState {
  std::uint64_t visited = 0;
  std::uint32_t best_length = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> best_path;
};

// Letters are 2*gen (generator) and 2*gen+1 (inverse).
template <class Ops>
void dfs(const std::vector<typename Ops::Mat>& letters, const typename Ops::Mat& current,
         std::vector<std::uint32_t>& path, std::uint32_t max_length, SearchState& state) {
  ++state.visited;
  if (Ops::is_identity(current)) {
    if (path.size() < state.best_length) {
      state.best_length = static_cast<std::uint32_t>(path.size());
      state.best_path = path;
    }
    return;
  }
  if (path.size() >= max_length || path.size() + 1 >= state.best_length) return;
  const std::uint32_t last = path.back();
  for (std::uint32_t l = 0; l < letters.size(); ++l) {
    if ((l ^ 1u) == last) continue;
    path.push_back(l);
    dfs<Ops>(letters, Ops::mul(current, letters[l]), path, max_length, state);
    path.pop_back();
  }
}

template <class Ops>
NontrivialityResult run_search(std::span<const MatZ> generators, std::uint32_t max_length) {
  std::vector<typename Ops::Mat> letters;
  for (const MatZ& g : generators) {
    letters.push_back(Ops::from(g));
    letters.push_back(Ops::from(g.inverse()));
  }
  std::vector<SearchState> states(letters.size());
  parallel_tasks(letters.size(), [&](std::size_t first) {
    std::vector<std::uint32_t> path{static_cast<std::uint32_t>(first)};
    dfs<Ops>(letters, letters[first], path, max_length, states[first]);
  });
  NontrivialityResult result;
  result.max_length = max_length;
  const SearchState* best = nullptr;
  for (const SearchState& s : states) {
    result.words_checked += s.visited;
    if (!s.best_path.empty() && (!best || s.best_length < best->best_length)) best = &s;
  }
  if (best) {
    result.passed = false;
    std::vector<words::Letter> raw;
    for (std::uint32_t l : best->best_path) raw.push_back({l / 2, (l & 1u) ? -1 : 1});
    result.witness = words::Word::reduce(raw);
  }
  return result;
}

}  // namespace

NontrivialityResult exhaustive_nontriviality(std::span<const MatZ> generators, std::uint32_t max_length) {
  if (generators.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  // Ball of radius n has about (2r - 1)^n words; cap it near 10^7.
  double size = 1.0;
  for (std::uint32_t i = 0; i < max_length; ++i) size *= static_cast<double>(2 * generators.size() - 1);
  if (max_length > 14 || size > 5e6 * 3) {
    throw Error(ErrorKind::SizeLimit, "word length " + std::to_string(max_length) + " too large");
  }
  if (max_length == 0) return NontrivialityResult{true, 0, 0, std::nullopt};
  try {
    return run_search<Ops64>(generators, max_length);
  } catch (const Overflow&) {
    return run_search<OpsBig>(generators, max_length);
  }
}

NontrivialityResult exhaustive_nontriviality(const MatZ& a, const MatZ& b, std::uint32_t max_length) {
  const MatZ gens[] = {a, b};
  return exhaustive_nontriviality(gens, max_length);
}

MatZ evaluate(const words::Word& w, std::span<const MatZ> generators) {
  MatZ r = MatZ::identity();
  for (const words::Letter& l : w.letters()) {
    if (l.generator >= generators.size()) throw Error(ErrorKind::InvalidArgument, "word uses unknown generator");
    const MatZ g = l.exponent > 0 ? generators[l.generator] : generators[l.generator].inverse();
    for (std::int32_t k = 0; k < std::abs(l.exponent); ++k) r = r * g;
  }
  return r;
}

}  // namespace agt::pingpong
