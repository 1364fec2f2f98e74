#include "agt/projdyn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "agt/error.hpp"
#include "agt/pingpong.hpp"

namespace agt::projdyn {

namespace {

void check_square(const Mat& g) {
  if (g.rows() != g.cols() || g.rows() < 2 || g.rows() > 20) {
    throw Error(ErrorKind::InvalidArgument, "expected a square matrix of size 2..20");
  }
  if (!g.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
}

Vec singular_values(const Mat& g) { return Eigen::JacobiSVD<Mat>(g).singularValues(); }

// Normal of the hyperplane g(H) for H with normal n: g^-T n.
Vec moved_normal(const Mat& g, const Vec& n) {
  Vec m = g.transpose().partialPivLu().solve(n);
  return m / m.norm();
}

Vec unit(const Vec& x) { return x / x.norm(); }

std::vector<std::vector<int>> subsets(int d, int l) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(l);
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    int i = l - 1;
    while (i >= 0 && cur[i] == d - l + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < l; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

double radical_inverse(std::size_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

KAK kak(const Mat& g) {
  check_square(g);
  if (!(g.determinant() > 0)) throw Error(ErrorKind::InvalidArgument, "KAK needs det g > 0");
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU(), v = svd.matrixV();
  // det g > 0 forces det U = det V; flip a column pair to make both +1.
  if (u.determinant() < 0) {
    u.col(u.cols() - 1) *= -1;
    v.col(v.cols() - 1) *= -1;
  }
  KAK r{u, v.transpose(), svd.singularValues()};
  const double err = (r.k1 * r.alphas.asDiagonal() * r.k2 - g).norm();
  if (!(err <= 1e-9 * std::max(1.0, g.norm()))) {
    throw Error(ErrorKind::NumericalFailure, "KAK reconstruction error " + std::to_string(err));
  }
  return r;
}

double op_norm(const Mat& g) { return singular_values(g)(0); }

double proj_metric(const Vec& x, const Vec& y) {
  double s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = i + 1; j < x.size(); ++j) {
      const double m = x(i) * y(j) - x(j) * y(i);
      s += m * m;
    }
  }
  return std::min(1.0, std::sqrt(s) / (x.norm() * y.norm()));
}

double hyperplane_distance(const Vec& x, const Vec& normal) {
  return std::min(1.0, std::abs(x.dot(normal)) / (x.norm() * normal.norm()));
}

Mat exterior_power(const Mat& g, int l) {
  check_square(g);
  const int d = static_cast<int>(g.rows());
  if (l < 1 || l > d - 1) throw Error(ErrorKind::InvalidArgument, "exterior power index out of range");
  const auto idx = subsets(d, l);
  Mat out(idx.size(), idx.size());
  Mat sub(l, l);
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      for (int i = 0; i < l; ++i) {
        for (int j = 0; j < l; ++j) sub(i, j) = g(idx[r][i], idx[c][j]);
      }
      out(r, c) = l == 1 ? sub(0, 0) : sub.determinant();
    }
  }
  return out;
}

int pick_contracting_level(const std::vector<Mat>& gs) {
  if (gs.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two matrices");
  const Vec first = singular_values(gs.front()), last = singular_values(gs.back());
  const int d = static_cast<int>(first.size());
  int best = 0;
  double best_growth = -std::numeric_limits<double>::infinity();
  for (int l = 1; l < d; ++l) {
    const double growth = std::log(last(l - 1) / last(l)) - std::log(first(l - 1) / first(l));
    if (best == 0 || growth > best_growth + 1e-9 * std::max(1.0, std::abs(best_growth))) {
      best_growth = growth;
      best = l;
    }
  }
  if (!(best_growth > 1e-9)) throw Error(ErrorKind::NotDiverging, "no singular value ratio grows");
  return best;
}

std::vector<Vec> sphere_samples(int d, std::size_t count, std::size_t offset) {
  if (d < 1 || d > 20) throw Error(ErrorKind::InvalidArgument, "dimension out of range");
  std::vector<Vec> out;
  out.reserve(count);
  const int coords = d + (d % 2);
  constexpr double kTwoPi = 6.283185307179586;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t index = offset + i + 1;
    Vec x(coords);
    for (int k = 0; k < coords; k += 2) {
      const double u1 = radical_inverse(index, kPrimes[k]);
      const double u2 = radical_inverse(index, kPrimes[k + 1]);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      x(k) = rad * std::cos(kTwoPi * u2);
      x(k + 1) = rad * std::sin(kTwoPi * u2);
    }
    Vec y = x.head(d);
    if (y.norm() < 1e-12) y = Vec::Unit(d, static_cast<Eigen::Index>(i % d));
    out.push_back(unit(y));
  }
  return out;
}

Vec ProductMap::apply(const Vec& x) const {
  Vec y = x;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) y = unit(*it * y);
  return y;
}

Mat ProductMap::matrix() const {
  Mat m = Mat::Identity(factors.front().rows(), factors.front().cols());
  for (const Mat& f : factors) m = m * f;
  return m;
}

ProductMap ProductMap::inverse() const {
  ProductMap r;
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) r.factors.push_back(it->inverse());
  return r;
}

double ProductMap::top_ratio() const {
  const double a1 = op_norm(matrix());
  Mat wedge = Mat::Identity(1, 1);
  bool first = true;
  for (const Mat& f : factors) {
    const Mat w = f.rows() == 2 ? Mat::Constant(1, 1, f.determinant()) : exterior_power(f, 2);
    wedge = first ? w : Mat(wedge * w);
    first = false;
  }
  return a1 * a1 / op_norm(wedge);
}

ProductMap operator*(const ProductMap& x, const ProductMap& y) {
  ProductMap r = x;
  r.factors.insert(r.factors.end(), y.factors.begin(), y.factors.end());
  return r;
}

double contraction_frontier(double ratio) { return 1.0 / std::sqrt(ratio + 1.0); }

ContractionCertificate contraction_check(const ProductMap& g, const Vec& v, const Vec& normal, double eps,
                                         std::size_t nsamples) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  const int d = static_cast<int>(v.size());
  ContractionCertificate cert;
  cert.epsilon = eps;
  cert.v = unit(v);
  cert.normal = unit(normal);
  const std::size_t uniform = nsamples - nsamples / 2;
  std::vector<Vec> pts = sphere_samples(d, uniform, 0);
  // Shell just outside the eps-neighborhood of H, where contraction is weakest.
  const double t = std::min(1.0, eps * (1 + 1e-9));
  for (const Vec& w : sphere_samples(d, nsamples / 2, 7919)) {
    Vec perp = w - w.dot(cert.normal) * cert.normal;
    if (perp.norm() < 1e-9) continue;
    perp = unit(perp);
    for (double sign : {1.0, -1.0}) pts.push_back(unit(sign * t * cert.normal + std::sqrt(1 - t * t) * perp));
  }
  for (const Vec& x : pts) {
    if (hyperplane_distance(x, cert.normal) <= eps) continue;
    ++cert.samples;
    const double dist = proj_metric(g.apply(x), cert.v);
    if (dist > cert.max_image_distance) {
      cert.max_image_distance = dist;
      if (dist > eps) cert.witness = x;
    }
  }
  cert.certified = cert.samples > 0 && cert.max_image_distance <= eps;
  if (cert.certified) cert.witness.reset();
  return cert;
}

ContractionCertificate contraction_check(const Mat& g, double eps, std::size_t nsamples) {
  const KAK k = kak(g);
  const Vec v = k.k1.col(0);
  const Vec n = k.k2.row(0).transpose();
  return contraction_check(ProductMap::of(g), v, n, eps, nsamples);
}

double lipschitz_ratio_bound(double delta) {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  return std::sqrt(1 - delta * delta) / delta;
}

double global_lipschitz_bound(const Mat& g) {
  const Vec s = singular_values(g);
  return s(0) * s(1) / (s(s.size() - 1) * s(s.size() - 1));
}

double local_lipschitz(const ProductMap& g, const Vec& center, double radius, std::size_t nsamples) {
  const int d = static_cast<int>(center.size());
  const Vec c = unit(center);
  const auto dirs = sphere_samples(d, 2 * nsamples, 104729);
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < nsamples; ++i) {
    Vec w = dirs[i] - dirs[i].dot(c) * c;
    if (w.norm() < 1e-9) continue;
    w = unit(w);
    const double s = radius * (static_cast<double>(i % 16) + 1) / 16.0;
    const double phi = std::asin(std::min(1.0, s));
    pts.push_back(std::cos(phi) * c + std::sin(phi) * w);
  }
  double best = 0;
  const auto ratio = [&](const Vec& x, const Vec& y) {
    const double dxy = proj_metric(x, y);
    if (dxy < 1e-12) return;
    best = std::max(best, proj_metric(g.apply(x), g.apply(y)) / dxy);
  };
  for (std::size_t i = 0; i < pts.size(); ++i) {
    ratio(c, pts[i]);
    if (i + 1 < pts.size()) ratio(pts[i], pts[i + 1]);
    // Infinitesimal pair to capture the derivative at the sample.
    Vec w = dirs[nsamples + i] - dirs[nsamples + i].dot(pts[i]) * pts[i];
    if (w.norm() > 1e-9) ratio(pts[i], unit(pts[i] + 1e-6 * unit(w)));
  }
  return best;
}

double separation_score(const Mat& f, const Mat& f_inv, const Configuration& c) {
  double s = 1.0;
  for (const Vec& v : c.points) {
    const Vec fv = f * v, gv = f_inv * v;
    for (const Vec& n : c.normals) s = std::min({s, hyperplane_distance(fv, n), hyperplane_distance(gv, n)});
  }
  return s;
}

namespace {

std::vector<Configuration> make_configurations(int d, int n, std::size_t count) {
  std::vector<Configuration> out;
  const auto pts = sphere_samples(d, n * count, 0);
  const auto nrm = sphere_samples(d, n * count, 500009);
  for (std::size_t c = 0; c < count; ++c) {
    Configuration cfg;
    for (int i = 0; i < n; ++i) {
      cfg.points.push_back(pts[c * n + i]);
      cfg.normals.push_back(nrm[c * n + i]);
    }
    out.push_back(cfg);
  }
  // Adversarial family: each point lies on some hyperplane.
  for (std::size_t c = 0; c < count / 2 + 1; ++c) {
    Configuration cfg = out[c];
    for (int j = 0; j < n; ++j) {
      const Vec& v = cfg.points[j % n];
      Vec m = cfg.normals[j] - cfg.normals[j].dot(v) * v;
      if (m.norm() > 1e-9) cfg.normals[j] = m / m.norm();
    }
    out.push_back(cfg);
  }
  return out;
}

}  // namespace

SeparationResult separating_search(const std::vector<Mat>& candidates, int n, std::size_t trial_configs,
                                   std::size_t max_size) {
  if (candidates.empty()) throw Error(ErrorKind::InvalidArgument, "no candidates");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  const int d = static_cast<int>(candidates.front().rows());
  std::vector<Mat> inverses;
  for (const Mat& f : candidates) inverses.push_back(f.inverse());
  std::vector<Configuration> configs = make_configurations(d, n, trial_configs);

  const auto score_table = [&](const std::vector<Configuration>& cs) {
    std::vector<std::vector<double>> t(candidates.size(), std::vector<double>(cs.size()));
    for (std::size_t f = 0; f < candidates.size(); ++f) {
      for (std::size_t c = 0; c < cs.size(); ++c) t[f][c] = separation_score(candidates[f], inverses[f], cs[c]);
    }
    return t;
  };
  const auto greedy = [&](const std::vector<std::vector<double>>& table, std::size_t nconf) {
    std::vector<std::size_t> chosen;
    std::vector<double> value(nconf, 0.0);
    double r = 0;
    while (chosen.size() < max_size) {
      std::size_t best_f = candidates.size();
      double best_r = r;
      for (std::size_t f = 0; f < candidates.size(); ++f) {
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < nconf; ++c) m = std::min(m, std::max(value[c], table[f][c]));
        if (m > best_r + 1e-12) {
          best_r = m;
          best_f = f;
        }
      }
      if (best_f == candidates.size()) break;
      chosen.push_back(best_f);
      for (std::size_t c = 0; c < nconf; ++c) value[c] = std::max(value[c], table[best_f][c]);
      r = best_r;
    }
    return std::make_pair(chosen, value);
  };

  auto table = score_table(configs);
  auto [chosen, value] = greedy(table, configs.size());

  // Local descent from the worst configurations toward smaller separation.
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return value[x] < value[y]; });
  const auto family_value = [&](const Configuration& cfg) {
    double m = 0;
    for (std::size_t f : chosen) m = std::max(m, separation_score(candidates[f], inverses[f], cfg));
    return m;
  };
  const auto steps = sphere_samples(d, 4096, 1299709);
  std::size_t step = 0;
  const std::size_t refine = std::min<std::size_t>(8, order.size());
  for (std::size_t k = 0; k < refine && !chosen.empty(); ++k) {
    Configuration cfg = configs[order[k]];
    double cur = family_value(cfg);
    for (double scale = 0.2; scale > 1e-3; scale *= 0.5) {
      for (int it = 0; it < 12; ++it) {
        Configuration trial = cfg;
        for (auto& p : trial.points) p = unit(p + scale * steps[step++ % steps.size()]);
        for (auto& m : trial.normals) m = unit(m + scale * steps[step++ % steps.size()]);
        const double val = family_value(trial);
        if (val < cur) {
          cur = val;
          cfg = trial;
        }
      }
    }
    configs.push_back(cfg);
  }
  table = score_table(configs);
  std::tie(chosen, value) = greedy(table, configs.size());

  SeparationResult res;
  res.chosen = chosen;
  res.configurations = configs.size();
  res.r = chosen.empty() ? 0.0 : *std::min_element(value.begin(), value.end());
  if (res.r < 1e-3) {
    throw Error(ErrorKind::SearchExhausted, "empirical separation " + std::to_string(res.r) + " below 1e-3");
  }
  return res;
}

Mat evaluate(const words::Word& w, const std::vector<Mat>& gens) {
  const Eigen::Index d = gens.front().rows();
  Mat m = Mat::Identity(d, d);
  for (const auto& l : w.letters()) {
    if (l.generator >= gens.size()) throw Error(ErrorKind::InvalidArgument, "word uses unknown generator");
    const Mat g = l.exponent > 0 ? gens[l.generator] : Mat(gens[l.generator].inverse());
    for (int k = 0; k < std::abs(l.exponent); ++k) m = m * g;
  }
  return m;
}

namespace {

[[noreturn]] void stuck(const std::string& stage, const std::string& why) {
  throw Error(ErrorKind::PipelineStuck, "stage " + stage + ": " + why);
}

double spectral_ratio(const Mat& g) {
  Eigen::EigenSolver<Mat> es(g, false);
  std::vector<double> mods;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(mods.rbegin(), mods.rend());
  return mods[0] / mods[1];
}

// Attracting point and repelling normal: top left and right singular vectors.
// Products here are too ill-conditioned for a determinant check.
std::pair<Vec, Vec> top_pair(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU().col(0), svd.matrixV().col(0)};
}

bool integral(const Mat& g) {
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (std::abs(g.data()[i] - std::round(g.data()[i])) > 1e-12) return false;
  }
  return true;
}

struct Candidate {
  std::vector<Player> players;
  double epsilon = 0;
  double r = 0;
  std::vector<std::string> checks;
  std::size_t samples = 0;
  double worst = 0;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

PingPongCert construct_free_pair(const std::vector<Mat>& gens, const FreePairParams& params) {
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "no generators");
  const Eigen::Index d = gens.front().rows();
  for (const Mat& g : gens) {
    check_square(g);
    if (g.rows() != d) throw Error(ErrorKind::InvalidArgument, "generators have different sizes");
    if (std::abs(g.determinant() - 1) > 1e-9) throw Error(ErrorKind::DeterminantNotOne, "generator det != 1");
  }
  const auto rank = static_cast<std::uint32_t>(gens.size());

  // Stage 1: an element with a dominant eigenvalue, so its powers contract.
  const auto ball = words::enumerate_ball(rank, params.word_length);
  words::Word gamma_word;
  double best_ratio = 1.0, best_sing = 1.0;
  for (const auto& w : ball) {
    if (w.is_identity()) continue;
    const Mat m = evaluate(w, gens);
    const double s = spectral_ratio(m);
    best_sing = std::max(best_sing, ProductMap::of(m).top_ratio());
    if (s > best_ratio * (1 + 1e-9)) {
      best_ratio = s;
      gamma_word = w;
    }
  }
  if (gamma_word.is_identity()) {
    stuck("1 (contracting element)", "no word of length <= " + std::to_string(params.word_length) +
                                         " has a dominant eigenvalue (max alpha1/alpha2 " + fmt(best_sing) +
                                         "); the group looks bounded");
  }
  const Mat gamma_m = evaluate(gamma_word, gens);

  // Separating family F and its Lipschitz bound C.
  std::vector<words::Word> f_words;
  std::vector<Mat> f_mats;
  for (const auto& w : words::enumerate_ball(rank, params.separation_length)) {
    if (w.is_identity()) continue;
    f_words.push_back(w);
    f_mats.push_back(evaluate(w, gens));
  }
  SeparationResult sep;
  try {
    sep = separating_search(f_mats, 2, params.separation_configs);
  } catch (const Error& e) {
    stuck("separation", e.what());
  }
  std::vector<words::Word> family;
  std::vector<Mat> fam, fam_inv;
  double C = 1.0;
  for (std::size_t i : sep.chosen) {
    family.push_back(f_words[i]);
    fam.push_back(f_mats[i]);
    fam_inv.push_back(f_mats[i].inverse());
    C = std::max({C, global_lipschitz_bound(fam.back()), global_lipschitz_bound(fam_inv.back())});
  }

  std::string last_failure = "no power tried";
  for (std::uint32_t k = 1; k <= params.max_power; ++k) {
    ProductMap gamma;
    for (std::uint32_t i = 0; i < k; ++i) gamma.factors.push_back(gamma_m);
    const ProductMap gamma_inv = gamma.inverse();
    const Mat gk = gamma.matrix();
    if (!(gk.cwiseAbs().maxCoeff() < 1e15)) {
      last_failure = "entries of gamma^" + std::to_string(k) + " exceed double precision";
      break;
    }
    const Vec h_normal = top_pair(gk).second;

    // Stage 2 and 3: v where gamma^-1 is 2-Lipschitz, and f pushing gamma^-1 v off (H)_r.
    std::size_t best_f = 0;
    double best_margin = -1;
    bool found_omega = false;
    for (const Vec& v : sphere_samples(static_cast<int>(d), 128, 31)) {
      if (local_lipschitz(gamma_inv, v, 1e-3, 24) > 2.0) continue;
      found_omega = true;
      const Vec u = gamma_inv.apply(v);
      for (std::size_t i = 0; i < fam.size(); ++i) {
        const double m = std::min(hyperplane_distance(fam[i] * u, h_normal), hyperplane_distance(fam_inv[i] * u, h_normal));
        if (m > best_margin) {
          best_margin = m;
          best_f = i;
        }
      }
    }
    if (!found_omega) stuck("2 (Lipschitz region)", "no sampled point where gamma^-1 is 2-Lipschitz");

    // Stage 4: assemble gamma0, gamma1, gamma2.
    const ProductMap f = ProductMap::of(fam[best_f]);
    const ProductMap g0 = gamma * f * gamma_inv;
    const ProductMap g0_inv = gamma * ProductMap::of(fam_inv[best_f]) * gamma_inv;
    const auto [v0p, h0p] = top_pair(g0.matrix());
    const auto [v0m, h0m] = top_pair(g0_inv.matrix());
    const double eps = std::max(contraction_frontier(g0.top_ratio()), contraction_frontier(g0_inv.top_ratio()));

    std::size_t i0 = 0;
    double m0 = -1;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const double m = std::min(hyperplane_distance(fam[i] * v0p, h0p), hyperplane_distance(fam_inv[i] * v0m, h0m));
      if (m > m0) {
        m0 = m;
        i0 = i;
      }
    }
    const Mat& f0 = fam[i0];
    const Vec v1p = unit(f0 * v0p), h1p = h0p;
    const Vec v1m = v0m, h1m = moved_normal(f0, h0m);
    std::size_t i1 = 0;
    double m1 = -1;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const Vec a = fam[i] * v1p, b = fam[i] * v1m;
      const double m = std::min({hyperplane_distance(a, h1p), hyperplane_distance(a, h1m),
                                 hyperplane_distance(b, h1p), hyperplane_distance(b, h1m)});
      if (m > m1) {
        m1 = m;
        i1 = i;
      }
    }
    const Mat& f1 = fam[i1];
    const Mat& f1_inv = fam_inv[i1];
    const ProductMap g1 = ProductMap::of(f0) * g0;
    const ProductMap g1_inv = g0_inv * ProductMap::of(fam_inv[i0]);
    const ProductMap g2 = ProductMap::of(f1) * g1 * ProductMap::of(f1_inv);
    const ProductMap g2_inv = ProductMap::of(f1) * g1_inv * ProductMap::of(f1_inv);
    const Vec v2p = unit(f1 * v1p), h2p = moved_normal(f1, h1p);
    const Vec v2m = unit(f1 * v1m), h2m = moved_normal(f1, h1m);

    const double r = std::min({sep.r, m0, m1}) * (1 - 1e-9);
    if (!(std::pow(C, 4) * eps < r)) {
      last_failure = "C^4 eps = " + fmt(std::pow(C, 4) * eps) + " >= r = " + fmt(r) + " at power " + std::to_string(k);
      continue;
    }

    // Stage 5: verification.
    Candidate cand;
    cand.epsilon = eps;
    cand.r = r;
    words::Word gamma_pow;
    for (std::uint32_t i = 0; i < k; ++i) gamma_pow = gamma_pow * gamma_word;
    const words::Word w0 = gamma_pow * family[best_f] * words::invert(gamma_pow);
    const words::Word w1 = family[i0] * w0;
    const words::Word w2 = family[i1] * w1 * words::invert(family[i1]);
    cand.players = {
        {"gamma1", w1, g1.matrix(), v1p, h1p, C * eps},
        {"gamma1^-1", words::invert(w1), g1_inv.matrix(), v1m, h1m, C * eps},
        {"gamma2", w2, g2.matrix(), v2p, h2p, C * C * eps},
        {"gamma2^-1", words::invert(w2), g2_inv.matrix(), v2m, h2m, C * C * eps},
    };
    const ProductMap maps[] = {g1, g1_inv, g2, g2_inv};
    const double prox[] = {r, r / C, r / C, r / (C * C)};
    bool ok = true;
    std::string why;
    const auto require = [&](bool cond, const std::string& text) {
      cand.checks.push_back(std::string(cond ? "ok   " : "FAIL ") + text);
      if (!cond && ok) {
        ok = false;
        why = text;
      }
    };
    require(hyperplane_distance(f0 * v0p, h0p) > r, "d(f0 v0+, H0+) > r");
    require(hyperplane_distance(fam_inv[i0] * v0m, h0m) > r, "d(f0^-1 v0-, H0-) > r");
    require(hyperplane_distance(v0m, h1m) > r / C, "d(v0-, f0 H0-) > r/C");
    for (const Vec* v : {&v2p, &v2m}) {
      require(std::min(hyperplane_distance(*v, h1p), hyperplane_distance(*v, h1m)) > r, "d(v2, H1+ u H1-) > r");
    }
    for (const Vec* v : {&v1p, &v1m}) {
      require(std::min(hyperplane_distance(*v, h2p), hyperplane_distance(*v, h2m)) > r / C, "d(v1, H2+ u H2-) > r/C");
    }
    require(std::pow(C, 4) * eps < r, "C^4 eps < r (" + fmt(std::pow(C, 4) * eps) + " < " + fmt(r) + ")");
    const double nb = C * C * eps;
    for (std::size_t g = 0; g < 4; ++g) {
      const Player& pg = cand.players[g];
      require(hyperplane_distance(pg.v, pg.normal) > prox[g], pg.name + " proximal");
      const auto cc = contraction_check(maps[g], pg.v, pg.normal, pg.epsilon, params.samples / 4);
      cand.samples += cc.samples;
      require(cc.certified, pg.name + " contracting (max " + fmt(cc.max_image_distance) + ")");
      for (std::size_t h = 0; h < 4; ++h) {
        if (h == g) continue;
        require(proj_metric(pg.v, cand.players[h].v) > 2 * nb, "U(" + pg.name + ") and U(" + cand.players[h].name + ") disjoint");
      }
      // Sampled ping-pong table: g maps U_h into U_g for h != g^-1.
      for (std::size_t h = 0; h < 4; ++h) {
        if (h == (g ^ 1u)) continue;
        const Vec& c = cand.players[h].v;
        require(hyperplane_distance(c, pg.normal) > nb + pg.epsilon, "U(" + cand.players[h].name + ") avoids H(" + pg.name + ")");
        for (const Vec& w : sphere_samples(static_cast<int>(d), params.samples / 16, 17 * (g * 4 + h))) {
          Vec perp = w - w.dot(c) * c;
          if (perp.norm() < 1e-9) continue;
          const Vec x = unit(c + 0.999 * nb * unit(perp));
          const double dist = proj_metric(maps[g].apply(x), pg.v);
          cand.worst = std::max(cand.worst, dist);
          ++cand.samples;
          if (dist > nb) require(false, pg.name + " maps U(" + cand.players[h].name + ") into U(" + pg.name + ")");
        }
      }
    }
    if (!ok) {
      last_failure = why + " at power " + std::to_string(k);
      continue;
    }

    PingPongCert cert;
    cert.players = std::move(cand.players);
    cert.gamma = gamma_word;
    cert.gamma_power = k;
    cert.separating_family = family;
    cert.C = C;
    cert.r = r;
    cert.epsilon = eps;
    cert.neighborhood = nb;
    cert.samples_checked = cand.samples;
    cert.worst_table_distance = cand.worst;
    cert.checks = std::move(cand.checks);
    const bool all_integral = d == 2 && std::all_of(gens.begin(), gens.end(), integral);
    if (all_integral && params.exact_check_length > 0) {
      std::vector<pingpong::MatZ> zg;
      for (const Mat& g : gens) {
        zg.emplace_back(BigInt(std::llround(g(0, 0))), BigInt(std::llround(g(0, 1))), BigInt(std::llround(g(1, 0))),
                        BigInt(std::llround(g(1, 1))));
      }
      const pingpong::MatZ a = pingpong::evaluate(cert.players[0].word, zg);
      const pingpong::MatZ b = pingpong::evaluate(cert.players[2].word, zg);
      cert.exact_check_passed = pingpong::exhaustive_nontriviality(a, b, params.exact_check_length).passed;
      cert.exact_check_length = params.exact_check_length;
    }
    return cert;
  }
  stuck("5 (verification)", last_failure);
}

CommutatorDefect commutator_defect(const Mat& x, const Mat& y) {
  check_square(x);
  check_square(y);
  const Mat xi = x.inverse(), yi = y.inverse();
  if (!(op_norm(xi) < 2 && op_norm(yi) < 2)) {
    throw Error(ErrorKind::NormsTooLarge, "need |x^-1| < 2 and |y^-1| < 2");
  }
  const Mat id = Mat::Identity(x.rows(), x.cols());
  CommutatorDefect r;
  r.defect = op_norm(x * y * xi * yi - id);
  r.bound = 8 * op_norm(x - id) * op_norm(y - id);
  return r;
}

std::vector<double> iterated_commutator_norms(const std::vector<Mat>& xs, const Mat& y) {
  const Mat id = Mat::Identity(y.rows(), y.cols());
  std::vector<double> out{op_norm(y - id)};
  Mat cur = y;
  for (const Mat& x : xs) {
    cur = x * cur * x.inverse() * cur.inverse();
    out.push_back(op_norm(cur - id));
  }
  return out;
}

}  // namespace agt::projdyn
