#include "agt/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "agt/btree.hpp"
#include "agt/cayley.hpp"
#include "agt/error.hpp"
#include "agt/ergodic.hpp"
#include "agt/expander.hpp"
#include "agt/padic.hpp"
#include "agt/pingpong.hpp"
#include "agt/projdyn.hpp"
#include "agt/words.hpp"

namespace agt::cli {

namespace {

using nlohmann::ordered_json;
using Json = ordered_json;

Json envelope(const std::string& command) {
  Json j;
  j["schema"] = "agt/1";
  j["command"] = command;
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot write " + path);
  f << text;
}

Json read_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::ConfigError, "cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
}

void reject_unknown(const Json& j, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw Error(ErrorKind::ConfigError, "unknown key '" + key + "' in " + where);
    }
  }
}

const Json& need(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw Error(ErrorKind::ConfigError, "missing key '" + key + "' in " + where);
  return j.at(key);
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw Error(ErrorKind::ConfigError, "expected an integer or a rational string, got " + v.dump());
}

std::vector<std::vector<Rational>> rational_matrix(const Json& m, const std::string& where) {
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 || !m[1].is_array() || m[1].size() != 2) {
    throw Error(ErrorKind::ConfigError, where + " must be a 2x2 matrix");
  }
  std::vector<std::vector<Rational>> out(2, std::vector<Rational>(2));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out[i][j] = parse_rational(scalar_text(m[i][j]));
  }
  return out;
}

pingpong::MatZ int_matrix(const Json& m, const std::string& where) {
  const auto q = rational_matrix(m, where);
  for (const auto& row : q) {
    for (const auto& e : row) {
      if (denominator(e) != 1) throw Error(ErrorKind::ConfigError, where + " must have integer entries");
    }
  }
  return pingpong::MatZ(numerator(q[0][0]), numerator(q[0][1]), numerator(q[1][0]), numerator(q[1][1]));
}

pingpong::SlopeSet slope_set(const Json& arcs, const std::string& where) {
  if (!arcs.is_array()) throw Error(ErrorKind::ConfigError, where + " must be a list of [lo, hi] arcs");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& a : arcs) {
    if (!a.is_array() || a.size() != 2) throw Error(ErrorKind::ConfigError, where + ": arcs are [lo, hi] pairs");
    pairs.emplace_back(scalar_text(a[0]), scalar_text(a[1]));
  }
  return pingpong::SlopeSet::parse(pairs);
}

Json cert_json(const pingpong::FreenessCertificate& c) {
  Json j;
  j["form"] = c.form;
  j["status"] = pingpong::to_string(c.status);
  j["valid"] = c.valid();
  j["detail"] = c.detail;
  Json players = Json::array();
  for (const auto& p : c.players) {
    players.push_back({{"name", p.name},
                       {"matrix", {{to_string(p.matrix.a), to_string(p.matrix.b)},
                                   {to_string(p.matrix.c), to_string(p.matrix.d)}}}});
  }
  j["players"] = players;
  Json sets = Json::object();
  for (const auto& s : c.sets) sets[s.name] = s.set.str();
  j["sets"] = sets;
  Json incl = Json::array();
  for (const auto& i : c.checked_inclusions) {
    Json e = {{"element", i.element}, {"source", i.source}, {"target", i.target}, {"holds", i.holds}};
    if (i.witness) e["witness"] = *i.witness;
    incl.push_back(e);
  }
  j["checked_inclusions"] = incl;
  return j;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

// ------------------------------------------------------------- words

int run_words_paradox(std::uint32_t depth, std::ostream& out) {
  const auto rep = words::verify_paradox(depth);
  Json j = envelope("words paradox");
  j["depth"] = rep.depth;
  j["ball_size"] = rep.ball_size;
  j["membership_radius"] = rep.membership_radius;
  Json pieces;
  for (int p = 0; p < 5; ++p) pieces[words::to_string(static_cast<words::Piece>(p))] = rep.piece_counts[p];
  j["piece_counts"] = pieces;
  Json ids = Json::array();
  for (const auto& c : rep.identities) {
    Json e = {{"name", c.name}, {"passed", c.passed}, {"words_checked", c.words_checked}};
    if (c.counterexample) e["counterexample"] = c.counterexample->str();
    ids.push_back(e);
  }
  j["identities"] = ids;
  j["passed"] = rep.passed();
  emit(out, j);
  return rep.passed() ? kOk : kCertificateFailure;
}

int run_words_ball(std::uint32_t rank, std::uint32_t radius, bool list, std::ostream& out) {
  const auto ball = words::enumerate_ball(rank, radius);
  Json j = envelope("words ball");
  j["rank"] = rank;
  j["radius"] = radius;
  std::vector<std::uint64_t> spheres(radius + 1, 0);
  for (const auto& w : ball) ++spheres[w.length()];
  j["sphere_sizes"] = spheres;
  j["ball_size"] = ball.size();
  if (list) {
    Json ws = Json::array();
    for (const auto& w : ball) ws.push_back(w.str());
    j["words"] = ws;
  }
  emit(out, j);
  return kOk;
}

// ---------------------------------------------------------- pingpong

int run_pingpong_certify(const std::string& path, std::ostream& out) {
  const Json cfg = read_json(path);
  const std::string form = need(cfg, "form", path).get<std::string>();
  Json j = envelope("pingpong certify");
  pingpong::FreenessCertificate cert;
  if (form == "first") {
    reject_unknown(cfg, {"form", "a", "b", "sets", "nontriviality"}, path);
    const auto a = int_matrix(need(cfg, "a", path), "a");
    const auto b = int_matrix(need(cfg, "b", path), "b");
    const Json& sets = need(cfg, "sets", path);
    reject_unknown(sets, {"A+", "A-", "B+", "B-"}, "sets");
    cert = pingpong::certify_first_form(a, b, slope_set(need(sets, "A+", "sets"), "A+"),
                                        slope_set(need(sets, "A-", "sets"), "A-"),
                                        slope_set(need(sets, "B+", "sets"), "B+"),
                                        slope_set(need(sets, "B-", "sets"), "B-"));
    j["certificate"] = cert_json(cert);
    if (cfg.contains("nontriviality")) {
      const auto len = cfg["nontriviality"].get<std::uint32_t>();
      const auto nt = pingpong::exhaustive_nontriviality(a, b, len);
      Json e = {{"max_length", nt.max_length}, {"words_checked", nt.words_checked}, {"passed", nt.passed}};
      if (nt.witness) e["witness"] = nt.witness->str();
      j["nontriviality"] = e;
      if (!nt.passed) {
        emit(out, j);
        return kCertificateFailure;
      }
    }
  } else if (form == "second") {
    reject_unknown(cfg, {"form", "G", "H", "A", "B"}, path);
    const auto factor = [&](const std::string& key) {
      std::vector<pingpong::FactorGenerator> gens;
      const Json& list = need(cfg, key, path);
      if (!list.is_array()) throw Error(ErrorKind::ConfigError, key + " must be a list");
      for (const auto& g : list) {
        reject_unknown(g, {"matrix", "order"}, key);
        pingpong::FactorGenerator fg{int_matrix(need(g, "matrix", key), key), std::nullopt};
        if (g.contains("order") && !g["order"].is_null()) fg.order = g["order"].get<std::uint32_t>();
        gens.push_back(fg);
      }
      return gens;
    };
    cert = pingpong::certify_second_form(factor("G"), factor("H"), slope_set(need(cfg, "A", path), "A"),
                                         slope_set(need(cfg, "B", path), "B"));
    j["certificate"] = cert_json(cert);
  } else if (form == "ping") {
    reject_unknown(cfg, {"form", "a", "b", "A", "B"}, path);
    const auto to_q = [&](const std::string& key) {
      const auto m = rational_matrix(need(cfg, key, path), key);
      return pingpong::Mat2Q{m[0][0], m[0][1], m[1][0], m[1][1]};
    };
    cert = pingpong::certify_ping(to_q("a"), to_q("b"), slope_set(need(cfg, "A", path), "A"),
                                  slope_set(need(cfg, "B", path), "B"));
    j["certificate"] = cert_json(cert);
  } else {
    throw Error(ErrorKind::ConfigError, "form must be first, second or ping");
  }
  emit(out, j);
  return cert.valid() ? kOk : kCertificateFailure;
}

// ------------------------------------------------------------ cayley

struct CayleyOptions {
  std::string action;
  std::string group = "z";
  std::string gens = "default";
  std::uint32_t max_n = 10;
  std::string eps = "1/10";
  std::string dot;
};

template <class O>
std::vector<typename O::Element> load_gens(const O& oracle, const CayleyOptions& o,
                                           std::vector<typename O::Element> defaults,
                                           typename O::Element (*parse)(const O&, const Json&)) {
  if (o.gens == "default") return defaults;
  const Json list = read_json(o.gens);
  if (!list.is_array()) throw Error(ErrorKind::ConfigError, "generator file must hold a list");
  std::vector<typename O::Element> gens{oracle.identity()};
  for (const auto& e : list) {
    auto x = parse(oracle, e);
    gens.push_back(oracle.invert(x));
    gens.push_back(std::move(x));
  }
  return gens;
}

template <class O>
int run_cayley_with(const O& oracle, const std::vector<typename O::Element>& gens, const CayleyOptions& o,
                    std::ostream& out) {
  Json j = envelope("cayley " + o.action);
  j["group"] = o.group;
  j["generators"] = gens.size();
  int code = kOk;
  if (o.action == "growth") {
    const auto data = cayley::ball(oracle, gens, o.max_n);
    j["counts"] = data.counts;
    if (o.max_n >= 2) {
      const auto g = cayley::growth_rate_estimate(data.counts);
      j["rate"] = std::vector<double>(g.rate.begin() + 1, g.rate.end());
      j["running_inf"] = std::vector<double>(g.running_inf.begin() + 1, g.running_inf.end());
      j["ratio"] = std::vector<double>(g.ratio.begin() + 1, g.ratio.end());
      j["fitted_degree"] = g.fitted_degree;
      j["sub_multiplicative"] = g.sub_multiplicative;
    }
    if (!o.dot.empty()) write_file(o.dot, cayley::ball_graph(oracle, data, gens).to_dot("ball"));
  } else if (o.action == "cheeger") {
    const auto data = cayley::ball(oracle, gens, o.max_n);
    Json rows = Json::array();
    for (std::uint32_t r = 0; r <= o.max_n; ++r) {
      const auto a = data.level(r);
      rows.push_back({{"radius", r}, {"size", a.size()},
                      {"boundary", cayley::boundary(oracle, a, gens).size()},
                      {"quotient", to_string(cayley::cheeger_quotient(oracle, a, gens))}});
    }
    j["balls"] = rows;
    const auto graph = cayley::ball_graph(oracle, data, gens);
    if (graph.vertex_count >= 2 && graph.vertex_count <= 24) {
      const auto cb = cheeger_bruteforce(graph);
      j["bruteforce_on_ball"] = {{"value", to_string(cb.value)}, {"witness", cb.witness}};
    }
    if (!o.dot.empty()) write_file(o.dot, graph.to_dot("ball"));
  } else if (o.action == "folner") {
    const Rational eps = parse_rational(o.eps);
    const auto res = cayley::folner_ball_search(oracle, gens, eps, o.max_n);
    j["epsilon"] = to_string(eps);
    std::vector<std::string> ratios;
    for (const auto& q : res.ratios) ratios.push_back(to_string(q));
    j["ratios"] = ratios;
    if (res.radius) j["radius"] = *res.radius;
    else j["radius"] = nullptr;
    j["exhausted"] = res.exhausted;
    if (res.exhausted) j["note"] = "no Folner ball up to max-n; this does not prove non-amenability";
  } else {
    throw Error(ErrorKind::ConfigError, "cayley action must be growth, cheeger or folner");
  }
  emit(out, j);
  return code;
}

std::vector<std::int64_t> parse_int_vector(const Json& e) {
  if (e.is_number_integer()) return {e.get<std::int64_t>()};
  return e.get<std::vector<std::int64_t>>();
}

int run_cayley(const CayleyOptions& o, std::ostream& out) {
  if (o.group == "z" || o.group == "z2") {
    const cayley::LatticeOracle oracle{o.group == "z" ? 1u : 2u};
    const auto gens = load_gens<cayley::LatticeOracle>(
        oracle, o, oracle.standard_gens(), [](const cayley::LatticeOracle& orc, const Json& e) {
          auto v = parse_int_vector(e);
          if (v.size() != orc.dim) throw Error(ErrorKind::ConfigError, "generator has wrong dimension");
          return v;
        });
    return run_cayley_with(oracle, gens, o, out);
  }
  if (o.group == "free2") {
    const cayley::FreeGroupOracle oracle{2};
    const auto gens = load_gens<cayley::FreeGroupOracle>(
        oracle, o, oracle.standard_gens(),
        [](const cayley::FreeGroupOracle&, const Json& e) { return words::parse(e.get<std::string>()); });
    return run_cayley_with(oracle, gens, o, out);
  }
  if (o.group == "trivial") {
    const cayley::TrivialOracle oracle;
    return run_cayley_with(oracle, std::vector<int>{0}, o, out);
  }
  if (o.group.rfind("sl2z-mod:", 0) == 0) {
    const std::int64_t n = std::stoll(o.group.substr(9));
    if (n < 2) throw Error(ErrorKind::ConfigError, "modulus must be >= 2");
    const cayley::ModularMatrixOracle oracle{2, n};
    const auto gens = load_gens<cayley::ModularMatrixOracle>(
        oracle, o, oracle.standard_gens(), [](const cayley::ModularMatrixOracle& orc, const Json& e) {
          auto v = e.get<std::vector<std::vector<std::int64_t>>>();
          std::vector<std::int64_t> flat;
          for (auto& row : v) {
            for (auto x : row) flat.push_back(((x % orc.n) + orc.n) % orc.n);
          }
          if (flat.size() != 4) throw Error(ErrorKind::ConfigError, "generator must be 2x2");
          return flat;
        });
    return run_cayley_with(oracle, gens, o, out);
  }
  if (o.group == "sl2z") {
    const cayley::SL2ZOracle oracle;
    const auto gens = load_gens<cayley::SL2ZOracle>(
        oracle, o,
        {pingpong::MatZ::identity(), pingpong::MatZ(1, 1, 0, 1), pingpong::MatZ(1, -1, 0, 1),
         pingpong::MatZ(1, 0, 1, 1), pingpong::MatZ(1, 0, -1, 1)},
        [](const cayley::SL2ZOracle&, const Json& e) { return int_matrix(e, "generator"); });
    return run_cayley_with(oracle, gens, o, out);
  }
  throw Error(ErrorKind::ConfigError, "unknown group '" + o.group + "' (z, z2, free2, trivial, sl2z, sl2z-mod:N)");
}

// ---------------------------------------------------------- expander

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoll(item));
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::ConfigError, "bad list item '" + item + "'");
    }
  }
  return out;
}

int run_expander(const std::string& family, std::uint32_t k, const std::string& moduli, const std::string& csv,
                 std::ostream& out) {
  Json j = envelope("expander");
  j["family"] = family;
  Json rows = Json::array();
  std::ostringstream table;
  table << "family,parameter,vertices,degree,lambda2,gap,expansion_exact_or_NA\n";
  for (std::int64_t m : parse_list(moduli)) {
    FiniteGraph g;
    if (family == "cycle") {
      g = FiniteGraph::cycle(static_cast<std::uint32_t>(m));
    } else if (family == "slk") {
      g = expander::build_sl_cayley(k, m);
    } else {
      throw Error(ErrorKind::ConfigError, "family must be cycle or slk");
    }
    const auto gaps = expander::spectral_gap(g);
    std::string expansion = "NA";
    if (g.vertex_count <= 24) expansion = to_string(expander::edge_expansion_exact(g).value);
    char l2[64], gap[64];
    std::snprintf(l2, sizeof l2, "%.12f", gaps.lambda2);
    std::snprintf(gap, sizeof gap, "%.12f", gaps.gap);
    table << family << "," << m << "," << g.vertex_count << "," << g.regular_degree() << "," << l2 << "," << gap
          << "," << expansion << "\n";
    rows.push_back({{"parameter", m},
                    {"vertices", g.vertex_count},
                    {"degree", g.regular_degree()},
                    {"lambda2", gaps.lambda2},
                    {"gap", gaps.gap},
                    {"normalized_gap", gaps.normalized_gap()},
                    {"method", gaps.method},
                    {"disconnected", gaps.disconnected},
                    {"expansion_exact", expansion}});
  }
  j["rows"] = rows;
  if (!csv.empty()) write_file(csv, table.str());
  emit(out, j);
  return kOk;
}

// ------------------------------------------------------------- padic

Json padic_json(const padic::Padic& x) {
  Json j;
  j["p"] = x.prime();
  j["zero"] = x.is_zero();
  j["exact_zero"] = x.is_exact_zero();
  if (!x.is_zero()) {
    j["valuation"] = x.valuation();
    j["precision"] = x.precision();
    j["digits_lsb_first"] = x.digits();
    j["abs"] = to_string(x.abs_value());
  }
  if (!x.is_exact_zero()) j["absolute_precision"] = x.absolute_precision();
  j["text"] = x.str();
  return j;
}

// -------------------------------------------------------------- tree

int run_tree(std::int64_t p, std::uint32_t radius, const std::string& dot, std::ostream& out) {
  const auto ball = btree::build_ball(btree::LatticeClass::base(p), radius);
  const auto rep = btree::verify_tree(ball);
  Json j = envelope("tree");
  j["p"] = p;
  j["radius"] = radius;
  j["vertices"] = rep.vertices;
  j["edges"] = rep.edges;
  j["expected_vertices"] = btree::expected_ball_size(p, radius);
  j["connected"] = rep.connected;
  j["acyclic"] = rep.acyclic;
  j["interior_degree_ok"] = rep.interior_degree_ok;
  j["depth_matches_distance"] = rep.depth_matches_distance;
  j["passed"] = rep.passed();
  if (!dot.empty()) write_file(dot, ball.graph().to_dot("tree"));
  emit(out, j);
  return rep.passed() ? kOk : kCertificateFailure;
}

// -------------------------------------------------------------- tits

Json vec_json(const projdyn::Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json mat_json(const projdyn::Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

int run_tits(const std::string& gens_path, int dim, const std::string& json_path, std::ostream& out) {
  const Json cfg = read_json(gens_path);
  const Json& list = cfg.is_object() ? need(cfg, "gens", gens_path) : cfg;
  if (cfg.is_object()) reject_unknown(cfg, {"gens"}, gens_path);
  std::vector<projdyn::Mat> gens;
  for (const auto& m : list) {
    const auto rows = m.get<std::vector<std::vector<double>>>();
    if (static_cast<int>(rows.size()) != dim) throw Error(ErrorKind::ConfigError, "generator is not dim x dim");
    projdyn::Mat g(dim, dim);
    for (int i = 0; i < dim; ++i) {
      if (static_cast<int>(rows[i].size()) != dim) throw Error(ErrorKind::ConfigError, "generator is not dim x dim");
      for (int c = 0; c < dim; ++c) g(i, c) = rows[i][c];
    }
    gens.push_back(g);
  }
  Json j = envelope("tits construct");
  int code = kOk;
  try {
    const auto cert = projdyn::construct_free_pair(gens);
    Json players = Json::array();
    for (const auto& p : cert.players) {
      players.push_back({{"name", p.name},
                         {"word", p.word.str()},
                         {"matrix", mat_json(p.matrix)},
                         {"v", vec_json(p.v)},
                         {"H_normal", vec_json(p.normal)},
                         {"epsilon", p.epsilon}});
    }
    std::vector<std::string> family;
    for (const auto& w : cert.separating_family) family.push_back(w.str());
    j["certificate"] = {{"gamma", cert.gamma.str()},
                        {"gamma_power", cert.gamma_power},
                        {"separating_family", family},
                        {"C", cert.C},
                        {"r", cert.r},
                        {"epsilon", cert.epsilon},
                        {"neighborhood", cert.neighborhood},
                        {"players", players},
                        {"checks", cert.checks},
                        {"samples_checked", cert.samples_checked},
                        {"worst_table_distance", cert.worst_table_distance}};
    if (cert.exact_check_passed) {
      j["exact_check"] = {{"max_length", cert.exact_check_length}, {"passed", *cert.exact_check_passed}};
      if (!*cert.exact_check_passed) code = kCertificateFailure;
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::PipelineStuck) throw;
    j["error"] = e.what();
    code = kCertificateFailure;
  }
  if (!json_path.empty()) write_file(json_path, j.dump(2) + "\n");
  emit(out, j);
  return code;
}

// ----------------------------------------------------------- ergodic

int run_ergodic(const std::string& alpha_text, const std::string& freqs, const std::string& ns, bool csv,
                std::ostream& out) {
  const Rational alpha = ergodic::parse_alpha(alpha_text);
  const auto f = ergodic::TrigPoly::parse(freqs);
  const auto nlist = parse_list(ns);
  if (csv) {
    out << "n,l2_distance,envelope\n";
    for (std::int64_t n : nlist) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(n),
                    ergodic::l2_distance_to_mean(f, alpha, n), ergodic::envelope(f, alpha, n));
      out << buf;
    }
    return kOk;
  }
  Json j = envelope("ergodic");
  j["alpha"] = to_string(alpha);
  j["mean"] = {f.mean().real(), f.mean().imag()};
  Json rows = Json::array();
  for (std::int64_t n : nlist) {
    const double env = ergodic::envelope(f, alpha, n);
    rows.push_back({{"n", n},
                    {"l2_distance", ergodic::l2_distance_to_mean(f, alpha, n)},
                    {"envelope", std::isfinite(env) ? Json(env) : Json("inf")}});
  }
  j["rows"] = rows;
  emit(out, j);
  return kOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"agt: exact and numeric checks for amenability, expanders, p-adic trees and free subgroups", "agt"};
  app.require_subcommand(1);

  // words
  auto* words_cmd = app.add_subcommand("words", "Free group words");
  words_cmd->require_subcommand(1);
  std::uint32_t depth = 8, rank = 2, radius = 3;
  bool json_flag = false, list_words = false;
  auto* paradox = words_cmd->add_subcommand("paradox", "Check the paradoxical decomposition of F2");
  paradox->add_option("--depth", depth, "Ball radius")->check(CLI::Range(0, 14));
  paradox->add_flag("--json", json_flag, "JSON output (default)");
  auto* wball = words_cmd->add_subcommand("ball", "Enumerate a ball of reduced words");
  wball->add_option("--rank", rank)->check(CLI::Range(1, 26));
  wball->add_option("--radius", radius)->check(CLI::Range(0, 14));
  wball->add_flag("--list", list_words, "Include every word");
  wball->add_flag("--json", json_flag);

  // pingpong
  auto* pp = app.add_subcommand("pingpong", "Ping-pong certificates on the projective line");
  pp->require_subcommand(1);
  std::string config;
  auto* certify = pp->add_subcommand("certify", "Certify a configuration file");
  certify->add_option("--config", config, "JSON configuration")->required();
  certify->add_flag("--json", json_flag);

  // cayley
  auto* cay = app.add_subcommand("cayley", "Cayley balls, growth, boundaries, Folner sets");
  CayleyOptions copt;
  cay->add_option("action", copt.action, "growth | cheeger | folner")->required();
  cay->add_option("--group", copt.group, "z, z2, free2, trivial, sl2z, sl2z-mod:N");
  cay->add_option("--gens", copt.gens, "default or a JSON file of generators");
  cay->add_option("--max-n", copt.max_n, "Largest radius")->check(CLI::Range(0, 100000));
  cay->add_option("--eps", copt.eps, "Folner epsilon as a rational");
  cay->add_option("--dot", copt.dot, "Write the ball graph in DOT format");
  cay->add_flag("--json", json_flag);

  // expander
  auto* exp = app.add_subcommand("expander", "Spectral gaps and expansion of graph families");
  std::string family = "slk", moduli = "3,5,7", csv;
  std::uint32_t k = 2;
  exp->add_option("--family", family, "cycle | slk");
  exp->add_option("--k", k, "Matrix size for slk")->check(CLI::Range(2, 3));
  exp->add_option("--moduli", moduli, "Comma-separated moduli (or cycle lengths)");
  exp->add_option("--csv", csv, "Write a CSV table");
  exp->add_flag("--json", json_flag);

  // padic
  auto* pad = app.add_subcommand("padic", "p-adic arithmetic");
  pad->require_subcommand(1);
  std::int64_t p = 3, prec = 10;
  std::string expr, qtext;
  auto* peval = pad->add_subcommand("eval", "Evaluate an expression in Q_p");
  peval->add_option("--p", p)->required();
  peval->add_option("--expr", expr)->required();
  peval->add_option("--prec", prec)->check(CLI::Range(1, 10000));
  peval->add_flag("--json", json_flag);
  auto* pprod = pad->add_subcommand("product", "Check the product formula for a rational");
  pprod->add_option("--q", qtext)->required();
  pprod->add_flag("--json", json_flag);

  // tree
  auto* tree = app.add_subcommand("tree", "Bruhat-Tits tree balls");
  std::int64_t tp = 2;
  std::uint32_t tradius = 2;
  std::string dot;
  tree->add_option("--p", tp)->required();
  tree->add_option("--radius", tradius)->check(CLI::Range(0, 64));
  tree->add_option("--dot", dot, "Write the ball in DOT format");
  tree->add_flag("--json", json_flag);

  // tits
  auto* tits = app.add_subcommand("tits", "Ping-pong players in SL_d(R)");
  tits->require_subcommand(1);
  std::string gens_path, cert_path;
  int dim = 2;
  auto* construct = tits->add_subcommand("construct", "Construct a free pair");
  construct->add_option("--gens", gens_path, "JSON list of matrices")->required();
  construct->add_option("--dim", dim)->check(CLI::Range(2, 20));
  construct->add_option("--json", cert_path, "Also write the certificate to this file");

  // ergodic
  auto* erg = app.add_subcommand("ergodic", "Ergodic averages of circle rotations");
  std::string alpha = "sqrt2", freqs = "1:1", ns = "10,100,1000";
  bool csv_flag = false;
  erg->add_option("--alpha", alpha, "sqrt2, golden or p/q");
  erg->add_option("--freqs", freqs, "k:re[:im] items, comma-separated");
  erg->add_option("--ns", ns, "Comma-separated n values");
  erg->add_flag("--csv", csv_flag, "CSV output");
  erg->add_flag("--json", json_flag);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (paradox->parsed()) return run_words_paradox(depth, out);
    if (wball->parsed()) return run_words_ball(rank, radius, list_words, out);
    if (certify->parsed()) return run_pingpong_certify(config, out);
    if (cay->parsed()) return run_cayley(copt, out);
    if (exp->parsed()) return run_expander(family, k, moduli, csv, out);
    if (peval->parsed()) {
      Json j = envelope("padic eval");
      j["expr"] = expr;
      j["value"] = padic_json(padic::eval_expression(expr, p, prec));
      emit(out, j);
      return kOk;
    }
    if (pprod->parsed()) {
      const auto rep = padic::product_formula_check(parse_rational(qtext));
      Json j = envelope("padic product");
      j["q"] = to_string(rep.q);
      j["archimedean"] = to_string(rep.archimedean);
      Json local = Json::array();
      for (const auto& [prime, a] : rep.local) local.push_back({{"p", prime}, {"abs", to_string(a)}});
      j["local"] = local;
      j["product"] = to_string(rep.product);
      j["passed"] = rep.passed;
      emit(out, j);
      return rep.passed ? kOk : kCertificateFailure;
    }
    if (tree->parsed()) return run_tree(tp, tradius, dot, out);
    if (construct->parsed()) return run_tits(gens_path, dim, cert_path, out);
    if (erg->parsed()) return run_ergodic(alpha, freqs, ns, csv_flag, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: ConfigError: " << e.what() << "\n";
    return kUsageError;
  }
  err << app.help();
  return kUsageError;
}

}  // namespace agt::cli
