#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "agt/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = agt::cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(AGT_FIXTURE_DIR) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("agt_test_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("words paradox emits a passing JSON report") {
  const auto r = run({"words", "paradox", "--depth", "8", "--json"});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["schema"] == "agt/1");
  CHECK(j["passed"] == true);
  CHECK(j["ball_size"] == 13121);
}

TEST_CASE("words ball") {
  const auto j = json::parse(run({"words", "ball", "--rank", "2", "--radius", "3"}).out);
  CHECK(j["sphere_sizes"] == json::array({1, 4, 12, 36}));
}

TEST_CASE("pingpong certify") {
  auto r = run({"pingpong", "certify", "--config", fixture("level2.json")});
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["certificate"]["status"] == "Valid");
  CHECK(j["nontriviality"]["passed"] == true);

  r = run({"pingpong", "certify", "--config", fixture("overlap.json")});
  CHECK(r.code == 1);
  CHECK(r.out.find("DisjointnessViolation") != std::string::npos);

  r = run({"pingpong", "certify", "--config", fixture("modular.json")});
  CHECK(r.code == 0);

  r = run({"pingpong", "certify", "--config", fixture("unknown_key.json")});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);

  r = run({"pingpong", "certify", "--config", fixture("missing.json")});
  CHECK(r.code == 2);
}

TEST_CASE("cayley subcommands") {
  auto j = json::parse(run({"cayley", "growth", "--group", "free2", "--max-n", "5"}).out);
  CHECK(j["counts"] == json::array({1, 5, 17, 53, 161, 485}));

  j = json::parse(run({"cayley", "cheeger", "--group", "z", "--max-n", "3"}).out);
  CHECK(j["balls"][3]["quotient"] == "2/7");

  const auto r = run({"cayley", "folner", "--group", "free2", "--eps", "1", "--max-n", "6"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["exhausted"] == true);

  j = json::parse(run({"cayley", "folner", "--group", "z", "--eps", "1/100", "--max-n", "120"}).out);
  CHECK(j["radius"] == 100);

  const auto dot = temp_path("cayley.dot");
  CHECK(run({"cayley", "growth", "--group", "sl2z-mod:3", "--max-n", "10", "--dot", dot}).code == 0);
  CHECK(slurp(dot).find("graph") != std::string::npos);

  CHECK(run({"cayley", "growth", "--group", "q8"}).code == 2);
}

TEST_CASE("expander CSV") {
  const auto csv = temp_path("exp.csv");
  const auto r = run({"expander", "--family", "cycle", "--moduli", "8,12", "--csv", csv});
  CHECK(r.code == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("family,parameter,vertices,degree,lambda2,gap,expansion_exact_or_NA\n", 0) == 0);
  CHECK(text.find("cycle,8,8,2,") != std::string::npos);
  CHECK(text.find(",1/2\n") != std::string::npos);
}

TEST_CASE("padic subcommands") {
  auto j = json::parse(run({"padic", "eval", "--p", "3", "--expr", "-1/2", "--prec", "6"}).out);
  CHECK(j["value"]["digits_lsb_first"] == json::array({1, 1, 1, 1, 1, 1}));
  j = json::parse(run({"padic", "product", "--q", "-20/9"}).out);
  CHECK(j["product"] == "1");
  CHECK(run({"padic", "eval", "--p", "4", "--expr", "1"}).code == 2);
}

TEST_CASE("tree DOT export") {
  const auto dot = temp_path("tree.dot");
  const auto r = run({"tree", "--p", "2", "--radius", "2", "--dot", dot});
  CHECK(r.code == 0);
  const auto text = slurp(dot);
  std::size_t labels = 0;
  for (std::size_t pos = 0; (pos = text.find("label=", pos)) != std::string::npos; ++pos) ++labels;
  CHECK(labels == 10);
}

TEST_CASE("tits construct") {
  const auto out = temp_path("cert.json");
  auto r = run({"tits", "construct", "--gens", fixture("sl2z_gens.json"), "--dim", "2", "--json", out});
  CHECK(r.code == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j["certificate"]["players"].size() == 4);
  CHECK(j["exact_check"]["passed"] == true);

  r = run({"tits", "construct", "--gens", fixture("rotations.json"), "--dim", "2"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["error"].get<std::string>().find("PipelineStuck") != std::string::npos);

  CHECK(run({"tits", "construct", "--gens", fixture("sl2z_gens.json"), "--dim", "3"}).code == 2);
}

TEST_CASE("ergodic CSV") {
  const auto r = run({"ergodic", "--alpha", "1/3", "--freqs", "3:1", "--ns", "1,10", "--csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("n,l2_distance,envelope\n1,1,inf\n10,1,inf\n", 0) == 0);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"words", "paradox", "--depth", "x"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
