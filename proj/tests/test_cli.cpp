#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "report.hpp"
#include "scenario.hpp"

namespace fs = std::filesystem;
using namespace perception;
using namespace perception::cli;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("perception_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& body) const {
    const fs::path p = path / name;
    std::ofstream(p) << body;
    return p.string();
  }
  static inline int counter = 0;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int call(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3) == "0.333333333333");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("0.1,0.2") == std::vector<double>{0.1, 0.2});
  auto r = parse_number_list("0:1:5");
  REQUIRE(r.size() == 5);
  CHECK(r[2] == 0.5);
  CHECK_THROWS_AS(parse_number_list("0.1,abc"), Error);
  CHECK_THROWS_AS(parse_number_list("0:1"), Error);
}

TEST_CASE("csv quoting and width checks") {
  Table t({"a", "b"});
  t.add().text("x,y").num(2.5);
  CHECK(t.str() == "a,b\n\"x,y\",2.5\n");
  t.add().num(1.0);
  CHECK_THROWS_AS(t.str(), Error);
}

TEST_CASE("scenario parsing") {
  Scenario s = parse_scenario(nlohmann::json::parse(R"({"grid_n": 100, "pgp": "hype:0.5", "kappa": "0:0.1:3"})"));
  CHECK(s.grid_n == 100);
  REQUIRE(s.pgps.size() == 1);
  CHECK(s.pgps[0]["kind"] == "hype");
  CHECK(s.kappa.size() == 3);
  CHECK_THROWS_AS(parse_scenario(nlohmann::json::parse(R"({"grid_n": 1})")), Error);
  CHECK_THROWS_AS(parse_scenario(nlohmann::json::parse(R"({"grid": 10})")), Error);
  CHECK_THROWS_AS(parse_scenario(nlohmann::json::parse(R"({"kappa": [-1]})")), Error);
  CHECK_THROWS_AS(pgp_from_tag("no_such_pgp"), Error);
  Grid g(8);
  CHECK_THROWS_AS(build_pgp(nlohmann::json::parse(R"({"kind": "hype", "h": 2})"), uniform_prior(g)), Error);
  CHECK_THROWS_AS(build_pgp(nlohmann::json::parse(R"({"kind": "hype", "alpha": 0.5})"), uniform_prior(g)), Error);
  CHECK(build_rule(nlohmann::json::parse(R"({"kind": "threshold", "cutoff": 0.5})"), g)[4] == 1.0);
}

TEST_CASE("screening with rho_U at kappa 0.02 is attentive and unconstrained") {
  TempDir d;
  REQUIRE(call({"screening", "--pgp", "rho_U", "--kappa", "0.02", "--grid-n", "400", "--out", d.path.string()}) == 0);
  const std::string csv = slurp(d.path / "screening.csv");
  CHECK(csv.find("rho_U,0.02,Attentive-Unconstrained,") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp(d.path / "screening.meta.json"));
  CHECK(meta["grid_n"] == 400);
  CHECK(meta["rows"] == 1);
}

TEST_CASE("identical inputs give identical bytes") {
  TempDir a, b;
  const std::vector<std::string> base{"efficiency", "--pgp", "probweight:0.5", "--grid-n", "400", "--kappa", "0:0.04:9"};
  auto with_out = [&](const TempDir& d) {
    auto v = base;
    v.push_back("--out");
    v.push_back(d.path.string());
    return v;
  };
  REQUIRE(call(with_out(a)) == 0);
  REQUIRE(call(with_out(b)) == 0);
  CHECK(slurp(a.path / "efficiency.csv") == slurp(b.path / "efficiency.csv"));
  CHECK(slurp(a.path / "efficiency_summary.csv") == slurp(b.path / "efficiency_summary.csv"));
}

TEST_CASE("exit codes") {
  TempDir d;
  std::string err;
  SUBCASE("malformed scenario") {
    CHECK(call({"voa", "--scenario", d.file("bad.json", "{\"grid_n\": "), "--out", d.path.string()}, &err) == 2);
    CHECK(err.find("not valid JSON") != std::string::npos);
  }
  SUBCASE("unknown key") {
    CHECK(call({"voa", "--scenario", d.file("bad.json", R"({"pgp": "perfect", "colour": 1})")}, &err) == 2);
  }
  SUBCASE("missing file") { CHECK(call({"voa", "--scenario", (d.path / "nope.json").string()}) == 2); }
  SUBCASE("bad flag value") { CHECK(call({"voa", "--grid-n", "many"}) == 2); }
  SUBCASE("no subcommand") { CHECK(call({}) == 2); }
  SUBCASE("infeasible coupling") {
    const std::string sc = d.file("inf.json", R"({"grid_n": 40, "pgp": {"kind": "martingale", "lo": 0.8, "hi": 1.0}})");
    CHECK(call({"voa", "--scenario", sc, "--out", d.path.string()}, &err) == 3);
    CHECK(err.find("infeasible") != std::string::npos);
  }
}

TEST_CASE("every subcommand writes its tables") {
  TempDir d;
  const std::string out = d.path.string();
  CHECK(call({"voa", "--pgp", "conservatism:0.5", "--grid-n", "200", "--out", out}) == 0);
  CHECK(call({"maximize-attention", "--pgp", "conservatism:0.5", "--grid-n", "200", "--out", out}) == 0);
  CHECK(call({"accuracy", "--pgp", "rho_C", "--pgp", "rho_U", "--grid-n", "200", "--out", out}) == 0);
  CHECK(call({"hype", "--kappa", "0.03125", "--grid-n", "200", "--out", out}) == 0);
  for (const char* f : {"voa", "attention_weights", "maximizers", "threshold_values", "s_curve", "accuracy",
                        "hype_optimal", "hype_region", "hype_grid_check"}) {
    CHECK(fs::exists(d.path / (std::string(f) + ".csv")));
    CHECK(fs::exists(d.path / (std::string(f) + ".meta.json")));
  }
  CHECK(slurp(d.path / "accuracy.csv").find("rho_C,rho_U,a_more") != std::string::npos);
  CHECK(slurp(d.path / "maximizers.csv").find("conservatism:0.5,0.03125") != std::string::npos);
}
