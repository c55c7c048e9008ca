#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hardy/driver.hpp"

using namespace hardy;
using driver::json;

namespace {

json weight_const() { return io::parse(R"({"kind":"piecewise_power","pieces":[{"from":0,"to":null,"c":1,"alpha":0}]})"); }

json r1v() {
  return io::parse(R"({"inequality":"3.1","p":0.5,"q":1,
    "u":{"kind":"piecewise_power","pieces":[{"from":0,"to":null,"c":1,"alpha":0}]},
    "v":{"kind":"piecewise_power","pieces":[{"from":0,"to":1,"c":1,"alpha":0},{"from":1,"to":null,"c":1,"alpha":2}]},
    "w":{"kind":"piecewise_power","pieces":[{"from":0,"to":1,"c":1,"alpha":1},{"from":1,"to":null,"c":1,"alpha":-0.5}]}})");
}

driver::RunConfig config(const std::string& command, json spec) {
  driver::RunConfig c;
  c.command = command;
  c.spec = std::move(spec);
  c.atoms = 32;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = driver::config_from_json(io::parse(R"({"command":"verify","spec_path":"x.json","window":[1e-6,1e6],"seed":4})"));
  CHECK(c.command == "verify");
  CHECK(c.window.lo == 1e-6);
  CHECK(c.seed == 4);
  CHECK_THROWS_AS(driver::config_from_json(io::parse(R"({"command":"verify","bogus":1})")), Error);
  auto j = driver::config_to_json(c);
  CHECK(j["grid_points"] == 256);
  CHECK(j["ratio"] == 2.0);
}

TEST_CASE("compute-condition") {
  auto res = driver::run(config("compute-condition", r1v()));
  CHECK(res.exit_code == 0);
  auto out = io::parse(res.output);
  CHECK(out["formula"] == "I1");
  CHECK(out["config"]["grid_points"] == 256);
  CHECK(out["config"]["spec"]["p"] == 0.5);
  auto vone = r1v();
  vone["v"] = weight_const();
  vone["p"] = 1;
  CHECK(driver::run(config("compute-condition", vone)).exit_code == 2);
  auto noq = r1v();
  noq.erase("q");
  auto bad = driver::run(config("compute-condition", noq));
  CHECK(bad.exit_code == 1);
  CHECK(bad.message.find("'q'") != std::string::npos);
}

TEST_CASE("determinism") {
  auto a = driver::run(config("verify", r1v()));
  auto b = driver::run(config("verify", r1v()));
  CHECK(a.output == b.output);
  auto out = io::parse(a.output);
  CHECK(out.contains("ratio"));
  CHECK(out.contains("discretization"));
  CHECK(out["discretization"]["verification"]["ok"] == true);
}

TEST_CASE("sweep") {
  auto s = r1v();
  s["sweep"] = io::parse(R"({"param":"v.pieces[1].alpha","values":[0.5,1,2]})");
  auto c = config("sweep", s);
  c.format = "csv";
  auto res = driver::run(c);
  REQUIRE(res.exit_code == 0);
  std::istringstream in(res.output);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0].rfind("# config ", 0) == 0);
  CHECK(lines[1] == "v.pieces[1].alpha,formula,value,c_lo,ratio,error_est,warnings,error");
  std::vector<double> values;
  for (int i = 2; i < 5; ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    values.push_back(std::stod(cells.at(2)));
  }
  CHECK(values[0] > values[1]);
  CHECK(values[1] > values[2]);

  s["sweep"]["values"] = json::array();
  c = config("sweep", s);
  c.format = "csv";
  res = driver::run(c);
  CHECK(res.exit_code == 0);
  CHECK(std::count(res.output.begin(), res.output.end(), '\n') == 2);

  // a row that fails records its error and the run continues
  s["sweep"] = io::parse(R"({"param":"p","values":[0.5,-1]})");
  c = config("sweep", s);
  res = driver::run(c);
  CHECK(res.exit_code == 0);
  auto out = io::parse(res.output);
  CHECK(out["rows"][0]["error"] == "");
  CHECK(out["rows"][1]["error"] != "");
}

TEST_CASE("discretize") {
  auto sq = io::parse(R"({"phi":{"kind":"power","exponent":0.5},"r":1})");
  sq["u"] = weight_const();
  auto res = driver::run(config("discretize", sq));
  REQUIRE(res.exit_code == 0);
  auto out = io::parse(res.output);
  for (const auto& x : out["sequence"]["knots"]) {
    const double k = std::log(x.get<double>()) / std::log(4.0);
    CHECK(k == doctest::Approx(std::round(k)).epsilon(1e-6));
  }
  for (const auto& l : out["sequence"]["labels"]) CHECK(l == "Z1");
  auto c = config("discretize", sq);
  c.ratio = 1.5;
  CHECK(driver::run(c).exit_code == 1);
  sq["phi"]["exponent"] = 0;
  auto flat = driver::run(config("discretize", sq));
  CHECK(flat.exit_code == 2);
  CHECK(io::parse(flat.output)["phi_clauses"].size() > 0);
}
