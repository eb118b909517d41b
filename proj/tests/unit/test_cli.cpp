#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "report.hpp"
#include "semiquant/potentials.hpp"
#include "semiquant/quadrature.hpp"

using namespace semiquant;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(cli::format_number(2.0) == "2");
  CHECK(cli::format_number(0.1) == "0.1");
  CHECK(cli::format_number(1.0 / 3.0) == "0.333333333333333");
  CHECK(cli::rounded(1.0 / 3.0) == 0.333333333333333);
}

TEST_CASE("exit codes") {
  CHECK(run({"spectrum", "--catalog", "tanh2", "--U", "6"}).code == cli::kOk);
  CHECK(run({"spectrum", "--catalog", "nope"}).code == cli::kConfigError);
  CHECK(run({"spectrum", "--catalog", "tanh2", "--U", "-1"}).code == cli::kConfigError);
  CHECK(run({"spectrum"}).code == cli::kConfigError);
  CHECK(run({"spectrum", "--catalog", "harmonic", "--mode", "exact"}).code == cli::kConfigError);
  CHECK(run({"frobnicate"}).code == cli::kConfigError);
  CHECK(run({"spectrum", "--table", "/nonexistent/file"}).code == cli::kConfigError);
  CHECK(run({"--help"}).code == cli::kOk);
  // A level beyond the confining cap is fine, a non-positive beta is not.
  CHECK(run({"spectrum", "--catalog", "harmonic", "--beta", "0"}).code == cli::kConfigError);
}

TEST_CASE("spectrum CSV layout") {
  const auto r = run({"spectrum", "--catalog", "harmonic", "--cap", "3"});
  REQUIRE(r.code == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"n", "epsilon", "mode", "delta_used", "delta1", "delta1_source",
                                            "residual", "oracle_epsilon", "error"});
  CHECK(rows[3][0] == "2");
  CHECK(rows[3][1] == "5");
}

TEST_CASE("JSON residuals recompute") {
  for (const char* fam : {"tanh2", "perturbed_sturmian"}) {
    const auto r = run({"spectrum", "--catalog", fam, "--U", "15", "--mode", "class-exact", "--format", "json"});
    REQUIRE(r.code == 0);
    const json doc = json::parse(r.out);
    REQUIRE(doc.contains("config"));
    REQUIRE(doc.contains("invariant_results"));
    const auto model = catalog(fam, {{"U", 15.0}});
    REQUIRE(!doc["rows"].empty());
    for (const auto& row : doc["rows"]) {
      const double eps = row["epsilon"];
      const double target = row["n"].get<int>() + 0.5 + row["delta_used"].get<double>();
      const double residual = std::abs(action_phase(model, eps, 1.0).phi - target);
      CHECK(std::abs(residual - row["residual"].get<double>()) <= 1e-12);
    }
  }
}

TEST_CASE("CSV and JSON carry the same numbers") {
  const std::vector<std::vector<std::string>> configs = {
      {"spectrum", "--catalog", "morse", "--mode", "first-order"},
      {"spectrum", "--catalog", "sturmian_family", "--U", "1", "--r", "3", "--sweep", "U=4,40"},
      {"compare", "--catalog", "tanh2", "--U", "6", "--beta-sweep"},
      {"thresholds", "--catalog", "tanh2", "--n", "0,1", "--no-oracle"},
  };
  for (auto args : configs) {
    const auto csv = run(args);
    args.insert(args.end(), {"--format", "json"});
    const auto js = run(args);
    REQUIRE(csv.code == 0);
    REQUIRE(js.code == 0);
    const auto rows = csv_rows(csv.out);
    const json doc = json::parse(js.out);
    REQUIRE(rows.size() == doc["rows"].size() + 1);
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
      const auto& obj = doc["rows"][i];
      REQUIRE(obj.size() == rows[0].size());
      for (std::size_t c = 0; c < rows[0].size(); ++c) {
        const auto& v = obj[rows[0][c]];
        const std::string& cell = rows[i + 1][c];
        if (v.is_null()) {
          CHECK(cell.empty());
        } else if (v.is_number()) {
          CHECK(cli::format_number(v.get<double>()) == cell);
        } else if (v.is_string()) {
          CHECK(v.get<std::string>() == cell);
        }
      }
    }
  }
}

TEST_CASE("output files are deterministic") {
  const std::string path = std::string(SEMIQUANT_TEST_TMP) + "/cli_determinism.json";
  std::string first;
  for (int pass = 0; pass < 2; ++pass) {
    REQUIRE(run({"spectrum", "--catalog", "perturbed_sturmian", "--U", "8", "--mode", "two-param", "--t", "0.1",
                 "--format", "json", "--output", path})
                .code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (pass == 0) first = ss.str();
    else CHECK(ss.str() == first);
  }
  CHECK(!first.empty());
}

TEST_CASE("two-param at t = 0 prints class-exact values") {
  auto a = run({"spectrum", "--catalog", "perturbed_sturmian", "--U", "8", "--mode", "class-exact"});
  auto b = run({"spectrum", "--catalog", "perturbed_sturmian", "--U", "8", "--mode", "two-param", "--t", "0"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  auto strip_mode = [](std::string s) {
    for (const std::string m : {"class-exact", "two-param"}) {
      for (auto p = s.find(m); p != std::string::npos; p = s.find(m)) s.replace(p, m.size(), "M");
    }
    return s;
  };
  CHECK(strip_mode(a.out) == strip_mode(b.out));
}

TEST_CASE("threshold report") {
  const auto r = run({"thresholds", "--catalog", "sturmian_family", "--r", "3", "--n", "1,2", "--no-oracle",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  for (const auto& row : doc["rows"]) CHECK(row["k"].get<double>() == doctest::Approx(0.292893).epsilon(1e-6));
  const auto t0 = run({"thresholds", "--catalog", "tanh2", "--n", "0", "--no-oracle", "--format", "json"});
  REQUIRE(t0.code == 0);
  CHECK(json::parse(t0.out)["rows"][0]["note"] == "no positive threshold");
}
