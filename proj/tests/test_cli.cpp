// Copyright 2026 The evcharge Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Report builders, and the command-line tool driven as a subprocess.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "evcharge/maxflow.hpp"
#include "evcharge/report.hpp"
#include "fixtures.hpp"

using namespace evcharge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::temp_directory_path() / ("evcharge_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

/// Runs the tool with `args`; stderr goes to `err` when given.
int run(const std::string& args, const std::string& err = "/dev/null") {
  const std::string cmd = std::string(EVCHARGE_CLI) + " " + args + " 2>" + err;
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string worked(const std::string& file) { return fixtures::data_path("worked_example/" + file); }

std::string estimate_args() {
  return "estimate --sessions " + worked("sessions.csv") + " --od-matrix " + worked("od_matrix.csv") +
         " --boroughs " + worked("station_boroughs.csv");
}

}  // namespace

TEST_CASE("evaluation report percentages") {
  const auto inst = fixtures::worked_instance();
  const auto rep = report::evaluation_report(inst, maxflow::evaluate(inst));
  CHECK(rep["satisfied_pct"].get<double>() == doctest::Approx(70.8333333));
  CHECK(rep["impossible_pct"].get<double>() == doctest::Approx(29.1666667));
  CHECK(rep["ods"].size() == 3);

  auto none = inst;
  none.stations.clear();
  const auto r0 = report::evaluation_report(none, maxflow::evaluate(none));
  CHECK(r0["satisfied_pct"].get<double>() == 0.0);
  CHECK(r0["impossible_pct"].get<double>() == 100.0);

  auto empty = inst;
  for (auto& od : empty.ods) od.demand_kw[0] = 0.0;
  const auto re = report::evaluation_report(empty, maxflow::evaluate(empty));
  CHECK(re["satisfied_pct"].get<double>() == 100.0);
  CHECK(re.contains("warning"));
}

TEST_CASE("geojson layers") {
  auto inst = fixtures::worked_instance(1, true);
  const auto pts = report::od_points_geojson(inst, maxflow::evaluate(inst));
  CHECK(pts["type"] == "FeatureCollection");
  // Only A-B is unserved; its demand is shared by A and B.
  double total = 0.0;
  for (const auto& f : pts["features"]) {
    total += f["properties"]["unsatisfied_kw"].get<double>() + f["properties"]["impossible_kw"].get<double>();
  }
  CHECK(total == doctest::Approx(175.0));
  CHECK(pts["features"].size() == 3);

  inst.costs.budget = 100;
  PlacementPlan plan;
  plan.opened[inst.candidates[0].id] = {Level::L2, 2};
  const auto layer = report::plan_geojson(inst, plan);
  bool found_new = false;
  for (const auto& f : layer["features"]) found_new |= f["properties"]["kind"] == "new";
  CHECK(found_new);
  CHECK(report::dump(json{{"a", 1}}).back() == '\n');
}

TEST_CASE("cli estimate") {
  Scratch tmp;
  REQUIRE(run(estimate_args() + " --points " + worked("points.csv") + " -o " + (tmp / "e.json")) == 0);
  const auto e = json::parse(slurp(tmp / "e.json"));
  CHECK(e["boroughs"][0]["demand_kw_exact"] == "500");
  CHECK(e["boroughs"][1]["demand_kw_exact"] == "400");
  std::map<std::string, std::string> ods;
  for (const auto& od : e["ods"]) ods[od["id"]] = od["demand_kw_exact"];
  CHECK(ods["A-C"] == "250");
  CHECK(ods["A-B"] == "175");
  CHECK(ods["B-C"] == "175");

  spit(tmp / "empty.csv", "station_id,start_s,duration_s,kw_per_s\n");
  REQUIRE(run("estimate --sessions " + (tmp / "empty.csv") + " --od-matrix " + worked("od_matrix.csv") +
                  " --boroughs " + worked("station_boroughs.csv") + " -o " + (tmp / "z.json"),
              tmp / "err.txt") == 0);
  CHECK(slurp(tmp / "err.txt").find("warning") != std::string::npos);
  for (const auto& b : json::parse(slurp(tmp / "z.json"))["boroughs"]) CHECK(b["demand_kw"] == 0.0);

  spit(tmp / "bad.csv", "borough,Omega,Lambda\nOmega,0.5,0.4\nLambda,0.25,0.75\n");
  CHECK(run("estimate --sessions " + worked("sessions.csv") + " --od-matrix " + (tmp / "bad.csv") +
                " --boroughs " + worked("station_boroughs.csv") + " -o " + (tmp / "x.json"),
            tmp / "err.txt") == 2);
  CHECK(slurp(tmp / "err.txt").find("RowSumError") != std::string::npos);
  CHECK(run("evaluate " + (tmp / "missing.json")) == 2);
}

TEST_CASE("cli generate") {
  Scratch tmp;
  const std::string args = "generate --scenario " + fixtures::data_path("toy") + " -R 400 -W 100 --seed 1";
  REQUIRE(run(args + " -o " + (tmp / "a.json")) == 0);
  REQUIRE(run(args + " -o " + (tmp / "b.json")) == 0);
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
  CHECK(json::parse(slurp(tmp / "a.json"))["ods"].size() == 4950);

  REQUIRE(run("generate --scenario " + fixtures::data_path("toy") + " -W 10 --periods 4 -o " + (tmp / "p.json")) == 0);
  const auto p = json::parse(slurp(tmp / "p.json"));
  REQUIRE(p["periods"].size() == 4);
  for (const auto& period : p["periods"]) CHECK(period["duration_s"] == 21600.0);
}

TEST_CASE("cli evaluate, optimize and sweep") {
  Scratch tmp;
  REQUIRE(run(estimate_args() + " --points " + worked("points.csv") + " --stations " + worked("stations.csv") +
              " --instance-out " + (tmp / "w.json") + " -o " + (tmp / "e.json")) == 0);
  REQUIRE(run("evaluate " + (tmp / "w.json") + " -o " + (tmp / "ev.json")) == 0);
  const auto ev = json::parse(slurp(tmp / "ev.json"));
  CHECK(ev["satisfied_pct"].get<double>() == doctest::Approx(70.83).epsilon(1e-4));
  CHECK(ev["impossible_pct"].get<double>() == doctest::Approx(29.17).epsilon(1e-3));

  REQUIRE(run("optimize " + (tmp / "w.json") + " --budget 0 --no-timing -o " + (tmp / "o0.json")) == 0);
  CHECK(json::parse(slurp(tmp / "o0.json"))["assignment"] == ev);

  REQUIRE(run("optimize " + (tmp / "w.json") + " --budget 700 --no-timing -o " + (tmp / "o7.json") + " --plan-out " +
              (tmp / "plan.json")) == 0);
  CHECK(json::parse(slurp(tmp / "o7.json"))["assignment"]["satisfied_pct"].get<double>() == 100.0);
  REQUIRE(run("evaluate " + (tmp / "w.json") + " --plan " + (tmp / "plan.json") + " --budget 700 -o " +
              (tmp / "ev7.json")) == 0);
  CHECK(json::parse(slurp(tmp / "ev7.json"))["satisfied_pct"].get<double>() == 100.0);

  REQUIRE(run("optimize " + (tmp / "w.json") + " --sweep 0,5,11,700 --no-timing -o " + (tmp / "s.json")) == 0);
  const auto rows = json::parse(slurp(tmp / "s.json"));
  double last = -1.0;
  for (const auto& row : rows) {
    const double pct = row["satisfied_pct"].get<double>();
    CHECK(pct >= last);
    last = pct;
  }
  CHECK(last == 100.0);

  CHECK(run("sweep " + (tmp / "w.json") + " --budgets 5,1", tmp / "err.txt") == 2);
  REQUIRE(run("generate --scenario " + fixtures::data_path("toy") + " -W 20 --seed 1 -o " + (tmp / "t.json")) == 0);
  CHECK(run("optimize " + (tmp / "t.json") + " --budget 200 --node-limit 1 -o " + (tmp / "lim.json")) == 3);
  CHECK(json::parse(slurp(tmp / "lim.json"))["termination"] == "NodeLimit");
}
