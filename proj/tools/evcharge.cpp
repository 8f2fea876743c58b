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

// evcharge: estimate demand, generate instances, evaluate station networks
// and optimize station placement.
//
// Exit codes: 0 success, 2 input error, 3 search stopped by a limit (the
// incumbent is still written).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "evcharge/estimate.hpp"
#include "evcharge/instgen.hpp"
#include "evcharge/maxflow.hpp"
#include "evcharge/model.hpp"
#include "evcharge/placement.hpp"
#include "evcharge/report.hpp"

namespace {

using namespace evcharge;
using nlohmann::json;

constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("CannotWrite", "cannot write " + path);
  out << text;
}

void warn(const std::string& message) { std::cerr << "warning: " << message << "\n"; }

int default_threads() {
  if (const char* env = std::getenv("EVCHARGE_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      warn("ignoring EVCHARGE_THREADS='" + std::string(env) + "'");
    }
  }
  return 1;
}

PlacementPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  try {
    json j;
    in >> j;
    return j.get<PlacementPlan>();
  } catch (const json::exception& e) {
    throw InputError("BadPlan", path + ": " + e.what());
  }
}

/// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<Cost> parse_budgets(const std::string& text) {
  std::vector<Cost> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(text.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
      if (colon == std::string::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw InputError("BadSweep", "expected lo:hi:step, got '" + text + "'");
    const Cost lo = parse_rational(parts[0]), hi = parse_rational(parts[1]), step = parse_rational(parts[2]);
    if (step <= 0 || lo < 0 || hi < lo) throw InputError("BadSweep", "invalid range '" + text + "'");
    for (Cost g = lo; g <= hi; g += step) out.push_back(g);
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_rational(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<Period> preset_periods(int count) {
  if (count == 1) return single_period_preset();
  if (count == 4) return six_hour_preset();
  if (count < 1) throw InputError("BadPeriods", "period count must be positive");
  return uniform_periods(count);
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string sessions, od_matrix, assignment, points, stations, out, instance_out;
  double radius_m = 400.0;
  int periods = 1;
  bool uniform_weights = false;
};

int cmd_estimate(const EstimateArgs& a) {
  const auto sessions = estimate::read_sessions_csv(a.sessions);
  const auto matrix = estimate::read_od_matrix_csv(a.od_matrix);
  const auto assignment = estimate::read_borough_assignment_csv(a.assignment);
  if (sessions.empty()) warn("no sessions: every borough demand is zero");
  for (const auto& [station, borough] : assignment) {
    if (matrix.index_of(borough) < 0) throw InputError("UnknownBorough", "station " + station + " in " + borough);
  }

  const auto supply = estimate::borough_supply_kw(sessions, assignment, matrix.boroughs, 0.0, kDayHorizonSeconds);
  const int n = matrix.size();
  estimate::Matrix<Rational> p(n, n);
  estimate::Vector<Rational> r(n);
  for (int i = 0; i < n; ++i) {
    r(i) = decimal_rational(supply.at(matrix.boroughs[i]));
    for (int j = 0; j < n; ++j) p(i, j) = decimal_rational(matrix.p(i, j));
  }
  const auto est = estimate::estimate_borough_demand<Rational>(p, r);
  for (const auto& w : est.warnings) warn(w);

  json report;
  report["condition_number"] = est.condition_number;
  report["least_squares"] = est.least_squares;
  report["clamped"] = est.clamped;
  json boroughs = json::array();
  for (int i = 0; i < n; ++i) {
    boroughs.push_back({{"id", matrix.boroughs[i]},
                        {"supply_kw", to_double(r(i))},
                        {"demand_kw", to_double(est.q(i))},
                        {"demand_kw_exact", to_string(est.q(i))}});
  }
  report["boroughs"] = std::move(boroughs);
  json pairs = json::array();
  for (const auto& pd : estimate::pair_demands<Rational>(est.q, p)) {
    pairs.push_back({{"from", matrix.boroughs[pd.i]},
                     {"to", matrix.boroughs[pd.j]},
                     {"demand_kw", to_double(pd.demand_kw)},
                     {"demand_kw_exact", to_string(pd.demand_kw)}});
  }
  report["borough_pairs"] = std::move(pairs);

  if (!a.points.empty()) {
    const auto points = instgen::read_points_csv(a.points);
    const auto ods = instgen::enumerate_ods(points);
    std::vector<std::pair<int, int>> od_pairs;
    for (const auto& od : ods) {
      const int i = matrix.index_of(od.borough_pair.first), j = matrix.index_of(od.borough_pair.second);
      if (i < 0 || j < 0) throw InputError("UnknownBorough", "OD " + od.id + " has a borough outside the matrix");
      od_pairs.emplace_back(std::min(i, j), std::max(i, j));
    }
    const auto split = estimate::split_demand_to_ods<Rational>(estimate::pair_demands<Rational>(est.q, p), od_pairs,
                                                               std::vector<Rational>{Rational(1)});
    json od_json = json::array();
    for (std::size_t k = 0; k < ods.size(); ++k) {
      od_json.push_back({{"id", ods[k].id},
                         {"demand_kw", to_double(split.demand_kw[k][0])},
                         {"demand_kw_exact", to_string(split.demand_kw[k][0])}});
    }
    report["ods"] = std::move(od_json);
    Rational lost = 0;
    for (const auto& l : split.lost) {
      lost += l.demand_kw;
      warn("no OD between " + matrix.boroughs[l.i] + " and " + matrix.boroughs[l.j] + ": " +
           to_string(l.demand_kw) + " kW lost");
    }
    report["lost_demand_kw"] = to_double(lost);

    if (!a.instance_out.empty()) {
      if (a.stations.empty()) throw InputError("MissingOption", "--instance-out needs --stations");
      instgen::ScenarioData data;
      data.stations = instgen::read_stations_csv(a.stations);
      data.sessions = sessions;
      data.od_matrix = matrix;
      data.station_borough = assignment;
      instgen::GenerateConfig config;
      config.radius_m = a.radius_m;
      config.periods = a.periods;
      config.uniform_period_weights = a.uniform_weights;
      auto generated = instgen::assemble_instance(data, points, config);
      for (const auto& w : generated.warnings) warn(w);
      json inst;
      to_json(inst, generated.instance);
      write_text(a.instance_out, report::dump(inst));
    }
  }
  write_text(a.out, report::dump(report));
  return 0;
}

struct GenerateArgs {
  std::string scenario, out;
  double radius_m = 400.0;
  int points = 100;
  std::uint64_t seed = 1;
  int periods = 1;
  std::string budget = "0";
  bool uniform_weights = false;
  bool no_candidates = false;
};

int cmd_generate(const GenerateArgs& a) {
  if (a.points < 2) throw InputError("BadConfig", "--points must be at least 2");
  instgen::GenerateConfig config;
  config.radius_m = a.radius_m;
  config.points = a.points;
  config.seed = a.seed;
  config.periods = a.periods;
  config.budget = parse_rational(a.budget);
  config.uniform_period_weights = a.uniform_weights;
  config.with_candidates = !a.no_candidates;
  auto result = instgen::generate_instance(instgen::load_scenario(a.scenario), config);
  for (const auto& w : result.warnings) warn(w);
  json inst;
  to_json(inst, result.instance);
  write_text(a.out, report::dump(inst));
  std::cerr << result.instance.ods.size() << " ODs, " << result.instance.stations.size() << " stations, "
            << result.instance.candidates.size() << " candidates\n";
  return 0;
}

struct EvaluateArgs {
  std::string instance, plan, budget, out, geojson, dot;
  int threads = 1;
};

int cmd_evaluate(const EvaluateArgs& a) {
  Instance inst = load_instance(a.instance);
  if (!a.budget.empty()) inst.costs.budget = parse_rational(a.budget);
  require_valid(inst);
  std::optional<PlacementPlan> plan;
  if (!a.plan.empty()) plan = load_plan(a.plan);
  const auto result = maxflow::evaluate(inst, plan ? &*plan : nullptr, {a.threads});
  if (result.total_demand_kw <= 0.0) warn("instance has no demand; satisfied reported as 100%");
  write_text(a.out, report::dump(report::evaluation_report(inst, result)));
  if (!a.geojson.empty()) write_text(a.geojson, report::dump(report::od_points_geojson(inst, result)));
  if (!a.dot.empty()) write_text(a.dot, geo::to_dot(geo::build_flow_network(inst, plan.has_value(), plan ? &*plan : nullptr), 0));
  return 0;
}

struct OptimizeArgs {
  std::string instance, budget, sweep, cross_eval, plan_out, out, geojson, warm_start;
  double gap = 1e-4;
  double time_limit = 1800.0;
  long node_limit = -1;
  int threads = 1;
  bool no_timing = false;
};

placement::OptimizeParams params_from(const OptimizeArgs& a) {
  placement::OptimizeParams params;
  if (!(a.gap >= 0.0)) throw InputError("BadConfig", "--gap must be non-negative");
  params.gap_tol = a.gap;
  params.time_limit_s = a.time_limit;
  params.node_limit = a.node_limit;
  params.threads = a.threads;
  if (!a.warm_start.empty()) params.warm_start = load_plan(a.warm_start);
  return params;
}

int exit_for(const placement::SolveReport& report) {
  return report.termination == placement::Termination::Optimal ? 0 : kExitLimit;
}

int run_sweep(const Instance& inst, const std::vector<Cost>& budgets, const OptimizeArgs& a) {
  const auto rows = placement::sweep(inst, budgets, params_from(a));
  int code = 0;
  for (const auto& row : rows) {
    if (row.result.report.termination != placement::Termination::Optimal) {
      warn("budget " + to_string(row.budget) + " stopped on " + placement::to_string(row.result.report.termination));
      code = kExitLimit;
    }
  }
  write_text(a.out, report::dump(report::sweep_table(rows, !a.no_timing)));
  if (!a.plan_out.empty() && !rows.empty()) write_text(a.plan_out, report::dump(report::plan_json(rows.back().result.plan)));
  return code;
}

int cmd_optimize(const OptimizeArgs& a) {
  Instance inst = load_instance(a.instance);
  if (!a.budget.empty()) inst.costs.budget = parse_rational(a.budget);
  if (inst.costs.budget < 0) throw InputError("BadConfig", "--budget must be non-negative");
  if (!a.sweep.empty()) return run_sweep(inst, parse_budgets(a.sweep), a);

  if (!a.cross_eval.empty()) {
    Instance fine;
    if (a.cross_eval.rfind("periods=", 0) == 0) {
      fine = placement::resplit_periods(inst, preset_periods(std::stoi(a.cross_eval.substr(8))));
    } else {
      fine = load_instance(a.cross_eval);
      fine.costs.budget = inst.costs.budget;
    }
    const auto r = placement::cross_evaluate(inst, fine, params_from(a));
    json j;
    j["budget"] = cost_to_json(inst.costs.budget);
    j["single_period"] = placement::to_json(r.single.report, !a.no_timing);
    j["single_plan_on_fine_pct"] = r.crossed.satisfied_pct();
    j["single_plan_on_fine_kw"] = r.crossed.satisfied_kw;
    j["fine"] = placement::to_json(r.multi.report, !a.no_timing);
    j["shortfall_pct"] = r.multi.report.satisfied_pct - r.crossed.satisfied_pct();
    write_text(a.out, report::dump(j));
    if (!a.plan_out.empty()) write_text(a.plan_out, report::dump(report::plan_json(r.multi.plan)));
    return std::max(exit_for(r.single.report), exit_for(r.multi.report));
  }

  const auto r = placement::optimize(inst, params_from(a));
  if (r.report.opens_level3) std::cerr << "note: the plan opens a level-3 station\n";
  json j = placement::to_json(r.report, !a.no_timing);
  j["assignment"] = report::evaluation_report(inst, r.assignment);
  j["plan"] = report::plan_json(r.plan);
  write_text(a.out, report::dump(j));
  if (!a.plan_out.empty()) write_text(a.plan_out, report::dump(report::plan_json(r.plan)));
  if (!a.geojson.empty()) write_text(a.geojson, report::dump(report::plan_geojson(inst, r.plan)));
  return exit_for(r.report);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EV charging station evaluation and placement"};
  app.require_subcommand(1);
  int threads = default_threads();
  app.add_option("--threads", threads, "Worker threads for per-period max flow (env EVCHARGE_THREADS)")
      ->check(CLI::PositiveNumber);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Borough and OD demand from session data");
  c_est->add_option("--sessions", est.sessions, "station_id,start_s,duration_s,kw_per_s")->required();
  c_est->add_option("--od-matrix", est.od_matrix, "Borough OD share matrix")->required();
  c_est->add_option("--boroughs", est.assignment, "station_id,borough_id")->required();
  c_est->add_option("--points", est.points, "point_id,lat,lon,borough_id; adds per-OD demand");
  c_est->add_option("--stations", est.stations, "station_id,lat,lon,level,outlets (for --instance-out)");
  c_est->add_option("--radius", est.radius_m, "Walking radius in metres");
  c_est->add_option("--periods", est.periods, "Number of periods");
  c_est->add_flag("--uniform-weights", est.uniform_weights, "Split demand evenly over periods");
  c_est->add_option("--instance-out", est.instance_out, "Write an instance over --points");
  c_est->add_option("-o,--out", est.out, "Report path (default stdout)");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Synthetic instance from a scenario directory");
  c_gen->add_option("--scenario", gen.scenario, "Directory with boroughs.geojson, stations.csv, ...")->required();
  c_gen->add_option("-R,--radius", gen.radius_m, "Walking radius in metres")->check(CLI::PositiveNumber);
  c_gen->add_option("-W,--points", gen.points, "Number of random points");
  c_gen->add_option("--seed", gen.seed, "Random seed");
  c_gen->add_option("--periods", gen.periods, "1 (one day) or 4 (6 h periods), or any count")->check(CLI::PositiveNumber);
  c_gen->add_option("--budget", gen.budget, "Budget stored in the instance");
  c_gen->add_flag("--uniform-weights", gen.uniform_weights, "Split demand evenly over periods");
  c_gen->add_flag("--no-candidates", gen.no_candidates, "Skip candidate locations");
  c_gen->add_option("-o,--out", gen.out, "Instance path (default stdout)");

  EvaluateArgs ev;
  auto* c_ev = app.add_subcommand("evaluate", "Maximum satisfiable demand of a station network");
  c_ev->add_option("instance", ev.instance, "Instance JSON")->required();
  c_ev->add_option("--plan", ev.plan, "Placement plan JSON to apply");
  c_ev->add_option("--budget", ev.budget, "Budget the plan is checked against (overrides the instance)");
  c_ev->add_option("-o,--out", ev.out, "Report path (default stdout)");
  c_ev->add_option("--geojson", ev.geojson, "OD point layer");
  c_ev->add_option("--dot", ev.dot, "Graphviz dump of the first period");

  OptimizeArgs opt;
  auto add_optimize_options = [&opt](CLI::App* c) {
    c->add_option("instance", opt.instance, "Instance JSON")->required();
    c->add_option("--budget", opt.budget, "Budget (overrides the instance)");
    c->add_option("--gap", opt.gap, "Relative gap tolerance");
    c->add_option("--time-limit", opt.time_limit, "Seconds");
    c->add_option("--node-limit", opt.node_limit, "Maximum LP solves (negative: none)");
    c->add_option("--warm-start", opt.warm_start, "Plan JSON to seed the incumbent");
    c->add_option("-o,--out", opt.out, "Report path (default stdout)");
    c->add_option("--plan-out", opt.plan_out, "Plan JSON");
    c->add_flag("--no-timing", opt.no_timing, "Omit wall time from reports");
  };
  auto* c_opt = app.add_subcommand("optimize", "Choose new stations and outlets under a budget");
  add_optimize_options(c_opt);
  c_opt->add_option("--geojson", opt.geojson, "New and expanded stations layer");
  c_opt->add_option("--sweep", opt.sweep, "Budgets lo:hi:step or a,b,c");
  c_opt->add_option("--cross-eval", opt.cross_eval, "periods=N or a companion instance JSON");

  auto* c_sweep = app.add_subcommand("sweep", "optimize over a budget grid");
  add_optimize_options(c_sweep);
  std::string sweep_budgets = "0:700:100";
  c_sweep->add_option("--budgets", sweep_budgets, "lo:hi:step or a,b,c")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    ev.threads = opt.threads = threads;
    if (c_est->parsed()) return cmd_estimate(est);
    if (c_gen->parsed()) return cmd_generate(gen);
    if (c_ev->parsed()) return cmd_evaluate(ev);
    if (c_opt->parsed()) return cmd_optimize(opt);
    if (c_sweep->parsed()) return run_sweep([&] {
      Instance inst = load_instance(opt.instance);
      if (!opt.budget.empty()) inst.costs.budget = parse_rational(opt.budget);
      return inst;
    }(), parse_budgets(sweep_budgets), opt);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
