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

#include "evcharge/instgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "csv.hpp"
#include "evcharge/geo.hpp"

namespace evcharge::instgen {

using json = nlohmann::json;

int Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw InputError("NoWeight", "categorical weights must have a positive sum");
  const double u = uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = static_cast<int>(i);
    if (u < acc) return last_positive;
  }
  return last_positive;
}

// ---------------------------------------------------------------------------
// Geometry

namespace {

bool ring_contains(const std::vector<GeoPoint>& ring, const GeoPoint& p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const GeoPoint& a = ring[i];
    const GeoPoint& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat) &&
        p.lon < (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon) {
      inside = !inside;
    }
  }
  return inside;
}

double ring_area(const std::vector<GeoPoint>& ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) twice += ring[j].lon * ring[i].lat - ring[i].lon * ring[j].lat;
  return std::abs(twice) / 2.0;
}

}  // namespace

bool contains(const Borough& borough, const GeoPoint& p) {
  for (const auto& poly : borough.polygons) {
    bool inside = false;
    for (const auto& ring : poly.rings) {
      if (ring.size() >= 3 && ring_contains(ring, p)) inside = !inside;
    }
    if (inside) return true;
  }
  return false;
}

double area_deg2(const Borough& borough) {
  double total = 0.0;
  for (const auto& poly : borough.polygons) {
    for (std::size_t r = 0; r < poly.rings.size(); ++r) {
      if (poly.rings[r].size() < 3) continue;
      total += (r == 0 ? 1.0 : -1.0) * ring_area(poly.rings[r]);
    }
  }
  return std::max(0.0, total);
}

namespace {

Polygon parse_polygon(const json& coords) {
  Polygon poly;
  for (const auto& ring_json : coords) {
    std::vector<GeoPoint> ring;
    for (const auto& pos : ring_json) {
      if (!pos.is_array() || pos.size() < 2) throw InputError("BadGeoJson", "position must be [lon, lat]");
      ring.push_back(GeoPoint{pos[1].get<double>(), pos[0].get<double>()});
    }
    // Drop the closing vertex; containment treats rings as closed.
    if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    poly.rings.push_back(std::move(ring));
  }
  return poly;
}

std::string feature_id(const json& feature) {
  if (feature.contains("properties") && feature["properties"].is_object()) {
    const auto& props = feature["properties"];
    for (const char* key : {"id", "borough_id", "name"}) {
      if (props.contains(key)) {
        return props[key].is_string() ? props[key].get<std::string>() : props[key].dump();
      }
    }
  }
  if (feature.contains("id")) return feature["id"].is_string() ? feature["id"].get<std::string>() : feature["id"].dump();
  throw InputError("BadGeoJson", "feature has no borough id");
}

}  // namespace

std::vector<Borough> parse_boroughs_geojson(const json& collection) {
  if (!collection.is_object() || collection.value("type", "") != "FeatureCollection") {
    throw InputError("BadGeoJson", "expected a FeatureCollection");
  }
  std::vector<Borough> out;
  std::set<std::string> ids;
  try {
    for (const auto& feature : collection.at("features")) {
      Borough b;
      b.id = feature_id(feature);
      if (!ids.insert(b.id).second) throw InputError("DuplicateBorough", "borough " + b.id + " appears twice");
      const auto& geometry = feature.at("geometry");
      const std::string type = geometry.at("type");
      if (type == "Polygon") {
        b.polygons.push_back(parse_polygon(geometry.at("coordinates")));
      } else if (type == "MultiPolygon") {
        for (const auto& c : geometry.at("coordinates")) b.polygons.push_back(parse_polygon(c));
      } else {
        throw InputError("BadGeoJson", "borough " + b.id + " has unsupported geometry " + type);
      }
      out.push_back(std::move(b));
    }
  } catch (const json::exception& e) {
    throw InputError("BadGeoJson", e.what());
  }
  return out;
}

std::vector<Borough> read_boroughs_geojson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("BadGeoJson", path + ": " + e.what());
  }
  return parse_boroughs_geojson(j);
}

// ---------------------------------------------------------------------------
// Points and ODs

std::vector<GeneratedPoint> generate_points(const std::vector<Borough>& boroughs, int count, std::uint64_t seed) {
  if (count < 2) throw InputError("TooFewPoints", "at least 2 points are required");
  std::vector<double> weights;
  int positive = 0;
  for (const auto& b : boroughs) {
    if (!(b.weight >= 0.0) || !std::isfinite(b.weight)) throw InputError("BadWeight", "borough " + b.id + " weight");
    weights.push_back(b.weight);
    if (b.weight > 0.0) {
      ++positive;
      if (area_deg2(b) <= 0.0) throw InputError("EmptyPolygon", "borough " + b.id + " has zero area");
    }
  }
  if (positive == 0) throw InputError("NoWeight", "no borough has positive weight");
  if (count < 2 * positive) {
    throw InputError("TooFewPoints", std::to_string(count) + " points cannot give 2 to each of " +
                                         std::to_string(positive) + " boroughs");
  }

  Rng rng(seed);
  std::vector<int> borough_of(count);
  std::vector<int> tally(boroughs.size(), 0);
  for (int i = 0; i < count; ++i) ++tally[borough_of[i] = rng.categorical(weights)];

  // Top-up: move the latest draws of the most populated borough.
  for (std::size_t b = 0; b < boroughs.size(); ++b) {
    while (weights[b] > 0.0 && tally[b] < 2) {
      const int donor = static_cast<int>(std::max_element(tally.begin(), tally.end()) - tally.begin());
      for (int i = count - 1; i >= 0; --i) {
        if (borough_of[i] == donor) {
          borough_of[i] = static_cast<int>(b);
          break;
        }
      }
      --tally[donor];
      ++tally[b];
    }
  }

  std::vector<GeneratedPoint> points;
  points.reserve(count);
  for (int i = 0; i < count; ++i) {
    const Borough& b = boroughs[borough_of[i]];
    double lat_lo = std::numeric_limits<double>::infinity(), lat_hi = -lat_lo, lon_lo = lat_lo, lon_hi = -lat_lo;
    for (const auto& poly : b.polygons) {
      for (const auto& ring : poly.rings) {
        for (const auto& p : ring) {
          lat_lo = std::min(lat_lo, p.lat);
          lat_hi = std::max(lat_hi, p.lat);
          lon_lo = std::min(lon_lo, p.lon);
          lon_hi = std::max(lon_hi, p.lon);
        }
      }
    }
    GeoPoint p;
    int attempts = 0;
    do {
      if (++attempts > 1'000'000) throw InputError("EmptyPolygon", "cannot sample inside borough " + b.id);
      p.lat = rng.uniform(lat_lo, lat_hi);
      p.lon = rng.uniform(lon_lo, lon_hi);
    } while (!contains(b, p));
    points.push_back(GeneratedPoint{std::to_string(i), p, b.id});
  }
  return points;
}

std::vector<ODPair> enumerate_ods(const std::vector<GeneratedPoint>& points, int num_periods) {
  std::vector<ODPair> ods;
  const std::size_t n = points.size();
  ods.reserve(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      ODPair od;
      od.id = points[i].id + "-" + points[j].id;
      od.origin = points[i].location;
      od.destination = points[j].location;
      od.borough_pair = {points[i].borough, points[j].borough};
      od.demand_kw.assign(num_periods, 0.0);
      ods.push_back(std::move(od));
    }
  }
  return ods;
}

// ---------------------------------------------------------------------------
// Candidates and costs

CostSchedule default_costs() {
  CostSchedule c;
  c.existing_outlet_cost_l2 = 1;
  c.existing_outlet_cost_l3 = 2;
  c.max_outlets_l2 = 16;
  c.max_outlets_l3 = 7;
  return c;
}

std::vector<Cost> default_budgets() {
  std::vector<Cost> out;
  for (int g = 0; g <= 700; g += 100) out.emplace_back(g);
  return out;
}

CandidateSet make_candidates(const Instance& instance) {
  CandidateSet out;
  double sum[2] = {0.0, 0.0};
  int n[2] = {0, 0};
  for (const auto& st : instance.stations) {
    const int k = st.level == Level::L2 ? 0 : 1;
    sum[k] += st.per_outlet_kw_per_s;
    ++n[k];
  }
  const double all = n[0] + n[1] > 0 ? (sum[0] + sum[1]) / (n[0] + n[1]) : 1.0;
  if (n[0] + n[1] == 0) out.warnings.push_back("no stations: new outlets default to 1 kW/s");
  for (int k = 0; k < 2; ++k) {
    if (n[k] == 0 && n[1 - k] > 0) {
      out.warnings.push_back(std::string("no level-") + (k == 0 ? "2" : "3") +
                             " stations: new outlets use the all-station mean rate");
    }
  }
  out.kw_per_s_l2 = n[0] > 0 ? sum[0] / n[0] : all;
  out.kw_per_s_l3 = n[1] > 0 ? sum[1] / n[1] : all;

  Instance bare = instance;
  bare.candidates.clear();
  const auto network = geo::build_flow_network(bare, false);
  std::set<std::pair<double, double>> placed;
  auto add = [&](const GeoPoint& p) {
    if (!placed.insert({p.lat, p.lon}).second) return;
    CandidateLocation c;
    c.id = "c" + std::to_string(out.candidates.size());
    c.location = p;
    out.candidates.push_back(std::move(c));
  };
  for (int o : geo::impossible_ods(network)) {
    add(instance.ods[o].origin);
    add(instance.ods[o].destination);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scenario files

std::vector<Station> parse_stations_csv(std::istream& in) {
  std::vector<Station> out;
  for (const auto& row : csv::read_rows(in)) {
    if (!row.cells.empty() && row.cells[0] == "station_id") continue;
    csv::expect_columns(row, 5, "station_id,lat,lon,level,outlets");
    Station s;
    s.id = row.cells[0];
    s.location.lat = csv::to_number(row.cells[1], row.line, "lat");
    s.location.lon = csv::to_number(row.cells[2], row.line, "lon");
    const auto level = level_from_int(static_cast<int>(csv::to_number(row.cells[3], row.line, "level")));
    if (!level) throw InputError("BadLevel", "level must be 2 or 3", row.line);
    s.level = *level;
    const double outlets = csv::to_number(row.cells[4], row.line, "outlets");
    if (outlets < 1 || outlets != std::floor(outlets)) {
      throw InputError("BadOutlets", "outlets must be a positive integer", row.line);
    }
    s.outlets = static_cast<int>(outlets);
    s.max_outlets = std::max(s.outlets, s.level == Level::L2 ? 16 : 7);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Station> read_stations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  return parse_stations_csv(in);
}

ScenarioData load_scenario(const std::string& dir) {
  ScenarioData d;
  d.boroughs = read_boroughs_geojson(dir + "/boroughs.geojson");
  d.stations = read_stations_csv(dir + "/stations.csv");
  d.sessions = estimate::read_sessions_csv(dir + "/sessions.csv");
  d.od_matrix = estimate::read_od_matrix_csv(dir + "/od_matrix.csv");
  d.station_borough = estimate::read_borough_assignment_csv(dir + "/station_boroughs.csv");
  return d;
}

// ---------------------------------------------------------------------------
// End to end

namespace {

std::vector<Period> periods_for(int count) {
  if (count == 1) return single_period_preset();
  if (count == 4) return six_hour_preset();
  if (count < 1) throw InputError("BadPeriods", "period count must be positive");
  return uniform_periods(count);
}

}  // namespace

namespace {

std::map<std::string, double> daily_supply(const ScenarioData& data) {
  for (const auto& [station, borough] : data.station_borough) {
    if (data.od_matrix.index_of(borough) < 0) {
      throw InputError("UnknownBorough", "station " + station + " in " + borough);
    }
  }
  return estimate::borough_supply_kw(data.sessions, data.station_borough, data.od_matrix.boroughs, 0.0,
                                     kDayHorizonSeconds);
}

}  // namespace

GenerateResult assemble_instance(const ScenarioData& data, std::vector<GeneratedPoint> points,
                                 const GenerateConfig& config) {
  if (!(config.radius_m > 0.0)) throw InputError("BadRadius", "radius must be positive");
  GenerateResult out;
  Instance& inst = out.instance;
  inst.periods = periods_for(config.periods);
  inst.radius_m = config.radius_m;
  inst.costs = default_costs();
  inst.costs.budget = config.budget;

  // Station rates from their sessions, falling back to the level average.
  std::vector<Station> stations = data.stations;
  std::vector<bool> measured(stations.size(), false);
  double sum[2] = {0.0, 0.0};
  int n[2] = {0, 0};
  for (std::size_t i = 0; i < stations.size(); ++i) {
    try {
      stations[i].per_outlet_kw_per_s = estimate::mean_outlet_rate(data.sessions, stations[i].id);
      measured[i] = true;
      const int k = stations[i].level == Level::L2 ? 0 : 1;
      sum[k] += stations[i].per_outlet_kw_per_s;
      ++n[k];
    } catch (const estimate::NoSessions&) {
    }
  }
  for (std::size_t i = 0; i < stations.size(); ++i) {
    if (measured[i]) continue;
    const int k = stations[i].level == Level::L2 ? 0 : 1;
    if (n[k] > 0) {
      stations[i].per_outlet_kw_per_s = sum[k] / n[k];
    } else if (n[1 - k] > 0) {
      stations[i].per_outlet_kw_per_s = sum[1 - k] / n[1 - k];
    } else {
      stations[i].per_outlet_kw_per_s = 1.0;
    }
    out.warnings.push_back("station " + stations[i].id + " has no sessions; using a level average rate");
  }
  inst.stations = stations;

  const auto& matrix = data.od_matrix;
  for (const auto& p : points) {
    if (matrix.index_of(p.borough) < 0) throw InputError("UnknownBorough", "point " + p.id + " in " + p.borough);
  }
  out.points = std::move(points);
  inst.ods = enumerate_ods(out.points, inst.num_periods());

  const auto supply = daily_supply(data);
  estimate::Vector<double> r(matrix.size());
  for (int i = 0; i < matrix.size(); ++i) r(i) = supply.at(matrix.boroughs[i]);
  const auto est = estimate::estimate_borough_demand<double>(matrix.p, r);
  for (const auto& w : est.warnings) out.warnings.push_back(w);
  for (int i = 0; i < matrix.size(); ++i) out.borough_demand_kw[matrix.boroughs[i]] = est.q(i);

  const std::vector<double> weights = config.uniform_period_weights
                                          ? std::vector<double>(inst.num_periods(), 1.0 / inst.num_periods())
                                          : estimate::energy_period_weights(data.sessions, inst.periods);
  std::vector<std::pair<int, int>> od_pairs;
  for (const auto& od : inst.ods) {
    const int i = matrix.index_of(od.borough_pair.first);
    const int j = matrix.index_of(od.borough_pair.second);
    od_pairs.emplace_back(std::min(i, j), std::max(i, j));
  }
  const auto split = estimate::split_demand_to_ods<double>(estimate::pair_demands<double>(est.q, matrix.p), od_pairs,
                                                           weights);
  for (std::size_t k = 0; k < inst.ods.size(); ++k) inst.ods[k].demand_kw = split.demand_kw[k];
  for (const auto& lost : split.lost) {
    out.lost_demand_kw += lost.demand_kw;
    out.warnings.push_back("no OD between " + matrix.boroughs[lost.i] + " and " + matrix.boroughs[lost.j] + ": " +
                           std::to_string(lost.demand_kw) + " kW lost");
  }

  if (config.with_candidates) {
    auto cands = make_candidates(inst);
    inst.candidates = std::move(cands.candidates);
    inst.costs.new_outlet_kw_per_s_l2 = cands.kw_per_s_l2;
    inst.costs.new_outlet_kw_per_s_l3 = cands.kw_per_s_l3;
    for (auto& w : cands.warnings) out.warnings.push_back(std::move(w));
  }
  require_valid(inst);
  return out;
}

GenerateResult generate_instance(const ScenarioData& data, const GenerateConfig& config) {
  const auto supply = daily_supply(data);
  double supply_total = 0.0;
  for (const auto& [b, r] : supply) supply_total += r;
  std::vector<Borough> boroughs = data.boroughs;
  for (auto& b : boroughs) {
    if (data.od_matrix.index_of(b.id) < 0) {
      throw InputError("UnknownBorough", "borough " + b.id + " not in the OD matrix");
    }
    b.weight = supply_total > 0.0 ? supply.at(b.id) / supply_total : 1.0;
  }
  auto out = assemble_instance(data, generate_points(boroughs, config.points, config.seed), config);
  if (supply_total <= 0.0) out.warnings.push_back("no delivered energy: points spread uniformly over boroughs");
  return out;
}

std::vector<GeneratedPoint> parse_points_csv(std::istream& in) {
  std::vector<GeneratedPoint> out;
  for (const auto& row : csv::read_rows(in)) {
    if (!row.cells.empty() && row.cells[0] == "point_id") continue;
    csv::expect_columns(row, 4, "point_id,lat,lon,borough_id");
    GeneratedPoint p;
    p.id = row.cells[0];
    p.location.lat = csv::to_number(row.cells[1], row.line, "lat");
    p.location.lon = csv::to_number(row.cells[2], row.line, "lon");
    p.borough = row.cells[3];
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<GeneratedPoint> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  return parse_points_csv(in);
}

}  // namespace evcharge::instgen
