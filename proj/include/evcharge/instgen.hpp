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

// Synthetic instances: random points weighted by borough charging activity,
// every unordered point pair as an OD, demand from the estimation pipeline,
// and candidate sites at the endpoints of ODs no station can serve.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the standard; the conversions to uniform and categorical draws are written
// out here rather than taken from <random> distributions, whose algorithms
// are implementation-defined.

#ifndef EVCHARGE_INSTGEN_HPP
#define EVCHARGE_INSTGEN_HPP

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evcharge/estimate.hpp"
#include "evcharge/model.hpp"

namespace evcharge::instgen {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Index drawn with probability proportional to `weights` (non-negative,
  /// positive sum).
  int categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

/// Outer ring followed by holes; coordinates as (lat, lon).
struct Polygon {
  std::vector<std::vector<GeoPoint>> rings;
};

struct Borough {
  std::string id;
  std::vector<Polygon> polygons;
  double weight = 0.0;
};

/// Even-odd containment over every ring of every polygon.
bool contains(const Borough& borough, const GeoPoint& p);
/// Planar area in square degrees (holes subtracted).
double area_deg2(const Borough& borough);

/// Polygon and MultiPolygon features; the borough id is read from the
/// `id`, `borough_id` or `name` property, or the feature id.
std::vector<Borough> parse_boroughs_geojson(const nlohmann::json& collection);
std::vector<Borough> read_boroughs_geojson(const std::string& path);

struct GeneratedPoint {
  std::string id;
  GeoPoint location;
  std::string borough;
};

/// W points: borough drawn by weight, position uniform in the polygon.
/// Every positive-weight borough ends with at least two points (taken from
/// the most populated borough). Throws InputError (EmptyPolygon,
/// TooFewPoints, NoWeight).
std::vector<GeneratedPoint> generate_points(const std::vector<Borough>& boroughs, int count, std::uint64_t seed);

/// One OD per unordered point pair, id "<origin id>-<destination id>" in
/// point order; demand is zero over `num_periods` periods until filled in.
std::vector<ODPair> enumerate_ods(const std::vector<GeneratedPoint>& points, int num_periods = 1);

struct CandidateSet {
  std::vector<CandidateLocation> candidates;
  double kw_per_s_l2 = 1.0;  // per-station mean over level-2 stations
  double kw_per_s_l3 = 1.0;
  std::vector<std::string> warnings;
};

/// Two candidates per impossible OD (origin and destination), deduplicated
/// by exact coordinates, with the default cost schedule.
CandidateSet make_candidates(const Instance& instance);

/// Outlet 1 / 2, opening 10 / 100 (level 2 / 3); caps 16 / 7 outlets.
CostSchedule default_costs();

/// 0, 100, ..., 700.
std::vector<Cost> default_budgets();

/// `station_id,lat,lon,level,outlets`
std::vector<Station> read_stations_csv(const std::string& path);
std::vector<Station> parse_stations_csv(std::istream& in);

/// Everything the generator reads from disk.
struct ScenarioData {
  std::vector<Borough> boroughs;
  std::vector<Station> stations;
  std::vector<estimate::SessionRecord> sessions;
  estimate::ODMatrix od_matrix;
  std::map<std::string, std::string> station_borough;
};

/// Reads boroughs.geojson, stations.csv, sessions.csv, od_matrix.csv and
/// station_boroughs.csv from `dir`.
ScenarioData load_scenario(const std::string& dir);

struct GenerateConfig {
  double radius_m = 400.0;
  int points = 100;
  std::uint64_t seed = 1;
  int periods = 1;
  Cost budget = 0;
  bool uniform_period_weights = false;
  bool with_candidates = true;
};

struct GenerateResult {
  Instance instance;
  std::vector<GeneratedPoint> points;
  std::map<std::string, double> borough_demand_kw;
  double lost_demand_kw = 0.0;
  std::vector<std::string> warnings;
};

/// Weighted points (borough weights = share of delivered energy), then
/// `assemble_instance`.
GenerateResult generate_instance(const ScenarioData& data, const GenerateConfig& config);

/// Instance over given points: station rates from sessions (level average
/// when a station has none), OD demand from the estimated borough demand,
/// split over periods by energy share, then candidates.
GenerateResult assemble_instance(const ScenarioData& data, std::vector<GeneratedPoint> points,
                                 const GenerateConfig& config);

/// `point_id,lat,lon,borough_id`
std::vector<GeneratedPoint> read_points_csv(const std::string& path);
std::vector<GeneratedPoint> parse_points_csv(std::istream& in);

}  // namespace evcharge::instgen

#endif  // EVCHARGE_INSTGEN_HPP
