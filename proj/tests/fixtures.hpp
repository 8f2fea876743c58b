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

// Data files shipped under data/ and instances built from them.

#ifndef EVCHARGE_TESTS_FIXTURES_HPP
#define EVCHARGE_TESTS_FIXTURES_HPP

#include <string>

#include "evcharge/estimate.hpp"
#include "evcharge/instgen.hpp"
#include "evcharge/model.hpp"

namespace fixtures {

inline std::string data_path(const std::string& rel) { return std::string(EVCHARGE_DATA_DIR) + "/" + rel; }

/// The two-station, two-borough example (stations 1 and 2, points A, B, C).
inline evcharge::instgen::ScenarioData worked_scenario() {
  using namespace evcharge;
  instgen::ScenarioData data;
  data.stations = instgen::read_stations_csv(data_path("worked_example/stations.csv"));
  data.sessions = estimate::read_sessions_csv(data_path("worked_example/sessions.csv"));
  data.od_matrix = estimate::read_od_matrix_csv(data_path("worked_example/od_matrix.csv"));
  data.station_borough = estimate::read_borough_assignment_csv(data_path("worked_example/station_boroughs.csv"));
  return data;
}

inline std::vector<evcharge::instgen::GeneratedPoint> worked_points() {
  return evcharge::instgen::read_points_csv(data_path("worked_example/points.csv"));
}

inline evcharge::Instance worked_instance(int periods = 1, bool with_candidates = false) {
  evcharge::instgen::GenerateConfig config;
  config.radius_m = 400.0;
  config.periods = periods;
  config.uniform_period_weights = true;
  config.with_candidates = with_candidates;
  return evcharge::instgen::assemble_instance(worked_scenario(), worked_points(), config).instance;
}

inline evcharge::instgen::ScenarioData toy_scenario() { return evcharge::instgen::load_scenario(data_path("toy")); }

}  // namespace fixtures

#endif  // EVCHARGE_TESTS_FIXTURES_HPP
