#pragma once

#include <cstdint>

#include "rideshare/model.hpp"

namespace rideshare {

// Synthetic instance model: 2n+2 points drawn uniformly in a rectangle in the
// order origin, pickups 1..n, dropoffs 1..n, destination. Matrices come from
// Euclidean distances (times and costs rounded up). Windows and deadlines:
//   max_pickup_time = depart_time + pickup_window_s
//   max_travel_time = travel_factor * direct travel time
//   max_arrival     = depart_time + arrival_factor * (driver direct time + arrival_slack_s)
// Bids are the direct leg cost plus a half-gaussian perturbation of scale
// sigma (in units of one kilometer's cost), floored at the round-trip cost so
// every passenger affords their charged cost under all three cost policies.
struct GeneratorConfig {
  int n = 10;
  double sigma = 3.0;
  double rect_width_m = 10000.0;
  double rect_height_m = 10000.0;
  double speed_m_per_s = 10.0;
  Money cost_per_m = 1000;  // micro-units per meter; one km costs 1,000,000
  std::uint64_t seed = 1;
  int capacity = 3;
  Duration pickup_window_s = 900;
  int travel_factor = 2;
  Duration arrival_slack_s = 1800;
  int arrival_factor = 2;
  TimePoint depart_time = 0;
  CostMode cost_mode = CostMode::ridesharing_detour;
};

struct GeneratedInstance {
  Instance instance;
  EuclideanLayout layout;
};

GeneratedInstance generate_instance(const GeneratorConfig& config);

}  // namespace rideshare
