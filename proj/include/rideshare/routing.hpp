#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rideshare/model.hpp"

namespace rideshare {

// A single-vehicle schedule. Departure is at depart_time and the vehicle
// never waits, so every arrival time is the tight prefix sum of travel times.
struct Route {
  std::vector<int> node_sequence;        // starts at node 0, ends at node 2n+1
  std::vector<TimePoint> arrival_times;  // one per node in the sequence
  std::vector<int> onboard_counts;       // passengers on board after each node
  Money total_cost = 0;                  // sum of edge costs along the sequence
  Money detour_cost = 0;                 // total_cost minus the direct driver leg
};

// Cheapest feasible schedule serving exactly `subset` (sorted passenger ids):
// pickup precedes dropoff, pickups by max_pickup_time, dropoffs within
// max_travel_time of the pickup, every arrival by max_arrival, and at most
// `capacity` passengers on board. Ties on cost resolve to the
// lexicographically smallest node sequence. Returns nullopt when no order is
// feasible; throws std::invalid_argument for malformed subsets or
// |subset| > capacity.
std::optional<Route> best_route(const Instance& inst, const std::vector<int>& subset);

Money trip_cost(const Route& route, CostMode mode);

// Independent replay: rebuilds times, loads and costs from the node sequence
// alone and checks every constraint plus the stored fields. Returns nullopt
// when the route is valid, otherwise a description of the first failure.
std::optional<std::string> check_route(const Instance& inst, const std::vector<int>& subset,
                                       const Route& route);

}  // namespace rideshare
