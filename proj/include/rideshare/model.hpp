#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rideshare/rational.hpp"

namespace rideshare {

// Money is in integer micro-currency units, time in whole seconds.
using Money = std::int64_t;
using TimePoint = std::int64_t;
using Duration = std::int64_t;

// Documented bound for time values; arithmetic on sums of matrix entries
// stays far away from 64-bit overflow underneath it.
inline constexpr std::int64_t kMaxTimeValue = std::int64_t{1} << 40;

enum class CostMode {
  ridesharing_detour,   // trip cost = route cost minus the driver's direct leg
  ridesourcing_total,   // trip cost = full route cost
};

const char* cost_mode_name(CostMode mode);
CostMode cost_mode_from_name(const std::string& name);

struct PassengerRequest {
  int id = 0;  // 1..n; pickup node is id, dropoff node is id + n
  Money bid = 0;
  TimePoint max_pickup_time = 0;   // latest boarding time
  Duration max_travel_time = 0;    // latest time spent between pickup and dropoff
};

// Complete-graph instance over 2n+2 nodes: node 0 is the driver origin,
// 1..n the pickups, n+1..2n the dropoffs, 2n+1 the driver destination.
struct Instance {
  int n = 0;
  std::vector<PassengerRequest> passengers;
  std::vector<std::vector<Duration>> travel_time;
  std::vector<std::vector<Money>> travel_cost;
  TimePoint depart_time = 0;
  TimePoint max_arrival = 0;
  int capacity = 0;
  CostMode cost_mode = CostMode::ridesharing_detour;
  bool euclidean_geometry = false;  // triangle inequality expected when set

  int node_count() const { return 2 * n + 2; }
  int origin_node() const { return 0; }
  int pickup_node(int id) const { return id; }
  int dropoff_node(int id) const { return id + n; }
  int destination_node() const { return 2 * n + 1; }
  const PassengerRequest& passenger(int id) const;
};

struct Violation {
  std::string field;  // e.g. "travel_time[0][0]"
  std::string rule;   // e.g. "diagonal-nonzero"
};

// Structural checks: matrix shapes, zero diagonals, non-negative entries,
// time bound, id layout, bid/window sanity, and — for instances built from
// Euclidean geometry — the triangle inequality on both matrices.
std::vector<Violation> validate_instance(const Instance& inst);

// Cost of the passenger's own pickup->dropoff leg.
Money direct_cost(const Instance& inst, int passenger_id);

// Cheaper of the two passenger loops anchored at the driver's endpoints:
// origin->pickup->dropoff->origin vs destination->pickup->dropoff->destination.
Money round_trip_cost(const Instance& inst, int passenger_id);

// Multiplies every money field (costs, bids) by `factor`; times unchanged.
Instance scale_money(const Instance& inst, Money factor);

// Planar layout from which matrices are derived: times and costs are rounded
// up, which preserves the triangle inequality exactly.
struct EuclideanLayout {
  double speed_m_per_s = 0.0;
  Money cost_per_m = 0;  // micro-units per meter
  std::vector<std::array<double, 2>> points;  // origin, pickups, dropoffs, destination
};

void expand_geometry(const EuclideanLayout& layout,
                     std::vector<std::vector<Duration>>& travel_time,
                     std::vector<std::vector<Money>>& travel_cost);

Instance instance_from_json(const nlohmann::json& doc);
nlohmann::ordered_json instance_to_json(const Instance& inst);  // matrix geometry
nlohmann::ordered_json instance_to_json(const Instance& inst, const EuclideanLayout& layout);

Instance load_instance_file(const std::string& path);
void save_instance_file(const nlohmann::ordered_json& doc, const std::string& path);

}  // namespace rideshare
