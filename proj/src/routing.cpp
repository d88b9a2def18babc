#include "rideshare/routing.hpp"

#include <algorithm>
#include <stdexcept>

namespace rideshare {

namespace {

struct Search {
  const Instance& inst;
  const std::vector<int>& subset;
  int q;
  std::vector<int> seq;
  std::vector<TimePoint> times;
  std::vector<int> onboard;
  std::vector<TimePoint> pickup_time;  // indexed by position in subset
  std::vector<bool> picked, dropped;
  Money partial_cost = 0;
  std::optional<Route> best;

  explicit Search(const Instance& i, const std::vector<int>& s)
      : inst(i),
        subset(s),
        q(static_cast<int>(s.size())),
        pickup_time(s.size(), 0),
        picked(s.size(), false),
        dropped(s.size(), false) {}

  void finish() {
    const int last = seq.back();
    const int dest = inst.destination_node();
    const TimePoint arrive = times.back() + inst.travel_time[last][dest];
    if (arrive > inst.max_arrival) return;
    const Money total = partial_cost + inst.travel_cost[last][dest];
    if (best && total >= best->total_cost) return;  // equal cost: earlier sequence is lex-smaller
    Route r;
    r.node_sequence = seq;
    r.node_sequence.push_back(dest);
    r.arrival_times = times;
    r.arrival_times.push_back(arrive);
    r.onboard_counts = onboard;
    r.onboard_counts.push_back(0);
    r.total_cost = total;
    r.detour_cost = total - inst.travel_cost[inst.origin_node()][dest];
    best = std::move(r);
  }

  void extend() {
    if (static_cast<int>(seq.size()) == 2 * q + 1) {
      finish();
      return;
    }
    // Candidates in ascending node id: pickups (ids) sort below dropoffs
    // (ids + n), so the DFS emits sequences in lexicographic order.
    for (int k = 0; k < q; ++k) {
      if (!picked[k]) try_node(inst.pickup_node(subset[k]), k, /*is_pickup=*/true);
    }
    for (int k = 0; k < q; ++k) {
      if (picked[k] && !dropped[k]) try_node(inst.dropoff_node(subset[k]), k, /*is_pickup=*/false);
    }
  }

  void try_node(int node, int k, bool is_pickup) {
    const int prev = seq.back();
    const TimePoint arrive = times.back() + inst.travel_time[prev][node];
    if (arrive > inst.max_arrival) return;
    const PassengerRequest& p = inst.passengers[subset[k]- 1];
    if (is_pickup) {
      if (arrive > p.max_pickup_time) return;
      if (onboard.back() + 1 > inst.capacity) return;
    } else {
      if (arrive - pickup_time[k] > p.max_travel_time) return;
    }
    const Money edge = inst.travel_cost[prev][node];
    if (best && partial_cost + edge > best->total_cost) return;

    seq.push_back(node);
    times.push_back(arrive);
    onboard.push_back(onboard.back() + (is_pickup ? 1 : -1));
    partial_cost += edge;
    const TimePoint saved_pickup = pickup_time[k];
    if (is_pickup) {
      picked[k] = true;
      pickup_time[k] = arrive;
    } else {
      dropped[k] = true;
    }

    extend();

    if (is_pickup) {
      picked[k] = false;
      pickup_time[k] = saved_pickup;
    } else {
      dropped[k] = false;
    }
    partial_cost -= edge;
    onboard.pop_back();
    times.pop_back();
    seq.pop_back();
  }
};

}  // namespace

std::optional<Route> best_route(const Instance& inst, const std::vector<int>& subset) {
  if (static_cast<int>(subset.size()) > inst.capacity) {
    throw std::invalid_argument("best_route: subset larger than capacity");
  }
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] < 1 || subset[k] > inst.n) {
      throw std::invalid_argument("best_route: passenger id out of range");
    }
    if (k > 0 && subset[k] <= subset[k - 1]) {
      throw std::invalid_argument("best_route: subset must be strictly increasing");
    }
  }
  Search s(inst, subset);
  s.seq.push_back(inst.origin_node());
  s.times.push_back(inst.depart_time);
  s.onboard.push_back(0);
  s.extend();
  return s.best;
}

Money trip_cost(const Route& route, CostMode mode) {
  return mode == CostMode::ridesharing_detour ? route.detour_cost : route.total_cost;
}

std::optional<std::string> check_route(const Instance& inst, const std::vector<int>& subset,
                                       const Route& route) {
  const auto& seq = route.node_sequence;
  const std::size_t len = 2 * subset.size() + 2;
  if (seq.size() != len) return "sequence length mismatch";
  if (route.arrival_times.size() != len || route.onboard_counts.size() != len) {
    return "per-node array length mismatch";
  }
  if (seq.front() != inst.origin_node()) return "sequence does not start at origin";
  if (seq.back() != inst.destination_node()) return "sequence does not end at destination";

  std::vector<int> expected;
  for (int id : subset) {
    expected.push_back(inst.pickup_node(id));
    expected.push_back(inst.dropoff_node(id));
  }
  std::vector<int> interior(seq.begin() + 1, seq.end() - 1);
  std::vector<int> sorted_interior = interior;
  std::sort(sorted_interior.begin(), sorted_interior.end());
  std::sort(expected.begin(), expected.end());
  if (sorted_interior != expected) return "interior nodes are not the subset's events";

  TimePoint t = inst.depart_time;
  int load = 0;
  Money cost = 0;
  std::vector<TimePoint> picked_at(static_cast<std::size_t>(inst.n) + 1, -1);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    if (k > 0) {
      t += inst.travel_time[seq[k - 1]][seq[k]];
      cost += inst.travel_cost[seq[k - 1]][seq[k]];
    }
    if (route.arrival_times[k] != t) return "arrival time not the tight prefix sum";
    if (t > inst.max_arrival) return "arrival after max_arrival";
    const int node = seq[k];
    if (node >= 1 && node <= inst.n) {
      const PassengerRequest& p = inst.passengers[node - 1];
      if (t > p.max_pickup_time) return "pickup after max_pickup_time";
      picked_at[node] = t;
      ++load;
    } else if (node > inst.n && node <= 2 * inst.n) {
      const int id = node - inst.n;
      if (picked_at[id] < 0) return "dropoff before pickup";
      if (t - picked_at[id] > inst.passengers[id - 1].max_travel_time) {
        return "travel time above max_travel_time";
      }
      --load;
    }
    if (load > inst.capacity) return "capacity exceeded";
    if (route.onboard_counts[k] != load) return "onboard count mismatch";
  }
  if (route.total_cost != cost) return "total cost mismatch";
  if (route.detour_cost !=
      cost - inst.travel_cost[inst.origin_node()][inst.destination_node()]) {
    return "detour cost mismatch";
  }
  return std::nullopt;
}

}  // namespace rideshare
