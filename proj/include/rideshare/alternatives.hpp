#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rideshare/model.hpp"
#include "rideshare/routing.hpp"

namespace rideshare {

enum class CostPolicy {
  zero,         // c_i = 0: passengers only ever gain; no budget filter
  direct,       // c_i = cost of the passenger's own pickup->dropoff leg
  upper_bound,  // c_i = round_trip_cost(i)
};

const char* cost_policy_name(CostPolicy policy);
CostPolicy cost_policy_from_name(const std::string& name);

struct CostAssignment {
  std::map<int, Money> cost_by_id;
  Money at(int id) const;
};

// Per-passenger charged costs. Depends only on geometry, never on bids.
CostAssignment assign_costs(const Instance& inst, CostPolicy policy);

// One feasible trip: a member set with the money attached to it. The null
// trip (no members) is a first-class alternative with cost 0 and objective 0
// under every auction.
struct Alternative {
  std::vector<int> members;            // sorted ascending; empty for the null trip
  std::optional<Route> route;          // absent in abstract families and for the null trip
  Money cost = 0;                      // trip cost; 0 for the null trip
  std::map<int, Money> member_cost;    // c_i for each member
  std::map<int, Money> surplus;        // s_i = b_i - c_i for each member

  bool is_null() const { return members.empty(); }
  int size() const { return static_cast<int>(members.size()); }
  bool contains(int id) const;
  Money min_surplus() const;                   // 0 for the null trip
  Money min_surplus_excluding(int id) const;   // over members other than id
  Money surplus_sum() const;
  Money bid_sum() const;                       // sum of c_i + s_i over members
  Money cost_sum() const;                      // sum of member costs
};

struct AlternativeFamily {
  std::vector<Alternative> alternatives;  // sorted by member set; null trip first
  CostAssignment costs;
  bool abstract_family = false;

  const Alternative* find(const std::vector<int>& members) const;
};

// Strict priority order shared by all auctions between alternatives holding
// objective values obj_a / obj_b: higher objective, then larger member count,
// then lexicographically smaller member ids. The null trip loses every
// equal-objective comparison by having the smallest member count.
bool beats(const Alternative& a, Money obj_a, const Alternative& b, Money obj_b);

using RouteTable = std::map<std::vector<int>, std::optional<Route>>;

// Best routes for every subset of 1..n with 1 <= |subset| <= capacity.
RouteTable build_route_table(const Instance& inst);

// All feasible trips: members must afford their cost (b_i >= c_i), a feasible
// route must exist, and — except under the zero policy — members' costs must
// cover the trip cost. Always contains the null trip.
AlternativeFamily enumerate_alternatives(const Instance& inst, const CostAssignment& costs,
                                         CostPolicy policy,
                                         const RouteTable* table = nullptr);

struct DownwardClosureResult {
  bool closed = true;
  std::vector<int> superset;  // witness when not closed
  std::vector<int> missing;   // its absent subset
};

DownwardClosureResult is_downward_closed(const AlternativeFamily& family);

struct AbstractAlternativeSpec {
  std::vector<int> members;
  std::map<int, Money> surplus;
  std::optional<Money> cost;  // defaults to the members' cost sum
};

// Family given directly as member sets plus surpluses; used by file input,
// adversarial constructions and bound sweeps. Throws std::invalid_argument on
// duplicate member sets or surplus keys that do not match the members.
AlternativeFamily make_abstract_family(const std::vector<AbstractAlternativeSpec>& specs,
                                       const CostAssignment& costs);

AlternativeFamily family_from_json(const nlohmann::json& doc);
nlohmann::ordered_json family_to_json(const AlternativeFamily& family);

// Lexicographic subsets of sizes 1..max_size; ids must be strictly increasing.
template <class F>
void for_each_subset(const std::vector<int>& ids, int max_size, F&& fn) {
  std::vector<int> current;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t k = start; k < ids.size(); ++k) {
      current.push_back(ids[k]);
      fn(const_cast<const std::vector<int>&>(current));
      if (static_cast<int>(current.size()) < max_size) self(self, k + 1);
      current.pop_back();
    }
  };
  if (max_size > 0) rec(rec, 0);
}

}  // namespace rideshare
