#include "rideshare/alternatives.hpp"

#include <algorithm>
#include <stdexcept>

namespace rideshare {

const char* cost_policy_name(CostPolicy policy) {
  switch (policy) {
    case CostPolicy::zero: return "zero";
    case CostPolicy::direct: return "direct";
    case CostPolicy::upper_bound: return "upper_bound";
  }
  throw std::logic_error("unknown cost policy");
}

CostPolicy cost_policy_from_name(const std::string& name) {
  if (name == "zero") return CostPolicy::zero;
  if (name == "direct") return CostPolicy::direct;
  if (name == "upper_bound") return CostPolicy::upper_bound;
  throw std::invalid_argument("unknown cost policy: " + name);
}

Money CostAssignment::at(int id) const {
  auto it = cost_by_id.find(id);
  if (it == cost_by_id.end()) throw std::out_of_range("no cost for passenger " + std::to_string(id));
  return it->second;
}

CostAssignment assign_costs(const Instance& inst, CostPolicy policy) {
  CostAssignment out;
  for (int i = 1; i <= inst.n; ++i) {
    switch (policy) {
      case CostPolicy::zero: out.cost_by_id[i] = 0; break;
      case CostPolicy::direct: out.cost_by_id[i] = direct_cost(inst, i); break;
      case CostPolicy::upper_bound: out.cost_by_id[i] = round_trip_cost(inst, i); break;
    }
  }
  return out;
}

bool Alternative::contains(int id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

Money Alternative::min_surplus() const {
  Money m = 0;
  bool first = true;
  for (const auto& [id, s] : surplus) {
    if (first || s < m) m = s;
    first = false;
  }
  return first ? 0 : m;
}

Money Alternative::min_surplus_excluding(int id) const {
  Money m = 0;
  bool first = true;
  for (const auto& [other, s] : surplus) {
    if (other == id) continue;
    if (first || s < m) m = s;
    first = false;
  }
  return first ? 0 : m;
}

Money Alternative::surplus_sum() const {
  Money total = 0;
  for (const auto& [id, s] : surplus) total += s;
  return total;
}

Money Alternative::bid_sum() const {
  Money total = 0;
  for (int id : members) total += member_cost.at(id) + surplus.at(id);
  return total;
}

Money Alternative::cost_sum() const {
  Money total = 0;
  for (const auto& [id, c] : member_cost) total += c;
  return total;
}

const Alternative* AlternativeFamily::find(const std::vector<int>& members) const {
  auto it = std::lower_bound(
      alternatives.begin(), alternatives.end(), members,
      [](const Alternative& a, const std::vector<int>& m) { return a.members < m; });
  if (it == alternatives.end() || it->members != members) return nullptr;
  return &*it;
}

bool beats(const Alternative& a, Money obj_a, const Alternative& b, Money obj_b) {
  if (obj_a != obj_b) return obj_a > obj_b;
  if (a.size() != b.size()) return a.size() > b.size();
  return a.members < b.members;
}

RouteTable build_route_table(const Instance& inst) {
  std::vector<int> ids;
  for (int i = 1; i <= inst.n; ++i) ids.push_back(i);
  RouteTable table;
  for_each_subset(ids, inst.capacity, [&](const std::vector<int>& subset) {
    table.emplace(subset, best_route(inst, subset));
  });
  return table;
}

namespace {

Alternative null_trip() {
  Alternative a;
  a.cost = 0;
  return a;
}

void sort_family(AlternativeFamily& family) {
  std::sort(family.alternatives.begin(), family.alternatives.end(),
            [](const Alternative& a, const Alternative& b) { return a.members < b.members; });
}

}  // namespace

AlternativeFamily enumerate_alternatives(const Instance& inst, const CostAssignment& costs,
                                         CostPolicy policy, const RouteTable* table) {
  AlternativeFamily family;
  family.costs = costs;
  family.alternatives.push_back(null_trip());

  std::vector<int> eligible;
  for (int i = 1; i <= inst.n; ++i) {
    if (inst.passenger(i).bid >= costs.at(i)) eligible.push_back(i);
  }

  for_each_subset(eligible, inst.capacity, [&](const std::vector<int>& subset) {
    std::optional<Route> route;
    if (table) {
      auto it = table->find(subset);
      route = (it != table->end()) ? it->second : best_route(inst, subset);
    } else {
      route = best_route(inst, subset);
    }
    if (!route) return;
    const Money cost = trip_cost(*route, inst.cost_mode);
    Money cost_sum = 0;
    for (int id : subset) cost_sum += costs.at(id);
    if (policy != CostPolicy::zero && cost_sum < cost) return;
    Alternative a;
    a.members = subset;
    a.route = std::move(route);
    a.cost = cost;
    for (int id : subset) {
      const Money c = costs.at(id);
      a.member_cost[id] = c;
      a.surplus[id] = inst.passenger(id).bid - c;
    }
    family.alternatives.push_back(std::move(a));
  });

  sort_family(family);
  return family;
}

DownwardClosureResult is_downward_closed(const AlternativeFamily& family) {
  for (const auto& a : family.alternatives) {
    if (a.size() < 2) continue;
    // Every proper nonempty subset of the members must be present.
    DownwardClosureResult bad;
    bool failed = false;
    for_each_subset(a.members, a.size() - 1, [&](const std::vector<int>& sub) {
      if (failed) return;
      if (!family.find(sub)) {
        bad.closed = false;
        bad.superset = a.members;
        bad.missing = sub;
        failed = true;
      }
    });
    if (failed) return bad;
  }
  return {};
}

AlternativeFamily make_abstract_family(const std::vector<AbstractAlternativeSpec>& specs,
                                       const CostAssignment& costs) {
  AlternativeFamily family;
  family.costs = costs;
  family.abstract_family = true;
  bool has_null = false;
  for (const auto& spec : specs) {
    Alternative a;
    a.members = spec.members;
    std::sort(a.members.begin(), a.members.end());
    if (std::adjacent_find(a.members.begin(), a.members.end()) != a.members.end()) {
      throw std::invalid_argument("abstract alternative repeats a member");
    }
    if (a.is_null()) has_null = true;
    Money cost_sum = 0;
    for (int id : a.members) {
      auto it = spec.surplus.find(id);
      if (it == spec.surplus.end()) {
        throw std::invalid_argument("missing surplus for member " + std::to_string(id));
      }
      const Money c = costs.cost_by_id.count(id) ? costs.at(id) : 0;
      a.member_cost[id] = c;
      a.surplus[id] = it->second;
      cost_sum += c;
    }
    if (spec.surplus.size() != a.members.size()) {
      throw std::invalid_argument("surplus keys do not match members");
    }
    a.cost = spec.cost.value_or(cost_sum);
    family.alternatives.push_back(std::move(a));
  }
  if (!has_null) family.alternatives.push_back(null_trip());
  sort_family(family);
  for (std::size_t k = 1; k < family.alternatives.size(); ++k) {
    if (family.alternatives[k].members == family.alternatives[k - 1].members) {
      throw std::invalid_argument("duplicate abstract alternative");
    }
  }
  return family;
}

AlternativeFamily family_from_json(const nlohmann::json& doc) {
  std::vector<AbstractAlternativeSpec> specs;
  for (const auto& aj : doc.at("alternatives")) {
    AbstractAlternativeSpec spec;
    spec.members = aj.at("members").get<std::vector<int>>();
    for (const auto& [key, value] : aj.at("surpluses").items()) {
      spec.surplus[std::stoi(key)] = value.get<Money>();
    }
    if (aj.contains("cost")) spec.cost = aj.at("cost").get<Money>();
    specs.push_back(std::move(spec));
  }
  CostAssignment costs;
  if (doc.contains("costs")) {
    for (const auto& [key, value] : doc.at("costs").items()) {
      costs.cost_by_id[std::stoi(key)] = value.get<Money>();
    }
  }
  return make_abstract_family(specs, costs);
}

nlohmann::ordered_json family_to_json(const AlternativeFamily& family) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json alts = nlohmann::ordered_json::array();
  for (const auto& a : family.alternatives) {
    if (a.is_null()) continue;
    nlohmann::ordered_json aj;
    aj["members"] = a.members;
    nlohmann::ordered_json sj = nlohmann::ordered_json::object();
    for (const auto& [id, s] : a.surplus) sj[std::to_string(id)] = s;
    aj["surpluses"] = sj;
    aj["cost"] = a.cost;
    alts.push_back(std::move(aj));
  }
  doc["alternatives"] = alts;
  nlohmann::ordered_json cj = nlohmann::ordered_json::object();
  for (const auto& [id, c] : family.costs.cost_by_id) cj[std::to_string(id)] = c;
  doc["costs"] = cj;
  return doc;
}

}  // namespace rideshare
