#include <doctest.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "rideshare/alternatives.hpp"
#include "rideshare/experiment.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/model.hpp"
#include "test_support.hpp"

using namespace rideshare;
using test_support::brute_force_member_sets;
using test_support::filled_matrix;
using test_support::make_matrix_instance;
using test_support::member_sets;

namespace {

// Two passengers whose costs only cover the trip when they ride together:
// the direct-policy family is exactly { {}, {1,2} } and is not closed.
Instance cover_instance() {
  auto cost = filled_matrix<Money>(6, 9);
  cost[0][1] = 1;  // origin -> pickup 1
  cost[1][3] = 1;  // pickup 1 -> dropoff 1 (direct cost of passenger 1)
  cost[3][5] = 0;  // dropoff 1 -> destination
  cost[1][2] = 0;  // pickup 1 -> pickup 2
  cost[2][3] = 1;  // pickup 2 -> dropoff 1
  cost[3][4] = 1;  // dropoff 1 -> dropoff 2
  cost[4][5] = 0;  // dropoff 2 -> destination
  cost[2][4] = 2;  // pickup 2 -> dropoff 2 (direct cost of passenger 2)
  Instance inst = make_matrix_instance(2, 2, filled_matrix<Duration>(6, 1), cost, {10, 10});
  inst.cost_mode = CostMode::ridesourcing_total;
  return inst;
}

}  // namespace

TEST_CASE("cost policies charge zero, the direct leg, or the round trip") {
  const Instance inst = cover_instance();
  const CostAssignment zero = assign_costs(inst, CostPolicy::zero);
  CHECK(zero.at(1) == 0);
  CHECK(zero.at(2) == 0);
  const CostAssignment direct = assign_costs(inst, CostPolicy::direct);
  CHECK(direct.at(1) == 1);
  CHECK(direct.at(2) == 2);
  const CostAssignment upper = assign_costs(inst, CostPolicy::upper_bound);
  CHECK(upper.at(1) == round_trip_cost(inst, 1));
  CHECK(upper.at(2) == round_trip_cost(inst, 2));
  CHECK(upper.at(1) == 10);   // destination loop: 9 + 1 + 0
  CHECK(upper.at(2) == 11);   // destination loop: 9 + 2 + 0
  CHECK_THROWS_AS(zero.at(3), std::out_of_range);

  // Charged costs never depend on bids.
  Instance rebid = inst;
  rebid.passengers[0].bid = 1'000;
  CHECK(assign_costs(rebid, CostPolicy::direct).cost_by_id == direct.cost_by_id);
  CHECK(assign_costs(rebid, CostPolicy::upper_bound).cost_by_id == upper.cost_by_id);
}

TEST_CASE("budget cover can make sharing mandatory") {
  const Instance inst = cover_instance();

  SUBCASE("direct policy keeps only the shared trip") {
    const CostAssignment costs = assign_costs(inst, CostPolicy::direct);
    const AlternativeFamily family = enumerate_alternatives(inst, costs, CostPolicy::direct);
    CHECK(member_sets(family) ==
          std::vector<std::vector<int>>{{}, {1, 2}});
    // {1} routes for 2 but collects only 1; {2} routes for 11 and collects 2.
    const Alternative* shared = family.find({1, 2});
    REQUIRE(shared);
    CHECK(shared->cost == 3);  // 0 -> 1 -> 2 -> 3 -> 4 -> 5
    CHECK(shared->surplus.at(1) == 9);
    CHECK(shared->surplus.at(2) == 8);
    CHECK(shared->bid_sum() == 20);
    CHECK(shared->cost_sum() == 3);
    CHECK(shared->min_surplus() == 8);
    CHECK(shared->min_surplus_excluding(2) == 9);

    const DownwardClosureResult closure = is_downward_closed(family);
    CHECK_FALSE(closure.closed);
    CHECK(closure.superset == std::vector<int>{1, 2});
    CHECK(closure.missing == std::vector<int>{1});
  }

  SUBCASE("zero policy has no budget filter") {
    const CostAssignment costs = assign_costs(inst, CostPolicy::zero);
    const AlternativeFamily family = enumerate_alternatives(inst, costs, CostPolicy::zero);
    CHECK(member_sets(family) ==
          std::vector<std::vector<int>>{{}, {1}, {1, 2}, {2}});
    CHECK(is_downward_closed(family).closed);
  }

  SUBCASE("round-trip policy can price a passenger out entirely") {
    const CostAssignment costs = assign_costs(inst, CostPolicy::upper_bound);
    const AlternativeFamily family =
        enumerate_alternatives(inst, costs, CostPolicy::upper_bound);
    // Passenger 2's charge (11) exceeds their bid (10), so only {1} survives.
    CHECK(member_sets(family) == std::vector<std::vector<int>>{{}, {1}});
    CHECK(family.find({1})->surplus.at(1) == 0);
  }
}

TEST_CASE("enumeration matches a brute-force replay on generated instances") {
  for (std::uint64_t seed : {31u, 32u, 33u}) {
    GeneratorConfig config;
    config.n = 3;
    config.capacity = 3;
    config.seed = seed;
    const Instance inst = generate_instance(config).instance;
    for (CostPolicy policy :
         {CostPolicy::zero, CostPolicy::direct, CostPolicy::upper_bound}) {
      const CostAssignment costs = assign_costs(inst, policy);
      const AlternativeFamily family = enumerate_alternatives(inst, costs, policy);
      CHECK(member_sets(family) == brute_force_member_sets(inst, costs, policy));
      for (const Alternative& a : family.alternatives) {
        if (a.is_null()) {
          CHECK(a.cost == 0);
          CHECK(a.min_surplus() == 0);
          continue;
        }
        REQUIRE(a.route.has_value());
        for (int id : a.members) {
          CHECK(a.member_cost.at(id) == costs.at(id));
          CHECK(a.surplus.at(id) == inst.passenger(id).bid - costs.at(id));
        }
      }
      // A precomputed route table must not change the result.
      const RouteTable table = build_route_table(inst);
      const AlternativeFamily cached =
          enumerate_alternatives(inst, costs, policy, &table);
      CHECK(member_sets(cached) == member_sets(family));
    }
  }
}

TEST_CASE("the priority order is a strict total order") {
  Alternative null_trip;
  Alternative a1;  // {1}
  a1.members = {1};
  Alternative a2;  // {2}
  a2.members = {2};
  Alternative a12;  // {1,2}
  a12.members = {1, 2};
  Alternative a13;  // {1,3}
  a13.members = {1, 3};

  SUBCASE("objective dominates") {
    CHECK(beats(a1, 5, a12, 4));
    CHECK_FALSE(beats(a12, 4, a1, 5));
  }
  SUBCASE("size breaks objective ties") {
    CHECK(beats(a12, 5, a1, 5));
    CHECK_FALSE(beats(a1, 5, a12, 5));
  }
  SUBCASE("lexicographic ids break size ties") {
    CHECK(beats(a12, 5, a13, 5));
    CHECK_FALSE(beats(a13, 5, a12, 5));
    CHECK(beats(a1, 5, a2, 5));
  }
  SUBCASE("the null trip loses every tie") {
    CHECK(beats(a1, 0, null_trip, 0));
    CHECK_FALSE(beats(null_trip, 0, a1, 0));
    CHECK(beats(null_trip, 1, a1, 0));
  }
  SUBCASE("sorting by priority yields a consistent ranking") {
    std::vector<std::pair<Alternative, Money>> entries = {
        {a12, 4}, {null_trip, 0}, {a1, 5}, {a13, 5}, {a2, 5}, {a12, 5}, {a1, 0}};
    std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
      return beats(x.first, x.second, y.first, y.second);
    });
    for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
      CHECK(beats(entries[i].first, entries[i].second, entries[i + 1].first,
                  entries[i + 1].second));
      CHECK_FALSE(beats(entries[i + 1].first, entries[i + 1].second, entries[i].first,
                        entries[i].second));
    }
  }
}

TEST_CASE("abstract families check their inputs") {
  CostAssignment costs;
  costs.cost_by_id = {{1, 2}, {2, 3}};

  SUBCASE("cost defaults to the members' cost sum and can be overridden") {
    std::vector<AbstractAlternativeSpec> specs(2);
    specs[0].members = {1, 2};
    specs[0].surplus = {{1, 4}, {2, 5}};
    specs[1].members = {1};
    specs[1].surplus = {{1, 4}};
    specs[1].cost = 7;
    const AlternativeFamily family = make_abstract_family(specs, costs);
    CHECK(family.abstract_family);
    REQUIRE(family.alternatives.size() == 3);  // null trip injected
    CHECK(family.alternatives[0].is_null());
    CHECK(family.find({1, 2})->cost == 5);
    CHECK(family.find({1})->cost == 7);
    CHECK(family.find({1, 2})->member_cost.at(2) == 3);
    CHECK(family.find({9}) == nullptr);
  }
  SUBCASE("members without an assigned cost are charged zero") {
    std::vector<AbstractAlternativeSpec> specs(1);
    specs[0].members = {5};
    specs[0].surplus = {{5, 4}};
    const AlternativeFamily family = make_abstract_family(specs, {});
    CHECK(family.find({5})->member_cost.at(5) == 0);
    CHECK(family.find({5})->cost == 0);
  }
  SUBCASE("duplicate member sets are rejected") {
    std::vector<AbstractAlternativeSpec> specs(2);
    specs[0].members = {1, 2};
    specs[0].surplus = {{1, 4}, {2, 5}};
    specs[1].members = {2, 1};  // same set, different order
    specs[1].surplus = {{1, 1}, {2, 1}};
    CHECK_THROWS_AS(make_abstract_family(specs, costs), std::invalid_argument);
  }
  SUBCASE("surplus keys must match the member list") {
    std::vector<AbstractAlternativeSpec> missing(1);
    missing[0].members = {1, 2};
    missing[0].surplus = {{1, 4}};
    CHECK_THROWS_AS(make_abstract_family(missing, costs), std::invalid_argument);
    std::vector<AbstractAlternativeSpec> extra(1);
    extra[0].members = {1};
    extra[0].surplus = {{1, 4}, {2, 5}};
    CHECK_THROWS_AS(make_abstract_family(extra, costs), std::invalid_argument);
  }
  SUBCASE("repeated members are rejected") {
    std::vector<AbstractAlternativeSpec> specs(1);
    specs[0].members = {1, 1};
    specs[0].surplus = {{1, 4}};
    CHECK_THROWS_AS(make_abstract_family(specs, costs), std::invalid_argument);
  }
}

TEST_CASE("abstract families survive a JSON round trip") {
  const AlternativeFamily family = worked_example_family();
  const auto doc = family_to_json(family);
  const AlternativeFamily back = family_from_json(doc);
  CHECK(member_sets(back) == member_sets(family));
  CHECK(back.costs.cost_by_id == family.costs.cost_by_id);
  for (const Alternative& a : family.alternatives) {
    const Alternative* b = back.find(a.members);
    REQUIRE(b);
    CHECK(b->cost == a.cost);
    CHECK(b->surplus == a.surplus);
    CHECK(b->member_cost == a.member_cost);
  }
}

TEST_CASE("the worked example is not downward closed") {
  const DownwardClosureResult closure = is_downward_closed(worked_example_family());
  CHECK_FALSE(closure.closed);
  CHECK(closure.superset == std::vector<int>{1, 3, 4});
  CHECK(closure.missing == std::vector<int>{1, 3});
}

TEST_CASE("subset enumeration is lexicographic with a size cap") {
  std::vector<std::vector<int>> seen;
  for_each_subset({1, 2, 3}, 2, [&](const std::vector<int>& s) { seen.push_back(s); });
  CHECK(seen == std::vector<std::vector<int>>{{1}, {1, 2}, {1, 3}, {2}, {2, 3}, {3}});

  seen.clear();
  for_each_subset({1, 2, 3}, 0, [&](const std::vector<int>& s) { seen.push_back(s); });
  CHECK(seen.empty());

  seen.clear();
  for_each_subset({}, 3, [&](const std::vector<int>& s) { seen.push_back(s); });
  CHECK(seen.empty());
}

TEST_CASE("cost policy names round trip") {
  for (CostPolicy policy :
       {CostPolicy::zero, CostPolicy::direct, CostPolicy::upper_bound}) {
    CHECK(cost_policy_from_name(cost_policy_name(policy)) == policy);
  }
  CHECK_THROWS_AS(cost_policy_from_name("free"), std::invalid_argument);
}
