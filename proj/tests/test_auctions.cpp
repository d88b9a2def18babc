#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "rideshare/auctions.hpp"
#include "rideshare/experiment.hpp"
#include "rideshare/oracle.hpp"

using namespace rideshare;

namespace {

AlternativeFamily singleton_family(std::vector<std::pair<int, Money>> id_surplus,
                                   std::map<int, Money> costs) {
  CostAssignment assignment;
  assignment.cost_by_id = std::move(costs);
  std::vector<AbstractAlternativeSpec> specs;
  for (const auto& [id, s] : id_surplus) {
    AbstractAlternativeSpec spec;
    spec.members = {id};
    spec.surplus = {{id, s}};
    specs.push_back(std::move(spec));
  }
  return make_abstract_family(specs, assignment);
}

}  // namespace

TEST_CASE("worked example: min-surplus auction") {
  const AlternativeFamily family = worked_example_family();
  const AuctionOutcome out = run_ums(family);
  CHECK(out.mechanism == Mechanism::ums);
  CHECK(out.winner.members == std::vector<int>{1});
  REQUIRE(out.prices.size() == 1);
  CHECK(out.prices.at(1) == Rational(12));
  CHECK(out.diagnostics.at(1).runner_up_min_surplus == 8);
  CHECK(out.metrics.profit == Rational(9));            // 12 - trip cost 3
  CHECK(out.metrics.welfare == Rational(11));          // bid 14 - cost 3
  CHECK(out.metrics.surplus_welfare == Rational(10));
  CHECK(out.metrics.surplus_profit == Rational(8));
  CHECK(out.metrics.passengers_served == 1);
  CHECK(in_winner(out, 1));
  CHECK_FALSE(in_winner(out, 2));
}

TEST_CASE("worked example: weighted min-surplus auction") {
  const AlternativeFamily family = worked_example_family();
  const AuctionOutcome out = run_wms(family);
  CHECK(out.winner.members == std::vector<int>{1, 2});
  CHECK(out.prices.at(1) == Rational(20, 3));
  CHECK(out.prices.at(2) == Rational(10));

  const WinnerDiagnostics& d1 = out.diagnostics.at(1);
  CHECK(d1.wm_star == 8);  // trip {2} without passenger 1
  CHECK(d1.reference_trip == std::vector<int>{1, 3, 4});
  CHECK(d1.reference_size == 3);
  CHECK(d1.reference_size_simple == 3);
  CHECK_FALSE(d1.reference_definitions_differ);

  const WinnerDiagnostics& d2 = out.diagnostics.at(2);
  CHECK(d2.wm_star == 12);  // trip {1,3,4} without passenger 2
  CHECK(d2.reference_trip == std::vector<int>{1, 2});
  CHECK(d2.reference_size == 2);
  CHECK(d2.reference_size_simple == 2);
  CHECK_FALSE(d2.reference_definitions_differ);

  CHECK(out.metrics.profit == Rational(35, 3));
  CHECK(out.metrics.welfare == Rational(21));
  CHECK(out.metrics.surplus_welfare == Rational(18));
  CHECK(out.metrics.surplus_profit == Rational(26, 3));
  CHECK(out.metrics.passengers_served == 2);
}

TEST_CASE("worked example: surplus-pivot auction") {
  const AlternativeFamily family = worked_example_family();
  const AuctionOutcome out = run_vcgs(family);
  CHECK(out.winner.members == std::vector<int>{1, 3, 4});
  CHECK(out.prices.at(1) == Rational(4));
  CHECK(out.prices.at(3) == Rational(8));
  CHECK(out.prices.at(4) == Rational(10));
  CHECK(out.diagnostics.at(3).pivot_best == 18);
  CHECK(out.diagnostics.at(3).pivot_winner == 14);
  CHECK(out.diagnostics.at(1).pivot_best == 8);
  CHECK(out.diagnostics.at(1).pivot_winner == 8);
  CHECK(out.metrics.profit == Rational(15));           // 22 - trip cost 7
  CHECK(out.metrics.welfare == Rational(25));          // bids 32 - cost 7
  CHECK(out.metrics.surplus_welfare == Rational(18));
  CHECK(out.metrics.surplus_profit == Rational(8));
  CHECK(out.metrics.passengers_served == 3);
}

TEST_CASE("worked example: pivot auction with trip costs in the objective") {
  const AlternativeFamily family = worked_example_family();
  const AuctionOutcome out = run_vcg(family);
  // Welfare: {1,2} -> 21, {1,3,4} -> 25, {1} -> 11, {2} -> 9.
  CHECK(out.winner.members == std::vector<int>{1, 3, 4});
  CHECK(out.prices.at(1) == Rational(0));   // removing 1 leaves the winner best
  CHECK(out.prices.at(3) == Rational(4));   // 21 - (25 - 8)
  CHECK(out.prices.at(4) == Rational(6));   // 21 - (25 - 10)
  CHECK(out.metrics.profit == Rational(3)); // 10 - trip cost 7
}

TEST_CASE("equal singletons: lexicographic winner pays their full bid") {
  const AlternativeFamily family =
      singleton_family({{1, 5}, {2, 5}}, {{1, 1}, {2, 1}});
  for (Mechanism mech : {Mechanism::ums, Mechanism::wms, Mechanism::vcgs}) {
    const AuctionOutcome out = run_mechanism(mech, family);
    CHECK(out.winner.members == std::vector<int>{1});
    CHECK(out.prices.at(1) == Rational(6));  // cost 1 + rival surplus 5 = the bid
    CHECK(out.metrics.surplus_profit == Rational(5));
  }
  // The weighted auction reaches this price through the fallback reference
  // trip {1}, since no larger trip contains the winner.
  const AuctionOutcome wms = run_wms(family);
  CHECK(wms.diagnostics.at(1).reference_trip == std::vector<int>{1});
  CHECK(wms.diagnostics.at(1).reference_size == 1);
}

TEST_CASE("pivot payments on a lone alternative") {
  const AlternativeFamily family = singleton_family({{1, 7}}, {{1, 3}});
  SUBCASE("with the trip cost in the objective") {
    // Bid 10, trip cost 3 (defaulted to the member cost sum): value 7.
    const AuctionOutcome out = run_vcg(family);
    CHECK(out.winner.members == std::vector<int>{1});
    CHECK(out.prices.at(1) == Rational(3));  // externality 0, pays the cost share
    CHECK(out.metrics.profit == Rational(0));
  }
  SUBCASE("without the trip cost the price drops to zero") {
    const AuctionOutcome out = run_vcg(family, VcgOptions{false});
    CHECK(out.winner.members == std::vector<int>{1});
    CHECK(out.prices.at(1) == Rational(0));
  }
  SUBCASE("two identical bidders push pivot prices up to the bid") {
    const AlternativeFamily pair =
        singleton_family({{1, 7}, {2, 7}}, {{1, 3}, {2, 3}});
    const AuctionOutcome out = run_vcg(pair);
    CHECK(out.winner.members == std::vector<int>{1});
    CHECK(out.prices.at(1) == Rational(10));  // the rival's displaced value
  }
}

TEST_CASE("a zero-surplus trip still beats the null trip") {
  const AlternativeFamily family = singleton_family({{1, 0}}, {{1, 2}});
  for (Mechanism mech : {Mechanism::ums, Mechanism::wms, Mechanism::vcgs}) {
    const AuctionOutcome out = run_mechanism(mech, family);
    CHECK(out.winner.members == std::vector<int>{1});
    CHECK(out.prices.at(1) == Rational(2));  // cost only, no surplus to extract
  }
}

TEST_CASE("an empty market elects the null trip") {
  const AlternativeFamily family = make_abstract_family({}, {});
  for (Mechanism mech :
       {Mechanism::ums, Mechanism::wms, Mechanism::vcg, Mechanism::vcgs}) {
    const AuctionOutcome out = run_mechanism(mech, family);
    CHECK(out.winner.is_null());
    CHECK(out.prices.empty());
    CHECK(out.metrics.profit == Rational(0));
    CHECK(out.metrics.welfare == Rational(0));
    CHECK(out.metrics.passengers_served == 0);
  }
}

TEST_CASE("trip-dependent member costs flow into prices") {
  const AbstractBidContext harness = trip_dependent_cost_harness();
  const AlternativeFamily family = harness.truthful_family();
  const AuctionOutcome out = run_wms(family);
  CHECK(out.winner.members == std::vector<int>{1, 2});
  // Every trip contains passenger 1, so they pay only the shared-trip cost
  // share; passenger 2 also covers half the displaced solo value 9M.
  CHECK(out.prices.at(1) == Rational(2'000'000));
  CHECK(out.prices.at(2) == Rational(2'000'000) + Rational(9'000'000, 2));
  CHECK(out.metrics.profit == Rational(9'000'000, 2));
  CHECK(out.metrics.surplus_profit == Rational(9'000'000, 2));

  const Alternative* solo = family.find({1});
  REQUIRE(solo);
  CHECK(solo->member_cost.at(1) == 1'000'000);
  CHECK(solo->surplus.at(1) == 9'000'000);
}

TEST_CASE("dispatch runs the requested mechanism") {
  const AlternativeFamily family = worked_example_family();
  CHECK(run_mechanism(Mechanism::ums, family).winner.members ==
        run_ums(family).winner.members);
  CHECK(run_mechanism(Mechanism::wms, family).prices == run_wms(family).prices);
  CHECK(run_mechanism(Mechanism::vcgs, family).prices == run_vcgs(family).prices);
  CHECK(run_mechanism(Mechanism::vcg, family).prices == run_vcg(family).prices);
  for (Mechanism mech :
       {Mechanism::ums, Mechanism::wms, Mechanism::vcg, Mechanism::vcgs}) {
    CHECK(run_mechanism(mech, family).mechanism == mech);
    CHECK(mechanism_name(mech) != nullptr);
  }
}

TEST_CASE("outcomes serialize with exact rational prices") {
  const auto doc = outcome_to_json(run_wms(worked_example_family()));
  CHECK(doc.at("mechanism") == "wms");
  CHECK(doc.at("winner").at("members") == std::vector<int>{1, 2});
  CHECK(doc.at("winner").at("cost") == 5);
  CHECK(doc.at("prices").at("1").at("num") == 20);
  CHECK(doc.at("prices").at("1").at("den") == 3);
  CHECK(doc.at("prices").at("2").at("num") == 10);
  CHECK(doc.at("prices").at("2").at("den") == 1);
  CHECK(doc.at("diagnostics").at("1").at("wm_star") == 8);
  CHECK(doc.at("diagnostics").at("1").at("reference_size") == 3);
  CHECK(doc.at("metrics").at("profit").at("num") == 35);
  CHECK(doc.at("metrics").at("profit").at("den") == 3);
  CHECK(doc.at("metrics").at("passengers_served") == 2);

  const auto ums_doc = outcome_to_json(run_ums(worked_example_family()));
  CHECK(ums_doc.at("diagnostics").at("1").at("runner_up_min_surplus") == 8);
  const auto vcgs_doc = outcome_to_json(run_vcgs(worked_example_family()));
  CHECK(vcgs_doc.at("diagnostics").at("3").at("pivot_best") == 18);
}
