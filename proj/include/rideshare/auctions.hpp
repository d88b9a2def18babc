#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "rideshare/alternatives.hpp"
#include "rideshare/rational.hpp"

namespace rideshare {

enum class Mechanism { ums, wms, vcg, vcgs };

const char* mechanism_name(Mechanism mech);

// Objective each mechanism maximizes; the null trip scores 0 everywhere.
Money min_surplus_value(const Alternative& a);                  // UMS
Money weighted_min_surplus_value(const Alternative& a);         // WMS: |A| * min surplus
Money surplus_welfare_value(const Alternative& a);              // VCG_s: sum of surpluses
Money welfare_value(const Alternative& a, bool with_trip_cost); // VCG: sum of bids - cost

struct WinnerDiagnostics {
  Money runner_up_min_surplus = 0;    // UMS: best min-surplus among trips without i
  Money wm_star = 0;                  // WMS: best weighted min-surplus among trips without i
  std::vector<int> reference_trip;    // WMS: the trip whose size divides wm_star
  int reference_size = 0;
  int reference_size_simple = 0;      // size under the max-|A|-with-wm>=wm_star shortcut
  bool reference_definitions_differ = false;
  Money pivot_best = 0;               // VCG / VCG_s: best objective with i's value removed
  Money pivot_winner = 0;             // VCG / VCG_s: winner's objective with i's value removed
};

struct OutcomeMetrics {
  Rational profit;           // price sum minus winner trip cost
  Rational welfare;          // winner bid sum minus winner trip cost
  Rational surplus_welfare;  // winner surplus sum
  Rational surplus_profit;   // sum of price - member cost over winners
  int passengers_served = 0;
};

struct AuctionOutcome {
  Mechanism mechanism = Mechanism::ums;
  Alternative winner;
  std::map<int, Rational> prices;  // winners only; everyone else pays 0
  std::map<int, WinnerDiagnostics> diagnostics;
  OutcomeMetrics metrics;
};

struct VcgOptions {
  bool include_driver_cost = true;  // false: welfare is the plain bid sum
};

// Winner maximizes the minimum member surplus; each winner pays their cost
// plus the best minimum surplus among trips excluding them.
AuctionOutcome run_ums(const AlternativeFamily& family);

// Winner maximizes |A| * min surplus; each winner pays their cost plus
// wm_star_i divided by the size of their reference trip.
AuctionOutcome run_wms(const AlternativeFamily& family);

// Classic pivot payments against bid-sum-minus-cost welfare. Meant for the
// zero-cost family, where no budget filter applies.
AuctionOutcome run_vcg(const AlternativeFamily& family, const VcgOptions& options = {});

// Pivot payments measured in surpluses: winner maximizes the surplus sum and
// pays cost plus the externality imposed on the others' surpluses.
AuctionOutcome run_vcgs(const AlternativeFamily& family);

AuctionOutcome run_mechanism(Mechanism mech, const AlternativeFamily& family);

OutcomeMetrics surplus_metrics(const AuctionOutcome& outcome);

bool in_winner(const AuctionOutcome& outcome, int id);

nlohmann::ordered_json outcome_to_json(const AuctionOutcome& outcome);

}  // namespace rideshare
