#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rideshare/auctions.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/rng.hpp"

namespace rideshare {

// Family of alternatives as a function of a single deviated bid. Probes may
// ask for the family with all money multiplied by `scale` and the deviator
// bidding `bid_scaled` (already in scaled units); winner selection is
// invariant under that uniform scaling, which lets integer mechanisms answer
// win/lose queries at exact rational bids.
class BidContext {
 public:
  virtual ~BidContext() = default;
  virtual std::vector<int> passenger_ids() const = 0;
  virtual Money truthful_bid(int id) const = 0;
  virtual int max_trip_size() const = 0;
  virtual Money bid_ceiling() const = 0;  // safely above every critical value
  virtual AlternativeFamily family(int id, Money bid_scaled, Money scale) const = 0;
  virtual AlternativeFamily truthful_family() const = 0;
};

// Concrete instances: routes are precomputed once; eligibility, budget cover
// and routing are scale-invariant, so scaled families only rescale money.
class InstanceBidContext : public BidContext {
 public:
  InstanceBidContext(Instance inst, CostPolicy policy);

  std::vector<int> passenger_ids() const override;
  Money truthful_bid(int id) const override;
  int max_trip_size() const override { return instance_.capacity; }
  Money bid_ceiling() const override;
  AlternativeFamily family(int id, Money bid_scaled, Money scale) const override;
  AlternativeFamily truthful_family() const override;

  const Instance& instance() const { return instance_; }
  CostPolicy policy() const { return policy_; }

 private:
  AlternativeFamily build(int deviator, Money bid_scaled, Money scale) const;

  Instance instance_;
  CostPolicy policy_;
  CostAssignment costs_;
  RouteTable table_;
};

// Declared trips with per-trip member costs; covers abstract families and
// adversarial constructions where a member's cost varies between trips. A
// trip is present exactly when all member surpluses are non-negative.
class AbstractBidContext : public BidContext {
 public:
  struct Trip {
    std::vector<int> members;
    std::map<int, Money> member_cost;
    Money cost = 0;
  };

  AbstractBidContext(std::vector<Trip> trips, std::map<int, Money> bids);

  // Bids recovered as cost + surplus; throws if a passenger's implied bid is
  // inconsistent between trips.
  static AbstractBidContext from_family(const AlternativeFamily& family);

  std::vector<int> passenger_ids() const override;
  Money truthful_bid(int id) const override;
  int max_trip_size() const override;
  Money bid_ceiling() const override;
  AlternativeFamily family(int id, Money bid_scaled, Money scale) const override;
  AlternativeFamily truthful_family() const override;

 private:
  std::vector<Trip> trips_;
  std::map<int, Money> bids_;
};

struct CriticalValue {
  bool can_win = false;
  Rational value;  // meaningful only when can_win
};

// Threshold bid: the deviator wins for bids above it and loses below it.
// Integer bisection narrows to a unit window, a second bisection on the
// 1/lcm(1..max_trip_size) grid pins the two candidate breakpoints, and a
// half-step probe decides between them — the result is exact. Throws
// std::logic_error if the probes ever witness a non-monotone win region.
CriticalValue measure_critical_value(Mechanism mech, const BidContext& ctx, int id);

// Utility of bidding `bid` while valuing the ride at the truthful bid.
Rational deviation_utility(Mechanism mech, const BidContext& ctx, int id, const Rational& bid);

struct SpViolation {
  int passenger = 0;
  Rational bid;
  Rational truthful_utility;
  Rational deviated_utility;
};

// Sweeps every passenger over a bid grid (step defaults to max bid / 20,
// range 0..2*max bid) augmented with the measured critical value and one
// micro-unit to either side; returns all utility-improving deviations.
std::vector<SpViolation> check_strategyproofness(Mechanism mech, const BidContext& ctx,
                                                 Money grid_step = 0);

// Best surplus welfare in the family divided by the winner's; nullopt when
// the winner's surplus welfare is not positive.
std::optional<Rational> welfare_ratio(const AuctionOutcome& outcome,
                                      const AlternativeFamily& family);

// Downward-closed family on which the winner-by-weighted-surplus attains
// exactly the harmonic-number welfare ratio H(size): one chain-valued group
// against an equal-weight group preferred in ties. wm_base must be divisible
// by lcm(1..size) so all surpluses are integers.
AlternativeFamily harmonic_tightness_family(int size, Money wm_base);

// Two-trip family (not downward closed) whose welfare ratio is
// (top_surplus + 1) / 3 and therefore grows without bound.
AlternativeFamily welfare_gap_family(Money top_surplus);

struct ProfitBoundReport {
  int max_size = 0;
  bool size_bound_applicable = false;  // winner size >= 2 and all one-smaller trips present
  bool size_bound_holds = true;        // surplus profit >= winner surplus welfare / max size
  Rational size_bound_margin;
  bool harmonic_bound_applicable = false;  // size hypotheses plus downward closure
  bool harmonic_bound_holds = true;        // surplus profit >= best / (H(max) * max)
  Rational harmonic_bound_margin;
};

ProfitBoundReport check_profit_bound(const AuctionOutcome& wms_outcome,
                                     const AlternativeFamily& family);

struct UmsWmsReport {
  bool applicable = false;  // disjoint winners, reference size == winner size
  bool holds = true;
  Rational wms_surplus_profit;
  Rational ums_surplus_profit;
};

UmsWmsReport check_ums_vs_wms(const AlternativeFamily& family);

struct BudgetReport {
  Rational price_sum;
  Money member_cost_sum = 0;
  Money winner_cost = 0;
  bool covered = false;      // price sum >= winner trip cost
  bool chain_holds = false;  // price sum >= member cost sum >= winner trip cost
};

BudgetReport check_budget_balance(const AuctionOutcome& outcome);

// Two-passenger counterexample with trip-dependent member costs: lowering a
// bid can steer the auction to the trip where the bidder is cheaper, so the
// weighted-surplus prices stop being critical values.
AbstractBidContext trip_dependent_cost_harness();

// Two passengers sharing one off-route pickup and dropoff: neither imposes an
// externality, so pivot payments collect nothing while the detour costs money.
Instance vcg_deficit_instance();

// Random downward-closed family over up to five passengers, trips up to four.
AlternativeFamily random_downward_closed_family(Rng& rng);

// Random family engineered so the min-surplus and weighted-min-surplus
// winners are disjoint and every weighted winner's reference trip is the full
// winner: the surplus-profit comparison hypotheses hold by construction.
AlternativeFamily random_disjoint_winner_family(Rng& rng);

struct SweepOptions {
  std::uint64_t seed = 20250801;
  int samples = 0;  // 0: per-sweep default
};

struct SweepSummary {
  std::string name;
  int instances = 0;
  long long checks = 0;
  std::vector<std::string> failures;
  std::map<std::string, long long> counters;
  bool ok() const { return failures.empty(); }
};

// 4 mechanisms x 3 cost policies on seeded instances (n cycles 3..6, Q=3):
// no utility-improving deviation may exist, winners pay at most their bid.
SweepSummary strategyproofness_sweep(const SweepOptions& options);  // default 500 instances

// The trip-dependent-cost harness must yield at least one deviation.
SweepSummary negative_control_sweep();

// Measured critical value == closed-form price for every winner.
SweepSummary critical_value_sweep(const SweepOptions& options);  // default 500 instances

// Welfare-ratio and surplus-profit bounds on random downward-closed families,
// exact harmonic tightness, and the unbounded-gap family.
SweepSummary bounds_sweep(const SweepOptions& options);  // default 1000 families

// Surplus-profit comparison on hypothesis-satisfying constructions.
SweepSummary ums_wms_sweep(const SweepOptions& options);  // default 200 families

// Exact budget cover on budget-filtered policies, plus the expected pivot
// deficit on the crafted instance.
SweepSummary budget_sweep(const SweepOptions& options);  // default 200 instances

GeneratorConfig sweep_instance_config(std::uint64_t seed, int index);

}  // namespace rideshare
