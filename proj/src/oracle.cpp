#include "rideshare/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

namespace rideshare {

// ---------------------------------------------------------------------------
// InstanceBidContext

InstanceBidContext::InstanceBidContext(Instance inst, CostPolicy policy)
    : instance_(std::move(inst)),
      policy_(policy),
      costs_(assign_costs(instance_, policy)),
      table_(build_route_table(instance_)) {}

std::vector<int> InstanceBidContext::passenger_ids() const {
  std::vector<int> ids;
  for (int i = 1; i <= instance_.n; ++i) ids.push_back(i);
  return ids;
}

Money InstanceBidContext::truthful_bid(int id) const { return instance_.passenger(id).bid; }

Money InstanceBidContext::bid_ceiling() const {
  Money sum = 1;
  for (const auto& p : instance_.passengers) sum += p.bid;
  for (const auto& [id, c] : costs_.cost_by_id) sum += c;
  Money max_cost = 0;
  for (const auto& [subset, route] : table_) {
    if (route) max_cost = std::max(max_cost, std::abs(trip_cost(*route, instance_.cost_mode)));
  }
  return static_cast<Money>(instance_.capacity) * (sum + max_cost) + 1;
}

AlternativeFamily InstanceBidContext::family(int id, Money bid_scaled, Money scale) const {
  return build(id, bid_scaled, scale);
}

AlternativeFamily InstanceBidContext::truthful_family() const { return build(-1, 0, 1); }

AlternativeFamily InstanceBidContext::build(int deviator, Money bid_scaled, Money scale) const {
  if (scale < 1) throw std::invalid_argument("family scale must be >= 1");
  AlternativeFamily family;
  family.costs.cost_by_id = costs_.cost_by_id;
  for (auto& [id, c] : family.costs.cost_by_id) c *= scale;
  family.alternatives.emplace_back();  // null trip

  // Eligibility, routing and budget cover are invariant under uniform money
  // scaling, so only the deviator's affordability uses scaled units.
  std::vector<int> eligible;
  for (int i = 1; i <= instance_.n; ++i) {
    const Money c = costs_.at(i);
    const bool ok = (i == deviator) ? (bid_scaled >= c * scale) : (instance_.passenger(i).bid >= c);
    if (ok) eligible.push_back(i);
  }

  for_each_subset(eligible, instance_.capacity, [&](const std::vector<int>& subset) {
    const auto it = table_.find(subset);
    if (it == table_.end() || !it->second) return;
    const Money base_cost = trip_cost(*it->second, instance_.cost_mode);
    if (policy_ != CostPolicy::zero) {
      Money cost_sum = 0;
      for (int id : subset) cost_sum += costs_.at(id);
      if (cost_sum < base_cost) return;
    }
    Alternative a;
    a.members = subset;
    a.cost = base_cost * scale;
    for (int id : subset) {
      const Money c = costs_.at(id) * scale;
      a.member_cost[id] = c;
      a.surplus[id] =
          (id == deviator) ? bid_scaled - c : instance_.passenger(id).bid * scale - c;
    }
    family.alternatives.push_back(std::move(a));
  });

  std::sort(family.alternatives.begin(), family.alternatives.end(),
            [](const Alternative& a, const Alternative& b) { return a.members < b.members; });
  return family;
}

// ---------------------------------------------------------------------------
// AbstractBidContext

namespace {

AlternativeFamily build_abstract(const std::vector<AbstractBidContext::Trip>& trips,
                                 const std::map<int, Money>& bids, int deviator,
                                 Money bid_scaled, Money scale) {
  if (scale < 1) throw std::invalid_argument("family scale must be >= 1");
  AlternativeFamily family;
  family.abstract_family = true;
  family.alternatives.emplace_back();  // null trip
  for (const auto& trip : trips) {
    Alternative a;
    a.members = trip.members;
    a.cost = trip.cost * scale;
    bool viable = true;
    for (int id : trip.members) {
      const Money c = trip.member_cost.at(id) * scale;
      const Money bid = (id == deviator) ? bid_scaled : bids.at(id) * scale;
      if (bid < c) {
        viable = false;  // a member no longer affords this trip
        break;
      }
      a.member_cost[id] = c;
      a.surplus[id] = bid - c;
    }
    if (!viable) continue;
    family.alternatives.push_back(std::move(a));
    for (int id : trip.members) {
      if (!family.costs.cost_by_id.count(id)) {
        family.costs.cost_by_id[id] = trip.member_cost.at(id) * scale;
      }
    }
  }
  std::sort(family.alternatives.begin(), family.alternatives.end(),
            [](const Alternative& a, const Alternative& b) { return a.members < b.members; });
  return family;
}

}  // namespace

AbstractBidContext::AbstractBidContext(std::vector<Trip> trips, std::map<int, Money> bids)
    : trips_(std::move(trips)), bids_(std::move(bids)) {
  std::vector<std::vector<int>> seen;
  for (auto& trip : trips_) {
    std::sort(trip.members.begin(), trip.members.end());
    if (std::adjacent_find(trip.members.begin(), trip.members.end()) != trip.members.end()) {
      throw std::invalid_argument("trip repeats a member");
    }
    for (int id : trip.members) {
      if (!trip.member_cost.count(id)) throw std::invalid_argument("trip member has no cost");
      if (!bids_.count(id)) throw std::invalid_argument("trip member has no bid");
    }
    if (trip.member_cost.size() != trip.members.size()) {
      throw std::invalid_argument("trip costs do not match members");
    }
    seen.push_back(trip.members);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("duplicate trip member set");
  }
}

AbstractBidContext AbstractBidContext::from_family(const AlternativeFamily& family) {
  std::vector<Trip> trips;
  std::map<int, Money> bids;
  for (const auto& a : family.alternatives) {
    if (a.is_null()) continue;
    Trip trip;
    trip.members = a.members;
    trip.member_cost = a.member_cost;
    trip.cost = a.cost;
    for (int id : a.members) {
      const Money bid = a.member_cost.at(id) + a.surplus.at(id);
      const auto [it, inserted] = bids.emplace(id, bid);
      if (!inserted && it->second != bid) {
        throw std::invalid_argument("passenger bid inconsistent between trips");
      }
    }
    trips.push_back(std::move(trip));
  }
  return AbstractBidContext(std::move(trips), std::move(bids));
}

std::vector<int> AbstractBidContext::passenger_ids() const {
  std::vector<int> ids;
  for (const auto& [id, bid] : bids_) ids.push_back(id);
  return ids;
}

Money AbstractBidContext::truthful_bid(int id) const { return bids_.at(id); }

int AbstractBidContext::max_trip_size() const {
  int m = 1;
  for (const auto& trip : trips_) m = std::max(m, static_cast<int>(trip.members.size()));
  return m;
}

Money AbstractBidContext::bid_ceiling() const {
  Money sum = 1;
  for (const auto& [id, bid] : bids_) sum += std::abs(bid);
  Money max_cost = 0;
  for (const auto& trip : trips_) {
    for (const auto& [id, c] : trip.member_cost) sum += std::abs(c);
    max_cost = std::max(max_cost, std::abs(trip.cost));
  }
  return static_cast<Money>(max_trip_size()) * (sum + max_cost) + 1;
}

AlternativeFamily AbstractBidContext::family(int id, Money bid_scaled, Money scale) const {
  return build_abstract(trips_, bids_, id, bid_scaled, scale);
}

AlternativeFamily AbstractBidContext::truthful_family() const {
  return build_abstract(trips_, bids_, -1, 0, 1);
}

// ---------------------------------------------------------------------------
// Critical values and deviations

namespace {

class WinProbe {
 public:
  WinProbe(Mechanism mech, const BidContext& ctx, int id) : mech_(mech), ctx_(ctx), id_(id) {}

  bool operator()(const Rational& bid) {
    const AlternativeFamily fam = ctx_.family(id_, bid.num(), bid.den());
    const bool won = in_winner(run_mechanism(mech_, fam), id_);
    log_.push_back({bid, won});
    return won;
  }

  // The win region must be an upward-closed set of bids.
  void audit() const {
    bool any_win = false;
    Rational min_win;
    for (const auto& [bid, won] : log_) {
      if (won && (!any_win || bid < min_win)) {
        min_win = bid;
        any_win = true;
      }
    }
    if (!any_win) return;
    for (const auto& [bid, won] : log_) {
      if (!won && bid > min_win) {
        throw std::logic_error("non-monotone win region at bid " + bid.to_string());
      }
    }
  }

 private:
  Mechanism mech_;
  const BidContext& ctx_;
  int id_;
  std::vector<std::pair<Rational, bool>> log_;
};

}  // namespace

CriticalValue measure_critical_value(Mechanism mech, const BidContext& ctx, int id) {
  WinProbe wins(mech, ctx, id);
  if (wins(Rational(0))) {
    wins.audit();
    return {true, Rational(0)};  // prices are nonnegative, so the threshold is 0
  }
  const Money ceiling = ctx.bid_ceiling();
  if (!wins(Rational(ceiling))) {
    wins.audit();
    return {false, Rational(0)};
  }
  Money lo = 0, hi = ceiling;  // loses at lo, wins at hi
  while (hi - lo > 1) {
    const Money mid = lo + (hi - lo) / 2;
    (wins(Rational(mid)) ? hi : lo) = mid;
  }
  // Every tie-relevant breakpoint lies on the 1/lcm grid inside [lo, lo+1].
  const std::int64_t grid = lcm_up_to(ctx.max_trip_size());
  std::int64_t klo = 0, khi = grid;
  while (khi - klo > 1) {
    const std::int64_t kmid = klo + (khi - klo) / 2;
    const Rational bid = Rational::make(static_cast<__int128>(lo) * grid + kmid, grid);
    (wins(bid) ? khi : klo) = kmid;
  }
  const Rational low = Rational::make(static_cast<__int128>(lo) * grid + klo, grid);
  const Rational high = Rational::make(static_cast<__int128>(lo) * grid + khi, grid);
  const Rational half = Rational::make(static_cast<__int128>(lo) * 2 * grid + klo + khi, 2 * grid);
  const Rational crit = wins(half) ? low : high;
  wins(crit + Rational(1));  // audit sees a loss here as non-monotone
  if (crit > Rational(1)) wins(crit - Rational(1));
  wins.audit();
  return {true, crit};
}

Rational deviation_utility(Mechanism mech, const BidContext& ctx, int id, const Rational& bid) {
  const AlternativeFamily fam = ctx.family(id, bid.num(), bid.den());
  const AuctionOutcome out = run_mechanism(mech, fam);
  if (!in_winner(out, id)) return Rational(0);
  return Rational(ctx.truthful_bid(id)) - out.prices.at(id) / Rational(bid.den());
}

std::vector<SpViolation> check_strategyproofness(Mechanism mech, const BidContext& ctx,
                                                 Money grid_step) {
  std::vector<SpViolation> out;
  const AuctionOutcome truthful = run_mechanism(mech, ctx.truthful_family());
  Money max_bid = 1;
  for (int id : ctx.passenger_ids()) max_bid = std::max(max_bid, ctx.truthful_bid(id));
  const Money step = grid_step > 0 ? grid_step : std::max<Money>(1, max_bid / 20);

  for (int id : ctx.passenger_ids()) {
    const Money value = ctx.truthful_bid(id);
    Rational truthful_utility(0);
    if (in_winner(truthful, id)) truthful_utility = Rational(value) - truthful.prices.at(id);

    std::set<Rational> bids;
    for (Money b = 0; b <= 2 * max_bid; b += step) bids.insert(Rational(b));
    bids.insert(Rational(2 * max_bid));
    const CriticalValue cv = measure_critical_value(mech, ctx, id);
    if (cv.can_win) {
      bids.insert(cv.value);
      bids.insert(cv.value + Rational(1));
      const Rational below = cv.value - Rational(1);
      bids.insert(below < Rational(0) ? Rational(0) : below);
    }

    for (const Rational& bid : bids) {
      if (bid == Rational(value)) continue;
      const Rational u = deviation_utility(mech, ctx, id, bid);
      if (u > truthful_utility) out.push_back({id, bid, truthful_utility, u});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ratios, bounds and comparisons

std::optional<Rational> welfare_ratio(const AuctionOutcome& outcome,
                                      const AlternativeFamily& family) {
  Money best = 0;
  for (const auto& a : family.alternatives) best = std::max(best, surplus_welfare_value(a));
  const Money winner = outcome.winner.surplus_sum();
  if (winner <= 0) return std::nullopt;
  return Rational(best) / Rational(winner);
}

AlternativeFamily harmonic_tightness_family(int size, Money wm_base) {
  if (size < 1) throw std::invalid_argument("tightness family needs size >= 1");
  if (wm_base <= 0 || wm_base % lcm_up_to(size) != 0) {
    throw std::invalid_argument("wm_base must be a positive multiple of lcm(1..size)");
  }
  // Equal-weight group C on the lexicographically smaller ids wins every tie
  // against chain-valued group B, whose surplus welfare is wm_base * H(size).
  std::map<int, Money> surplus;
  std::vector<int> c_ids, b_ids;
  for (int j = 1; j <= size; ++j) {
    surplus[j] = wm_base / size;
    c_ids.push_back(j);
    surplus[size + j] = wm_base / j;
    b_ids.push_back(size + j);
  }
  std::vector<AbstractAlternativeSpec> specs;
  const auto add_subsets = [&](const std::vector<int>& ids) {
    for_each_subset(ids, size, [&](const std::vector<int>& subset) {
      AbstractAlternativeSpec spec;
      spec.members = subset;
      for (int id : subset) spec.surplus[id] = surplus.at(id);
      specs.push_back(std::move(spec));
    });
  };
  add_subsets(c_ids);
  add_subsets(b_ids);
  return make_abstract_family(specs, {});
}

AlternativeFamily welfare_gap_family(Money top_surplus) {
  if (top_surplus < 1) throw std::invalid_argument("top surplus must be >= 1");
  std::vector<AbstractAlternativeSpec> specs(2);
  specs[0].members = {1, 2};
  specs[0].surplus = {{1, top_surplus}, {2, 1}};
  specs[1].members = {3};
  specs[1].surplus = {{3, 3}};
  return make_abstract_family(specs, {});
}

ProfitBoundReport check_profit_bound(const AuctionOutcome& wms_outcome,
                                     const AlternativeFamily& family) {
  ProfitBoundReport report;
  for (const auto& a : family.alternatives) report.max_size = std::max(report.max_size, a.size());
  if (report.max_size == 0) return report;
  const Rational sp = wms_outcome.metrics.surplus_profit;

  const Alternative& winner = wms_outcome.winner;
  if (winner.size() >= 2) {
    bool all_present = true;
    for (int id : winner.members) {
      std::vector<int> reduced;
      for (int other : winner.members) {
        if (other != id) reduced.push_back(other);
      }
      if (!family.find(reduced)) {
        all_present = false;
        break;
      }
    }
    if (all_present) {
      report.size_bound_applicable = true;
      const Rational bound = Rational(winner.surplus_sum()) / Rational(report.max_size);
      report.size_bound_margin = sp - bound;
      report.size_bound_holds = !report.size_bound_margin.is_negative();
    }
  }

  if (report.size_bound_applicable && is_downward_closed(family).closed) {
    report.harmonic_bound_applicable = true;
    Money best = 0;
    for (const auto& a : family.alternatives) best = std::max(best, surplus_welfare_value(a));
    const Rational bound =
        Rational(best) / (harmonic_number(report.max_size) * Rational(report.max_size));
    report.harmonic_bound_margin = sp - bound;
    report.harmonic_bound_holds = !report.harmonic_bound_margin.is_negative();
  }
  return report;
}

UmsWmsReport check_ums_vs_wms(const AlternativeFamily& family) {
  UmsWmsReport report;
  const AuctionOutcome wms = run_wms(family);
  const AuctionOutcome ums = run_ums(family);
  report.wms_surplus_profit = wms.metrics.surplus_profit;
  report.ums_surplus_profit = ums.metrics.surplus_profit;
  bool disjoint = true;
  for (int id : wms.winner.members) {
    if (ums.winner.contains(id)) disjoint = false;
  }
  bool references_full = true;
  for (const auto& [id, diag] : wms.diagnostics) {
    if (diag.reference_size != wms.winner.size()) references_full = false;
  }
  report.applicable = disjoint && references_full;
  report.holds = report.wms_surplus_profit >= report.ums_surplus_profit;
  return report;
}

BudgetReport check_budget_balance(const AuctionOutcome& outcome) {
  BudgetReport report;
  Rational sum(0);
  for (const auto& [id, price] : outcome.prices) sum += price;
  report.price_sum = sum;
  report.member_cost_sum = outcome.winner.cost_sum();
  report.winner_cost = outcome.winner.cost;
  report.covered = sum >= Rational(report.winner_cost);
  report.chain_holds =
      sum >= Rational(report.member_cost_sum) && report.member_cost_sum >= report.winner_cost;
  return report;
}

// ---------------------------------------------------------------------------
// Adversarial constructions

AbstractBidContext trip_dependent_cost_harness() {
  // Passenger 1 costs more in the shared trip than alone; lowering their bid
  // flips the winner to the solo trip where they are charged less.
  AbstractBidContext::Trip shared;
  shared.members = {1, 2};
  shared.member_cost = {{1, 2'000'000}, {2, 2'000'000}};
  shared.cost = 4'000'000;
  AbstractBidContext::Trip solo;
  solo.members = {1};
  solo.member_cost = {{1, 1'000'000}};
  solo.cost = 1'000'000;
  return AbstractBidContext({shared, solo}, {{1, 10'000'000}, {2, 10'000'000}});
}

Instance vcg_deficit_instance() {
  EuclideanLayout layout;
  layout.speed_m_per_s = 10.0;
  layout.cost_per_m = 1000;
  layout.points = {{0.0, 0.0},      {5000.0, 5000.0}, {5000.0, 5000.0},
                   {5000.0, 6000.0}, {5000.0, 6000.0}, {100.0, 0.0}};
  Instance inst;
  inst.n = 2;
  inst.capacity = 3;
  inst.depart_time = 0;
  inst.cost_mode = CostMode::ridesharing_detour;
  inst.euclidean_geometry = true;
  expand_geometry(layout, inst.travel_time, inst.travel_cost);
  inst.max_arrival =
      2 * (inst.travel_time[inst.origin_node()][inst.destination_node()] + 1800);
  for (int i = 1; i <= 2; ++i) {
    PassengerRequest p;
    p.id = i;
    p.bid = 20'000'000;
    p.max_pickup_time = 900;
    p.max_travel_time = 2 * inst.travel_time[inst.pickup_node(i)][inst.dropoff_node(i)];
    inst.passengers.push_back(p);
  }
  return inst;
}

AlternativeFamily random_downward_closed_family(Rng& rng) {
  const int m = static_cast<int>(rng.uniform_int(2, 5));
  std::map<int, Money> surplus;
  CostAssignment costs;
  for (int id = 1; id <= m; ++id) {
    costs.cost_by_id[id] = rng.uniform_int(0, 20);
    surplus[id] = rng.uniform_int(0, 30);
  }
  std::set<std::vector<int>> sets;
  const int groups = static_cast<int>(rng.uniform_int(1, 4));
  for (int g = 0; g < groups; ++g) {
    const int size = static_cast<int>(rng.uniform_int(1, std::min(4, m)));
    std::set<int> chosen;
    while (static_cast<int>(chosen.size()) < size) {
      chosen.insert(static_cast<int>(rng.uniform_int(1, m)));
    }
    const std::vector<int> ids(chosen.begin(), chosen.end());
    for_each_subset(ids, size, [&](const std::vector<int>& subset) { sets.insert(subset); });
  }
  std::vector<AbstractAlternativeSpec> specs;
  for (const auto& members : sets) {
    AbstractAlternativeSpec spec;
    spec.members = members;
    for (int id : members) spec.surplus[id] = surplus.at(id);
    specs.push_back(std::move(spec));
  }
  return make_abstract_family(specs, costs);
}

AlternativeFamily random_disjoint_winner_family(Rng& rng) {
  const int kx = static_cast<int>(rng.uniform_int(2, 3));
  const int ky = static_cast<int>(rng.uniform_int(1, kx - 1));
  const Money sx = rng.uniform_int(ky + 1, 60);
  const Money sy_max = (static_cast<Money>(kx) * sx - 1) / ky;
  const Money sy = rng.uniform_int(sx + 1, sy_max);  // min surplus higher, weighted value lower
  const bool swap_ids = (rng.next_u64() & 1) != 0;
  std::vector<int> x_ids, y_ids;
  for (int j = 1; j <= kx; ++j) x_ids.push_back(swap_ids ? ky + j : j);
  for (int j = 1; j <= ky; ++j) y_ids.push_back(swap_ids ? j : kx + j);

  CostAssignment costs;
  for (int id : x_ids) costs.cost_by_id[id] = rng.uniform_int(0, 20);
  for (int id : y_ids) costs.cost_by_id[id] = rng.uniform_int(0, 20);

  std::vector<AbstractAlternativeSpec> specs;
  AbstractAlternativeSpec x_spec;
  x_spec.members = x_ids;
  for (int id : x_ids) x_spec.surplus[id] = sx;
  specs.push_back(x_spec);
  AbstractAlternativeSpec y_spec;
  y_spec.members = y_ids;
  for (int id : y_ids) y_spec.surplus[id] = sy;
  specs.push_back(y_spec);
  if ((rng.next_u64() & 1) != 0) {
    std::vector<int> sorted = x_ids;
    std::sort(sorted.begin(), sorted.end());
    for_each_subset(sorted, kx - 1, [&](const std::vector<int>& subset) {
      AbstractAlternativeSpec spec;
      spec.members = subset;
      for (int id : subset) spec.surplus[id] = sx;
      specs.push_back(std::move(spec));
    });
  }
  return make_abstract_family(specs, costs);
}

// ---------------------------------------------------------------------------
// Sweeps

GeneratorConfig sweep_instance_config(std::uint64_t seed, int index) {
  GeneratorConfig config;
  config.n = 3 + index % 4;
  config.sigma = 3.0;
  config.capacity = 3;
  config.seed = derive_seed(seed, static_cast<std::uint64_t>(index));
  return config;
}

namespace {

constexpr std::size_t kMaxStoredFailures = 25;

void add_failure(SweepSummary& summary, std::string message) {
  if (summary.failures.size() < kMaxStoredFailures) {
    summary.failures.push_back(std::move(message));
  } else {
    ++summary.counters["suppressed_failures"];
  }
}

std::vector<std::pair<CostPolicy, Mechanism>> policy_mechanism_grid() {
  std::vector<std::pair<CostPolicy, Mechanism>> grid;
  for (CostPolicy policy : {CostPolicy::zero, CostPolicy::direct, CostPolicy::upper_bound}) {
    grid.emplace_back(policy, Mechanism::ums);
    grid.emplace_back(policy, Mechanism::wms);
    grid.emplace_back(policy, Mechanism::vcgs);
  }
  grid.emplace_back(CostPolicy::zero, Mechanism::vcg);
  return grid;
}

std::string case_tag(int index, CostPolicy policy, Mechanism mech) {
  return "instance " + std::to_string(index) + " policy " + cost_policy_name(policy) +
         " mech " + mechanism_name(mech);
}

// The general and shortcut reference-trip definitions may legitimately pick
// different trips; the price check is what validates the general one, so
// disagreements are only counted, never failed.
void note_reference_mismatches(const AuctionOutcome& outcome, SweepSummary& summary) {
  for (const auto& [id, diag] : outcome.diagnostics) {
    if (outcome.mechanism == Mechanism::wms && diag.reference_definitions_differ) {
      ++summary.counters["reference_definition_mismatches"];
    }
  }
}

}  // namespace

SweepSummary strategyproofness_sweep(const SweepOptions& options) {
  SweepSummary summary;
  summary.name = "strategyproofness";
  const int samples = options.samples > 0 ? options.samples : 500;
  for (int index = 0; index < samples; ++index) {
    const GeneratedInstance gen = generate_instance(sweep_instance_config(options.seed, index));
    ++summary.instances;
    std::map<CostPolicy, InstanceBidContext> contexts;
    for (const auto& [policy, mech] : policy_mechanism_grid()) {
      auto it = contexts.find(policy);
      if (it == contexts.end()) {
        it = contexts.emplace(policy, InstanceBidContext(gen.instance, policy)).first;
      }
      const InstanceBidContext& ctx = it->second;
      const std::string tag = case_tag(index, policy, mech);

      const AuctionOutcome truthful = run_mechanism(mech, ctx.truthful_family());
      note_reference_mismatches(truthful, summary);
      for (const auto& [id, price] : truthful.prices) {
        ++summary.checks;
        if (price.is_negative()) {
          add_failure(summary, tag + ": negative price for passenger " + std::to_string(id));
        }
        if (price > Rational(gen.instance.passenger(id).bid)) {
          add_failure(summary,
                      tag + ": winner " + std::to_string(id) + " pays above their bid");
        }
      }

      const auto violations = check_strategyproofness(mech, ctx);
      summary.checks += gen.instance.n;
      summary.counters["deviation_grids"] += gen.instance.n;
      for (const auto& v : violations) {
        ++summary.counters["sp_violations"];
        add_failure(summary, tag + ": passenger " + std::to_string(v.passenger) +
                                 " gains by bidding " + v.bid.to_string() + " (" +
                                 v.truthful_utility.to_string() + " -> " +
                                 v.deviated_utility.to_string() + ")");
      }
    }
  }
  return summary;
}

SweepSummary negative_control_sweep() {
  SweepSummary summary;
  summary.name = "trip-dependent-cost control";
  summary.instances = 1;
  summary.checks = 1;
  const AbstractBidContext harness = trip_dependent_cost_harness();
  const auto violations = check_strategyproofness(Mechanism::wms, harness);
  summary.counters["violations"] = static_cast<long long>(violations.size());
  if (violations.empty()) {
    add_failure(summary,
                "expected at least one profitable deviation under trip-dependent costs");
  }
  return summary;
}

SweepSummary critical_value_sweep(const SweepOptions& options) {
  SweepSummary summary;
  summary.name = "critical values";
  const int samples = options.samples > 0 ? options.samples : 500;
  for (int index = 0; index < samples; ++index) {
    const GeneratedInstance gen = generate_instance(sweep_instance_config(options.seed, index));
    ++summary.instances;
    std::map<CostPolicy, InstanceBidContext> contexts;
    for (const auto& [policy, mech] : policy_mechanism_grid()) {
      auto it = contexts.find(policy);
      if (it == contexts.end()) {
        it = contexts.emplace(policy, InstanceBidContext(gen.instance, policy)).first;
      }
      const InstanceBidContext& ctx = it->second;
      const std::string tag = case_tag(index, policy, mech);
      const AuctionOutcome truthful = run_mechanism(mech, ctx.truthful_family());
      note_reference_mismatches(truthful, summary);
      for (const auto& [id, price] : truthful.prices) {
        ++summary.checks;
        const CriticalValue cv = measure_critical_value(mech, ctx, id);
        if (!cv.can_win) {
          add_failure(summary, tag + ": winner " + std::to_string(id) +
                                   " reported as never winning");
        } else if (cv.value != price) {
          add_failure(summary, tag + ": measured threshold " + cv.value.to_string() +
                                   " != price " + price.to_string() + " for passenger " +
                                   std::to_string(id));
        }
      }
    }
  }
  return summary;
}

SweepSummary bounds_sweep(const SweepOptions& options) {
  SweepSummary summary;
  summary.name = "welfare and profit bounds";
  const int samples = options.samples > 0 ? options.samples : 1000;
  for (int index = 0; index < samples; ++index) {
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(index)));
    const AlternativeFamily family = random_downward_closed_family(rng);
    ++summary.instances;
    const std::string tag = "family " + std::to_string(index);

    int max_size = 0;
    for (const auto& a : family.alternatives) max_size = std::max(max_size, a.size());
    const AuctionOutcome wms = run_wms(family);
    note_reference_mismatches(wms, summary);
    if (const auto ratio = welfare_ratio(wms, family)) {
      ++summary.checks;
      if (*ratio > harmonic_number(max_size) || *ratio > harmonic_number(4)) {
        add_failure(summary, tag + ": weighted winner ratio " + ratio->to_string() +
                                 " above the harmonic bound");
      }
    } else {
      ++summary.counters["undefined_ratio"];
    }

    const ProfitBoundReport bounds = check_profit_bound(wms, family);
    if (bounds.size_bound_applicable) {
      ++summary.checks;
      if (!bounds.size_bound_holds) {
        add_failure(summary, tag + ": surplus profit below welfare / max size (margin " +
                                 bounds.size_bound_margin.to_string() + ")");
      }
    }
    if (bounds.harmonic_bound_applicable) {
      ++summary.checks;
      if (!bounds.harmonic_bound_holds) {
        add_failure(summary, tag + ": surplus profit below best / (H * max size) (margin " +
                                 bounds.harmonic_bound_margin.to_string() + ")");
      }
    }
    if (!bounds.size_bound_applicable) ++summary.counters["bound_hypotheses_unmet"];
    ++summary.checks;
    if (!is_downward_closed(family).closed) {
      add_failure(summary, tag + ": random family unexpectedly not downward closed");
    }

    const AuctionOutcome vcgs = run_vcgs(family);
    if (const auto ratio = welfare_ratio(vcgs, family)) {
      ++summary.checks;
      if (*ratio != Rational(1)) {
        add_failure(summary,
                    tag + ": surplus-welfare maximizer ratio " + ratio->to_string() + " != 1");
      }
    }
  }

  for (int size = 1; size <= 4; ++size) {
    const std::string tag = "tightness size " + std::to_string(size);
    const AlternativeFamily family = harmonic_tightness_family(size, lcm_up_to(size));
    const AuctionOutcome wms = run_wms(family);
    ++summary.checks;
    std::vector<int> expected_winner;
    for (int j = 1; j <= size; ++j) expected_winner.push_back(j);
    if (wms.winner.members != expected_winner) {
      add_failure(summary, tag + ": tie did not resolve to the equal-weight group");
    }
    const auto ratio = welfare_ratio(wms, family);
    if (!ratio || *ratio != harmonic_number(size)) {
      add_failure(summary, tag + ": ratio is not exactly H(" + std::to_string(size) + ")");
    }
  }

  for (Money top : {Money{10}, Money{100}, Money{1000}}) {
    const std::string tag = "gap family top " + std::to_string(top);
    const AlternativeFamily family = welfare_gap_family(top);
    if (is_downward_closed(family).closed) {
      add_failure(summary, tag + ": construction should not be downward closed");
    }
    const AuctionOutcome wms = run_wms(family);
    const auto ratio = welfare_ratio(wms, family);
    ++summary.checks;
    if (!ratio || *ratio != Rational(top + 1, 3)) {
      add_failure(summary, tag + ": ratio != (top+1)/3");
    }
    const ProfitBoundReport bounds = check_profit_bound(wms, family);
    if (bounds.harmonic_bound_applicable) {
      add_failure(summary, tag + ": harmonic bound must not be asserted here");
    }
    if (ratio && *ratio > harmonic_number(2)) ++summary.counters["gap_exceeds_harmonic"];
  }
  return summary;
}

SweepSummary ums_wms_sweep(const SweepOptions& options) {
  SweepSummary summary;
  summary.name = "surplus-profit comparison";
  const int samples = options.samples > 0 ? options.samples : 200;
  for (int index = 0; index < samples; ++index) {
    Rng rng(derive_seed(options.seed ^ 0x5151, static_cast<std::uint64_t>(index)));
    const AlternativeFamily family = random_disjoint_winner_family(rng);
    ++summary.instances;
    ++summary.checks;
    const UmsWmsReport report = check_ums_vs_wms(family);
    if (!report.applicable) {
      add_failure(summary, "family " + std::to_string(index) +
                               ": construction does not meet the comparison hypotheses");
    } else if (!report.holds) {
      add_failure(summary, "family " + std::to_string(index) + ": weighted surplus profit " +
                               report.wms_surplus_profit.to_string() + " < " +
                               report.ums_surplus_profit.to_string());
    }
  }
  return summary;
}

SweepSummary budget_sweep(const SweepOptions& options) {
  SweepSummary summary;
  summary.name = "budget balance";
  const int samples = options.samples > 0 ? options.samples : 200;
  for (int index = 0; index < samples; ++index) {
    const GeneratedInstance gen = generate_instance(sweep_instance_config(options.seed, index));
    ++summary.instances;
    for (CostPolicy policy : {CostPolicy::direct, CostPolicy::upper_bound}) {
      const CostAssignment costs = assign_costs(gen.instance, policy);
      const AlternativeFamily family = enumerate_alternatives(gen.instance, costs, policy);
      for (Mechanism mech : {Mechanism::ums, Mechanism::wms, Mechanism::vcgs}) {
        ++summary.checks;
        const BudgetReport report = check_budget_balance(run_mechanism(mech, family));
        if (!report.covered || !report.chain_holds) {
          add_failure(summary, case_tag(index, policy, mech) + ": price sum " +
                                   report.price_sum.to_string() + " does not cover cost " +
                                   std::to_string(report.winner_cost));
        }
      }
    }
    const CostAssignment zero_costs = assign_costs(gen.instance, CostPolicy::zero);
    const AlternativeFamily zero_family =
        enumerate_alternatives(gen.instance, zero_costs, CostPolicy::zero);
    if (run_wms(zero_family).metrics.profit.is_negative()) {
      ++summary.counters["wms_zero_deficits"];
    }
  }

  const Instance deficit = vcg_deficit_instance();
  const CostAssignment zero_costs = assign_costs(deficit, CostPolicy::zero);
  const AlternativeFamily family = enumerate_alternatives(deficit, zero_costs, CostPolicy::zero);
  const AuctionOutcome outcome = run_vcg(family);
  ++summary.checks;
  if (outcome.metrics.profit.is_negative()) {
    summary.counters["vcg_deficit_micro"] = -outcome.metrics.profit.num();
  } else {
    add_failure(summary, "crafted shared-ride instance failed to produce a pivot deficit");
  }
  return summary;
}

}  // namespace rideshare
