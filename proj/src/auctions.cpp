#include "rideshare/auctions.hpp"

#include <algorithm>
#include <stdexcept>

namespace rideshare {

const char* mechanism_name(Mechanism mech) {
  switch (mech) {
    case Mechanism::ums: return "ums";
    case Mechanism::wms: return "wms";
    case Mechanism::vcg: return "vcg";
    case Mechanism::vcgs: return "vcgs";
  }
  throw std::logic_error("unknown mechanism");
}

Money min_surplus_value(const Alternative& a) { return a.min_surplus(); }

Money weighted_min_surplus_value(const Alternative& a) {
  return static_cast<Money>(a.size()) * a.min_surplus();
}

Money surplus_welfare_value(const Alternative& a) { return a.surplus_sum(); }

Money welfare_value(const Alternative& a, bool with_trip_cost) {
  return a.bid_sum() - (with_trip_cost ? a.cost : 0);
}

namespace {

template <class Obj>
std::size_t select_winner(const AlternativeFamily& family, Obj&& obj) {
  if (family.alternatives.empty()) throw std::invalid_argument("empty alternative family");
  std::size_t best = 0;
  Money best_obj = obj(family.alternatives[0]);
  for (std::size_t k = 1; k < family.alternatives.size(); ++k) {
    const Money o = obj(family.alternatives[k]);
    if (beats(family.alternatives[k], o, family.alternatives[best], best_obj)) {
      best = k;
      best_obj = o;
    }
  }
  return best;
}

}  // namespace

OutcomeMetrics surplus_metrics(const AuctionOutcome& outcome) {
  OutcomeMetrics m;
  m.passengers_served = outcome.winner.size();
  Rational price_sum = 0;
  Rational profit_above_cost = 0;
  for (const auto& [id, price] : outcome.prices) {
    price_sum += price;
    profit_above_cost += price - Rational(outcome.winner.member_cost.at(id));
  }
  m.profit = price_sum - Rational(outcome.winner.cost);
  m.welfare = Rational(outcome.winner.bid_sum() - outcome.winner.cost);
  m.surplus_welfare = Rational(outcome.winner.surplus_sum());
  m.surplus_profit = profit_above_cost;
  return m;
}

AuctionOutcome run_ums(const AlternativeFamily& family) {
  AuctionOutcome out;
  out.mechanism = Mechanism::ums;
  out.winner = family.alternatives[select_winner(family, min_surplus_value)];
  for (int i : out.winner.members) {
    Money best_other = 0;  // the null trip never contains i and scores 0
    for (const auto& a : family.alternatives) {
      if (a.contains(i)) continue;
      best_other = std::max(best_other, min_surplus_value(a));
    }
    WinnerDiagnostics diag;
    diag.runner_up_min_surplus = best_other;
    out.diagnostics[i] = diag;
    out.prices[i] = Rational(out.winner.member_cost.at(i) + best_other);
  }
  out.metrics = surplus_metrics(out);
  return out;
}

AuctionOutcome run_wms(const AlternativeFamily& family) {
  AuctionOutcome out;
  out.mechanism = Mechanism::wms;
  out.winner = family.alternatives[select_winner(family, weighted_min_surplus_value)];
  for (int i : out.winner.members) {
    WinnerDiagnostics diag;
    Money wm_star = 0;  // the null trip never contains i and scores 0
    for (const auto& a : family.alternatives) {
      if (a.contains(i)) continue;
      wm_star = std::max(wm_star, weighted_min_surplus_value(a));
    }
    diag.wm_star = wm_star;

    // Reference trip: largest A containing i with |A| > 1 whose other members
    // can each absorb wm_star / |A| (wm_star <= |A| * min surplus among them).
    // On an exact tie A must additionally win the priority tie against every
    // trip without i whose weighted value equals wm_star. Fallback: {i}.
    const Alternative* ref = nullptr;
    for (const auto& a : family.alternatives) {
      if (a.size() < 2 || !a.contains(i)) continue;
      const Money bound = static_cast<Money>(a.size()) * a.min_surplus_excluding(i);
      if (wm_star > bound) continue;
      if (wm_star == bound) {
        bool wins_ties = true;
        for (const auto& rival : family.alternatives) {
          if (rival.contains(i) || weighted_min_surplus_value(rival) != wm_star) continue;
          if (!beats(a, 0, rival, 0)) {
            wins_ties = false;
            break;
          }
        }
        if (!wins_ties) continue;
      }
      if (!ref || beats(a, 0, *ref, 0)) ref = &a;
    }
    if (!ref) {
      const std::vector<int> solo{i};
      ref = family.find(solo);
      if (!ref) throw std::logic_error("wms: winner has no reference trip");
    }
    diag.reference_trip = ref->members;
    diag.reference_size = ref->size();

    // Cross-check against the shortcut definition: the largest trip containing
    // i whose weighted value reaches wm_star. A divergence is surfaced in the
    // diagnostics rather than silently accepted.
    int simple = 0;
    for (const auto& a : family.alternatives) {
      if (!a.contains(i) || weighted_min_surplus_value(a) < wm_star) continue;
      simple = std::max(simple, a.size());
    }
    diag.reference_size_simple = simple;
    diag.reference_definitions_differ = (simple != diag.reference_size);

    out.prices[i] = Rational(out.winner.member_cost.at(i)) + Rational(wm_star, ref->size());
    out.diagnostics[i] = diag;
  }
  out.metrics = surplus_metrics(out);
  return out;
}

AuctionOutcome run_vcg(const AlternativeFamily& family, const VcgOptions& options) {
  AuctionOutcome out;
  out.mechanism = Mechanism::vcg;
  const auto value = [&](const Alternative& a) {
    return welfare_value(a, options.include_driver_cost);
  };
  out.winner = family.alternatives[select_winner(family, value)];
  for (int i : out.winner.members) {
    const auto value_without = [&](const Alternative& a) {
      Money v = value(a);
      if (a.contains(i)) v -= a.member_cost.at(i) + a.surplus.at(i);
      return v;
    };
    Money best = value_without(family.alternatives[0]);
    for (const auto& a : family.alternatives) best = std::max(best, value_without(a));
    WinnerDiagnostics diag;
    diag.pivot_best = best;
    diag.pivot_winner = value_without(out.winner);
    out.prices[i] = Rational(best - diag.pivot_winner);
    out.diagnostics[i] = diag;
  }
  out.metrics = surplus_metrics(out);
  return out;
}

AuctionOutcome run_vcgs(const AlternativeFamily& family) {
  AuctionOutcome out;
  out.mechanism = Mechanism::vcgs;
  out.winner = family.alternatives[select_winner(family, surplus_welfare_value)];
  for (int i : out.winner.members) {
    const auto others = [&](const Alternative& a) {
      return a.surplus_sum() - (a.contains(i) ? a.surplus.at(i) : 0);
    };
    Money best = 0;
    for (const auto& a : family.alternatives) best = std::max(best, others(a));
    WinnerDiagnostics diag;
    diag.pivot_best = best;
    diag.pivot_winner = others(out.winner);
    out.prices[i] = Rational(out.winner.member_cost.at(i) + best - diag.pivot_winner);
    out.diagnostics[i] = diag;
  }
  out.metrics = surplus_metrics(out);
  return out;
}

AuctionOutcome run_mechanism(Mechanism mech, const AlternativeFamily& family) {
  switch (mech) {
    case Mechanism::ums: return run_ums(family);
    case Mechanism::wms: return run_wms(family);
    case Mechanism::vcg: return run_vcg(family);
    case Mechanism::vcgs: return run_vcgs(family);
  }
  throw std::logic_error("unknown mechanism");
}

bool in_winner(const AuctionOutcome& outcome, int id) { return outcome.winner.contains(id); }

namespace {

nlohmann::ordered_json rational_json(const Rational& r) {
  return {{"num", r.num()}, {"den", r.den()}};
}

}  // namespace

nlohmann::ordered_json outcome_to_json(const AuctionOutcome& outcome) {
  nlohmann::ordered_json doc;
  doc["mechanism"] = mechanism_name(outcome.mechanism);
  doc["winner"] = {{"members", outcome.winner.members}, {"cost", outcome.winner.cost}};
  nlohmann::ordered_json prices = nlohmann::ordered_json::object();
  for (const auto& [id, price] : outcome.prices) prices[std::to_string(id)] = rational_json(price);
  doc["prices"] = prices;
  nlohmann::ordered_json diags = nlohmann::ordered_json::object();
  for (const auto& [id, diag] : outcome.diagnostics) {
    nlohmann::ordered_json dj;
    switch (outcome.mechanism) {
      case Mechanism::ums:
        dj["runner_up_min_surplus"] = diag.runner_up_min_surplus;
        break;
      case Mechanism::wms:
        dj["wm_star"] = diag.wm_star;
        dj["reference_trip"] = diag.reference_trip;
        dj["reference_size"] = diag.reference_size;
        dj["reference_size_simple"] = diag.reference_size_simple;
        dj["reference_definitions_differ"] = diag.reference_definitions_differ;
        break;
      case Mechanism::vcg:
      case Mechanism::vcgs:
        dj["pivot_best"] = diag.pivot_best;
        dj["pivot_winner"] = diag.pivot_winner;
        break;
    }
    diags[std::to_string(id)] = std::move(dj);
  }
  doc["diagnostics"] = diags;
  doc["metrics"] = {{"profit", rational_json(outcome.metrics.profit)},
                    {"welfare", rational_json(outcome.metrics.welfare)},
                    {"surplus_welfare", rational_json(outcome.metrics.surplus_welfare)},
                    {"surplus_profit", rational_json(outcome.metrics.surplus_profit)},
                    {"passengers_served", outcome.metrics.passengers_served}};
  return doc;
}

}  // namespace rideshare
