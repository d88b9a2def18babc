#include "rideshare/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rideshare/rng.hpp"

namespace rideshare {

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::vcg: return "VCG";
    case Variant::wms_zero: return "WMS-Zero";
    case Variant::vcgs_direct: return "VCGs-Direct";
    case Variant::wms_direct: return "WMS-Direct";
    case Variant::vcgs_upper: return "VCGs-UB";
    case Variant::wms_upper: return "WMS-UB";
  }
  return "?";
}

Mechanism variant_mechanism(Variant v) {
  switch (v) {
    case Variant::vcg: return Mechanism::vcg;
    case Variant::wms_zero:
    case Variant::wms_direct:
    case Variant::wms_upper: return Mechanism::wms;
    case Variant::vcgs_direct:
    case Variant::vcgs_upper: return Mechanism::vcgs;
  }
  return Mechanism::vcg;
}

CostPolicy variant_policy(Variant v) {
  switch (v) {
    case Variant::vcg:
    case Variant::wms_zero: return CostPolicy::zero;
    case Variant::vcgs_direct:
    case Variant::wms_direct: return CostPolicy::direct;
    case Variant::vcgs_upper:
    case Variant::wms_upper: return CostPolicy::upper_bound;
  }
  return CostPolicy::zero;
}

std::vector<Variant> all_variants() {
  return {Variant::vcg,        Variant::wms_zero,  Variant::vcgs_direct,
          Variant::wms_direct, Variant::vcgs_upper, Variant::wms_upper};
}

std::vector<Variant> parse_variants(const std::string& text) {
  std::vector<Variant> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const auto begin = item.find_first_not_of(" \t");
    const auto end = item.find_last_not_of(" \t");
    if (begin == std::string::npos) continue;
    item = item.substr(begin, end - begin + 1);
    if (item == "all") {
      for (Variant v : all_variants()) out.push_back(v);
      continue;
    }
    bool found = false;
    for (Variant v : all_variants()) {
      if (item == variant_name(v)) {
        out.push_back(v);
        found = true;
        break;
      }
    }
    if (!found) throw std::invalid_argument("unknown variant: " + item);
  }
  if (out.empty()) throw std::invalid_argument("no variants selected");
  return out;
}

void ExactStats::add(const BigRational& x) {
  sum += x;
  sum_sq += x * x;
  ++count;
}

BigRational ExactStats::mean() const {
  if (count == 0) return BigRational(0);
  return sum / count;
}

double ExactStats::stddev() const {
  if (count == 0) return 0.0;
  const BigRational m = mean();
  const BigRational variance = sum_sq / count - m * m;
  const double v = variance.convert_to<double>();
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

void TimeStats::add(double ms) {
  sum_ms += ms;
  sum_sq_ms += ms * ms;
  ++count;
}

double TimeStats::mean() const { return count == 0 ? 0.0 : sum_ms / count; }

double TimeStats::stddev() const {
  if (count == 0) return 0.0;
  const double m = mean();
  const double v = sum_sq_ms / count - m * m;
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names = {
      "norm_welfare", "norm_profit", "norm_surplus_welfare", "norm_surplus_profit", "served"};
  return names;
}

namespace {

struct VariantRecord {
  OutcomeMetrics metrics;
  double run_ms = 0.0;
};

struct InstanceResult {
  bool ok = false;
  std::string error;
  Money normalizer = 0;
  std::map<Variant, VariantRecord> records;
};

BigRational to_big(const Rational& r) { return BigRational(r.num()) / r.den(); }

double ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

InstanceResult run_one(int index, const InstanceSupplier& supplier,
                       const std::vector<Variant>& variants) {
  InstanceResult result;
  try {
    const Instance inst = supplier(index);
    const RouteTable table = build_route_table(inst);
    std::map<CostPolicy, AlternativeFamily> families;
    const auto family_for = [&](CostPolicy policy) -> const AlternativeFamily& {
      auto it = families.find(policy);
      if (it == families.end()) {
        it = families
                 .emplace(policy,
                          enumerate_alternatives(inst, assign_costs(inst, policy), policy, &table))
                 .first;
      }
      return it->second;
    };

    // The pivot auction on the zero-cost family defines the normalizer even
    // when its variant was not requested.
    const AlternativeFamily& zero_family = family_for(CostPolicy::zero);
    const auto vcg_start = std::chrono::steady_clock::now();
    const AuctionOutcome vcg = run_vcg(zero_family);
    const double vcg_ms = ms_since(vcg_start);
    result.normalizer = welfare_value(vcg.winner, true);

    for (Variant v : variants) {
      if (v == Variant::vcg) {
        result.records[v] = {vcg.metrics, vcg_ms};
        continue;
      }
      const AlternativeFamily& family = family_for(variant_policy(v));
      const auto start = std::chrono::steady_clock::now();
      const AuctionOutcome out = run_mechanism(variant_mechanism(v), family);
      result.records[v] = {out.metrics, ms_since(start)};
    }
    result.ok = true;
  } catch (const std::exception& e) {
    result.error = "instance " + std::to_string(index) + ": " + e.what();
  }
  return result;
}

}  // namespace

ExperimentReport run_batch(int count, const InstanceSupplier& supplier,
                           const BatchOptions& options) {
  ExperimentReport report;
  report.variants = options.variants;
  report.requested = count;
  const auto start = std::chrono::steady_clock::now();

  std::vector<InstanceResult> results(static_cast<std::size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      results[static_cast<std::size_t>(i)] = run_one(i, supplier, options.variants);
    }
  };
  const int threads = std::max(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Serial merge in index order: the aggregate is independent of the number
  // of worker threads.
  for (const InstanceResult& r : results) {
    if (!r.ok) {
      if (report.errors.size() < 20) report.errors.push_back(r.error);
      continue;
    }
    ++report.completed;
    if (r.normalizer == 0) {
      ++report.excluded_zero_welfare;
      continue;
    }
    const BigRational norm(r.normalizer);
    for (const auto& [variant, record] : r.records) {
      auto& stats = report.stats[variant];
      stats["norm_welfare"].add(to_big(record.metrics.welfare) / norm);
      stats["norm_profit"].add(to_big(record.metrics.profit) / norm);
      stats["norm_surplus_welfare"].add(to_big(record.metrics.surplus_welfare) / norm);
      stats["norm_surplus_profit"].add(to_big(record.metrics.surplus_profit) / norm);
      stats["served"].add(BigRational(record.metrics.passengers_served));
      report.run_times[variant].add(record.run_ms);
    }
  }
  report.total_wall_ms = ms_since(start);
  return report;
}

std::string format_exact(const BigRational& value) {
  using boost::multiprecision::cpp_int;
  const cpp_int num = boost::multiprecision::numerator(value);
  const cpp_int den = boost::multiprecision::denominator(value);
  cpp_int rest = den;
  int twos = 0;
  int fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest == 1) {
    const int digits = twos > fives ? twos : fives;
    cpp_int scaled = abs(num);
    for (int i = twos; i < digits; ++i) scaled *= 2;
    for (int i = fives; i < digits; ++i) scaled *= 5;
    std::string text = scaled.str();
    if (digits > 0) {
      if (static_cast<int>(text.size()) <= digits) {
        text.insert(0, static_cast<std::size_t>(digits + 1) - text.size(), '0');
      }
      text.insert(text.size() - static_cast<std::size_t>(digits), ".");
      while (text.back() == '0') text.pop_back();
      if (text.back() == '.') text.pop_back();
    }
    if (num < 0 && text != "0") text.insert(0, "-");
    return text;
  }
  char approx[64];
  std::snprintf(approx, sizeof(approx), "%.12g", value.convert_to<double>());
  return num.str() + "/" + den.str() + "=" + approx;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

namespace {

void append_report_rows(std::ostream& out, const ExperimentReport& report, bool include_times,
                        const std::string& prefix) {
  for (Variant v : report.variants) {
    const auto stats_it = report.stats.find(v);
    for (const std::string& metric : metric_names()) {
      out << prefix << variant_name(v) << ',' << metric << ',';
      const ExactStats* s = nullptr;
      if (stats_it != report.stats.end()) {
        const auto metric_it = stats_it->second.find(metric);
        if (metric_it != stats_it->second.end()) s = &metric_it->second;
      }
      if (s != nullptr && s->count > 0) {
        out << format_exact(s->mean()) << ',' << format_double(s->stddev()) << ',' << s->count;
      } else {
        out << ",,0";
      }
      out << '\n';
    }
    if (include_times) {
      const auto time_it = report.run_times.find(v);
      out << prefix << variant_name(v) << ",run_ms,";
      if (time_it != report.run_times.end() && time_it->second.count > 0) {
        out << format_double(time_it->second.mean()) << ','
            << format_double(time_it->second.stddev()) << ',' << time_it->second.count;
      } else {
        out << ",,0";
      }
      out << '\n';
    }
  }
  if (include_times) {
    out << prefix << "all,total_wall_ms," << format_double(report.total_wall_ms) << ",0,"
        << report.completed << '\n';
  }
}

}  // namespace

std::string report_csv(const ExperimentReport& report, bool include_times) {
  std::ostringstream out;
  out << "variant,metric,mean,std,count\n";
  append_report_rows(out, report, include_times, "");
  return out.str();
}

std::string sweep_csv(const std::vector<int>& n_list, const std::vector<double>& sigma_list,
                      int count, std::uint64_t seed, int threads) {
  std::ostringstream out;
  out << "n,sigma,variant,metric,mean,std,count\n";
  for (int n : n_list) {
    for (double sigma : sigma_list) {
      const std::uint64_t cell_seed = derive_seed(
          derive_seed(seed, static_cast<std::uint64_t>(n)),
          static_cast<std::uint64_t>(std::llround(sigma * 1000.0)));
      const InstanceSupplier supplier = [n, sigma, cell_seed](int index) {
        GeneratorConfig config;
        config.n = n;
        config.sigma = sigma;
        config.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(index));
        return generate_instance(config).instance;
      };
      BatchOptions options;
      options.threads = threads;
      const ExperimentReport report = run_batch(count, supplier, options);
      const std::string prefix =
          std::to_string(n) + "," + format_double(sigma) + ",";
      append_report_rows(out, report, /*include_times=*/false, prefix);
    }
  }
  return out.str();
}

AlternativeFamily worked_example_family() {
  CostAssignment costs;
  costs.cost_by_id = {{1, 4}, {2, 4}, {3, 4}, {4, 6}};
  std::vector<AbstractAlternativeSpec> specs(4);
  specs[0].members = {1, 2};
  specs[0].surplus = {{1, 10}, {2, 8}};
  specs[0].cost = 5;
  specs[1].members = {1, 3, 4};
  specs[1].surplus = {{1, 10}, {3, 4}, {4, 4}};
  specs[1].cost = 7;
  specs[2].members = {1};
  specs[2].surplus = {{1, 10}};
  specs[2].cost = 3;
  specs[3].members = {2};
  specs[3].surplus = {{2, 8}};
  specs[3].cost = 3;
  return make_abstract_family(specs, costs);
}

namespace {

std::string id_list(const std::vector<int>& ids) {
  std::string out = "{";
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) out += ",";
    out += std::to_string(ids[k]);
  }
  return out + "}";
}

bool price_equals(const AuctionOutcome& outcome, int id, const Rational& expected) {
  const auto it = outcome.prices.find(id);
  return it != outcome.prices.end() && it->second == expected;
}

}  // namespace

DemoResult run_demo() {
  DemoResult demo;
  demo.family = worked_example_family();
  demo.ums = run_ums(demo.family);
  demo.wms = run_wms(demo.family);
  demo.vcgs = run_vcgs(demo.family);

  std::ostringstream out;
  bool ok = true;
  const auto check = [&](const std::string& label, bool pass) {
    ok = ok && pass;
    out << (pass ? "  [ok]   " : "  [FAIL] ") << label << '\n';
  };

  out << "Worked example: 4 passengers, 4 candidate trips (abstract money units)\n";
  for (const Alternative& a : demo.family.alternatives) {
    if (a.is_null()) continue;
    out << "  trip " << id_list(a.members) << " cost " << a.cost << ":";
    for (int id : a.members) {
      out << "  p" << id << "(cost " << a.member_cost.at(id) << ", surplus " << a.surplus.at(id)
          << ", bid " << a.member_cost.at(id) + a.surplus.at(id) << ")";
    }
    out << '\n';
  }

  const auto describe = [&](const AuctionOutcome& o) {
    out << mechanism_name(o.mechanism) << ": winner " << id_list(o.winner.members) << ", prices";
    if (o.prices.empty()) out << " none";
    for (const auto& [id, price] : o.prices) out << "  p" << id << "=" << price.to_string();
    out << ", profit " << o.metrics.profit.to_string() << ", surplus profit "
        << o.metrics.surplus_profit.to_string() << '\n';
  };
  out << '\n';
  describe(demo.ums);
  describe(demo.wms);
  describe(demo.vcgs);
  out << '\n';

  const auto weighted = [&](std::vector<int> members) {
    const Alternative* a = demo.family.find(members);
    return a == nullptr ? Money{-1} : weighted_min_surplus_value(*a);
  };
  check("weighted objectives are 16, 12, 10, 8", weighted({1, 2}) == 16 && weighted({1, 3, 4}) == 12 &&
                                                     weighted({1}) == 10 && weighted({2}) == 8);

  check("min-surplus winner is {1}", demo.ums.winner.members == std::vector<int>{1});
  check("min-surplus price of passenger 1 is 12", price_equals(demo.ums, 1, Rational(12)));
  check("min-surplus surplus profit is 8", demo.ums.metrics.surplus_profit == Rational(8));

  check("weighted winner is {1,2}", demo.wms.winner.members == (std::vector<int>{1, 2}));
  check("weighted price of passenger 1 is 20/3", price_equals(demo.wms, 1, Rational(20, 3)));
  check("weighted price of passenger 2 is 10", price_equals(demo.wms, 2, Rational(10)));
  check("weighted surplus profit is 26/3",
        demo.wms.metrics.surplus_profit == Rational(26, 3));

  check("surplus-pivot winner is {1,3,4}", demo.vcgs.winner.members == (std::vector<int>{1, 3, 4}));
  check("surplus-pivot prices are 4, 8, 10",
        price_equals(demo.vcgs, 1, Rational(4)) && price_equals(demo.vcgs, 3, Rational(8)) &&
            price_equals(demo.vcgs, 4, Rational(10)));
  check("surplus-pivot surplus profit is 8", demo.vcgs.metrics.surplus_profit == Rational(8));

  const auto covers = [&](const AuctionOutcome& o) {
    Rational sum(0);
    for (const auto& [id, price] : o.prices) sum += price;
    return sum >= Rational(o.winner.cost);
  };
  check("every auction covers its trip cost",
        covers(demo.ums) && covers(demo.wms) && covers(demo.vcgs));

  demo.transcript = out.str();
  demo.ok = ok;
  return demo;
}

}  // namespace rideshare
