#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rideshare/auctions.hpp"
#include "rideshare/generator.hpp"

namespace rideshare {

using BigRational = boost::multiprecision::cpp_rational;

// A variant is one auction run on one cost policy. The plain pivot auction on
// the zero-cost family doubles as the normalizer for every other variant.
enum class Variant { vcg, wms_zero, vcgs_direct, wms_direct, vcgs_upper, wms_upper };

const char* variant_name(Variant v);
Mechanism variant_mechanism(Variant v);
CostPolicy variant_policy(Variant v);
std::vector<Variant> all_variants();

// Comma-separated variant names, or "all". Throws std::invalid_argument on an
// unknown name.
std::vector<Variant> parse_variants(const std::string& text);

// Exact running sums; mean and variance come out as exact rationals, only the
// final standard deviation is rounded to double.
struct ExactStats {
  BigRational sum;
  BigRational sum_sq;
  long long count = 0;

  void add(const BigRational& x);
  BigRational mean() const;
  double stddev() const;
};

struct TimeStats {
  double sum_ms = 0.0;
  double sum_sq_ms = 0.0;
  long long count = 0;

  void add(double ms);
  double mean() const;
  double stddev() const;
};

struct ExperimentReport {
  std::vector<Variant> variants;
  int requested = 0;
  int completed = 0;              // instances that produced outcomes
  int excluded_zero_welfare = 0;  // completed but skipped: normalizer was zero
  std::vector<std::string> errors;
  std::map<Variant, std::map<std::string, ExactStats>> stats;
  std::map<Variant, TimeStats> run_times;  // mechanism run only, not routing
  double total_wall_ms = 0.0;
};

struct BatchOptions {
  std::vector<Variant> variants = all_variants();
  int threads = 1;
};

using InstanceSupplier = std::function<Instance(int)>;

// Runs every requested variant on `count` supplied instances. Workers claim
// indices from an atomic counter; aggregation merges results serially in
// index order with exact arithmetic, so reports do not depend on the thread
// count. Per-instance failures are captured as errors, not thrown.
ExperimentReport run_batch(int count, const InstanceSupplier& supplier,
                           const BatchOptions& options = {});

// Metric rows emitted per variant, in order: norm_welfare, norm_profit,
// norm_surplus_welfare, norm_surplus_profit, served. Normalization divides by
// the pivot auction's welfare on the zero-cost family of the same instance.
const std::vector<std::string>& metric_names();

// Exact decimal when the reduced denominator is 2^a * 5^b, otherwise
// "num/den=<12 significant digits>".
std::string format_exact(const BigRational& value);
std::string format_double(double value);

// CSV "variant,metric,mean,std,count". With include_times, per-variant run
// times and a total wall-time row are appended; without it the bytes are a
// pure function of the instance stream.
std::string report_csv(const ExperimentReport& report, bool include_times);

// CSV "n,sigma,variant,metric,mean,std,count" over the cross product of the
// two lists, `count` generated instances per cell. Contains no timing rows,
// so the bytes are identical across runs and thread counts.
std::string sweep_csv(const std::vector<int>& n_list, const std::vector<double>& sigma_list,
                      int count, std::uint64_t seed, int threads);

// The four-trip worked example exercised in the documentation and tests.
AlternativeFamily worked_example_family();

struct DemoResult {
  std::string transcript;
  bool ok = false;
  AuctionOutcome ums;
  AuctionOutcome wms;
  AuctionOutcome vcgs;
  AlternativeFamily family;
};

// Runs the three budget-balanced auctions on the worked example and checks
// every winner, price and profit against the hand-computed values.
DemoResult run_demo();

}  // namespace rideshare
