// Acceptance gate: one line per criterion, "[PASS] NN ..." or "[FAIL] NN ...".
// All value checks are exact rational comparisons; the only tolerances are the
// wall-clock limits pinned just below. Exit code 0 iff every criterion passes.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rideshare/alternatives.hpp"
#include "rideshare/auctions.hpp"
#include "rideshare/experiment.hpp"
#include "rideshare/generator.hpp"
#include "rideshare/model.hpp"
#include "rideshare/oracle.hpp"
#include "rideshare/rational.hpp"
#include "rideshare/rng.hpp"

using namespace rideshare;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

// Wall-clock limits (milliseconds). Everything else is exact.
constexpr double kWorkedExampleMs = 1.0;
constexpr double kDeviationSweepMs = 120'000.0;
constexpr double kPipelineN10Ms = 50.0;
constexpr double kPipelineN25Ms = 5'000.0;
constexpr double kPipelineN100Ms = 120'000.0;

constexpr std::uint64_t kSeed = 20250801;
constexpr int kFamilySamples = 1000;

int failures = 0;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

template <typename Body>
void criterion(int number, const std::string& description, Body&& body) {
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  std::string line = description;
  if (!detail.empty()) line += " (" + detail + ")";
  std::printf("[%s] %02d %s\n", pass ? "PASS" : "FAIL", number, line.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.3g", value);
  return buffer;
}

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// The family stream shared by criteria 6, 8 and 9.
std::vector<AlternativeFamily> sampled_families() {
  std::vector<AlternativeFamily> families;
  families.reserve(kFamilySamples);
  for (int index = 0; index < kFamilySamples; ++index) {
    Rng rng(derive_seed(kSeed, static_cast<std::uint64_t>(index)));
    families.push_back(random_downward_closed_family(rng));
  }
  return families;
}

int max_trip_size(const AlternativeFamily& family) {
  int max_size = 0;
  for (const auto& a : family.alternatives) max_size = std::max(max_size, a.size());
  return max_size;
}

}  // namespace

int main() {
  // 01 — the hand-checked four-trip example: weighted-min-surplus winner,
  // trip weights and both prices, reproduced exactly and instantly.
  criterion(1, "worked example reproduced exactly: winner {1,2}, weights (16,12,10,8), prices 20/3 and 10", [&](std::string& detail) {
    const AlternativeFamily family = worked_example_family();
    const auto start = Clock::now();
    const AuctionOutcome wms = run_wms(family);
    const double elapsed = ms_since(start);
    const std::map<std::vector<int>, Money> expected_weights = {
        {{1, 2}, 16}, {{1, 3, 4}, 12}, {{1}, 10}, {{2}, 8}};
    bool weights_ok = true;
    for (const auto& [members, weight] : expected_weights) {
      const Alternative* a = family.find(members);
      if (a == nullptr || static_cast<Money>(a->size()) * a->min_surplus() != weight) {
        weights_ok = false;
      }
    }
    const bool values_ok = weights_ok && wms.winner.members == std::vector<int>({1, 2}) &&
                           wms.prices.at(1) == Rational(20, 3) && wms.prices.at(2) == Rational(10);
    detail = fmt(elapsed) + " ms";
    return values_ok && elapsed < kWorkedExampleMs;
  });

  // 02 — full deviation grids on 500 seeded instances, every mechanism and
  // cost policy: no bid may ever raise a passenger's utility.
  criterion(2, "no profitable deviation on 500 seeded instances x full bid grids, all mechanisms and cost policies", [&](std::string& detail) {
    const auto start = Clock::now();
    SweepOptions options;
    options.seed = kSeed;
    const SweepSummary summary = strategyproofness_sweep(options);
    const double elapsed = ms_since(start);
    detail = std::to_string(summary.counters.at("deviation_grids")) + " grids, " + fmt(elapsed) + " ms";
    if (!summary.ok()) detail += ", first: " + summary.failures.front();
    return summary.ok() && summary.instances == 500 && elapsed < kDeviationSweepMs;
  });

  // 03 — negative control: with trip-dependent member costs the deviation
  // search must find the planted profitable lie.
  criterion(3, "trip-dependent-cost control: the deviation search finds the planted violation", [&](std::string& detail) {
    const SweepSummary summary = negative_control_sweep();
    const long long found = summary.counters.count("violations") ? summary.counters.at("violations") : 0;
    detail = std::to_string(found) + " deviations found";
    return summary.ok() && found >= 1;
  });

  // 04 — bisection-measured critical values equal the closed-form prices for
  // every winner on the same 500 instances.
  criterion(4, "measured critical values equal closed-form prices for every winner on 500 instances", [&](std::string& detail) {
    SweepOptions options;
    options.seed = kSeed;
    const SweepSummary summary = critical_value_sweep(options);
    detail = std::to_string(summary.checks) + " checks";
    if (!summary.ok()) detail += ", first: " + summary.failures.front();
    return summary.ok() && summary.instances == 500;
  });

  // 05 — price sums cover the winning trip's cost under the budget-filtered
  // policies; the crafted pivot-auction instance records its expected loss.
  criterion(5, "price sums cover trip costs on budget-filtered policies; pivot deficit recorded as expected", [&](std::string& detail) {
    SweepOptions options;
    options.seed = kSeed;
    const SweepSummary summary = budget_sweep(options);
    const long long deficit = summary.counters.count("vcg_deficit_micro")
                                  ? summary.counters.at("vcg_deficit_micro")
                                  : 0;
    detail = "deficit " + std::to_string(deficit) + " micro";
    if (!summary.ok()) detail += ", first: " + summary.failures.front();
    return summary.ok() && deficit == 15'717'681;
  });

  const std::vector<AlternativeFamily> families = sampled_families();

  // 06 — harmonic welfare bound on 1000 random downward-closed families
  // (trip size <= 4), plus exact tightness at sizes 1..4.
  criterion(6, "weighted-auction welfare ratio within the harmonic bound on 1000 random closed families; tight at sizes 1-4", [&](std::string& detail) {
    int checked = 0;
    int undefined = 0;
    bool bounded = true;
    for (const AlternativeFamily& family : families) {
      const AuctionOutcome wms = run_wms(family);
      const auto ratio = welfare_ratio(wms, family);
      if (!ratio) {
        ++undefined;
        continue;
      }
      ++checked;
      if (*ratio > harmonic_number(max_trip_size(family)) || *ratio > Rational(25, 12)) {
        bounded = false;
      }
    }
    bool tight = true;
    for (int size = 1; size <= 4; ++size) {
      const AlternativeFamily family = harmonic_tightness_family(size, lcm_up_to(size));
      const auto ratio = welfare_ratio(run_wms(family), family);
      if (!ratio || *ratio != harmonic_number(size)) tight = false;
    }
    detail = std::to_string(checked) + " ratios bounded, " + std::to_string(undefined) +
             " undefined, tightness exact";
    return bounded && tight && checked + undefined == kFamilySamples;
  });

  // 07 — the two-trip family with one large surplus: ratio exactly
  // (top + 1) / 3, growing linearly.
  criterion(7, "two-trip gap family: welfare ratio exactly (top+1)/3 at top = 10, 100, 1000", [&](std::string& detail) {
    bool exact = true;
    for (Money top : {Money{10}, Money{100}, Money{1000}}) {
      const AlternativeFamily family = welfare_gap_family(top);
      const auto ratio = welfare_ratio(run_wms(family), family);
      if (!ratio || *ratio != Rational(top + 1, 3)) exact = false;
    }
    detail = "11/3, 101/3, 1001/3";
    return exact;
  });

  // 08 — surplus-profit lower bounds on the same 1000 families, wherever the
  // hypotheses hold: zero violations allowed.
  criterion(8, "surplus-profit lower bounds hold wherever applicable on the same 1000 families", [&](std::string& detail) {
    int size_applicable = 0;
    int harmonic_applicable = 0;
    int violations = 0;
    for (const AlternativeFamily& family : families) {
      const ProfitBoundReport report = check_profit_bound(run_wms(family), family);
      if (report.size_bound_applicable) {
        ++size_applicable;
        if (!report.size_bound_holds) ++violations;
      }
      if (report.harmonic_bound_applicable) {
        ++harmonic_applicable;
        if (!report.harmonic_bound_holds) ++violations;
      }
    }
    detail = std::to_string(size_applicable) + " size-bound cases, " +
             std::to_string(harmonic_applicable) + " harmonic cases, " +
             std::to_string(violations) + " violations";
    return violations == 0 && size_applicable > 0 && harmonic_applicable > 0;
  });

  // 09 — the surplus-welfare maximizer is optimal everywhere: ratio exactly 1
  // on every abstract family and on generated instances under all policies.
  criterion(9, "surplus-welfare maximizer attains ratio exactly 1 on every family and generated instance", [&](std::string& detail) {
    int family_checks = 0;
    int instance_checks = 0;
    bool optimal = true;
    for (const AlternativeFamily& family : families) {
      const auto ratio = welfare_ratio(run_vcgs(family), family);
      if (!ratio) continue;
      ++family_checks;
      if (*ratio != Rational(1)) optimal = false;
    }
    for (int index = 0; index < 50; ++index) {
      const Instance inst = generate_instance(sweep_instance_config(kSeed, index)).instance;
      const RouteTable table = build_route_table(inst);
      for (CostPolicy policy : {CostPolicy::zero, CostPolicy::direct, CostPolicy::upper_bound}) {
        const CostAssignment costs = assign_costs(inst, policy);
        const AlternativeFamily family = enumerate_alternatives(inst, costs, policy, &table);
        const auto ratio = welfare_ratio(run_vcgs(family), family);
        if (!ratio) continue;
        ++instance_checks;
        if (*ratio != Rational(1)) optimal = false;
      }
    }
    detail = std::to_string(family_checks) + " family + " + std::to_string(instance_checks) +
             " instance ratios";
    return optimal && family_checks > 0 && instance_checks > 0;
  });

  // 10 — on families engineered to satisfy the comparison hypotheses, the
  // weighted auction's surplus profit weakly dominates the unweighted one's.
  criterion(10, "weighted surplus profit >= unweighted on 200 hypothesis-satisfying families", [&](std::string& detail) {
    SweepOptions options;
    options.seed = kSeed;
    const SweepSummary summary = ums_wms_sweep(options);
    detail = std::to_string(summary.instances) + " families";
    if (!summary.ok()) detail += ", first: " + summary.failures.front();
    return summary.ok() && summary.instances == 200;
  });

  // 11 — end-to-end pipeline timings on single instances of growing size.
  criterion(11, "full 6-variant pipeline: n=10 < 50 ms, n=25 < 5 s, n=100 < 120 s", [&](std::string& detail) {
    const auto timed_run = [](int n) {
      GeneratorConfig config;
      config.n = n;
      config.seed = kSeed;
      const Instance inst = generate_instance(config).instance;
      const auto start = Clock::now();
      const ExperimentReport report = run_batch(1, [&](int) { return inst; });
      const double elapsed = ms_since(start);
      return std::pair<double, bool>(elapsed, report.completed == 1 && report.errors.empty());
    };
    const auto [ms10, ok10] = timed_run(10);
    const auto [ms25, ok25] = timed_run(25);
    const auto [ms100, ok100] = timed_run(100);
    detail = "n=10: " + fmt(ms10) + " ms, n=25: " + fmt(ms25) + " ms, n=100: " + fmt(ms100) + " ms";
    return ok10 && ok25 && ok100 && ms10 < kPipelineN10Ms && ms25 < kPipelineN25Ms &&
           ms100 < kPipelineN100Ms;
  });

  // Informational trend, not a gate: absolute benchmark numbers are not
  // reproducible, but the welfare ordering across variants should be.
  {
    const InstanceSupplier supplier = [](int index) {
      GeneratorConfig config;
      config.n = 25;
      config.sigma = 3.0;
      config.seed = derive_seed(kSeed, static_cast<std::uint64_t>(index));
      return generate_instance(config).instance;
    };
    const ExperimentReport report = run_batch(100, supplier);
    const auto mean_of = [&](Variant v) {
      return report.stats.at(v).at("norm_welfare").mean().convert_to<double>();
    };
    const double vcgs_ub = mean_of(Variant::vcgs_upper);
    const double wms_ub = mean_of(Variant::wms_upper);
    std::printf("[info] trend over 100 instances (n=25, sigma=3): mean normalized welfare "
                "VCGs-UB %.4f (want >= 0.9), WMS-UB %.4f (want >= 0.8) — %s\n",
                vcgs_ub, wms_ub,
                (vcgs_ub >= 0.9 && wms_ub >= 0.8) ? "trend holds" : "trend NOT met (informational)");
    std::fflush(stdout);
  }

  // 12 — the sweep CSV is a pure function of its arguments: identical bytes
  // across repeated runs and across thread counts.
  criterion(12, "sweep CSV byte-identical across repeated runs and across 1 vs 4 threads", [&](std::string& detail) {
    const fs::path dir = fs::temp_directory_path() / "rideauction_acceptance";
    fs::create_directories(dir);
    const fs::path out_a = dir / "sweep_a.csv";
    const fs::path out_b = dir / "sweep_b.csv";
    const fs::path out_c = dir / "sweep_c.csv";
    const std::string base = std::string("\"") + RIDEAUCTION_CLI_PATH +
                             "\" sweep --n-list 6,10 --sigma-list 1,3 --count 5 --seed 777";
    const std::string cmd_a = base + " --threads 1 --out \"" + out_a.string() + "\"";
    const std::string cmd_b = base + " --threads 1 --out \"" + out_b.string() + "\"";
    const std::string cmd_c = base + " --threads 4 --out \"" + out_c.string() + "\"";
    if (std::system(cmd_a.c_str()) != 0 || std::system(cmd_b.c_str()) != 0 ||
        std::system(cmd_c.c_str()) != 0) {
      detail = "CLI invocation failed";
      return false;
    }
    const auto a = read_file(out_a);
    const auto b = read_file(out_b);
    const auto c = read_file(out_c);
    if (!a || !b || !c || a->empty()) {
      detail = "missing output";
      return false;
    }
    detail = std::to_string(a->size()) + " bytes";
    return *a == *b && *a == *c;
  });

  std::printf("%s: %d of 12 criteria passed\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              12 - failures);
  return failures == 0 ? 0 : 1;
}
