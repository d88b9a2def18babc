#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rideshare/experiment.hpp"
#include "rideshare/oracle.hpp"

namespace fs = std::filesystem;
using namespace rideshare;

namespace {

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

std::vector<std::string> collect_instance_paths(const std::vector<std::string>& inputs) {
  std::vector<std::string> paths;
  for (const std::string& input : inputs) {
    if (fs::is_directory(input)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.push_back(input);
    }
  }
  if (paths.empty()) throw std::runtime_error("no instance files found");
  return paths;
}

void print_summary(const SweepSummary& summary) {
  std::cout << "== " << summary.name << " ==\n";
  std::cout << "instances: " << summary.instances << "  checks: " << summary.checks << "\n";
  for (const auto& [key, value] : summary.counters) {
    std::cout << "  " << key << ": " << value << "\n";
  }
  if (summary.failures.empty()) {
    std::cout << "result: OK\n";
  } else {
    std::cout << "result: FAILED (" << summary.failures.size() << " reported)\n";
    for (const std::string& failure : summary.failures) {
      std::cout << "  - " << failure << "\n";
    }
  }
  std::cout.flush();
}

nlohmann::ordered_json summary_to_json(const SweepSummary& summary) {
  nlohmann::ordered_json doc;
  doc["name"] = summary.name;
  doc["instances"] = summary.instances;
  doc["checks"] = summary.checks;
  doc["ok"] = summary.ok();
  doc["failures"] = summary.failures;
  doc["counters"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : summary.counters) doc["counters"][key] = value;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-balanced ridesharing auctions: demo, generator, experiments, verifier"};
  app.require_subcommand(1);
  int exit_code = 0;

  // demo ---------------------------------------------------------------
  auto* demo_cmd = app.add_subcommand("demo", "Run the worked example and check every value");
  bool demo_json = false;
  demo_cmd->add_flag("--json", demo_json, "Emit outcomes as JSON instead of text");
  demo_cmd->callback([&]() {
    const DemoResult demo = run_demo();
    if (demo_json) {
      nlohmann::ordered_json doc;
      doc["ok"] = demo.ok;
      doc["family"] = family_to_json(demo.family);
      doc["outcomes"] = nlohmann::ordered_json::object();
      doc["outcomes"]["ums"] = outcome_to_json(demo.ums);
      doc["outcomes"]["wms"] = outcome_to_json(demo.wms);
      doc["outcomes"]["vcgs"] = outcome_to_json(demo.vcgs);
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << demo.transcript;
      std::cout << (demo.ok ? "demo: all values check out\n" : "demo: MISMATCH\n");
    }
    if (!demo.ok) exit_code = 1;
  });

  // gen ----------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "Generate synthetic instances as JSON files");
  int gen_n = 10;
  double gen_sigma = 3.0;
  std::uint64_t gen_seed = 1;
  int gen_count = 1;
  std::string gen_out = ".";
  gen_cmd->add_option("--n", gen_n, "Passengers per instance")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--sigma", gen_sigma, "Bid perturbation scale (km of cost)");
  gen_cmd->add_option("--seed", gen_seed, "Base seed; instance i uses a derived child seed");
  gen_cmd->add_option("--count", gen_count, "Number of instances")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen_out, "Output directory");
  gen_cmd->callback([&]() {
    fs::create_directories(gen_out);
    for (int i = 0; i < gen_count; ++i) {
      GeneratorConfig config;
      config.n = gen_n;
      config.sigma = gen_sigma;
      config.seed = derive_seed(gen_seed, static_cast<std::uint64_t>(i));
      const GeneratedInstance generated = generate_instance(config);
      char name[32];
      std::snprintf(name, sizeof(name), "instance_%04d.json", i);
      const fs::path path = fs::path(gen_out) / name;
      save_instance_file(instance_to_json(generated.instance, generated.layout), path.string());
      std::cout << path.string() << "\n";
    }
  });

  // run ----------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "Run auction variants on instance files");
  std::vector<std::string> run_inputs;
  std::string run_variants = "all";
  std::string run_out;
  int run_threads = 1;
  run_cmd->add_option("--in", run_inputs, "Instance files or directories of *.json")
      ->required()
      ->expected(-1);
  run_cmd->add_option("--variants", run_variants, "Comma-separated variant names, or 'all'");
  run_cmd->add_option("--out", run_out, "CSV output path (default: stdout)");
  run_cmd->add_option("--threads", run_threads, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->callback([&]() {
    const std::vector<std::string> paths = collect_instance_paths(run_inputs);
    std::vector<Instance> instances;
    instances.reserve(paths.size());
    for (const std::string& path : paths) instances.push_back(load_instance_file(path));
    BatchOptions options;
    options.variants = parse_variants(run_variants);
    options.threads = run_threads;
    const ExperimentReport report = run_batch(
        static_cast<int>(instances.size()),
        [&instances](int index) { return instances[static_cast<std::size_t>(index)]; }, options);
    for (const std::string& error : report.errors) std::cerr << "error: " << error << "\n";
    emit(report_csv(report, /*include_times=*/true), run_out);
    if (!report.errors.empty()) exit_code = 1;
  });

  // sweep --------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Aggregate variants over generated instances");
  std::vector<int> sweep_n = {10};
  std::vector<double> sweep_sigma = {3.0};
  int sweep_count = 20;
  std::uint64_t sweep_seed = 20250801;
  std::string sweep_out;
  int sweep_threads = 1;
  sweep_cmd->add_option("--n-list", sweep_n, "Passenger counts")->delimiter(',');
  sweep_cmd->add_option("--sigma-list", sweep_sigma, "Sigma values")->delimiter(',');
  sweep_cmd->add_option("--count", sweep_count, "Instances per (n, sigma) cell")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path (default: stdout)");
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->callback([&]() {
    emit(sweep_csv(sweep_n, sweep_sigma, sweep_count, sweep_seed, sweep_threads), sweep_out);
  });

  // verify -------------------------------------------------------------
  auto* verify_cmd = app.add_subcommand("verify", "Run the property-checking sweeps");
  std::string suite = "all";
  std::uint64_t verify_seed = 20250801;
  int verify_samples = 0;
  bool verify_json = false;
  verify_cmd->add_option("--suite", suite, "strategyproof | critical | bounds | all")
      ->check(CLI::IsMember({"strategyproof", "critical", "bounds", "all"}));
  verify_cmd->add_option("--seed", verify_seed, "Base seed for the sweeps");
  verify_cmd->add_option("--samples", verify_samples, "Override per-sweep sample count (0: default)");
  verify_cmd->add_flag("--json", verify_json, "Emit summaries as JSON");
  verify_cmd->callback([&]() {
    SweepOptions options;
    options.seed = verify_seed;
    options.samples = verify_samples;
    std::vector<SweepSummary> summaries;
    if (suite == "strategyproof" || suite == "all") {
      summaries.push_back(strategyproofness_sweep(options));
      summaries.push_back(negative_control_sweep());
    }
    if (suite == "critical" || suite == "all") {
      summaries.push_back(critical_value_sweep(options));
    }
    if (suite == "bounds" || suite == "all") {
      summaries.push_back(bounds_sweep(options));
      summaries.push_back(ums_wms_sweep(options));
      summaries.push_back(budget_sweep(options));
    }
    bool failed = false;
    if (verify_json) {
      nlohmann::ordered_json doc = nlohmann::ordered_json::array();
      for (const SweepSummary& summary : summaries) {
        doc.push_back(summary_to_json(summary));
        failed = failed || !summary.ok();
      }
      std::cout << doc.dump(2) << "\n";
    } else {
      for (const SweepSummary& summary : summaries) {
        print_summary(summary);
        failed = failed || !summary.ok();
      }
    }
    if (failed) exit_code = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
