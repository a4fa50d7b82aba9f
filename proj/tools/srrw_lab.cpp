// srrw_lab: config-driven experiments.
//
//   srrw_lab validate --config cfg.json
//   srrw_lab run --config cfg.json [--seed N] [--threads N] [--deterministic]
//   srrw_lab presets list | presets show NAME
//
// Exit codes: 0 ok, 2 validation error, 3 capacity error, 4 horizon guard triggered.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lab/config.hpp"
#include "lab/presets.hpp"
#include "lab/runner.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_capacity = 3;
constexpr int exit_guard = 4;

bool load(const std::string& path, lab::json& doc) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open config " << path << "\n";
    return false;
  }
  try {
    doc = lab::json::parse(in);
  } catch (const lab::json::parse_error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    return false;
  }
  return true;
}

void print_report(const lab::validation_report& rep) {
  for (const auto& e : rep.errors)
    std::cerr << (e.capacity ? "capacity" : "invalid") << ": " << (e.field.empty() ? "<root>" : e.field)
              << ": " << e.message << "\n";
}

int report_exit(const lab::validation_report& rep) {
  return rep.capacity_only() ? exit_capacity : exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Experiments for step-reinforced random walks on finite groups"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool deterministic = false;

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  auto* seed_opt = run->add_option("--seed", seed, "Override the master seed");
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads (default SRRW_LAB_THREADS)");
  run->add_flag("--deterministic", deterministic, "Batch-ordered reductions (always on; recorded)");

  auto* presets = app.add_subcommand("presets", "Built-in configs");
  presets->require_subcommand(1);
  presets->add_subcommand("list", "List preset names");
  std::string preset_name;
  auto* show = presets->add_subcommand("show", "Print a preset config");
  show->add_option("name", preset_name, "Preset name")->required();

  CLI11_PARSE(app, argc, argv);

  if (presets->parsed()) {
    if (presets->got_subcommand("list")) {
      for (const auto& p : lab::presets()) std::cout << p.name << "\t" << p.description << "\n";
      return 0;
    }
    for (const auto& p : lab::presets())
      if (p.name == preset_name) {
        std::cout << p.config.dump(2) << "\n";
        return 0;
      }
    std::cerr << "error: unknown preset '" << preset_name << "'\n";
    return exit_validation;
  }

  lab::json doc;
  if (!load(config_path, doc)) return exit_validation;
  lab::experiment_config cfg;
  const auto rep = lab::validate_config(doc, &cfg);

  if (validate->parsed()) {
    if (!rep.ok()) {
      print_report(rep);
      return report_exit(rep);
    }
    std::cout << "OK " << lab::to_string(cfg.kind) << ": estimated " << std::fixed
              << std::setprecision(1) << rep.estimated_seconds << " s, "
              << rep.estimated_megabytes << " MB\n";
    return 0;
  }

  if (!rep.ok()) {
    print_report(rep);
    return report_exit(rep);
  }
  lab::run_options opt;
  if (*seed_opt) opt.seed = seed;
  if (*threads_opt) opt.threads = threads;
  opt.deterministic = deterministic;
  opt.status = [](const std::string& s) { std::cerr << "[srrw_lab] " << s << "\n"; };
  try {
    const auto res = lab::run_experiment(cfg, opt);
    for (const auto& f : res.files) std::cerr << "[srrw_lab] wrote " << f << "\n";
    if (res.guard_triggered) {
      std::cerr << "warning: horizon guard triggered; extend the grid\n";
      return exit_guard;
    }
  } catch (const srrw::capacity_error& e) {
    std::cerr << "capacity: " << e.what() << "\n";
    return exit_capacity;
  } catch (const srrw::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  return 0;
}
