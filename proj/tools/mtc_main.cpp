#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mtc/pipeline.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir, int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto config = mtc::ExperimentConfig::from_file(config_path);
  const auto report = mtc::run_experiment(config, jobs);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  mtc::emit_tables(report, out_dir, wall);

  std::size_t failed = 0;
  for (const auto& c : report.combinations)
    if (!c.error.empty()) ++failed;
  for (const auto& b : report.baselines)
    if (!b.error.empty()) ++failed;
  std::cout << report.combinations.size() << " combinations, " << report.baselines.size()
            << " baselines, " << failed << " failed; outputs in " << out_dir << "\n";
  if (report.has_failures) {
    for (const auto& c : report.combinations)
      if (!c.error.empty()) std::cerr << c.key() << ": " << c.error << "\n";
    for (const auto& b : report.baselines)
      if (!b.error.empty())
        std::cerr << b.pair << "/" << b.extraction << "/" << b.classifier << ": " << b.error
                  << "\n";
    return 2;
  }
  return 0;
}

int cmd_synth(const std::string& spec_path, std::uint64_t seed, const std::string& out_manifest) {
  const auto spec = mtc::synth_spec_from_json_file(spec_path);
  const auto dataset = mtc::synth_generate(spec, seed);
  mtc::save_dataset(dataset, out_manifest);
  std::cout << dataset.trials.size() << " trials written, manifest " << out_manifest << "\n";
  return 0;
}

int cmd_validate(const std::string& config_path) {
  const auto config = mtc::ExperimentConfig::from_file(config_path);
  if (config.manifest_path) {
    const auto ds = mtc::load_dataset(*config.manifest_path);
    std::cout << "dataset: " << ds.trials.size() << " trials, " << ds.channel_names.size()
              << " channels @ " << ds.sample_rate_hz << " Hz\n";
  } else {
    std::cout << "dataset: synthetic, seed " << config.synth_seed << "\n";
  }
  std::cout << "config ok: " << config.task_pairs.size() << " pairs x "
            << config.extractions.size() << " extractions x " << config.selections.size()
            << " selections x " << config.classifiers.size() << " classifiers\n";
  return 0;
}

int cmd_stats(const std::string& table_path, const std::string& control, double alpha) {
  const auto table = mtc::comparison_table_from_csv(table_path);
  const auto ranking = mtc::robust_rank(table);

  int control_index = ranking.ordering.front();
  if (!control.empty()) {
    const auto it = std::find(table.method_names.begin(), table.method_names.end(), control);
    if (it == table.method_names.end())
      throw mtc::ConfigError("control method '" + control + "' not in table");
    control_index = static_cast<int>(it - table.method_names.begin());
  }

  const auto friedman = mtc::friedman_test(table);
  const auto posthoc = mtc::posthoc_vs_control(table, control_index);
  const auto flags = mtc::significance_report(posthoc, alpha);

  std::cout << "ranking (average rank, best first):\n";
  for (int idx : ranking.ordering)
    std::cout << "  " << table.method_names[static_cast<std::size_t>(idx)] << "  "
              << ranking.average_ranks[static_cast<std::size_t>(idx)] << "\n";
  std::cout << "friedman: chi2=" << friedman.chi_square << " dof=" << friedman.dof
            << " p=" << friedman.p_value << "\n";
  std::cout << "post-hoc vs " << posthoc.control_method << " (alpha=" << alpha << "):\n";
  std::cout << "  method  unadjusted_p  p_hommel  significant\n";
  for (std::size_t i = 0; i < posthoc.method_names.size(); ++i)
    std::cout << "  " << posthoc.method_names[i] << "  " << posthoc.raw_p[i] << "  "
              << posthoc.adjusted_hommel[i] << "  " << (flags[i].significant ? "yes" : "no")
              << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mental-task classification pipeline"};
  app.require_subcommand(1);

  std::string config_path, out_dir, spec_path, manifest_out, table_path, control;
  std::uint64_t seed = 0;
  int jobs = 1;
  double alpha = 0.05;

  auto* run = app.add_subcommand("run", "run a configured experiment");
  run->add_option("--config", config_path, "experiment config JSON")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--spec", spec_path, "synthesis spec JSON")->required();
  synth->add_option("--seed", seed, "RNG seed")->required();
  synth->add_option("--out", manifest_out, "output manifest path")->required();

  auto* validate = app.add_subcommand("validate", "dry-run config checks");
  validate->add_option("--config", config_path, "experiment config JSON")->required();

  auto* stats = app.add_subcommand("stats", "rank + Friedman + post-hoc on a gain table");
  stats->add_option("--table", table_path, "comparison table CSV")->required();
  stats->add_option("--control", control, "control method name (default: best rank)");
  stats->add_option("--alpha", alpha, "significance level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, jobs);
    if (synth->parsed()) return cmd_synth(spec_path, seed, manifest_out);
    if (validate->parsed()) return cmd_validate(config_path);
    if (stats->parsed()) return cmd_stats(table_path, control, alpha);
  } catch (const mtc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
