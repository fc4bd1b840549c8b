#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtc/classify.hpp"
#include "mtc/dataset_io.hpp"
#include "mtc/eval_stats.hpp"
#include "mtc/feature_select.hpp"
#include "mtc/spectral.hpp"

namespace mtc {

inline constexpr const char* kLibraryVersion = "0.1.0";

struct ExtractionConfig {
  std::string name;  // "welch", "burg", "music"
  FeatureConfig feature;
};

struct ExperimentConfig {
  // exactly one of manifest_path / synth is set
  std::optional<std::filesystem::path> manifest_path;
  std::optional<SynthSpec> synth;
  std::uint64_t synth_seed{0};

  std::vector<std::pair<std::string, std::string>> task_pairs;
  std::vector<ExtractionConfig> extractions;
  std::vector<SelectionMethod> selections;
  std::vector<ClassifierSpec> classifiers;
  int cap{25};
  CvConfig cv{10, 10, 0};
  double segment_seconds{0.5};
  FrequencyGrid grid{FrequencyGrid::canonical()};
  std::optional<std::string> control;  // "selection+extraction"; default: best rank

  nlohmann::json echo;  // raw config JSON, reproduced verbatim in reports

  static ExperimentConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& base_dir = {});
  static ExperimentConfig from_file(const std::filesystem::path& path);
  void validate() const;
};

struct CombinationResult {
  std::string pair;        // "B-C"
  std::string extraction;  // "burg"
  std::string selection;   // "lr"
  std::string classifier;  // "lda"
  CvReport report;
  SelectionTrace trace;
  double baseline_accuracy{0.0};
  double gain_percent{0.0};
  std::string error;  // non-empty if this combination failed

  std::string key() const { return pair + "/" + selection + "+" + extraction + "/" + classifier; }
};

struct BaselineResult {
  std::string pair, extraction, classifier;
  double accuracy{0.0};
  std::string error;
};

struct RunReport {
  nlohmann::json config_echo;
  std::vector<BaselineResult> baselines;
  std::vector<CombinationResult> combinations;
  ComparisonTable gain_table;  // selection+extraction rows, pair/classifier columns
  RankResult ranking;
  std::optional<FriedmanResult> friedman;
  std::optional<PosthocResult> posthoc;
  bool has_failures{false};

  nlohmann::json to_json() const;
};

// Segmentation -> extraction -> (baseline CV + per-selection incremental CV)
// -> gains -> ranking -> Friedman -> post-hoc. Pure function of the config;
// combination failures are isolated and recorded, not propagated.
RunReport run_experiment(const ExperimentConfig& config, int jobs = 1);

// Writes report.json, meta.json, ranking.csv, posthoc.csv, gains.csv and
// accuracy_curves/*.csv under dir. meta.json holds wall-clock and anything
// else non-deterministic; report.json is byte-stable across reruns.
void emit_tables(const RunReport& report, const std::filesystem::path& dir,
                 double wall_clock_seconds = 0.0);

ComparisonTable comparison_table_from_csv(const std::filesystem::path& path);
void comparison_table_to_csv(const ComparisonTable& table, const std::filesystem::path& path);

}  // namespace mtc
