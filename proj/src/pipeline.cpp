#include "mtc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace mtc {
namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

WindowKind parse_window(const std::string& name) {
  if (name == "rectangular") return WindowKind::rectangular;
  if (name == "hamming") return WindowKind::hamming;
  if (name == "hann") return WindowKind::hann;
  throw ConfigError("unknown window '" + name + "'");
}

ExtractionConfig parse_extraction(const json& j) {
  ExtractionConfig e;
  e.name = j.at("method").get<std::string>();
  if (e.name == "welch") {
    e.feature.method = PsdMethod::welch;
    e.feature.welch.sub_segment_len = j.value("sub_segment_len", 62);
    e.feature.welch.hop = j.value("hop", 31);
    e.feature.welch.window.kind = parse_window(j.value("window", std::string("hamming")));
  } else if (e.name == "burg") {
    e.feature.method = PsdMethod::burg;
    e.feature.burg_order = j.value("order", 6);
  } else if (e.name == "music") {
    e.feature.method = PsdMethod::music;
    e.feature.music.signal_dim = j.value("signal_dim", 8);
    e.feature.music.corr_dim = j.value("corr_dim", 20);
    e.feature.music.floor_epsilon = j.value("floor_epsilon", 1e-12);
  } else {
    throw ConfigError("unknown extraction method '" + e.name + "'");
  }
  return e;
}

SelectionMethod parse_selection(const json& j, int global_bins) {
  std::string name;
  SelectionMethod m;
  if (j.is_string()) {
    name = j.get<std::string>();
  } else {
    name = j.at("name").get<std::string>();
  }
  if (name == "corr") m = SelectionMethod::univariate(UnivariateCriterion::corr);
  else if (name == "mi") m = SelectionMethod::univariate(UnivariateCriterion::mi);
  else if (name == "fdr") m = SelectionMethod::univariate(UnivariateCriterion::fdr);
  else if (name == "ranksum") m = SelectionMethod::univariate(UnivariateCriterion::ranksum);
  else if (name == "bd") m = SelectionMethod::multivariate(MultivariateCriterion::bhattacharyya);
  else if (name == "sr") m = SelectionMethod::multivariate(MultivariateCriterion::scatter_ratio);
  else if (name == "lr") m = SelectionMethod::multivariate(MultivariateCriterion::regression);
  else if (name == "mrmr") m = SelectionMethod::multivariate(MultivariateCriterion::mrmr);
  else if (name == "chernoff") m = SelectionMethod::multivariate(MultivariateCriterion::chernoff);
  else throw ConfigError("unknown selection method '" + name + "'");

  m.mi.bins = global_bins;
  if (j.is_object()) {
    m.mi.bins = j.value("bins", global_bins);
    m.chernoff_beta = j.value("beta", 0.5);
    m.mrmr_exclude_self = j.value("exclude_self", false);
  }
  return m;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

json cv_report_to_json(const CvReport& r) {
  return json{{"curve", r.curve}, {"best_k", r.best_k}, {"best_accuracy", r.best_accuracy},
              {"raw", r.raw}};
}

}  // namespace

namespace {

ExperimentConfig config_from_json_unchecked(const json& j,
                                            const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.echo = j;

  const auto& dj = j.at("dataset");
  if (dj.contains("manifest")) {
    auto p = std::filesystem::path(dj.at("manifest").get<std::string>());
    c.manifest_path = p.is_absolute() ? p : base_dir / p;
  } else if (dj.contains("synthetic")) {
    c.synth = synth_spec_from_json(dj.at("synthetic"));
    c.synth_seed = dj.value("seed", 0);
  } else {
    throw ConfigError("dataset must specify 'manifest' or 'synthetic'");
  }

  for (const auto& pj : j.at("task_pairs")) {
    if (!pj.is_array() || pj.size() != 2) throw ConfigError("task pair must be a 2-array");
    c.task_pairs.emplace_back(pj[0].get<std::string>(), pj[1].get<std::string>());
  }
  for (const auto& ej : j.at("extraction")) c.extractions.push_back(parse_extraction(ej));

  const int global_bins = j.value("mi_bins", 0);
  for (const auto& sj : j.value("selection", json::array()))
    c.selections.push_back(parse_selection(sj, global_bins));

  for (const auto& cj : j.at("classifiers")) {
    auto spec = ClassifierSpec::parse(cj.get<std::string>());
    spec.svm_c = j.value("svm_c", 1.0);
    spec.svm_tol = j.value("svm_tol", 1e-6);
    c.classifiers.push_back(spec);
  }

  c.cap = j.value("cap", 25);
  if (j.contains("cv")) {
    const auto& cvj = j["cv"];
    c.cv.n_folds = cvj.value("folds", 10);
    c.cv.n_runs = cvj.value("runs", 10);
    c.cv.seed = cvj.value("seed", 0);
  }
  c.segment_seconds = j.value("segment_seconds", 0.5);
  if (j.contains("grid")) {
    const auto& gj = j["grid"];
    c.grid = FrequencyGrid::uniform(gj.value("start", 0.0), gj.value("step", 0.5),
                                    gj.value("count", 52));
  }
  if (j.contains("control")) c.control = j["control"].get<std::string>();
  c.validate();
  return c;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j,
                                             const std::filesystem::path& base_dir) {
  try {
    return config_from_json_unchecked(j, base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return from_json(j, path.parent_path());
}

void ExperimentConfig::validate() const {
  if (!manifest_path && !synth) throw ConfigError("config: no dataset source");
  if (task_pairs.empty()) throw ConfigError("config: no task pairs");
  if (extractions.empty()) throw ConfigError("config: no extraction methods");
  if (classifiers.empty()) throw ConfigError("config: no classifiers");
  if (cap < 1) throw ConfigError("config: cap must be >= 1");
  if (cv.n_folds < 2 || cv.n_runs < 1) throw ConfigError("config: bad cv settings");
  grid.validate();
}

RunReport run_experiment(const ExperimentConfig& config, int jobs) {
  config.validate();
  if (jobs < 1) jobs = 1;

  const Dataset dataset =
      config.manifest_path ? load_dataset(*config.manifest_path)
                           : synth_generate(*config.synth, config.synth_seed);
  dataset.validate();

  const auto n_pairs = config.task_pairs.size();
  const auto n_ext = config.extractions.size();
  const auto n_sel = config.selections.size();
  const auto n_clf = config.classifiers.size();

  // Stage 1: feature matrices per (pair, extraction). Errors are recorded and
  // poison only the combinations that depend on them.
  std::vector<LabeledFeatureMatrix> matrices(n_pairs * n_ext);
  std::vector<std::string> matrix_errors(n_pairs * n_ext);
  auto matrix_at = [&](std::size_t p, std::size_t e) -> std::size_t { return p * n_ext + e; };

  std::vector<std::vector<SegmentedSample>> pair_segments(n_pairs);
  std::vector<std::string> pair_errors(n_pairs);
  for (std::size_t p = 0; p < n_pairs; ++p) {
    try {
      const auto& [task_a, task_b] = config.task_pairs[p];
      std::vector<SegmentedSample> segs;
      for (const auto& trial : dataset.trials) {
        int label;
        if (trial.task_label == task_a) label = 0;
        else if (trial.task_label == task_b) label = 1;
        else continue;
        auto s = segment_trial(trial, dataset.sample_rate_hz, config.segment_seconds, label);
        segs.insert(segs.end(), std::make_move_iterator(s.begin()),
                    std::make_move_iterator(s.end()));
      }
      bool has0 = false, has1 = false;
      for (const auto& s : segs) (s.label == 0 ? has0 : has1) = true;
      if (!has0 || !has1)
        throw DataError("task pair " + task_a + "-" + task_b + ": a side has no trials");
      pair_segments[p] = std::move(segs);
    } catch (const Error& e) {
      pair_errors[p] = e.what();
    }
  }

  {
    std::atomic<std::size_t> next{0};
    const std::size_t total = n_pairs * n_ext;
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        const std::size_t p = i / n_ext, e = i % n_ext;
        if (!pair_errors[p].empty()) {
          matrix_errors[i] = pair_errors[p];
          continue;
        }
        try {
          const auto& segs = pair_segments[p];
          LabeledFeatureMatrix m;
          m.values.resize(static_cast<Eigen::Index>(segs.size()),
                          static_cast<Eigen::Index>(dataset.channel_names.size() *
                                                    config.grid.size()));
          m.labels.resize(segs.size());
          for (std::size_t s = 0; s < segs.size(); ++s) {
            const auto f =
                extract_features(segs[s], config.extractions[e].feature, config.grid);
            for (std::size_t j = 0; j < f.size(); ++j)
              m.values(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = f[j];
            m.labels[s] = segs[s].label;
          }
          m.validate();
          matrices[i] = std::move(m);
        } catch (const Error& ex) {
          matrix_errors[i] = ex.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  // Stage 2: baselines per (pair, extraction, classifier).
  std::vector<BaselineResult> baselines(n_pairs * n_ext * n_clf);
  {
    std::atomic<std::size_t> next{0};
    const std::size_t total = baselines.size();
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        const std::size_t p = i / (n_ext * n_clf);
        const std::size_t e = (i / n_clf) % n_ext;
        const std::size_t c = i % n_clf;
        auto& b = baselines[i];
        b.pair = config.task_pairs[p].first + "-" + config.task_pairs[p].second;
        b.extraction = config.extractions[e].name;
        b.classifier = config.classifiers[c].name();
        const auto mi = matrix_at(p, e);
        if (!matrix_errors[mi].empty()) {
          b.error = matrix_errors[mi];
          continue;
        }
        try {
          b.accuracy =
              cv_accuracy(matrices[mi].values, matrices[mi].labels, config.classifiers[c],
                          config.cv)
                  .mean;
        } catch (const Error& ex) {
          b.error = ex.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  // Stage 3: per (pair, extraction, selection) run the forward search once,
  // then evaluate every classifier on the trace.
  std::vector<CombinationResult> combos(n_pairs * n_ext * n_sel * n_clf);
  auto combo_at = [&](std::size_t p, std::size_t e, std::size_t s, std::size_t c) {
    return ((p * n_ext + e) * n_sel + s) * n_clf + c;
  };
  {
    std::atomic<std::size_t> next{0};
    const std::size_t total = n_pairs * n_ext * n_sel;
    auto worker = [&]() {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        const std::size_t p = i / (n_ext * n_sel);
        const std::size_t e = (i / n_sel) % n_ext;
        const std::size_t s = i % n_sel;
        const auto mi = matrix_at(p, e);

        SelectionTrace trace;
        std::string trace_error;
        if (!matrix_errors[mi].empty()) {
          trace_error = matrix_errors[mi];
        } else {
          try {
            trace = forward_select(matrices[mi], config.selections[s], config.cap);
          } catch (const Error& ex) {
            trace_error = ex.what();
          }
        }

        for (std::size_t c = 0; c < n_clf; ++c) {
          auto& combo = combos[combo_at(p, e, s, c)];
          combo.pair = config.task_pairs[p].first + "-" + config.task_pairs[p].second;
          combo.extraction = config.extractions[e].name;
          combo.selection = config.selections[s].name();
          combo.classifier = config.classifiers[c].name();
          if (!trace_error.empty()) {
            combo.error = trace_error;
            continue;
          }
          combo.trace = trace;
          const auto& baseline = baselines[(p * n_ext + e) * n_clf + c];
          try {
            combo.report =
                incremental_evaluation(matrices[mi], trace, config.classifiers[c], config.cv);
            if (!baseline.error.empty())
              throw NumericError("baseline failed: " + baseline.error);
            combo.baseline_accuracy = baseline.accuracy;
            combo.gain_percent =
                percentage_gain(combo.report.best_accuracy, baseline.accuracy);
          } catch (const Error& ex) {
            combo.error = ex.what();
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
  }

  RunReport report;
  report.config_echo = config.echo;
  report.baselines = std::move(baselines);
  report.combinations = std::move(combos);
  for (const auto& c : report.combinations)
    if (!c.error.empty()) report.has_failures = true;
  for (const auto& b : report.baselines)
    if (!b.error.empty()) report.has_failures = true;

  // Gain table: rows = selection+extraction, columns = pair/classifier.
  // Rows with any failed cell are excluded from the statistics.
  if (n_sel > 0) {
    std::vector<std::string> row_names, col_names;
    for (std::size_t e = 0; e < n_ext; ++e)
      for (std::size_t s = 0; s < n_sel; ++s)
        row_names.push_back(config.selections[s].name() + "+" + config.extractions[e].name);
    for (std::size_t p = 0; p < n_pairs; ++p)
      for (std::size_t c = 0; c < n_clf; ++c)
        col_names.push_back(config.task_pairs[p].first + "-" + config.task_pairs[p].second +
                            "/" + config.classifiers[c].name());

    Eigen::MatrixXd cells(static_cast<Eigen::Index>(row_names.size()),
                          static_cast<Eigen::Index>(col_names.size()));
    std::vector<bool> row_ok(row_names.size(), true);
    for (std::size_t e = 0; e < n_ext; ++e)
      for (std::size_t s = 0; s < n_sel; ++s) {
        const std::size_t row = e * n_sel + s;
        for (std::size_t p = 0; p < n_pairs; ++p)
          for (std::size_t c = 0; c < n_clf; ++c) {
            const auto& combo = report.combinations[combo_at(p, e, s, c)];
            if (!combo.error.empty()) {
              row_ok[row] = false;
              continue;
            }
            cells(static_cast<Eigen::Index>(row),
                  static_cast<Eigen::Index>(p * n_clf + c)) = combo.gain_percent;
          }
      }

    ComparisonTable table;
    table.column_names = col_names;
    for (std::size_t r = 0; r < row_names.size(); ++r) {
      if (!row_ok[r]) continue;
      table.method_names.push_back(row_names[r]);
    }
    table.cells.resize(static_cast<Eigen::Index>(table.method_names.size()),
                       static_cast<Eigen::Index>(col_names.size()));
    Eigen::Index out_row = 0;
    for (std::size_t r = 0; r < row_names.size(); ++r)
      if (row_ok[r]) table.cells.row(out_row++) = cells.row(static_cast<Eigen::Index>(r));
    report.gain_table = std::move(table);

    if (report.gain_table.cells.rows() >= 2) {
      report.ranking = robust_rank(report.gain_table);
      if (report.gain_table.cells.cols() >= 2) {
        report.friedman = friedman_test(report.gain_table);
        int control_index = report.ranking.ordering.front();
        if (config.control) {
          const auto it = std::find(report.gain_table.method_names.begin(),
                                    report.gain_table.method_names.end(), *config.control);
          if (it == report.gain_table.method_names.end())
            throw ConfigError("control method '" + *config.control + "' not in results");
          control_index = static_cast<int>(it - report.gain_table.method_names.begin());
        }
        report.posthoc = posthoc_vs_control(report.gain_table, control_index);
      }
    }
  }
  return report;
}

json RunReport::to_json() const {
  json doc;
  doc["library_version"] = kLibraryVersion;
  doc["config"] = config_echo;

  json jb = json::array();
  for (const auto& b : baselines) {
    json e{{"pair", b.pair}, {"extraction", b.extraction}, {"classifier", b.classifier}};
    if (b.error.empty()) e["accuracy"] = b.accuracy;
    else e["error"] = b.error;
    jb.push_back(std::move(e));
  }
  doc["baselines"] = std::move(jb);

  json jc = json::array();
  for (const auto& c : combinations) {
    json e{{"pair", c.pair},
           {"extraction", c.extraction},
           {"selection", c.selection},
           {"classifier", c.classifier}};
    if (c.error.empty()) {
      e["report"] = cv_report_to_json(c.report);
      e["trace"] = json{{"indices", c.trace.ordered_indices},
                        {"step_scores", c.trace.step_scores},
                        {"criterion", c.trace.criterion}};
      e["baseline_accuracy"] = c.baseline_accuracy;
      e["gain_percent"] = c.gain_percent;
    } else {
      e["error"] = c.error;
    }
    jc.push_back(std::move(e));
  }
  doc["combinations"] = std::move(jc);

  if (!ranking.average_ranks.empty()) {
    json jr = json::array();
    for (int idx : ranking.ordering)
      jr.push_back(json{{"method", gain_table.method_names[static_cast<std::size_t>(idx)]},
                        {"average_rank", ranking.average_ranks[static_cast<std::size_t>(idx)]}});
    doc["ranking"] = std::move(jr);
  }
  if (friedman) {
    doc["friedman"] = json{{"chi_square", friedman->chi_square},
                           {"dof", friedman->dof},
                           {"p_value", friedman->p_value},
                           {"average_ranks", friedman->average_ranks}};
  }
  if (posthoc) {
    json rows = json::array();
    for (std::size_t i = 0; i < posthoc->method_names.size(); ++i) {
      rows.push_back(json{{"method", posthoc->method_names[i]},
                          {"unadjusted_p", posthoc->raw_p[i]},
                          {"p_holm", posthoc->adjusted_holm[i]},
                          {"p_hochberg", posthoc->adjusted_hochberg[i]},
                          {"p_hommel", posthoc->adjusted_hommel[i]}});
    }
    doc["posthoc"] = json{{"control", posthoc->control_method}, {"rows", std::move(rows)}};
  }
  doc["has_failures"] = has_failures;
  return doc;
}

void emit_tables(const RunReport& report, const std::filesystem::path& dir,
                 double wall_clock_seconds) {
  std::filesystem::create_directories(dir);
  atomic_write(dir / "report.json", report.to_json().dump(2) + "\n");
  atomic_write(dir / "meta.json",
               json{{"wall_clock_seconds", wall_clock_seconds},
                    {"library_version", kLibraryVersion}}
                       .dump(2) +
                   "\n");

  {
    std::ostringstream os;
    os << "combination,average_rank\n";
    for (int idx : report.ranking.ordering)
      os << report.gain_table.method_names[static_cast<std::size_t>(idx)] << ','
         << fmt9(report.ranking.average_ranks[static_cast<std::size_t>(idx)]) << '\n';
    atomic_write(dir / "ranking.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "combination,unadjusted p,p Homm,p Holm,p Hochberg\n";
    if (report.posthoc) {
      const auto& ph = *report.posthoc;
      // Mirror the paper's table layout: rows ascending by raw p.
      std::vector<std::size_t> order(ph.method_names.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](std::size_t a, std::size_t b) { return ph.raw_p[a] < ph.raw_p[b]; });
      for (std::size_t i : order)
        os << ph.method_names[i] << ',' << fmt9(ph.raw_p[i]) << ','
           << fmt9(ph.adjusted_hommel[i]) << ',' << fmt9(ph.adjusted_holm[i]) << ','
           << fmt9(ph.adjusted_hochberg[i]) << '\n';
    }
    atomic_write(dir / "posthoc.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "pair,extraction,selection,classifier,baseline_accuracy,best_accuracy,best_k,gain_percent,error\n";
    for (const auto& c : report.combinations) {
      os << c.pair << ',' << c.extraction << ',' << c.selection << ',' << c.classifier << ',';
      if (c.error.empty()) {
        os << fmt9(c.baseline_accuracy) << ',' << fmt9(c.report.best_accuracy) << ','
           << c.report.best_k << ',' << fmt9(c.gain_percent) << ',';
      } else {
        os << ",,,," << '"' << c.error << '"';
      }
      os << '\n';
    }
    atomic_write(dir / "gains.csv", os.str());
  }

  const auto curves = dir / "accuracy_curves";
  const auto traces = dir / "traces";
  std::filesystem::create_directories(curves);
  std::filesystem::create_directories(traces);
  for (const auto& c : report.combinations) {
    if (!c.error.empty()) continue;
    const std::string stem =
        c.pair + "_" + c.selection + "+" + c.extraction + "_" + c.classifier;
    {
      std::ostringstream os;
      os << "k,mean_accuracy\n";
      for (std::size_t k = 0; k < c.report.curve.size(); ++k)
        os << (k + 1) << ',' << fmt9(c.report.curve[k]) << '\n';
      atomic_write(curves / (stem + ".csv"), os.str());
    }
    {
      std::ostringstream os;
      os << "step,feature_index,criterion_value\n";
      for (std::size_t s = 0; s < c.trace.ordered_indices.size(); ++s)
        os << (s + 1) << ',' << c.trace.ordered_indices[s] << ','
           << fmt9(c.trace.step_scores[s]) << '\n';
      atomic_write(traces / (stem + ".csv"), os.str());
    }
  }
}

ComparisonTable comparison_table_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table " + path.string());
  ComparisonTable t;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty table file " + path.string());

  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
  };

  const auto header = split(line);
  if (header.size() < 2) throw DataError("table needs a method column and >= 1 data column");
  t.column_names.assign(header.begin() + 1, header.end());

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size())
      throw DataError("table row width mismatch in " + path.string());
    t.method_names.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        row.push_back(std::stod(fields[i]));
      } catch (const std::exception&) {
        throw DataError("bad numeric cell '" + fields[i] + "' in " + path.string());
      }
    }
    rows.push_back(std::move(row));
  }
  t.cells.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(t.column_names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      t.cells(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  t.validate();
  return t;
}

void comparison_table_to_csv(const ComparisonTable& table, const std::filesystem::path& path) {
  table.validate();
  std::ostringstream os;
  os << "method";
  for (const auto& c : table.column_names) os << ',' << c;
  os << '\n';
  for (std::size_t r = 0; r < table.method_names.size(); ++r) {
    os << table.method_names[r];
    for (Eigen::Index c = 0; c < table.cells.cols(); ++c)
      os << ',' << fmt9(table.cells(static_cast<Eigen::Index>(r), c));
    os << '\n';
  }
  atomic_write(path, os.str());
}

}  // namespace mtc
