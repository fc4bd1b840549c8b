#include "mtc/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace mtc {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 5> kTaskLabels = {"B", "L", "M", "C", "R"};

bool known_task(const std::string& t) {
  return std::find(kTaskLabels.begin(), kTaskLabels.end(), t) != kTaskLabels.end();
}

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string trial_file_name(const Trial& t) {
  return "trial_" + t.subject_id + "_" + t.task_label + "_" + std::to_string(t.trial_index) +
         ".csv";
}

// Deterministic standard-normal stream: Box-Muller over mt19937_64 uniforms.
// std::normal_distribution is implementation-defined, which would break the
// byte-identical contract across standard libraries.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : rng_(seed) {}

  double uniform() {  // in [0,1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 rng_;
  bool have_spare_{false};
  double spare_{0.0};
};

}  // namespace

Dataset load_dataset(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw IoError("load_dataset: cannot open manifest " + manifest_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("load_dataset: manifest parse error in " + manifest_path.string() + ": " +
                  e.what());
  }

  Dataset ds;
  try {
    ds.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    ds.channel_names = j.at("channel_names").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw IoError("load_dataset: bad manifest " + manifest_path.string() + ": " + e.what());
  }
  const std::size_t n_channels = ds.channel_names.size();
  const auto dir = manifest_path.parent_path();

  for (const auto& tj : j.value("trials", json::array())) {
    Trial t;
    t.subject_id = tj.at("subject").get<std::string>();
    t.task_label = tj.at("task").get<std::string>();
    t.trial_index = tj.at("trial_index").get<int>();
    if (!known_task(t.task_label))
      throw DataError("load_dataset: unknown task label '" + t.task_label + "' in " +
                      manifest_path.string());
    const auto file = dir / tj.at("file").get<std::string>();
    std::ifstream csv(file);
    if (!csv) throw IoError("load_dataset: missing trial file " + file.string());
    t.channels.assign(n_channels, {});
    std::string line;
    int line_no = 0;
    while (std::getline(csv, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::size_t pos = 0;
      for (std::size_t c = 0; c < n_channels; ++c) {
        const char* start = line.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start)
          throw DataError("load_dataset: bad value at " + file.string() + ":" +
                          std::to_string(line_no));
        t.channels[c].push_back(v);
        pos = static_cast<std::size_t>(end - line.c_str());
        if (c + 1 < n_channels) {
          if (pos >= line.size() || line[pos] != ',')
            throw DataError("load_dataset: expected " + std::to_string(n_channels) +
                            " columns at " + file.string() + ":" + std::to_string(line_no));
          ++pos;
        }
      }
    }
    const std::size_t len = t.channels.front().size();
    for (const auto& ch : t.channels) {
      if (ch.size() != len)
        throw DataError("load_dataset: channel length mismatch in " + file.string());
    }
    ds.trials.push_back(std::move(t));
  }

  if (!ds.trials.empty()) {
    const std::size_t len = ds.trials.front().n_samples();
    for (const auto& t : ds.trials) {
      if (t.n_samples() != len)
        throw DataError("load_dataset: trials have differing lengths in " +
                        manifest_path.string());
    }
  }
  ds.validate();
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& manifest_path) {
  dataset.validate();
  const auto dir = manifest_path.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);

  json trials = json::array();
  for (const auto& t : dataset.trials) {
    const std::string fname = trial_file_name(t);
    std::ofstream csv(dir / fname);
    if (!csv) throw IoError("save_dataset: cannot write " + (dir / fname).string());
    for (std::size_t n = 0; n < t.n_samples(); ++n) {
      for (std::size_t c = 0; c < t.channels.size(); ++c) {
        if (c) csv << ',';
        csv << fmt9(t.channels[c][n]);
      }
      csv << '\n';
    }
    trials.push_back({{"subject", t.subject_id},
                      {"task", t.task_label},
                      {"trial_index", t.trial_index},
                      {"file", fname}});
  }

  json j{{"sample_rate_hz", dataset.sample_rate_hz},
         {"channel_names", dataset.channel_names},
         {"trials", trials}};
  std::ofstream out(manifest_path);
  if (!out) throw IoError("save_dataset: cannot write manifest " + manifest_path.string());
  out << j.dump(2) << '\n';
}

SynthSpec synth_spec_from_json(const json& j) {
  SynthSpec s;
  s.sample_rate_hz = j.value("sample_rate_hz", s.sample_rate_hz);
  s.trial_seconds = j.value("trial_seconds", s.trial_seconds);
  s.n_channels = j.value("n_channels", s.n_channels);
  s.trials_per_class = j.value("trials_per_class", s.trials_per_class);
  s.noise_std = j.value("noise_std", s.noise_std);
  s.ar_background = j.value("ar_background", s.ar_background);
  s.ar_a1 = j.value("ar_a1", s.ar_a1);
  s.ar_a2 = j.value("ar_a2", s.ar_a2);
  s.ar_std = j.value("ar_std", s.ar_std);
  s.subject_id = j.value("subject_id", s.subject_id);
  if (j.contains("channel_names"))
    s.channel_names = j["channel_names"].get<std::vector<std::string>>();
  for (const auto& cj : j.value("classes", json::array())) {
    SynthClassProfile cp;
    cp.task_label = cj.at("task_label").get<std::string>();
    for (const auto& bj : cj.value("bands", json::array())) {
      SynthBand b;
      b.center_hz = bj.at("center_hz").get<double>();
      b.bandwidth_hz = bj.value("bandwidth_hz", 0.0);
      b.channel_amplitudes = bj.at("channel_amplitudes").get<std::vector<double>>();
      cp.bands.push_back(std::move(b));
    }
    s.classes.push_back(std::move(cp));
  }
  return s;
}

SynthSpec synth_spec_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("synth spec: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("synth spec: parse error in " + path.string() + ": " + e.what());
  }
  return synth_spec_from_json(j);
}

Dataset synth_generate(const SynthSpec& spec, std::uint64_t seed) {
  if (spec.n_channels <= 0) throw ConfigError("synth_generate: n_channels must be > 0");
  if (!(spec.sample_rate_hz > 0.0)) throw ConfigError("synth_generate: sample rate must be > 0");
  if (spec.classes.empty()) throw ConfigError("synth_generate: no classes");
  const double nyquist = 0.5 * spec.sample_rate_hz;
  for (const auto& cls : spec.classes) {
    if (!known_task(cls.task_label))
      throw ConfigError("synth_generate: unknown task label '" + cls.task_label + "'");
    for (const auto& b : cls.bands) {
      if (b.center_hz >= nyquist)
        throw ConfigError("synth_generate: band center at or above Nyquist");
      if (static_cast<int>(b.channel_amplitudes.size()) != spec.n_channels)
        throw ConfigError("synth_generate: band amplitude count != n_channels");
    }
  }

  const auto n_samples =
      static_cast<std::size_t>(std::llround(spec.trial_seconds * spec.sample_rate_hz));
  if (n_samples < 2) throw ConfigError("synth_generate: trial too short");

  Dataset ds;
  ds.sample_rate_hz = spec.sample_rate_hz;
  if (!spec.channel_names.empty()) {
    if (static_cast<int>(spec.channel_names.size()) != spec.n_channels)
      throw ConfigError("synth_generate: channel_names size != n_channels");
    ds.channel_names = spec.channel_names;
  } else {
    static const std::array<const char*, 6> canonical = {"C3", "C4", "P3", "P4", "O1", "O2"};
    for (int c = 0; c < spec.n_channels; ++c) {
      ds.channel_names.push_back(c < 6 ? canonical[static_cast<std::size_t>(c)]
                                       : "CH" + std::to_string(c + 1));
    }
  }

  NormalStream rng(seed);
  const double dt = 1.0 / spec.sample_rate_hz;

  for (std::size_t ci = 0; ci < spec.classes.size(); ++ci) {
    const auto& cls = spec.classes[ci];
    for (int ti = 0; ti < spec.trials_per_class; ++ti) {
      Trial trial;
      trial.subject_id = spec.subject_id;
      trial.task_label = cls.task_label;
      trial.trial_index = ti;
      trial.channels.assign(static_cast<std::size_t>(spec.n_channels),
                            std::vector<double>(n_samples, 0.0));

      // Frequency jitter and phase are drawn once per (trial, band) and
      // shared across channels, so channels carrying the same band are
      // genuinely redundant copies of the same component.
      std::vector<double> band_freq(cls.bands.size()), band_phase(cls.bands.size());
      for (std::size_t bi = 0; bi < cls.bands.size(); ++bi) {
        band_freq[bi] =
            cls.bands[bi].center_hz + (rng.uniform() - 0.5) * cls.bands[bi].bandwidth_hz;
        band_phase[bi] = 2.0 * M_PI * rng.uniform();
      }

      for (int c = 0; c < spec.n_channels; ++c) {
        auto& ch = trial.channels[static_cast<std::size_t>(c)];
        double x1 = 0.0, x2 = 0.0;  // AR(2) state
        for (std::size_t n = 0; n < n_samples; ++n) {
          double v = spec.noise_std * rng.normal();
          if (spec.ar_background) {
            const double x = spec.ar_a1 * x1 + spec.ar_a2 * x2 + spec.ar_std * rng.normal();
            x2 = x1;
            x1 = x;
            v += x;
          }
          for (std::size_t bi = 0; bi < cls.bands.size(); ++bi) {
            const double a = cls.bands[bi].channel_amplitudes[static_cast<std::size_t>(c)];
            if (a != 0.0)
              v += a * std::sin(2.0 * M_PI * band_freq[bi] * static_cast<double>(n) * dt +
                                band_phase[bi]);
          }
          ch[n] = v;
        }
      }
      ds.trials.push_back(std::move(trial));
    }
  }
  return ds;
}

}  // namespace mtc
