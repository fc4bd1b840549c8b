#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtc/signal.hpp"

namespace mtc {

// Canonical on-disk format: a JSON manifest {sample_rate_hz, channel_names[],
// trials[]} where every trial entry points at a headerless CSV file with one
// column per channel and one row per sample. Values are printed with 9
// significant digits; write -> read -> write is byte-stable.
Dataset load_dataset(const std::filesystem::path& manifest_path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& manifest_path);

// One injected narrowband component: a sinusoid at center_hz (jittered per
// trial within +-bandwidth_hz/2, random phase) scaled per channel.
struct SynthBand {
  double center_hz{10.0};
  double bandwidth_hz{0.0};
  std::vector<double> channel_amplitudes;  // one entry per channel
};

struct SynthClassProfile {
  std::string task_label;  // task name this class masquerades as (B, L, ...)
  std::vector<SynthBand> bands;
};

// EEG-like surrogate: white noise, optional AR(2) colored background, plus
// per-class narrowband sinusoids. Substitutes for recordings we cannot ship.
struct SynthSpec {
  double sample_rate_hz{250.0};
  double trial_seconds{10.0};
  int n_channels{6};
  int trials_per_class{5};
  double noise_std{1.0};
  bool ar_background{false};
  double ar_a1{0.0};  // background model x(n) = ar_a1*x(n-1) + ar_a2*x(n-2) + e(n)
  double ar_a2{0.0};
  double ar_std{1.0};
  std::string subject_id{"synth"};
  std::vector<std::string> channel_names;  // defaults to C3,C4,P3,P4,O1,O2 truncated/extended
  std::vector<SynthClassProfile> classes;
};

SynthSpec synth_spec_from_json(const nlohmann::json& j);
SynthSpec synth_spec_from_json_file(const std::filesystem::path& path);

// Pure function of (spec, seed): same arguments, byte-identical Dataset.
Dataset synth_generate(const SynthSpec& spec, std::uint64_t seed);

}  // namespace mtc
