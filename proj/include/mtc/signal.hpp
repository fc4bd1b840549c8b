#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtc/errors.hpp"

namespace mtc {

// One fixed-rate window of real samples, the unit all PSD estimators consume.
struct TimeSeriesSegment {
  std::vector<double> samples;
  double sample_rate_hz{0.0};

  void validate() const;
  std::size_t size() const { return samples.size(); }
  double nyquist_hz() const { return 0.5 * sample_rate_hz; }
};

struct Trial {
  std::vector<std::vector<double>> channels;  // channels[ch][sample]
  std::string task_label;                     // one of B, L, M, C, R
  std::string subject_id;
  int trial_index{0};

  std::size_t n_samples() const { return channels.empty() ? 0 : channels.front().size(); }
  void validate() const;
};

struct Dataset {
  std::vector<Trial> trials;
  double sample_rate_hz{0.0};
  std::vector<std::string> channel_names;

  void validate() const;
};

struct SegmentOrigin {
  std::string subject;
  int trial_index{0};
  int segment_index{0};
};

// A half-second (in the canonical protocol) multichannel slice plus its
// binary class label; the classification sample of the whole pipeline.
struct SegmentedSample {
  std::vector<TimeSeriesSegment> per_channel;
  int label{0};  // binary {0,1}
  SegmentOrigin origin;
};

// Cuts a trial into non-overlapping contiguous segments of
// round(segment_seconds * fs) samples. Trailing samples that do not fill a
// whole segment are dropped. `label` is the binary class assigned to every
// produced sample (task-pair mapping happens upstream).
std::vector<SegmentedSample> segment_trial(const Trial& trial, double sample_rate_hz,
                                           double segment_seconds, int label = 0);

}  // namespace mtc
