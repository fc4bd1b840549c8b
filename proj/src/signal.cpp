#include "mtc/signal.hpp"

#include <cmath>

namespace mtc {

void TimeSeriesSegment::validate() const {
  if (samples.empty()) throw DataError("TimeSeriesSegment: empty sample vector");
  if (!(sample_rate_hz > 0.0)) throw DataError("TimeSeriesSegment: sample rate must be > 0");
  for (double s : samples) {
    if (!std::isfinite(s)) throw DataError("TimeSeriesSegment: non-finite sample");
  }
}

void Trial::validate() const {
  if (channels.empty()) throw DataError("Trial: no channels");
  const std::size_t len = channels.front().size();
  for (const auto& ch : channels) {
    if (ch.size() != len) throw DataError("Trial: channel length mismatch");
    for (double s : ch) {
      if (!std::isfinite(s)) throw DataError("Trial: non-finite sample");
    }
  }
}

void Dataset::validate() const {
  if (!(sample_rate_hz > 0.0)) throw DataError("Dataset: sample rate must be > 0");
  for (const auto& t : trials) {
    t.validate();
    if (t.channels.size() != channel_names.size())
      throw DataError("Dataset: trial channel count does not match channel_names");
  }
}

std::vector<SegmentedSample> segment_trial(const Trial& trial, double sample_rate_hz,
                                           double segment_seconds, int label) {
  trial.validate();
  const double raw_len = segment_seconds * sample_rate_hz;
  const auto seg_len = static_cast<std::size_t>(std::llround(raw_len));
  if (seg_len < 2) throw ConfigError("segment_trial: segment shorter than 2 samples");
  const std::size_t n = trial.n_samples();
  if (seg_len > n) throw ConfigError("segment_trial: segment longer than trial");

  const std::size_t n_segments = n / seg_len;
  std::vector<SegmentedSample> out;
  out.reserve(n_segments);
  for (std::size_t s = 0; s < n_segments; ++s) {
    SegmentedSample sample;
    sample.label = label;
    sample.origin = {trial.subject_id, trial.trial_index, static_cast<int>(s)};
    sample.per_channel.reserve(trial.channels.size());
    for (const auto& ch : trial.channels) {
      TimeSeriesSegment seg;
      seg.sample_rate_hz = sample_rate_hz;
      seg.samples.assign(ch.begin() + static_cast<std::ptrdiff_t>(s * seg_len),
                         ch.begin() + static_cast<std::ptrdiff_t>((s + 1) * seg_len));
      sample.per_channel.push_back(std::move(seg));
    }
    out.push_back(std::move(sample));
  }
  return out;
}

}  // namespace mtc
