#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mtc/signal.hpp"

namespace mtc {

enum class WindowKind { rectangular, hamming, hann };

struct WindowFunction {
  WindowKind kind{WindowKind::rectangular};

  std::vector<double> values(int length) const;
  // (1/M) * sum w^2(n), the periodogram normalizer.
  double power_u(int length) const;
};

struct WelchConfig {
  int sub_segment_len{62};
  int hop{31};  // D, hop size in samples; hop == sub_segment_len means no overlap
  WindowFunction window{WindowKind::hamming};
};

// AR model in the convention x(n) = -sum_m a_m x(n-m) + e(n), so the
// whitening polynomial is A(z) = 1 + sum a_i z^-i.
struct ArModel {
  std::vector<double> coefficients;  // a[1..p]
  double noise_variance{0.0};        // final prediction-error variance
  double sample_period{0.0};         // seconds
  int order() const { return static_cast<int>(coefficients.size()); }
};

struct AutocorrEstimate {
  std::vector<double> lags;  // biased r[0..M-1]
  Eigen::MatrixXd matrix;    // M x M symmetric Toeplitz
};

struct MusicConfig {
  int signal_dim{8};   // m, number of complex exponentials
  int corr_dim{20};    // M, autocorrelation matrix dimension
  double floor_epsilon{1e-12};
};

struct FrequencyGrid {
  std::vector<double> frequencies;  // strictly increasing, Hz

  // 52 points, 0 to 25.5 Hz in 0.5 Hz steps: the canonical per-channel grid.
  static FrequencyGrid canonical();
  static FrequencyGrid uniform(double start_hz, double step_hz, int count);
  std::size_t size() const { return frequencies.size(); }
  void validate() const;
};

struct PsdEstimate {
  FrequencyGrid grid;
  std::vector<double> power;      // finite, >= 0, one per grid point
  bool pseudospectrum{false};     // true for MUSIC/Pisarenko (uncalibrated)
};

PsdEstimate periodogram(const TimeSeriesSegment& segment, const WindowFunction& window,
                        const FrequencyGrid& grid);
PsdEstimate welch_psd(const TimeSeriesSegment& segment, const WelchConfig& cfg,
                      const FrequencyGrid& grid);

ArModel burg_fit(const TimeSeriesSegment& segment, int order);
PsdEstimate ar_psd(const ArModel& model, const FrequencyGrid& grid);
double aic(const ArModel& model, int n_samples);
// argmin of AIC over [p_min, p_max], ties broken toward the smaller order.
int select_ar_order(const TimeSeriesSegment& segment, int p_min, int p_max);

AutocorrEstimate autocorr_matrix(const TimeSeriesSegment& segment, int corr_dim);
PsdEstimate pisarenko_psd(const TimeSeriesSegment& segment, const MusicConfig& cfg,
                          const FrequencyGrid& grid);
PsdEstimate music_psd(const TimeSeriesSegment& segment, const MusicConfig& cfg,
                      const FrequencyGrid& grid);

// Trapezoidal integral of the PSD over [f_lo, f_hi], with linear
// interpolation at band edges that fall between grid points.
double band_power(const PsdEstimate& psd, double f_lo, double f_hi);

enum class PsdMethod { welch, burg, music };

struct FeatureConfig {
  PsdMethod method{PsdMethod::welch};
  WelchConfig welch;
  int burg_order{6};
  MusicConfig music;
};

// Channel-major concatenation of the per-channel PSD values
// (all grid points of channel 1, then channel 2, ...).
std::vector<double> extract_features(const SegmentedSample& sample, const FeatureConfig& cfg,
                                     const FrequencyGrid& grid);

}  // namespace mtc
