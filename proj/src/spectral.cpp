#include "mtc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mtc {
namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Burg recursion on mean-removed samples. Returns the prediction-error
// variance at every order 0..max_order (the recursion is nested, so one pass
// yields every lower-order model as a prefix stage).
struct BurgState {
  std::vector<double> coeffs;          // a[1..max_order]
  std::vector<double> error_by_order;  // E[0..max_order]
};

BurgState burg_recursion(const TimeSeriesSegment& segment, int max_order) {
  segment.validate();
  const auto n = segment.samples.size();
  if (max_order < 0) throw ConfigError("burg_fit: negative order");
  if (static_cast<std::size_t>(max_order) >= n)
    throw ConfigError("burg_fit: order must be smaller than the segment length");

  const double mu = mean_of(segment.samples);
  std::vector<double> f(n), b(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = b[i] = segment.samples[i] - mu;

  double e = 0.0;
  for (double v : f) e += v * v;
  e /= static_cast<double>(n);
  if (e <= 0.0) throw DataError("burg_fit: zero-variance segment");

  BurgState st;
  st.error_by_order.push_back(e);
  std::vector<double>& a = st.coeffs;

  for (int m = 1; m <= max_order; ++m) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = static_cast<std::size_t>(m); i < n; ++i) {
      num += f[i] * b[i - 1];
      den += f[i] * f[i] + b[i - 1] * b[i - 1];
    }
    if (den <= 0.0) throw DataError("burg_fit: degenerate prediction errors");
    const double k = -2.0 * num / den;

    std::vector<double> a_new(static_cast<std::size_t>(m));
    for (int i = 1; i < m; ++i) {
      a_new[static_cast<std::size_t>(i - 1)] = a[static_cast<std::size_t>(i - 1)] +
                                               k * a[static_cast<std::size_t>(m - i - 1)];
    }
    a_new[static_cast<std::size_t>(m - 1)] = k;
    a = std::move(a_new);

    for (std::size_t i = n - 1; i >= static_cast<std::size_t>(m); --i) {
      const double fi = f[i];
      const double bi1 = b[i - 1];
      f[i] = fi + k * bi1;
      b[i] = bi1 + k * fi;
    }

    e *= (1.0 - k * k);
    st.error_by_order.push_back(e);
  }
  return st;
}

// Squared modulus of sum_n c[n] e^{-j w n} by direct summation.
double steering_power(const std::vector<double>& c, double omega) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double ph = omega * static_cast<double>(i);
    re += c[i] * std::cos(ph);
    im -= c[i] * std::sin(ph);
  }
  return re * re + im * im;
}

PsdEstimate subspace_psd(const TimeSeriesSegment& segment, const MusicConfig& cfg,
                         const FrequencyGrid& grid, int n_noise_vectors) {
  grid.validate();
  if (cfg.signal_dim <= 0 || cfg.signal_dim >= cfg.corr_dim)
    throw ConfigError("subspace PSD: need 0 < signal_dim < corr_dim");
  const auto est = autocorr_matrix(segment, cfg.corr_dim);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(est.matrix);
  if (eig.info() != Eigen::Success)
    throw NumericError("subspace PSD: eigendecomposition failed");
  // Eigenvalues come out ascending; noise subspace = the smallest ones.

  const double dt = 1.0 / segment.sample_rate_hz;
  PsdEstimate out;
  out.grid = grid;
  out.pseudospectrum = true;
  out.power.reserve(grid.size());
  std::vector<double> v(static_cast<std::size_t>(cfg.corr_dim));
  for (double f : grid.frequencies) {
    const double omega = 2.0 * M_PI * f * dt;
    double denom = 0.0;
    for (int k = 0; k < n_noise_vectors; ++k) {
      for (int i = 0; i < cfg.corr_dim; ++i) v[static_cast<std::size_t>(i)] = eig.eigenvectors()(i, k);
      denom += steering_power(v, omega);
    }
    out.power.push_back(1.0 / std::max(denom, cfg.floor_epsilon));
  }
  return out;
}

}  // namespace

std::vector<double> WindowFunction::values(int length) const {
  if (length <= 0) throw ConfigError("WindowFunction: non-positive length");
  std::vector<double> w(static_cast<std::size_t>(length), 1.0);
  if (length == 1 || kind == WindowKind::rectangular) return w;
  const double denom = static_cast<double>(length - 1);
  for (int i = 0; i < length; ++i) {
    const double c = std::cos(2.0 * M_PI * static_cast<double>(i) / denom);
    switch (kind) {
      case WindowKind::hamming: w[static_cast<std::size_t>(i)] = 0.54 - 0.46 * c; break;
      case WindowKind::hann: w[static_cast<std::size_t>(i)] = 0.5 * (1.0 - c); break;
      case WindowKind::rectangular: break;
    }
  }
  return w;
}

double WindowFunction::power_u(int length) const {
  const auto w = values(length);
  double s = 0.0;
  for (double v : w) s += v * v;
  return s / static_cast<double>(length);
}

FrequencyGrid FrequencyGrid::canonical() { return uniform(0.0, 0.5, 52); }

FrequencyGrid FrequencyGrid::uniform(double start_hz, double step_hz, int count) {
  if (count < 1 || !(step_hz > 0.0)) throw ConfigError("FrequencyGrid: bad uniform grid");
  FrequencyGrid g;
  g.frequencies.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g.frequencies.push_back(start_hz + step_hz * i);
  return g;
}

void FrequencyGrid::validate() const {
  if (frequencies.empty()) throw ConfigError("FrequencyGrid: empty");
  for (std::size_t i = 1; i < frequencies.size(); ++i) {
    if (!(frequencies[i] > frequencies[i - 1]))
      throw ConfigError("FrequencyGrid: not strictly increasing");
  }
  if (frequencies.front() < 0.0) throw ConfigError("FrequencyGrid: negative frequency");
}

PsdEstimate periodogram(const TimeSeriesSegment& segment, const WindowFunction& window,
                        const FrequencyGrid& grid) {
  segment.validate();
  grid.validate();
  if (grid.frequencies.back() > segment.nyquist_hz() + 1e-12)
    throw ConfigError("periodogram: grid frequency above Nyquist");

  const int m = static_cast<int>(segment.size());
  const auto w = window.values(m);
  const double u = window.power_u(m);
  std::vector<double> wx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    wx[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] * segment.samples[static_cast<std::size_t>(i)];

  PsdEstimate out;
  out.grid = grid;
  out.power.reserve(grid.size());
  const double scale = 1.0 / (static_cast<double>(m) * u);
  for (double f : grid.frequencies) {
    const double omega = 2.0 * M_PI * f / segment.sample_rate_hz;
    out.power.push_back(scale * steering_power(wx, omega));
  }
  return out;
}

PsdEstimate welch_psd(const TimeSeriesSegment& segment, const WelchConfig& cfg,
                      const FrequencyGrid& grid) {
  segment.validate();
  grid.validate();
  const int n = static_cast<int>(segment.size());
  if (cfg.sub_segment_len <= 0 || cfg.sub_segment_len > n)
    throw ConfigError("welch_psd: sub-segment length must be in (0, N]");
  if (cfg.hop <= 0 || cfg.hop > cfg.sub_segment_len)
    throw ConfigError("welch_psd: hop must be in (0, sub_segment_len]");

  const int k = 1 + (n - cfg.sub_segment_len) / cfg.hop;
  PsdEstimate acc;
  acc.grid = grid;
  acc.power.assign(grid.size(), 0.0);
  TimeSeriesSegment sub;
  sub.sample_rate_hz = segment.sample_rate_hz;
  for (int i = 0; i < k; ++i) {
    const auto begin = segment.samples.begin() + static_cast<std::ptrdiff_t>(i) * cfg.hop;
    sub.samples.assign(begin, begin + cfg.sub_segment_len);
    const auto p = periodogram(sub, cfg.window, grid);
    for (std::size_t j = 0; j < acc.power.size(); ++j) acc.power[j] += p.power[j];
  }
  for (auto& v : acc.power) v /= static_cast<double>(k);
  return acc;
}

ArModel burg_fit(const TimeSeriesSegment& segment, int order) {
  const auto st = burg_recursion(segment, order);
  ArModel m;
  m.coefficients = st.coeffs;
  m.noise_variance = st.error_by_order.back();
  m.sample_period = 1.0 / segment.sample_rate_hz;
  return m;
}

PsdEstimate ar_psd(const ArModel& model, const FrequencyGrid& grid) {
  grid.validate();
  if (!(model.sample_period > 0.0)) throw ConfigError("ar_psd: model has no sample period");

  PsdEstimate out;
  out.grid = grid;
  out.power.reserve(grid.size());
  const double num = model.noise_variance * model.sample_period;
  for (double f : grid.frequencies) {
    const double omega = 2.0 * M_PI * f * model.sample_period;
    double re = 1.0, im = 0.0;
    for (std::size_t i = 0; i < model.coefficients.size(); ++i) {
      const double ph = omega * static_cast<double>(i + 1);
      re += model.coefficients[i] * std::cos(ph);
      im -= model.coefficients[i] * std::sin(ph);
    }
    out.power.push_back(num / (re * re + im * im));
  }
  return out;
}

double aic(const ArModel& model, int n_samples) {
  if (!(model.noise_variance > 0.0)) throw DataError("aic: non-positive error variance");
  if (n_samples <= 0) throw ConfigError("aic: non-positive sample count");
  return std::log(model.noise_variance) +
         2.0 * static_cast<double>(model.order()) / static_cast<double>(n_samples);
}

int select_ar_order(const TimeSeriesSegment& segment, int p_min, int p_max) {
  if (p_min < 1 || p_min > p_max) throw ConfigError("select_ar_order: bad order range");
  const auto st = burg_recursion(segment, p_max);
  const double n = static_cast<double>(segment.size());
  int best_p = p_min;
  double best = std::numeric_limits<double>::infinity();
  for (int p = p_min; p <= p_max; ++p) {
    const double e = st.error_by_order[static_cast<std::size_t>(p)];
    if (e <= 0.0) throw NumericError("select_ar_order: error variance collapsed");
    const double a = std::log(e) + 2.0 * static_cast<double>(p) / n;
    if (a < best) {  // strict: ties keep the smaller order
      best = a;
      best_p = p;
    }
  }
  return best_p;
}

AutocorrEstimate autocorr_matrix(const TimeSeriesSegment& segment, int corr_dim) {
  segment.validate();
  const auto n = segment.size();
  if (corr_dim < 1 || static_cast<std::size_t>(corr_dim) > n)
    throw ConfigError("autocorr_matrix: corr_dim must be in [1, N]");

  AutocorrEstimate est;
  est.lags.resize(static_cast<std::size_t>(corr_dim));
  const auto& x = segment.samples;
  for (int k = 0; k < corr_dim; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i)
      s += x[i] * x[i + static_cast<std::size_t>(k)];
    est.lags[static_cast<std::size_t>(k)] = s / static_cast<double>(n);
  }
  est.matrix.resize(corr_dim, corr_dim);
  for (int i = 0; i < corr_dim; ++i)
    for (int j = 0; j < corr_dim; ++j) est.matrix(i, j) = est.lags[static_cast<std::size_t>(std::abs(i - j))];
  return est;
}

PsdEstimate pisarenko_psd(const TimeSeriesSegment& segment, const MusicConfig& cfg,
                          const FrequencyGrid& grid) {
  if (cfg.corr_dim != cfg.signal_dim + 1)
    throw ConfigError("pisarenko_psd: requires corr_dim == signal_dim + 1");
  return subspace_psd(segment, cfg, grid, 1);
}

PsdEstimate music_psd(const TimeSeriesSegment& segment, const MusicConfig& cfg,
                      const FrequencyGrid& grid) {
  return subspace_psd(segment, cfg, grid, cfg.corr_dim - cfg.signal_dim);
}

double band_power(const PsdEstimate& psd, double f_lo, double f_hi) {
  const auto& f = psd.grid.frequencies;
  if (!(f_lo <= f_hi)) throw ConfigError("band_power: f_lo > f_hi");
  if (f_lo < f.front() || f_hi > f.back()) throw ConfigError("band_power: band outside grid");
  if (f_lo == f_hi) return 0.0;

  auto value_at = [&](double x) {
    const auto it = std::lower_bound(f.begin(), f.end(), x);
    const auto j = static_cast<std::size_t>(it - f.begin());
    if (j < f.size() && f[j] == x) return psd.power[j];
    const double t = (x - f[j - 1]) / (f[j] - f[j - 1]);
    return psd.power[j - 1] + t * (psd.power[j] - psd.power[j - 1]);
  };

  double total = 0.0;
  double prev_f = f_lo, prev_p = value_at(f_lo);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] <= f_lo) continue;
    if (f[i] >= f_hi) break;
    total += 0.5 * (prev_p + psd.power[i]) * (f[i] - prev_f);
    prev_f = f[i];
    prev_p = psd.power[i];
  }
  total += 0.5 * (prev_p + value_at(f_hi)) * (f_hi - prev_f);
  return total;
}

std::vector<double> extract_features(const SegmentedSample& sample, const FeatureConfig& cfg,
                                     const FrequencyGrid& grid) {
  grid.validate();
  std::vector<double> features;
  features.reserve(sample.per_channel.size() * grid.size());
  for (std::size_t c = 0; c < sample.per_channel.size(); ++c) {
    PsdEstimate psd;
    try {
      switch (cfg.method) {
        case PsdMethod::welch:
          psd = welch_psd(sample.per_channel[c], cfg.welch, grid);
          break;
        case PsdMethod::burg:
          psd = ar_psd(burg_fit(sample.per_channel[c], cfg.burg_order), grid);
          break;
        case PsdMethod::music:
          psd = music_psd(sample.per_channel[c], cfg.music, grid);
          break;
      }
    } catch (const Error& e) {
      throw DataError("extract_features: channel " + std::to_string(c) + ": " + e.what());
    }
    features.insert(features.end(), psd.power.begin(), psd.power.end());
  }
  return features;
}

}  // namespace mtc
