#include "mtc/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtc {
namespace {

std::vector<double> to_binary_doubles(const std::vector<int>& labels) {
  std::vector<double> y(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("labels must be binary {0,1}");
    y[i] = static_cast<double>(labels[i]);
  }
  return y;
}

void require_both_classes(const std::vector<int>& labels) {
  bool has0 = false, has1 = false;
  for (int l : labels) (l == 0 ? has0 : has1) = true;
  if (!has0 || !has1) throw DataError("both classes must be present");
}

// Equal-width bin assignment over the observed range; a constant vector
// collapses to a single occupied bin.
std::vector<int> discretize(const Eigen::VectorXd& x, int bins) {
  if (bins < 1) throw ConfigError("discretize: bins must be >= 1");
  const double lo = x.minCoeff();
  const double hi = x.maxCoeff();
  std::vector<int> idx(static_cast<std::size_t>(x.size()), 0);
  if (hi <= lo) return idx;
  const double scale = static_cast<double>(bins) / (hi - lo);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    int b = static_cast<int>((x[i] - lo) * scale);
    if (b >= bins) b = bins - 1;
    idx[static_cast<std::size_t>(i)] = b;
  }
  return idx;
}

double mi_from_counts(const std::vector<int>& xi, int nx, const std::vector<int>& yi, int ny) {
  const auto n = xi.size();
  std::vector<double> joint(static_cast<std::size_t>(nx * ny), 0.0);
  std::vector<double> px(static_cast<std::size_t>(nx), 0.0), py(static_cast<std::size_t>(ny), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    joint[static_cast<std::size_t>(xi[i] * ny + yi[i])] += 1.0;
    px[static_cast<std::size_t>(xi[i])] += 1.0;
    py[static_cast<std::size_t>(yi[i])] += 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double mi = 0.0;
  for (int a = 0; a < nx; ++a) {
    for (int b = 0; b < ny; ++b) {
      const double pj = joint[static_cast<std::size_t>(a * ny + b)] * inv_n;
      if (pj <= 0.0) continue;
      const double pa = px[static_cast<std::size_t>(a)] * inv_n;
      const double pb = py[static_cast<std::size_t>(b)] * inv_n;
      mi += pj * std::log(pj / (pa * pb));
    }
  }
  return std::max(mi, 0.0);
}

double mi_feature_feature(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int bins) {
  return mi_from_counts(discretize(a, bins), bins, discretize(b, bins), bins);
}

struct ClassMoments {
  double mean0, mean1, var0, var1;  // population variances
  Eigen::Index n0, n1;
};

ClassMoments per_class_moments(const Eigen::VectorXd& feature, const std::vector<int>& labels) {
  require_both_classes(labels);
  if (static_cast<std::size_t>(feature.size()) != labels.size())
    throw DataError("feature/labels size mismatch");
  ClassMoments m{0.0, 0.0, 0.0, 0.0, 0, 0};
  for (Eigen::Index i = 0; i < feature.size(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == 0) {
      m.mean0 += feature[i];
      ++m.n0;
    } else {
      m.mean1 += feature[i];
      ++m.n1;
    }
  }
  m.mean0 /= static_cast<double>(m.n0);
  m.mean1 /= static_cast<double>(m.n1);
  for (Eigen::Index i = 0; i < feature.size(); ++i) {
    const double d0 = feature[i] - m.mean0;
    const double d1 = feature[i] - m.mean1;
    if (labels[static_cast<std::size_t>(i)] == 0)
      m.var0 += d0 * d0;
    else
      m.var1 += d1 * d1;
  }
  m.var0 /= static_cast<double>(m.n0);
  m.var1 /= static_cast<double>(m.n1);
  return m;
}

// Sigma + lambda I with lambda = 1e-6 * trace / d, the regularization used
// everywhere a covariance gets inverted.
Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov) {
  const double lambda = 1e-6 * cov.trace() / static_cast<double>(cov.rows());
  return cov + lambda * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
}

double spd_log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  double ld = 0.0;
  const auto& l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < l.rows(); ++i) ld += std::log(l(i, i));
  return 2.0 * ld;
}

Eigen::MatrixXd subset_columns(const Eigen::MatrixXd& values, const std::vector<int>& cols) {
  Eigen::MatrixXd out(values.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = values.col(cols[j]);
  return out;
}

const char* uni_name(UnivariateCriterion c) {
  switch (c) {
    case UnivariateCriterion::corr: return "corr";
    case UnivariateCriterion::mi: return "mi";
    case UnivariateCriterion::fdr: return "fdr";
    case UnivariateCriterion::ranksum: return "ranksum";
  }
  return "?";
}

const char* multi_name(MultivariateCriterion c) {
  switch (c) {
    case MultivariateCriterion::chernoff: return "chernoff";
    case MultivariateCriterion::bhattacharyya: return "bd";
    case MultivariateCriterion::scatter_ratio: return "sr";
    case MultivariateCriterion::regression: return "lr";
    case MultivariateCriterion::mrmr: return "mrmr";
  }
  return "?";
}

}  // namespace

void LabeledFeatureMatrix::validate() const {
  if (static_cast<std::size_t>(values.rows()) != labels.size())
    throw DataError("LabeledFeatureMatrix: row/label count mismatch");
  if (!values.allFinite()) throw DataError("LabeledFeatureMatrix: non-finite value");
  if (!feature_names.empty() &&
      static_cast<Eigen::Index>(feature_names.size()) != values.cols())
    throw DataError("LabeledFeatureMatrix: feature_names size mismatch");
  for (int l : labels)
    if (l != 0 && l != 1) throw DataError("LabeledFeatureMatrix: labels must be {0,1}");
}

int resolve_mi_bins(const MiConfig& cfg, Eigen::Index n_samples) {
  if (cfg.bins > 0) return cfg.bins;
  const int b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_samples))));
  return std::min(std::max(b, 1), 32);
}

ClassGaussianStats class_gaussian_stats(const Eigen::MatrixXd& values,
                                        const std::vector<int>& labels) {
  require_both_classes(labels);
  if (static_cast<std::size_t>(values.rows()) != labels.size())
    throw DataError("class_gaussian_stats: row/label count mismatch");

  const Eigen::Index d = values.cols();
  Eigen::Index n0 = 0, n1 = 0;
  for (int l : labels) (l == 0 ? n0 : n1)++;
  const Eigen::Index n = values.rows();

  Eigen::MatrixXd x0(n0, d), x1(n1, d);
  Eigen::Index i0 = 0, i1 = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[static_cast<std::size_t>(i)] == 0)
      x0.row(i0++) = values.row(i);
    else
      x1.row(i1++) = values.row(i);
  }

  ClassGaussianStats s;
  s.mean0 = x0.colwise().mean();
  s.mean1 = x1.colwise().mean();
  s.prior0 = static_cast<double>(n0) / static_cast<double>(n);
  s.prior1 = static_cast<double>(n1) / static_cast<double>(n);
  x0.rowwise() -= s.mean0.transpose();
  x1.rowwise() -= s.mean1.transpose();
  s.cov0 = (x0.transpose() * x0) / static_cast<double>(n0);
  s.cov1 = (x1.transpose() * x1) / static_cast<double>(n1);
  s.global_mean = s.prior0 * s.mean0 + s.prior1 * s.mean1;
  s.within_scatter = s.prior0 * s.cov0 + s.prior1 * s.cov1;
  const Eigen::VectorXd d0 = s.mean0 - s.global_mean;
  const Eigen::VectorXd d1 = s.mean1 - s.global_mean;
  s.between_scatter = s.prior0 * (d0 * d0.transpose()) + s.prior1 * (d1 * d1.transpose());
  return s;
}

double corr_score(const Eigen::VectorXd& feature, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(feature.size()) != labels.size())
    throw DataError("corr_score: size mismatch");
  const auto y = to_binary_doubles(labels);
  const auto n = static_cast<double>(feature.size());
  const double mx = feature.mean();
  double my = 0.0;
  for (double v : y) my += v;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (Eigen::Index i = 0; i < feature.size(); ++i) {
    const double dx = feature[i] - mx;
    const double dy = y[static_cast<std::size_t>(i)] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw DataError("corr_score: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double mi_score(const Eigen::VectorXd& feature, const std::vector<int>& labels, int bins) {
  if (static_cast<std::size_t>(feature.size()) != labels.size())
    throw DataError("mi_score: size mismatch");
  if (feature.size() < bins) throw ConfigError("mi_score: fewer samples than bins");
  std::vector<int> yi(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw DataError("mi_score: labels must be {0,1}");
    yi[i] = labels[i];
  }
  return mi_from_counts(discretize(feature, bins), bins, yi, 2);
}

double fdr_score(const Eigen::VectorXd& feature, const std::vector<int>& labels) {
  const auto m = per_class_moments(feature, labels);
  if (m.n0 < 2 || m.n1 < 2) throw DataError("fdr_score: each class needs >= 2 samples");
  const double num = (m.mean0 - m.mean1) * (m.mean0 - m.mean1);
  const double den = m.var0 + m.var1;
  if (den <= 0.0) {
    if (num == 0.0) return 0.0;
    throw NumericError("fdr_score: degenerate separability (zero variance, distinct means)");
  }
  return num / den;
}

double ranksum_score(const Eigen::VectorXd& feature, const std::vector<int>& labels) {
  require_both_classes(labels);
  if (static_cast<std::size_t>(feature.size()) != labels.size())
    throw DataError("ranksum_score: size mismatch");
  std::vector<double> c1, c2;
  for (Eigen::Index i = 0; i < feature.size(); ++i)
    (labels[static_cast<std::size_t>(i)] == 0 ? c1 : c2).push_back(feature[i]);
  std::sort(c2.begin(), c2.end());
  // t = #{(l,m) : x_l <= x_m} = sum over class-1 samples of class-2 values >= x_l
  double t = 0.0;
  for (double x : c1) {
    const auto it = std::lower_bound(c2.begin(), c2.end(), x);
    t += static_cast<double>(c2.end() - it);
  }
  const double total = static_cast<double>(c1.size()) * static_cast<double>(c2.size());
  return std::max(t, total - t);
}

std::vector<FeatureScore> rank_univariate(const LabeledFeatureMatrix& matrix,
                                          UnivariateCriterion criterion, int cap,
                                          const MiConfig& mi) {
  if (cap < 1) throw ConfigError("rank_univariate: cap must be >= 1");
  matrix.validate();
  require_both_classes(matrix.labels);
  const int bins = resolve_mi_bins(mi, matrix.n_samples());

  struct Entry {
    int index;
    double score;
    bool degenerate;
  };
  std::vector<Entry> entries;
  entries.reserve(static_cast<std::size_t>(matrix.n_features()));
  for (Eigen::Index j = 0; j < matrix.n_features(); ++j) {
    Entry e{static_cast<int>(j), 0.0, false};
    try {
      switch (criterion) {
        case UnivariateCriterion::corr:
          e.score = std::abs(corr_score(matrix.values.col(j), matrix.labels));
          break;
        case UnivariateCriterion::mi:
          e.score = mi_score(matrix.values.col(j), matrix.labels, bins);
          break;
        case UnivariateCriterion::fdr:
          e.score = fdr_score(matrix.values.col(j), matrix.labels);
          break;
        case UnivariateCriterion::ranksum:
          e.score = ranksum_score(matrix.values.col(j), matrix.labels);
          break;
      }
    } catch (const Error&) {
      e.score = 0.0;
      e.degenerate = true;
    }
    entries.push_back(e);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.degenerate != b.degenerate) return !a.degenerate;
    if (a.score != b.score) return a.score > b.score;
    return a.index < b.index;
  });

  const auto take = std::min<std::size_t>(static_cast<std::size_t>(cap), entries.size());
  std::vector<FeatureScore> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({entries[i].index, entries[i].score, uni_name(criterion)});
  return out;
}

double chernoff_distance(const Eigen::MatrixXd& subset, const std::vector<int>& labels,
                         double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("chernoff_distance: beta must be in (0,1)");
  const auto s = class_gaussian_stats(subset, labels);
  const Eigen::MatrixXd c1 = regularized(s.cov0);
  const Eigen::MatrixXd c2 = regularized(s.cov1);
  const Eigen::MatrixXd blend = (1.0 - beta) * c1 + beta * c2;

  Eigen::LLT<Eigen::MatrixXd> llt_blend(blend);
  Eigen::LLT<Eigen::MatrixXd> llt1(c1);
  Eigen::LLT<Eigen::MatrixXd> llt2(c2);
  if (llt_blend.info() != Eigen::Success || llt1.info() != Eigen::Success ||
      llt2.info() != Eigen::Success)
    throw NumericError("chernoff_distance: covariance not SPD after regularization");

  const Eigen::VectorXd d = s.mean1 - s.mean0;
  const double quad = d.dot(llt_blend.solve(d));
  const double logdet_term =
      spd_log_det(llt_blend) - (1.0 - beta) * spd_log_det(llt1) - beta * spd_log_det(llt2);
  return 0.5 * beta * (1.0 - beta) * quad + 0.5 * logdet_term;
}

double bhattacharyya_distance(const Eigen::MatrixXd& subset, const std::vector<int>& labels) {
  return chernoff_distance(subset, labels, 0.5);
}

double scatter_ratio(const Eigen::MatrixXd& subset, const std::vector<int>& labels) {
  const auto s = class_gaussian_stats(subset, labels);
  const double tr_b = s.between_scatter.trace();
  const double tr_w = s.within_scatter.trace();
  if (tr_b == 0.0) return 0.0;
  const double floor = 1e-12 * (tr_b + tr_w);
  return tr_b / std::max(tr_w, floor);
}

double regression_r2(const Eigen::MatrixXd& subset, const std::vector<int>& labels) {
  require_both_classes(labels);
  const Eigen::Index n = subset.rows();
  const Eigen::Index d = subset.cols();
  if (n <= d + 1) throw ConfigError("regression_r2: need n_samples > subset size + 1");
  if (static_cast<std::size_t>(n) != labels.size())
    throw DataError("regression_r2: size mismatch");

  Eigen::MatrixXd design(n, d + 1);
  design.col(0).setOnes();
  design.rightCols(d) = subset;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = static_cast<double>(labels[static_cast<std::size_t>(i)]);

  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::VectorXd rhs = design.transpose() * y;
  Eigen::VectorXd beta = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
  const double resid = (gram * beta - rhs).norm();
  if (!beta.allFinite() || resid > 1e-8 * std::max(1.0, rhs.norm())) {
    const double lambda = 1e-6 * gram.trace() / static_cast<double>(d + 1);
    const Eigen::MatrixXd ridge =
        gram + lambda * Eigen::MatrixXd::Identity(d + 1, d + 1);
    beta = Eigen::LDLT<Eigen::MatrixXd>(ridge).solve(rhs);
    if (!beta.allFinite()) throw NumericError("regression_r2: rank-deficient design");
  }

  const double sse = (y - design * beta).squaredNorm();
  const double ybar = y.mean();
  const double ssto = (y.array() - ybar).matrix().squaredNorm();
  if (ssto <= 0.0) throw DataError("regression_r2: constant labels");
  return std::clamp(1.0 - sse / ssto, 0.0, 1.0);
}

double mrmr_mid(const Eigen::MatrixXd& subset, const std::vector<int>& labels, int bins,
                bool exclude_self) {
  require_both_classes(labels);
  const Eigen::Index k = subset.cols();
  if (k < 1) throw ConfigError("mrmr_mid: empty subset");
  double rel = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) rel += mi_score(subset.col(i), labels, bins);
  rel /= static_cast<double>(k);

  double red = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index l = 0; l < k; ++l) {
      if (exclude_self && i == l) continue;
      red += mi_feature_feature(subset.col(i), subset.col(l), bins);
    }
  }
  red /= static_cast<double>(k) * static_cast<double>(k);
  return rel - red;
}

SelectionMethod SelectionMethod::univariate(UnivariateCriterion c) {
  SelectionMethod m;
  m.kind = Kind::univariate;
  m.uni = c;
  return m;
}

SelectionMethod SelectionMethod::multivariate(MultivariateCriterion c) {
  SelectionMethod m;
  m.kind = Kind::multivariate;
  m.multi = c;
  return m;
}

std::string SelectionMethod::name() const {
  return kind == Kind::univariate ? uni_name(uni) : multi_name(multi);
}

SelectionTrace forward_select(const LabeledFeatureMatrix& matrix, const SelectionMethod& method,
                              int cap) {
  if (cap < 1) throw ConfigError("forward_select: cap must be >= 1");
  matrix.validate();
  require_both_classes(matrix.labels);

  SelectionTrace trace;
  trace.criterion = method.name();

  if (method.kind == SelectionMethod::Kind::univariate) {
    for (const auto& fs : rank_univariate(matrix, method.uni, cap, method.mi)) {
      trace.ordered_indices.push_back(fs.feature_index);
      trace.step_scores.push_back(fs.score);
    }
    return trace;
  }

  const int n_features = static_cast<int>(matrix.n_features());
  const int steps = std::min(cap, n_features);
  const int bins = resolve_mi_bins(method.mi, matrix.n_samples());

  // mRMR is expressible through cached pairwise MI sums, which turns the
  // greedy sweep from O(k^2) MI evaluations per candidate into O(1).
  std::vector<double> mrmr_rel, mrmr_red_with_selected, mrmr_self;
  double mrmr_rel_sum = 0.0, mrmr_red_sum = 0.0;
  const bool is_mrmr = method.multi == MultivariateCriterion::mrmr;
  if (is_mrmr) {
    mrmr_rel.resize(static_cast<std::size_t>(n_features));
    mrmr_self.resize(static_cast<std::size_t>(n_features));
    mrmr_red_with_selected.assign(static_cast<std::size_t>(n_features), 0.0);
    for (int j = 0; j < n_features; ++j) {
      mrmr_rel[static_cast<std::size_t>(j)] = mi_score(matrix.values.col(j), matrix.labels, bins);
      mrmr_self[static_cast<std::size_t>(j)] =
          method.mrmr_exclude_self
              ? 0.0
              : mi_feature_feature(matrix.values.col(j), matrix.values.col(j), bins);
    }
  }

  std::vector<bool> selected(static_cast<std::size_t>(n_features), false);
  std::vector<int> chosen;

  for (int step = 0; step < steps; ++step) {
    int best_index = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    bool any_ok = false;

    for (int j = 0; j < n_features; ++j) {
      if (selected[static_cast<std::size_t>(j)]) continue;
      double score;
      try {
        if (is_mrmr) {
          const double k = static_cast<double>(chosen.size() + 1);
          const double rel = (mrmr_rel_sum + mrmr_rel[static_cast<std::size_t>(j)]) / k;
          const double red = (mrmr_red_sum + 2.0 * mrmr_red_with_selected[static_cast<std::size_t>(j)] +
                              mrmr_self[static_cast<std::size_t>(j)]) /
                             (k * k);
          score = rel - red;
        } else {
          std::vector<int> cols = chosen;
          cols.push_back(j);
          const Eigen::MatrixXd sub = subset_columns(matrix.values, cols);
          switch (method.multi) {
            case MultivariateCriterion::chernoff:
              score = chernoff_distance(sub, matrix.labels, method.chernoff_beta);
              break;
            case MultivariateCriterion::bhattacharyya:
              score = bhattacharyya_distance(sub, matrix.labels);
              break;
            case MultivariateCriterion::scatter_ratio:
              score = scatter_ratio(sub, matrix.labels);
              break;
            case MultivariateCriterion::regression:
              score = regression_r2(sub, matrix.labels);
              break;
            case MultivariateCriterion::mrmr:
              score = 0.0;  // handled above
              break;
          }
        }
      } catch (const Error&) {
        continue;  // candidate skipped; criterion failed on it
      }
      any_ok = true;
      if (score > best_score) {
        best_score = score;
        best_index = j;
      }
    }
    if (!any_ok) throw NumericError("forward_select: criterion failed on every candidate");

    selected[static_cast<std::size_t>(best_index)] = true;
    chosen.push_back(best_index);
    trace.ordered_indices.push_back(best_index);
    trace.step_scores.push_back(best_score);

    if (is_mrmr) {
      mrmr_rel_sum += mrmr_rel[static_cast<std::size_t>(best_index)];
      mrmr_red_sum += 2.0 * mrmr_red_with_selected[static_cast<std::size_t>(best_index)] +
                      mrmr_self[static_cast<std::size_t>(best_index)];
      for (int j = 0; j < n_features; ++j) {
        if (selected[static_cast<std::size_t>(j)]) continue;
        mrmr_red_with_selected[static_cast<std::size_t>(j)] +=
            mi_feature_feature(matrix.values.col(j), matrix.values.col(best_index), bins);
      }
    }
  }
  return trace;
}

}  // namespace mtc
