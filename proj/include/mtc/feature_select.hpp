#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtc/errors.hpp"

namespace mtc {

struct LabeledFeatureMatrix {
  Eigen::MatrixXd values;  // n_samples x n_features
  std::vector<int> labels;  // binary {0,1}, one per row
  std::vector<std::string> feature_names;  // optional; empty or one per column

  Eigen::Index n_samples() const { return values.rows(); }
  Eigen::Index n_features() const { return values.cols(); }
  void validate() const;
};

// Prior-weighted class statistics shared by the multivariate criteria.
struct ClassGaussianStats {
  Eigen::VectorXd mean0, mean1;
  Eigen::MatrixXd cov0, cov1;  // population (MLE) covariances
  double prior0{0.0}, prior1{0.0};
  Eigen::VectorXd global_mean;
  Eigen::MatrixXd within_scatter;   // S_w = sum_i P_i Cov_i
  Eigen::MatrixXd between_scatter;  // S_b = sum_i P_i (mu_i - mu0)(mu_i - mu0)^T
};

ClassGaussianStats class_gaussian_stats(const Eigen::MatrixXd& values,
                                        const std::vector<int>& labels);

struct FeatureScore {
  int feature_index{0};
  double score{0.0};
  std::string criterion;
};

struct SelectionTrace {
  std::vector<int> ordered_indices;
  std::vector<double> step_scores;
  std::string criterion;
};

struct MiConfig {
  int bins{0};  // 0 = automatic: ceil(sqrt(n)) capped at 32
};

int resolve_mi_bins(const MiConfig& cfg, Eigen::Index n_samples);

// ---- univariate criteria -------------------------------------------------

// Pearson coefficient in [-1, 1]; ranking uses |CORR|, the signed value is
// what this returns.
double corr_score(const Eigen::VectorXd& feature, const std::vector<int>& labels);
// Plug-in mutual information (nats) between the equal-width-binned feature
// and the binary labels. Constant features occupy one bin and score 0.
double mi_score(const Eigen::VectorXd& feature, const std::vector<int>& labels, int bins);
double fdr_score(const Eigen::VectorXd& feature, const std::vector<int>& labels);
// max(t, N1*N2 - t) with t = #{(l,m) : x_l - x_m <= 0} over cross-class pairs.
double ranksum_score(const Eigen::VectorXd& feature, const std::vector<int>& labels);

enum class UnivariateCriterion { corr, mi, fdr, ranksum };

std::vector<FeatureScore> rank_univariate(const LabeledFeatureMatrix& matrix,
                                          UnivariateCriterion criterion, int cap,
                                          const MiConfig& mi = {});

// ---- multivariate subset criteria ----------------------------------------

double chernoff_distance(const Eigen::MatrixXd& subset, const std::vector<int>& labels,
                         double beta);
double bhattacharyya_distance(const Eigen::MatrixXd& subset, const std::vector<int>& labels);
double scatter_ratio(const Eigen::MatrixXd& subset, const std::vector<int>& labels);
// R^2 of an OLS fit (with intercept) of the 0/1 labels on the subset,
// clamped to [0, 1]; falls back to a ridge solve when the Gram is singular.
double regression_r2(const Eigen::MatrixXd& subset, const std::vector<int>& labels);
// REL - RED per the MID subset score. The redundancy double sum runs over
// all ordered pairs including i == l unless exclude_self is set.
double mrmr_mid(const Eigen::MatrixXd& subset, const std::vector<int>& labels, int bins,
                bool exclude_self = false);

enum class MultivariateCriterion { chernoff, bhattacharyya, scatter_ratio, regression, mrmr };

struct SelectionMethod {
  enum class Kind { univariate, multivariate };
  Kind kind{Kind::univariate};
  UnivariateCriterion uni{UnivariateCriterion::fdr};
  MultivariateCriterion multi{MultivariateCriterion::regression};
  double chernoff_beta{0.5};
  MiConfig mi{};
  bool mrmr_exclude_self{false};

  static SelectionMethod univariate(UnivariateCriterion c);
  static SelectionMethod multivariate(MultivariateCriterion c);
  std::string name() const;
};

// Univariate mode: the top-cap ranked features in rank order.
// Multivariate mode: greedy forward search maximizing the subset criterion,
// ties to the lower feature index.
SelectionTrace forward_select(const LabeledFeatureMatrix& matrix, const SelectionMethod& method,
                              int cap);

}  // namespace mtc
