#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtc/feature_select.hpp"

namespace mtc {

struct LdaModel {
  Eigen::VectorXd mean0, mean1;
  Eigen::MatrixXd pooled_cov_inv;  // regularized pooled covariance, inverted
  double log_prior0{0.0}, log_prior1{0.0};
};

struct QdaModel {
  Eigen::VectorXd mean0, mean1;
  Eigen::MatrixXd cov_inv0, cov_inv1;
  double log_det0{0.0}, log_det1{0.0};
  double log_prior0{0.0}, log_prior1{0.0};
};

struct SvmModel {
  Eigen::VectorXd w;
  double bias{0.0};
  double penalty_c{1.0};
  double tolerance{1e-6};
  double primal_objective{0.0};
  double dual_objective{0.0};
  double duality_gap() const { return primal_objective - dual_objective; }
};

LdaModel lda_train(const Eigen::MatrixXd& values, const std::vector<int>& labels);
int lda_predict(const LdaModel& model, const Eigen::VectorXd& x);

QdaModel qda_train(const Eigen::MatrixXd& values, const std::vector<int>& labels);
int qda_predict(const QdaModel& model, const Eigen::VectorXd& x);

// Linear soft-margin SVM solved by deterministic dual coordinate descent
// (fixed sweep order, bias handled as an augmented always-one feature).
SvmModel svm_train(const Eigen::MatrixXd& values, const std::vector<int>& labels, double c = 1.0,
                   double tol = 1e-6, int max_sweeps = 20000);
int svm_predict(const SvmModel& model, const Eigen::VectorXd& x);

// Fold id per sample; per-fold class counts are within one of exact
// proportionality, deterministic in the seed.
std::vector<int> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

struct ClassifierSpec {
  enum class Kind { lda, qda, svm };
  Kind kind{Kind::lda};
  double svm_c{1.0};
  double svm_tol{1e-6};

  std::string name() const;
  static ClassifierSpec parse(const std::string& name);
};

struct CvConfig {
  int n_folds{10};
  int n_runs{10};
  std::uint64_t seed{0};
};

struct CvAccuracy {
  double mean{0.0};
  std::vector<double> raw;  // n_runs * n_folds entries, (run, fold) order
};

CvAccuracy cv_accuracy(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                       const ClassifierSpec& spec, const CvConfig& cv);

struct CvReport {
  std::vector<double> curve;  // mean accuracy for k = 1..|trace|
  int best_k{0};
  double best_accuracy{0.0};
  std::vector<std::vector<double>> raw;  // raw accuracies per k
};

// For k = 1..|trace|, cross-validate on the first k features of the trace
// (same CV seeds at every k, so the curve is a paired comparison).
CvReport incremental_evaluation(const LabeledFeatureMatrix& matrix, const SelectionTrace& trace,
                                const ClassifierSpec& spec, const CvConfig& cv);

}  // namespace mtc
