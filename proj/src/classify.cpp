#include "mtc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mtc {
namespace {

struct SplitStats {
  Eigen::VectorXd mean0, mean1;
  Eigen::MatrixXd cov0, cov1;  // population covariances
  Eigen::Index n0, n1;
  double prior0, prior1;
};

SplitStats split_stats(const Eigen::MatrixXd& values, const std::vector<int>& labels) {
  if (static_cast<std::size_t>(values.rows()) != labels.size())
    throw DataError("classifier: row/label count mismatch");
  SplitStats s;
  s.n0 = s.n1 = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw DataError("classifier: labels must be {0,1}");
    (l == 0 ? s.n0 : s.n1)++;
  }
  if (s.n0 < 2 || s.n1 < 2) throw DataError("classifier: each class needs >= 2 samples");

  const Eigen::Index d = values.cols();
  Eigen::MatrixXd x0(s.n0, d), x1(s.n1, d);
  Eigen::Index i0 = 0, i1 = 0;
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    if (labels[static_cast<std::size_t>(i)] == 0)
      x0.row(i0++) = values.row(i);
    else
      x1.row(i1++) = values.row(i);
  }
  s.mean0 = x0.colwise().mean();
  s.mean1 = x1.colwise().mean();
  x0.rowwise() -= s.mean0.transpose();
  x1.rowwise() -= s.mean1.transpose();
  s.cov0 = (x0.transpose() * x0) / static_cast<double>(s.n0);
  s.cov1 = (x1.transpose() * x1) / static_cast<double>(s.n1);
  const double n = static_cast<double>(values.rows());
  s.prior0 = static_cast<double>(s.n0) / n;
  s.prior1 = static_cast<double>(s.n1) / n;
  return s;
}

Eigen::MatrixXd regularized(const Eigen::MatrixXd& cov) {
  const double lambda = 1e-6 * cov.trace() / static_cast<double>(cov.rows());
  return cov + lambda * Eigen::MatrixXd::Identity(cov.rows(), cov.cols());
}

struct InverseWithLogDet {
  Eigen::MatrixXd inverse;
  double log_det;
};

InverseWithLogDet spd_invert(const Eigen::MatrixXd& cov, const char* who) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericError(std::string(who) + ": covariance singular after regularization");
  InverseWithLogDet out;
  out.inverse = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  out.log_det = 0.0;
  for (Eigen::Index i = 0; i < cov.rows(); ++i) out.log_det += std::log(llt.matrixLLT()(i, i));
  out.log_det *= 2.0;
  return out;
}

}  // namespace

LdaModel lda_train(const Eigen::MatrixXd& values, const std::vector<int>& labels) {
  const auto s = split_stats(values, labels);
  const Eigen::MatrixXd pooled = regularized(s.prior0 * s.cov0 + s.prior1 * s.cov1);
  LdaModel m;
  m.mean0 = s.mean0;
  m.mean1 = s.mean1;
  m.pooled_cov_inv = spd_invert(pooled, "lda_train").inverse;
  m.log_prior0 = std::log(s.prior0);
  m.log_prior1 = std::log(s.prior1);
  return m;
}

int lda_predict(const LdaModel& model, const Eigen::VectorXd& x) {
  auto disc = [&](const Eigen::VectorXd& mu, double log_prior) {
    return x.dot(model.pooled_cov_inv * mu) - 0.5 * mu.dot(model.pooled_cov_inv * mu) +
           log_prior;
  };
  const double d0 = disc(model.mean0, model.log_prior0);
  const double d1 = disc(model.mean1, model.log_prior1);
  return d1 > d0 ? 1 : 0;  // exact tie goes to class 0
}

QdaModel qda_train(const Eigen::MatrixXd& values, const std::vector<int>& labels) {
  const auto s = split_stats(values, labels);
  QdaModel m;
  m.mean0 = s.mean0;
  m.mean1 = s.mean1;
  const auto i0 = spd_invert(regularized(s.cov0), "qda_train");
  const auto i1 = spd_invert(regularized(s.cov1), "qda_train");
  m.cov_inv0 = i0.inverse;
  m.cov_inv1 = i1.inverse;
  m.log_det0 = i0.log_det;
  m.log_det1 = i1.log_det;
  m.log_prior0 = std::log(s.prior0);
  m.log_prior1 = std::log(s.prior1);
  return m;
}

int qda_predict(const QdaModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd d0 = x - model.mean0;
  const Eigen::VectorXd d1 = x - model.mean1;
  const double g0 = -0.5 * d0.dot(model.cov_inv0 * d0) - 0.5 * model.log_det0 + model.log_prior0;
  const double g1 = -0.5 * d1.dot(model.cov_inv1 * d1) - 0.5 * model.log_det1 + model.log_prior1;
  return g1 > g0 ? 1 : 0;
}

SvmModel svm_train(const Eigen::MatrixXd& values, const std::vector<int>& labels, double c,
                   double tol, int max_sweeps) {
  if (!(c > 0.0)) throw ConfigError("svm_train: C must be > 0");
  if (static_cast<std::size_t>(values.rows()) != labels.size())
    throw DataError("svm_train: row/label count mismatch");
  const Eigen::Index n = values.rows();
  const Eigen::Index d = values.cols();

  Eigen::VectorXd y(n);
  bool has0 = false, has1 = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    if (l != 0 && l != 1) throw DataError("svm_train: labels must be {0,1}");
    (l == 0 ? has0 : has1) = true;
    y[i] = l == 0 ? -1.0 : 1.0;
  }
  if (!has0 || !has1) throw DataError("svm_train: both classes must be present");

  // Augmented representation: x~ = [x, 1], w~ = [w, b]. The bias is then
  // regularized, which keeps the dual box-constrained with no equality
  // constraint.
  Eigen::VectorXd qdiag(n);
  for (Eigen::Index i = 0; i < n; ++i) qdiag[i] = values.row(i).squaredNorm() + 1.0;

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;

  auto objectives = [&]() {
    const double wnorm2 = w.squaredNorm() + b * b;
    double hinge = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      hinge += std::max(0.0, 1.0 - y[i] * (values.row(i).dot(w) + b));
    const double primal = 0.5 * wnorm2 + c * hinge;
    const double dual = alpha.sum() - 0.5 * wnorm2;
    return std::pair<double, double>(primal, dual);
  };

  double primal = 0.0, dual = 0.0;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double margin = y[i] * (values.row(i).dot(w) + b);
      const double grad = margin - 1.0;
      const double old = alpha[i];
      const double next = std::clamp(old - grad / qdiag[i], 0.0, c);
      const double delta = next - old;
      if (delta != 0.0) {
        alpha[i] = next;
        w += delta * y[i] * values.row(i).transpose();
        b += delta * y[i];
      }
    }
    std::tie(primal, dual) = objectives();
    if (primal - dual <= tol) converged = true;
  }
  if (!converged)
    throw NumericError("svm_train: no convergence, duality gap " +
                       std::to_string(primal - dual));

  SvmModel m;
  m.w = w;
  m.bias = b;
  m.penalty_c = c;
  m.tolerance = tol;
  m.primal_objective = primal;
  m.dual_objective = dual;
  return m;
}

int svm_predict(const SvmModel& model, const Eigen::VectorXd& x) {
  return model.w.dot(x) + model.bias > 0.0 ? 1 : 0;  // zero decision value -> class 0
}

std::vector<int> stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("stratified_kfold: k must be >= 2");
  std::vector<std::vector<std::size_t>> by_class(2);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1)
      throw DataError("stratified_kfold: labels must be {0,1}");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  for (const auto& cls : by_class) {
    if (cls.size() < static_cast<std::size_t>(k))
      throw ConfigError("stratified_kfold: a class has fewer samples than folds");
  }

  std::vector<int> fold(labels.size(), -1);
  std::mt19937_64 rng(seed);
  for (auto& cls : by_class) {
    // Fisher-Yates with mt19937_64 output, avoiding std::shuffle's
    // unspecified use of the generator.
    for (std::size_t i = cls.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      std::swap(cls[i - 1], cls[j]);
    }
    for (std::size_t i = 0; i < cls.size(); ++i)
      fold[cls[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  return fold;
}

std::string ClassifierSpec::name() const {
  switch (kind) {
    case Kind::lda: return "lda";
    case Kind::qda: return "qda";
    case Kind::svm: return "svm";
  }
  return "?";
}

ClassifierSpec ClassifierSpec::parse(const std::string& name) {
  ClassifierSpec s;
  if (name == "lda") s.kind = Kind::lda;
  else if (name == "qda") s.kind = Kind::qda;
  else if (name == "svm") s.kind = Kind::svm;
  else throw ConfigError("unknown classifier '" + name + "'");
  return s;
}

CvAccuracy cv_accuracy(const Eigen::MatrixXd& values, const std::vector<int>& labels,
                       const ClassifierSpec& spec, const CvConfig& cv) {
  if (cv.n_folds < 2 || cv.n_runs < 1) throw ConfigError("cv_accuracy: bad CvConfig");
  CvAccuracy out;
  out.raw.reserve(static_cast<std::size_t>(cv.n_runs * cv.n_folds));

  for (int run = 0; run < cv.n_runs; ++run) {
    const auto fold = stratified_kfold(labels, cv.n_folds, cv.seed + static_cast<std::uint64_t>(run));
    for (int f = 0; f < cv.n_folds; ++f) {
      std::vector<Eigen::Index> train_idx, test_idx;
      for (std::size_t i = 0; i < labels.size(); ++i)
        (fold[i] == f ? test_idx : train_idx).push_back(static_cast<Eigen::Index>(i));

      Eigen::MatrixXd xtr(static_cast<Eigen::Index>(train_idx.size()), values.cols());
      std::vector<int> ytr(train_idx.size());
      for (std::size_t i = 0; i < train_idx.size(); ++i) {
        xtr.row(static_cast<Eigen::Index>(i)) = values.row(train_idx[i]);
        ytr[i] = labels[static_cast<std::size_t>(train_idx[i])];
      }

      std::vector<int> pred(test_idx.size());
      try {
        switch (spec.kind) {
          case ClassifierSpec::Kind::lda: {
            const auto m = lda_train(xtr, ytr);
            for (std::size_t i = 0; i < test_idx.size(); ++i)
              pred[i] = lda_predict(m, values.row(test_idx[i]).transpose());
            break;
          }
          case ClassifierSpec::Kind::qda: {
            const auto m = qda_train(xtr, ytr);
            for (std::size_t i = 0; i < test_idx.size(); ++i)
              pred[i] = qda_predict(m, values.row(test_idx[i]).transpose());
            break;
          }
          case ClassifierSpec::Kind::svm: {
            const auto m = svm_train(xtr, ytr, spec.svm_c, spec.svm_tol);
            for (std::size_t i = 0; i < test_idx.size(); ++i)
              pred[i] = svm_predict(m, values.row(test_idx[i]).transpose());
            break;
          }
        }
      } catch (const Error& e) {
        throw NumericError("cv_accuracy: run " + std::to_string(run) + " fold " +
                           std::to_string(f) + ": " + e.what());
      }

      int correct = 0;
      for (std::size_t i = 0; i < test_idx.size(); ++i)
        if (pred[i] == labels[static_cast<std::size_t>(test_idx[i])]) ++correct;
      out.raw.push_back(static_cast<double>(correct) / static_cast<double>(test_idx.size()));
    }
  }
  out.mean = std::accumulate(out.raw.begin(), out.raw.end(), 0.0) /
             static_cast<double>(out.raw.size());
  return out;
}

CvReport incremental_evaluation(const LabeledFeatureMatrix& matrix, const SelectionTrace& trace,
                                const ClassifierSpec& spec, const CvConfig& cv) {
  if (trace.ordered_indices.empty()) throw ConfigError("incremental_evaluation: empty trace");
  matrix.validate();

  CvReport report;
  report.curve.reserve(trace.ordered_indices.size());
  for (std::size_t k = 1; k <= trace.ordered_indices.size(); ++k) {
    Eigen::MatrixXd sub(matrix.n_samples(), static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j)
      sub.col(static_cast<Eigen::Index>(j)) = matrix.values.col(trace.ordered_indices[j]);
    const auto acc = cv_accuracy(sub, matrix.labels, spec, cv);
    report.curve.push_back(acc.mean);
    report.raw.push_back(acc.raw);
  }
  const auto it = std::max_element(report.curve.begin(), report.curve.end());
  report.best_k = static_cast<int>(it - report.curve.begin()) + 1;
  report.best_accuracy = *it;
  return report;
}

}  // namespace mtc
