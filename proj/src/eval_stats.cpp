#include "mtc/eval_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

namespace mtc {
namespace {

// Mid-ranks within one column, rank 1 = highest value.
std::vector<double> column_ranks(const Eigen::VectorXd& col) {
  const auto k = static_cast<std::size_t>(col.size());
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return col[static_cast<Eigen::Index>(a)] > col[static_cast<Eigen::Index>(b)]; });

  std::vector<double> ranks(k, 0.0);
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && col[static_cast<Eigen::Index>(order[j + 1])] ==
                            col[static_cast<Eigen::Index>(order[i])])
      ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;  // average of ranks i+1..j+1
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mid;
    i = j + 1;
  }
  return ranks;
}

std::vector<double> average_ranks_of(const ComparisonTable& table) {
  const auto k = static_cast<std::size_t>(table.cells.rows());
  const auto n = static_cast<std::size_t>(table.cells.cols());
  std::vector<double> avg(k, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const auto ranks = column_ranks(table.cells.col(static_cast<Eigen::Index>(c)));
    for (std::size_t m = 0; m < k; ++m) avg[m] += ranks[m];
  }
  for (auto& r : avg) r /= static_cast<double>(n);
  return avg;
}

void check_probabilities(const std::vector<double>& p) {
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw DataError("posthoc_adjust: p-value outside [0,1]");
  }
}

std::vector<double> adjust_holm(const std::vector<double>& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(n);
  double running = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    running = std::max(running, static_cast<double>(n - i) * p[o[i]]);
    adj[o[i]] = std::min(running, 1.0);
  }
  return adj;
}

std::vector<double> adjust_hochberg(const std::vector<double>& p) {
  const std::size_t n = p.size();
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(n);
  double running = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    running = std::min(running, static_cast<double>(n - i) * p[o[i]]);
    adj[o[i]] = std::min(running, 1.0);
  }
  return adj;
}

// Hommel adjusted p-values by the standard O(n^2) algorithm over the sorted
// sequence; equals the closed-testing construction with per-subset Simes
// tests.
std::vector<double> adjust_hommel(const std::vector<double>& p) {
  const std::size_t n = p.size();
  if (n == 1) return {std::min(p[0], 1.0)};
  std::vector<std::size_t> o(n);
  std::iota(o.begin(), o.end(), 0);
  std::sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> ps(n);
  for (std::size_t i = 0; i < n; ++i) ps[i] = p[o[i]];

  double init = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    init = std::min(init, static_cast<double>(n) * ps[i] / static_cast<double>(i + 1));
  std::vector<double> q(n, init), pa(n, init);

  for (std::size_t m = n - 1; m >= 2; --m) {
    double q1 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < m; ++j) {
      q1 = std::min(q1, static_cast<double>(m) * ps[n - m + 1 + j] / static_cast<double>(j + 2));
    }
    for (std::size_t i = 0; i <= n - m; ++i)
      q[i] = std::min(static_cast<double>(m) * ps[i], q1);
    for (std::size_t i = n - m + 1; i < n; ++i) q[i] = q[n - m];
    for (std::size_t i = 0; i < n; ++i) pa[i] = std::max(pa[i], q[i]);
  }

  std::vector<double> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[o[i]] = std::min(std::max(pa[i], ps[i]), 1.0);
  return adj;
}

}  // namespace

void ComparisonTable::validate() const {
  if (static_cast<std::size_t>(cells.rows()) != method_names.size() ||
      static_cast<std::size_t>(cells.cols()) != column_names.size())
    throw DataError("ComparisonTable: shape does not match labels");
  if (!cells.allFinite()) throw DataError("ComparisonTable: non-finite cell");
}

double percentage_gain(double acc_with, double acc_baseline) {
  if (!(acc_baseline > 0.0)) throw DataError("percentage_gain: baseline must be > 0");
  return 100.0 * (acc_with - acc_baseline) / acc_baseline;
}

RankResult robust_rank(const ComparisonTable& table) {
  table.validate();
  if (table.cells.rows() < 2) throw ConfigError("robust_rank: need >= 2 methods");
  if (table.cells.cols() < 1) throw ConfigError("robust_rank: need >= 1 column");

  RankResult res;
  res.average_ranks = average_ranks_of(table);
  const auto k = res.average_ranks.size();
  res.ordering.resize(k);
  std::iota(res.ordering.begin(), res.ordering.end(), 0);
  std::sort(res.ordering.begin(), res.ordering.end(), [&](int a, int b) {
    if (res.average_ranks[static_cast<std::size_t>(a)] !=
        res.average_ranks[static_cast<std::size_t>(b)])
      return res.average_ranks[static_cast<std::size_t>(a)] <
             res.average_ranks[static_cast<std::size_t>(b)];
    return table.method_names[static_cast<std::size_t>(a)] <
           table.method_names[static_cast<std::size_t>(b)];
  });
  return res;
}

FriedmanResult friedman_test(const ComparisonTable& table) {
  table.validate();
  const auto k = table.cells.rows();
  const auto n = table.cells.cols();
  if (k < 2) throw ConfigError("friedman_test: need >= 2 methods");
  if (n < 2) throw ConfigError("friedman_test: need >= 2 columns");

  FriedmanResult res;
  res.average_ranks = average_ranks_of(table);
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  double sum_r2 = 0.0;
  for (double r : res.average_ranks) sum_r2 += r * r;
  res.chi_square =
      12.0 * nd / (kd * (kd + 1.0)) * (sum_r2 - kd * (kd + 1.0) * (kd + 1.0) / 4.0);
  res.dof = static_cast<int>(k) - 1;
  res.p_value =
      boost::math::gamma_q(0.5 * static_cast<double>(res.dof), 0.5 * std::max(res.chi_square, 0.0));
  return res;
}

std::vector<double> control_pvalues(const FriedmanResult& result, int n_columns,
                                    int control_index) {
  const auto k = result.average_ranks.size();
  if (control_index < 0 || static_cast<std::size_t>(control_index) >= k)
    throw ConfigError("control_pvalues: control index out of range");
  if (n_columns < 1) throw ConfigError("control_pvalues: n_columns must be >= 1");

  const double kd = static_cast<double>(k);
  const double se = std::sqrt(kd * (kd + 1.0) / (6.0 * static_cast<double>(n_columns)));
  std::vector<double> p(k, 1.0);
  for (std::size_t j = 0; j < k; ++j) {
    if (j == static_cast<std::size_t>(control_index)) continue;
    const double z =
        (result.average_ranks[j] - result.average_ranks[static_cast<std::size_t>(control_index)]) / se;
    p[j] = std::erfc(std::abs(z) / std::sqrt(2.0));  // two-sided normal
  }
  return p;
}

std::vector<double> posthoc_adjust(const std::vector<double>& raw_p, AdjustMethod method) {
  check_probabilities(raw_p);
  if (raw_p.empty()) return {};
  switch (method) {
    case AdjustMethod::holm: return adjust_holm(raw_p);
    case AdjustMethod::hochberg: return adjust_hochberg(raw_p);
    case AdjustMethod::hommel: return adjust_hommel(raw_p);
  }
  throw ConfigError("posthoc_adjust: unknown method");
}

std::vector<SignificanceFlag> significance_report(const PosthocResult& posthoc, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("significance_report: alpha must be in (0,1)");
  std::vector<SignificanceFlag> out;
  out.reserve(posthoc.method_names.size());
  for (std::size_t i = 0; i < posthoc.method_names.size(); ++i) {
    out.push_back({posthoc.method_names[i], posthoc.adjusted_hommel[i],
                   posthoc.adjusted_hommel[i] < alpha});
  }
  return out;
}

PosthocResult posthoc_vs_control(const ComparisonTable& table, int control_index) {
  const auto fr = friedman_test(table);
  const auto all_p = control_pvalues(fr, static_cast<int>(table.cells.cols()), control_index);

  PosthocResult res;
  res.control_method = table.method_names[static_cast<std::size_t>(control_index)];
  for (std::size_t j = 0; j < all_p.size(); ++j) {
    if (j == static_cast<std::size_t>(control_index)) continue;
    res.method_names.push_back(table.method_names[j]);
    res.raw_p.push_back(all_p[j]);
  }
  res.adjusted_holm = posthoc_adjust(res.raw_p, AdjustMethod::holm);
  res.adjusted_hochberg = posthoc_adjust(res.raw_p, AdjustMethod::hochberg);
  res.adjusted_hommel = posthoc_adjust(res.raw_p, AdjustMethod::hommel);
  return res;
}

}  // namespace mtc
