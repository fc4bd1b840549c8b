#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mtc/errors.hpp"

namespace mtc {

// Methods (rows) x evaluation units (columns), cells holding accuracy or
// percentage gain. Input to ranking, Friedman, and the post-hoc chain.
struct ComparisonTable {
  std::vector<std::string> method_names;
  std::vector<std::string> column_names;
  Eigen::MatrixXd cells;  // method_names.size() x column_names.size()

  void validate() const;
};

double percentage_gain(double acc_with, double acc_baseline);

struct RankResult {
  std::vector<double> average_ranks;  // per method, rank 1 = best
  std::vector<int> ordering;          // method indices, best first
};

// Mean-rank aggregation: mid-ranks within each column (rank 1 = highest
// value), averaged across columns; final ties broken by method name.
RankResult robust_rank(const ComparisonTable& table);

struct FriedmanResult {
  std::vector<double> average_ranks;
  double chi_square{0.0};
  int dof{0};
  double p_value{1.0};
};

FriedmanResult friedman_test(const ComparisonTable& table);

// Two-sided z-test p-values of each method against the control:
// z = (R_j - R_control) / sqrt(k(k+1)/(6N)). Entry at the control index is 1.
std::vector<double> control_pvalues(const FriedmanResult& result, int n_columns,
                                    int control_index);

enum class AdjustMethod { holm, hochberg, hommel };

std::vector<double> posthoc_adjust(const std::vector<double>& raw_p, AdjustMethod method);

struct PosthocResult {
  std::string control_method;
  std::vector<std::string> method_names;  // non-control methods
  std::vector<double> raw_p;
  std::vector<double> adjusted_holm;
  std::vector<double> adjusted_hochberg;
  std::vector<double> adjusted_hommel;
};

struct SignificanceFlag {
  std::string method_name;
  double adjusted_p{1.0};
  bool significant{false};
};

// Flags each comparison significant iff its Hommel-adjusted p < alpha.
std::vector<SignificanceFlag> significance_report(const PosthocResult& posthoc, double alpha);

// Convenience: Friedman + control p-values + all three adjustments.
PosthocResult posthoc_vs_control(const ComparisonTable& table, int control_index);

}  // namespace mtc
