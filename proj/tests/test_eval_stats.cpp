#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mtc/eval_stats.hpp"
#include "oracles.hpp"

namespace {

mtc::ComparisonTable random_table(int k, int n, std::uint64_t seed) {
  oracle::Rng rng(seed);
  mtc::ComparisonTable t;
  t.cells.resize(k, n);
  for (int i = 0; i < k; ++i) {
    t.method_names.push_back("m" + std::to_string(i));
    for (int j = 0; j < n; ++j) t.cells(i, j) = rng.normal();
  }
  for (int j = 0; j < n; ++j) t.column_names.push_back("c" + std::to_string(j));
  return t;
}

std::vector<double> column_midranks(const Eigen::VectorXd& col) {
  const int k = static_cast<int>(col.size());
  std::vector<double> ranks(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    double higher = 0.0, equal = 0.0;
    for (int l = 0; l < k; ++l) {
      if (col[l] > col[i]) higher += 1.0;
      if (col[l] == col[i]) equal += 1.0;
    }
    ranks[static_cast<std::size_t>(i)] = higher + (equal + 1.0) / 2.0;
  }
  return ranks;
}

}  // namespace

TEST_CASE("percentage_gain basic values and zero baseline") {
  CHECK(mtc::percentage_gain(0.8, 0.8) == 0.0);
  CHECK(mtc::percentage_gain(0.9, 0.75) == doctest::Approx(20.0).epsilon(1e-12));
  CHECK(mtc::percentage_gain(0.6, 0.8) == doctest::Approx(-25.0).epsilon(1e-12));
  CHECK_THROWS_AS(mtc::percentage_gain(0.5, 0.0), mtc::DataError);
}

TEST_CASE("robust_rank puts a dominating method first") {
  auto t = random_table(4, 6, 1);
  t.cells.row(2).array() = 100.0;
  const auto r = mtc::robust_rank(t);
  CHECK(r.average_ranks[2] == 1.0);
  CHECK(r.ordering.front() == 2);
}

TEST_CASE("robust_rank gives (k+1)/2 on an all-identical table") {
  auto t = random_table(5, 4, 2);
  t.cells.setConstant(0.7);
  const auto r = mtc::robust_rank(t);
  for (double v : r.average_ranks) CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("robust_rank matches an independent mean-rank computation") {
  const auto t = random_table(6, 9, 3);
  const auto r = mtc::robust_rank(t);
  for (int i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 9; ++j) sum += column_midranks(t.cells.col(j))[static_cast<std::size_t>(i)];
    CHECK(r.average_ranks[static_cast<std::size_t>(i)] ==
          doctest::Approx(sum / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("friedman_test on identical columns is degenerate") {
  auto t = random_table(4, 5, 4);
  t.cells.setConstant(1.0);
  const auto f = mtc::friedman_test(t);
  CHECK(f.chi_square == doctest::Approx(0.0));
  CHECK(f.p_value == doctest::Approx(1.0));
  CHECK(f.dof == 3);
}

TEST_CASE("friedman_test rank sums satisfy k(k+1)/2 per column") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const int k = 3 + static_cast<int>(seed % 5);
    const auto t = random_table(k, 8, seed);
    const auto f = mtc::friedman_test(t);
    double total = 0.0;
    for (double r : f.average_ranks) total += r;
    CHECK(total == doctest::Approx(k * (k + 1) / 2.0).epsilon(1e-12));
    CHECK(f.p_value >= 0.0);
    CHECK(f.p_value <= 1.0);
  }
}

TEST_CASE("friedman_test agrees with a hand computation") {
  // 3 methods x 4 columns, no ties.
  mtc::ComparisonTable t;
  t.method_names = {"a", "b", "c"};
  t.column_names = {"c0", "c1", "c2", "c3"};
  t.cells.resize(3, 4);
  t.cells << 0.9, 0.8, 0.95, 0.7,  //
      0.6, 0.5, 0.55, 0.4,         //
      0.7, 0.75, 0.6, 0.5;
  // ranks (1 = highest): a = 1,1,1,1 ; b = 3,3,3,3 ; c = 2,2,2,2
  const auto f = mtc::friedman_test(t);
  CHECK(f.average_ranks[0] == doctest::Approx(1.0));
  CHECK(f.average_ranks[1] == doctest::Approx(3.0));
  CHECK(f.average_ranks[2] == doctest::Approx(2.0));
  // chi2 = 12*4/(3*4) * [(4+36+16)/4... ] computed directly:
  const double expected = 12.0 * 4.0 / (3.0 * 4.0) * (1.0 + 9.0 + 4.0 - 3.0 * 16.0 / 4.0);
  CHECK(f.chi_square == doctest::Approx(expected).epsilon(1e-12));
  CHECK(f.dof == 2);
}

TEST_CASE("control_pvalues symmetry and erfc oracle") {
  mtc::FriedmanResult f;
  f.average_ranks = {2.0, 2.0 + 0.5, 2.0 - 0.5, 2.0};
  const int n_cols = 10;
  const auto p = mtc::control_pvalues(f, n_cols, 0);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(p[2]).epsilon(1e-15));
  const double k = 4.0;
  const double se = std::sqrt(k * (k + 1.0) / (6.0 * n_cols));
  const double z = 0.5 / se;
  CHECK(p[1] == doctest::Approx(std::erfc(z / std::sqrt(2.0))).epsilon(1e-12));
  CHECK(p[3] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("posthoc_adjust single p-value is returned unchanged") {
  for (auto m : {mtc::AdjustMethod::holm, mtc::AdjustMethod::hochberg, mtc::AdjustMethod::hommel}) {
    const auto adj = mtc::posthoc_adjust({0.037}, m);
    REQUIRE(adj.size() == 1);
    CHECK(adj[0] == 0.037);
  }
}

TEST_CASE("posthoc_adjust rejects p outside [0, 1]") {
  CHECK_THROWS_AS(mtc::posthoc_adjust({0.5, -0.1}, mtc::AdjustMethod::holm), mtc::DataError);
  CHECK_THROWS_AS(mtc::posthoc_adjust({1.2}, mtc::AdjustMethod::hommel), mtc::DataError);
}

TEST_CASE("posthoc_adjust structural properties on random vectors") {
  oracle::Rng rng(20);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.raw() % 9;
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform();
    const auto holm = mtc::posthoc_adjust(p, mtc::AdjustMethod::holm);
    const auto hoch = mtc::posthoc_adjust(p, mtc::AdjustMethod::hochberg);
    const auto homm = mtc::posthoc_adjust(p, mtc::AdjustMethod::hommel);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(holm[i] >= p[i]);
      CHECK(hoch[i] >= p[i]);
      CHECK(homm[i] >= p[i]);
      CHECK(holm[i] <= 1.0);
      CHECK(hoch[i] <= 1.0);
      CHECK(homm[i] <= 1.0);
      CHECK(hoch[i] <= holm[i]);
      CHECK(homm[i] <= holm[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (p[i] <= p[j]) {
          CHECK(holm[i] <= holm[j]);
          CHECK(hoch[i] <= hoch[j]);
          CHECK(homm[i] <= homm[j]);
        }
    }
  }
}

TEST_CASE("hommel adjustment equals the closed-testing oracle") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.raw() % 8;
    std::vector<double> p(n);
    for (auto& v : p) v = rng.uniform();
    const auto lib = mtc::posthoc_adjust(p, mtc::AdjustMethod::hommel);
    const auto ref = oracle::hommel_closed_testing(p);
    for (std::size_t i = 0; i < n; ++i) CHECK(lib[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("posthoc_vs_control wiring and significance_report thresholds") {
  auto t = random_table(5, 12, 22);
  t.cells.row(0).array() += 3.0;  // strong method 0
  const auto post = mtc::posthoc_vs_control(t, 0);
  CHECK(post.control_method == "m0");
  REQUIRE(post.method_names.size() == 4);
  REQUIRE(post.raw_p.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(post.adjusted_hommel[i] >= post.raw_p[i]);
    CHECK(post.adjusted_hochberg[i] <= post.adjusted_holm[i]);
  }

  const auto flags = mtc::significance_report(post, 0.05);
  REQUIRE(flags.size() == 4);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    CHECK(flags[i].method_name == post.method_names[i]);
    CHECK(flags[i].adjusted_p == post.adjusted_hommel[i]);
    CHECK(flags[i].significant == (post.adjusted_hommel[i] < 0.05));
  }
  const auto none = mtc::significance_report(post, 1e-300);
  for (const auto& f : none) CHECK_FALSE(f.significant);
  CHECK_THROWS_AS(mtc::significance_report(post, 1.0), mtc::ConfigError);
  CHECK_THROWS_AS(mtc::significance_report(post, 0.0), mtc::ConfigError);
}

TEST_CASE("comparison table validation rejects shape mismatches") {
  mtc::ComparisonTable t;
  t.method_names = {"a", "b"};
  t.column_names = {"c0"};
  t.cells.resize(2, 2);
  t.cells.setZero();
  CHECK_THROWS_AS(t.validate(), mtc::DataError);
}
