#include <doctest.h>

#include <cmath>
#include <functional>

#include "mtc/feature_select.hpp"
#include "oracles.hpp"

namespace {

mtc::LabeledFeatureMatrix random_matrix(Eigen::Index n, Eigen::Index d, std::uint64_t seed,
                                        double class_shift = 1.0) {
  oracle::Rng rng(seed);
  mtc::LabeledFeatureMatrix m;
  m.values.resize(n, d);
  m.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = i < n / 2 ? 0 : 1;
    m.labels[static_cast<std::size_t>(i)] = label;
    for (Eigen::Index j = 0; j < d; ++j)
      m.values(i, j) = rng.normal() + (label == 1 ? class_shift * static_cast<double>(j) / static_cast<double>(d) : 0.0);
  }
  return m;
}

std::vector<double> col_vec(const Eigen::MatrixXd& m, Eigen::Index j) {
  return {m.col(j).data(), m.col(j).data() + m.rows()};
}

}  // namespace

TEST_CASE("corr_score analytic and oracle agreement") {
  Eigen::VectorXd f(4);
  f << 1, 2, 3, 4;
  const std::vector<int> c = {1, 0, 1, 0};
  CHECK(mtc::corr_score(f, c) == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-12));

  Eigen::VectorXd self(6);
  self << 0, 1, 0, 1, 1, 0;
  CHECK(mtc::corr_score(self, {0, 1, 0, 1, 1, 0}) == doctest::Approx(1.0).epsilon(1e-12));

  const auto m = random_matrix(40, 3, 1);
  for (Eigen::Index j = 0; j < 3; ++j) {
    std::vector<double> y(m.labels.begin(), m.labels.end());
    const double ref = oracle::corr(col_vec(m.values, j), y);
    CHECK(mtc::corr_score(m.values.col(j), m.labels) == doctest::Approx(ref).epsilon(1e-12));
  }

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(4, 2.0);
  CHECK_THROWS_AS(mtc::corr_score(flat, c), mtc::DataError);
}

TEST_CASE("corr_score of an independent feature is small") {
  oracle::Rng rng(2);
  const Eigen::Index n = 10000;
  Eigen::VectorXd f(n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    f[i] = rng.normal();
    labels[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? 0 : 1;
  }
  CHECK(std::abs(mtc::corr_score(f, labels)) < 0.05);
}

TEST_CASE("corr_score positive-affine invariance") {
  const auto m = random_matrix(30, 1, 3);
  const double base = mtc::corr_score(m.values.col(0), m.labels);
  const Eigen::VectorXd scaled = 3.5 * m.values.col(0).array() + 7.0;
  CHECK(mtc::corr_score(scaled, m.labels) == doctest::Approx(base).epsilon(1e-12));
  const Eigen::VectorXd flipped = -2.0 * m.values.col(0).array();
  CHECK(mtc::corr_score(flipped, m.labels) == doctest::Approx(-base).epsilon(1e-12));
}

TEST_CASE("mi_score analytic values and oracle agreement") {
  Eigen::VectorXd copy(8);
  copy << 0, 1, 0, 1, 0, 1, 0, 1;
  const std::vector<int> labels = {0, 1, 0, 1, 0, 1, 0, 1};
  CHECK(mtc::mi_score(copy, labels, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  Eigen::VectorXd flat = Eigen::VectorXd::Constant(8, 1.0);
  CHECK(mtc::mi_score(flat, labels, 2) == 0.0);

  const auto m = random_matrix(60, 4, 4);
  const int bins = mtc::resolve_mi_bins({}, 60);
  CHECK(bins == 8);
  for (Eigen::Index j = 0; j < 4; ++j) {
    const double ref = oracle::mi_feature_label(col_vec(m.values, j), m.labels, bins);
    CHECK(mtc::mi_score(m.values.col(j), m.labels, bins) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("mi_score of an independent feature is near zero") {
  oracle::Rng rng(5);
  const Eigen::Index n = 10000;
  Eigen::VectorXd f(n);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    f[i] = rng.normal();
    labels[static_cast<std::size_t>(i)] = rng.uniform() < 0.5 ? 0 : 1;
  }
  CHECK(mtc::mi_score(f, labels, 32) < 0.01);
}

TEST_CASE("resolve_mi_bins: ceil(sqrt(n)) capped at 32") {
  CHECK(mtc::resolve_mi_bins({}, 16) == 4);
  CHECK(mtc::resolve_mi_bins({}, 17) == 5);
  CHECK(mtc::resolve_mi_bins({}, 4000) == 32);
  CHECK(mtc::resolve_mi_bins({12}, 4000) == 12);
}

TEST_CASE("fdr_score values and degeneracy policy") {
  const auto m = random_matrix(50, 3, 6);
  for (Eigen::Index j = 0; j < 3; ++j) {
    const double ref = oracle::fdr(col_vec(m.values, j), m.labels);
    CHECK(mtc::fdr_score(m.values.col(j), m.labels) == doctest::Approx(ref).epsilon(1e-12));
  }

  Eigen::VectorXd same(6);
  same << 1, 2, 3, 1, 2, 3;
  CHECK(mtc::fdr_score(same, {0, 0, 0, 1, 1, 1}) == 0.0);

  Eigen::VectorXd allsame = Eigen::VectorXd::Constant(6, 4.0);
  CHECK(mtc::fdr_score(allsame, {0, 0, 0, 1, 1, 1}) == 0.0);

  Eigen::VectorXd split(6);
  split << 1, 1, 1, 2, 2, 2;
  CHECK_THROWS_AS(mtc::fdr_score(split, {0, 0, 0, 1, 1, 1}), mtc::NumericError);
}

TEST_CASE("ranksum_score pair counting") {
  Eigen::VectorXd f(4);
  f << 1, 2, 3, 4;
  CHECK(mtc::ranksum_score(f, {0, 0, 1, 1}) == 4.0);  // t = 4
  CHECK(mtc::ranksum_score(f, {1, 1, 0, 0}) == 4.0);  // t = 0

  Eigen::VectorXd tie(2);
  tie << 5, 5;
  CHECK(mtc::ranksum_score(tie, {0, 1}) == 1.0);  // single tied pair counts as <=

  const auto m = random_matrix(35, 3, 7);
  for (Eigen::Index j = 0; j < 3; ++j) {
    const double ref = oracle::ranksum(col_vec(m.values, j), m.labels);
    CHECK(mtc::ranksum_score(m.values.col(j), m.labels) == ref);
  }
}

TEST_CASE("ranksum_score invariant under strictly increasing transforms") {
  const auto m = random_matrix(30, 1, 8);
  const double base = mtc::ranksum_score(m.values.col(0), m.labels);
  const Eigen::VectorXd cubed = m.values.col(0).array().cube() + m.values.col(0).array();
  CHECK(mtc::ranksum_score(cubed, m.labels) == base);
}

TEST_CASE("rank_univariate ordering, cap, and degenerate handling") {
  oracle::Rng rng(9);
  mtc::LabeledFeatureMatrix m;
  const Eigen::Index n = 60;
  m.values.resize(n, 5);
  m.labels.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const int label = i % 2;
    m.labels[static_cast<std::size_t>(i)] = label;
    m.values(i, 0) = rng.normal();
    m.values(i, 1) = static_cast<double>(label);  // exact copy of the labels
    m.values(i, 2) = rng.normal();
    m.values(i, 3) = 1.0;  // constant: degenerate under corr
    m.values(i, 4) = rng.normal();
  }

  const auto ranked = mtc::rank_univariate(m, mtc::UnivariateCriterion::corr, 5);
  REQUIRE(ranked.size() == 5);
  CHECK(ranked[0].feature_index == 1);
  CHECK(ranked[0].score == doctest::Approx(1.0));
  CHECK(ranked[4].feature_index == 3);  // degenerate sorts last
  CHECK(ranked[4].score == 0.0);

  CHECK(mtc::rank_univariate(m, mtc::UnivariateCriterion::fdr, 3).size() == 3);
  CHECK(mtc::rank_univariate(m, mtc::UnivariateCriterion::mi, 25).size() == 5);
  CHECK_THROWS_AS(mtc::rank_univariate(m, mtc::UnivariateCriterion::mi, 0), mtc::ConfigError);
}

TEST_CASE("chernoff and bhattacharyya distances") {
  const auto m = random_matrix(80, 3, 10, 2.0);

  SUBCASE("oracle agreement") {
    for (double beta : {0.3, 0.5, 0.7}) {
      const double ref = oracle::chernoff(m.values, m.labels, beta);
      const double got = mtc::chernoff_distance(m.values, m.labels, beta);
      CHECK(std::abs(got - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
    const double bd = mtc::bhattacharyya_distance(m.values, m.labels);
    CHECK(bd == mtc::chernoff_distance(m.values, m.labels, 0.5));
    CHECK(bd >= 0.0);
  }

  SUBCASE("identical class distributions give zero") {
    Eigen::MatrixXd x(8, 2);
    x << 1, 2, 3, 4, 5, 6, 7, 8, 1, 2, 3, 4, 5, 6, 7, 8;
    // rows 0..3 and 4..7 identical point sets
    Eigen::MatrixXd dup(8, 2);
    dup.topRows(4) = x.topRows(4);
    dup.bottomRows(4) = x.topRows(4);
    const std::vector<int> labels = {0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(mtc::chernoff_distance(dup, labels, 0.25) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mtc::bhattacharyya_distance(dup, labels) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("class swap maps beta to 1 - beta") {
    std::vector<int> swapped(m.labels.size());
    for (std::size_t i = 0; i < m.labels.size(); ++i) swapped[i] = 1 - m.labels[i];
    CHECK(mtc::chernoff_distance(m.values, swapped, 0.3) ==
          doctest::Approx(mtc::chernoff_distance(m.values, m.labels, 0.7)).epsilon(1e-10));
    CHECK(mtc::bhattacharyya_distance(m.values, swapped) ==
          doctest::Approx(mtc::bhattacharyya_distance(m.values, m.labels)).epsilon(1e-10));
  }

  SUBCASE("beta outside (0,1) rejected") {
    CHECK_THROWS_AS(mtc::chernoff_distance(m.values, m.labels, 0.0), mtc::ConfigError);
    CHECK_THROWS_AS(mtc::chernoff_distance(m.values, m.labels, 1.0), mtc::ConfigError);
  }
}

TEST_CASE("scatter_ratio values and floor policy") {
  const auto m = random_matrix(60, 3, 11, 2.0);
  const double ref = oracle::scatter_ratio(m.values, m.labels);
  CHECK(mtc::scatter_ratio(m.values, m.labels) == doctest::Approx(ref).epsilon(1e-10));

  Eigen::MatrixXd same(6, 2);
  same << 1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6;
  Eigen::MatrixXd dup(6, 2);
  dup.topRows(3) = same.topRows(3);
  dup.bottomRows(3) = same.topRows(3);
  CHECK(mtc::scatter_ratio(dup, {0, 0, 0, 1, 1, 1}) == 0.0);

  // each class collapsed to a distinct point: floored within-trace
  Eigen::MatrixXd points(4, 1);
  points << 0, 0, 1, 1;
  const double v = mtc::scatter_ratio(points, {0, 0, 1, 1});
  CHECK(std::isfinite(v));
  CHECK(v == doctest::Approx(0.25 / (1e-12 * 0.25)));
}

TEST_CASE("regression_r2 values and nesting monotonicity") {
  const auto m = random_matrix(50, 4, 12, 1.5);
  const double ref = oracle::regression_r2(m.values.leftCols(2), m.labels);
  CHECK(std::abs(mtc::regression_r2(m.values.leftCols(2), m.labels) - ref) <= 1e-9);

  // labels exactly linear in one feature
  Eigen::MatrixXd exact(10, 1);
  std::vector<int> labels(10);
  for (int i = 0; i < 10; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 2;
    exact(i, 0) = 2.0 * (i % 2) - 5.0;
  }
  CHECK(mtc::regression_r2(exact, labels) == doctest::Approx(1.0).epsilon(1e-10));

  double prev = 0.0;
  for (Eigen::Index k = 1; k <= 4; ++k) {
    const double r2 = mtc::regression_r2(m.values.leftCols(k), m.labels);
    CHECK(r2 >= prev - 1e-12);
    CHECK(r2 <= 1.0);
    prev = r2;
  }

  CHECK_THROWS_AS(mtc::regression_r2(m.values.topRows(4), {0, 1, 0, 1}), mtc::ConfigError);
}

TEST_CASE("mrmr_mid literal double sum") {
  const auto m = random_matrix(60, 3, 13);
  const int bins = 8;
  for (bool excl : {false, true}) {
    const double ref = oracle::mrmr_mid(m.values, m.labels, bins, excl);
    CHECK(mtc::mrmr_mid(m.values, m.labels, bins, excl) ==
          doctest::Approx(ref).epsilon(1e-12));
  }

  // |S| = 1: literal formula keeps the self-information term
  const double single = mtc::mrmr_mid(m.values.leftCols(1), m.labels, bins);
  const double rel = mtc::mi_score(m.values.col(0), m.labels, bins);
  const double self = oracle::mutual_information(oracle::equal_width_bins(col_vec(m.values, 0), bins),
                                                 bins,
                                                 oracle::equal_width_bins(col_vec(m.values, 0), bins),
                                                 bins);
  CHECK(single == doctest::Approx(rel - self).epsilon(1e-12));
}

TEST_CASE("mrmr_mid penalizes duplicated features") {
  oracle::Rng rng(14);
  const Eigen::Index n = 200;
  Eigen::MatrixXd with_dup(n, 2), with_noise(n, 2);
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = i % 2;
    const double f = rng.normal() + (i % 2);
    with_dup(i, 0) = f;
    with_dup(i, 1) = f;  // exact copy
    with_noise(i, 0) = f;
    with_noise(i, 1) = rng.normal();  // independent noise
  }
  const int bins = 8;
  CHECK(mtc::mrmr_mid(with_dup, labels, bins) < mtc::mrmr_mid(with_noise, labels, bins));
}

TEST_CASE("forward_select univariate mode reproduces the ranking") {
  const auto m = random_matrix(60, 6, 15, 2.0);
  const auto method = mtc::SelectionMethod::univariate(mtc::UnivariateCriterion::fdr);
  const auto trace = mtc::forward_select(m, method, 4);
  const auto ranked = mtc::rank_univariate(m, mtc::UnivariateCriterion::fdr, 4);
  REQUIRE(trace.ordered_indices.size() == 4);
  CHECK(trace.criterion == "fdr");
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(trace.ordered_indices[i] == ranked[i].feature_index);
    CHECK(trace.step_scores[i] == ranked[i].score);
  }
}

TEST_CASE("forward_select multivariate matches the exhaustive greedy oracle") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    const auto m = random_matrix(60, 8, seed, 2.0);
    const int cap = 4;

    struct Case {
      mtc::SelectionMethod method;
      std::function<double(const std::vector<int>&)> score;
    };
    auto sub = [&](const std::vector<int>& cols) {
      Eigen::MatrixXd s(m.values.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t j = 0; j < cols.size(); ++j) s.col(static_cast<Eigen::Index>(j)) = m.values.col(cols[j]);
      return s;
    };
    const int bins = mtc::resolve_mi_bins({}, m.values.rows());
    const std::vector<Case> cases = {
        {mtc::SelectionMethod::multivariate(mtc::MultivariateCriterion::bhattacharyya),
         [&](const std::vector<int>& c) { return oracle::bhattacharyya(sub(c), m.labels); }},
        {mtc::SelectionMethod::multivariate(mtc::MultivariateCriterion::scatter_ratio),
         [&](const std::vector<int>& c) { return oracle::scatter_ratio(sub(c), m.labels); }},
        {mtc::SelectionMethod::multivariate(mtc::MultivariateCriterion::regression),
         [&](const std::vector<int>& c) { return oracle::regression_r2(sub(c), m.labels); }},
        {mtc::SelectionMethod::multivariate(mtc::MultivariateCriterion::mrmr),
         [&](const std::vector<int>& c) { return oracle::mrmr_mid(sub(c), m.labels, bins, false); }},
    };
    for (const auto& c : cases) {
      const auto trace = mtc::forward_select(m, c.method, cap);
      const auto ref = oracle::greedy_forward(8, cap, c.score);
      CHECK(trace.ordered_indices == ref);
      // traces are nested and distinct by construction
      std::vector<int> sorted = trace.ordered_indices;
      std::sort(sorted.begin(), sorted.end());
      CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    }
  }
}

TEST_CASE("forward_select respects cap and rejects hopeless inputs") {
  const auto m = random_matrix(40, 5, 30, 1.5);
  const auto method = mtc::SelectionMethod::multivariate(mtc::MultivariateCriterion::regression);
  CHECK(mtc::forward_select(m, method, 25).ordered_indices.size() == 5);
  CHECK(mtc::forward_select(m, method, 2).ordered_indices.size() == 2);
  CHECK_THROWS_AS(mtc::forward_select(m, method, 0), mtc::ConfigError);

  mtc::LabeledFeatureMatrix one_class = m;
  std::fill(one_class.labels.begin(), one_class.labels.end(), 0);
  CHECK_THROWS_AS(mtc::forward_select(one_class, method, 2), mtc::DataError);
}

TEST_CASE("class_gaussian_stats invariants") {
  const auto m = random_matrix(50, 3, 31, 1.0);
  const auto s = mtc::class_gaussian_stats(m.values, m.labels);
  CHECK(s.prior0 + s.prior1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK((s.cov0 - s.cov0.transpose()).norm() < 1e-12);
  CHECK((s.within_scatter - s.within_scatter.transpose()).norm() < 1e-12);
  // S_b is PSD rank-1 here
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.between_scatter);
  CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
  const Eigen::VectorXd mu = s.prior0 * s.mean0 + s.prior1 * s.mean1;
  CHECK((s.global_mean - mu).norm() < 1e-14);
}
