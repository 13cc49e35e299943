#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bhadv/attack.hpp"
#include "bhadv/bh.hpp"
#include "bhadv/conformal.hpp"
#include "bhadv/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bhadv;

namespace {

ConformalConfig small_config() {
  ConformalConfig cfg;
  cfg.dim = 12;
  cfg.n_train = 150;
  cfg.n_cal = 150;
  cfg.n_test = 150;
  cfg.reps = 40;
  cfg.master_seed = 99;
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("mixture draw shapes and labels") {
  ConformalConfig cfg = small_config();
  cfg.signal_strength = 2.0;
  std::mt19937_64 rng = make_stream(1, 0);
  const MixtureDraw draw = generate_mixture(cfg, rng);
  CHECK(draw.train.size() == cfg.n_train);
  CHECK(draw.cal.size() == cfg.n_cal);
  CHECK(draw.test.size() == cfg.n_test);
  CHECK(draw.test_labels.size() == static_cast<std::size_t>(cfg.n_test));
  const long outliers = std::count(draw.test_labels.begin(), draw.test_labels.end(),
                                   TestLabel::kAlternative);
  CHECK(outliers > 0);
  CHECK(outliers < cfg.n_test / 2);
}

TEST_CASE("one-class score basics") {
  PointSet ref;
  ref.dim = 2;
  ref.xs = {0.0, 0.0, 1.0, 0.0, 0.0, 1.0};
  SUBCASE("a reference point scores zero at k = 1") {
    const double at_ref[2] = {1.0, 0.0};
    CHECK(one_class_score(at_ref, ref, 1) == doctest::Approx(0.0));
  }
  SUBCASE("permutation invariance") {
    PointSet shuffled;
    shuffled.dim = 2;
    shuffled.xs = {0.0, 1.0, 0.0, 0.0, 1.0, 0.0};
    const double pt[2] = {0.3, -0.2};
    CHECK(one_class_score(pt, ref, 2) == doctest::Approx(one_class_score(pt, shuffled, 2)));
  }
  SUBCASE("distance monotonicity") {
    const double near[2] = {0.3, 0.3};
    const double far[2] = {9.0, 9.0};
    CHECK(one_class_score(far, ref, 3) > one_class_score(near, ref, 3));
  }
}

TEST_CASE("higher dispersion raises scores") {
  ConformalConfig cfg = small_config();
  cfg.signal_strength = 3.0;
  std::mt19937_64 rng = make_stream(2, 0);
  const MixtureDraw draw = generate_mixture(cfg, rng);
  double inlier_sum = 0.0, outlier_sum = 0.0;
  long inliers = 0, outliers = 0;
  for (int i = 0; i < cfg.n_test; ++i) {
    const double s = one_class_score(draw.test.row(i), draw.train, cfg.knn_k);
    if (draw.test_labels[static_cast<std::size_t>(i)] == TestLabel::kNull) {
      inlier_sum += s;
      ++inliers;
    } else {
      outlier_sum += s;
      ++outliers;
    }
  }
  REQUIRE(outliers > 0);
  CHECK(outlier_sum / outliers > inlier_sum / inliers);
}

TEST_CASE("conformal p-values") {
  const std::vector<double> cal{1.0, 2.0, 3.0, 4.0};
  SUBCASE("rank extremes") {
    CHECK(conformal_pvalues(cal, {5.0}, true)[0] == doctest::Approx(1.0 / 5.0));
    CHECK(conformal_pvalues(cal, {0.5}, true)[0] == doctest::Approx(1.0));
    CHECK(conformal_pvalues(cal, {2.5}, true)[0] == doctest::Approx(3.0 / 5.0));
  }
  SUBCASE("printed denominator variant") {
    CHECK(conformal_pvalues(cal, {5.0}, false)[0] == doctest::Approx(0.25));
    CHECK(conformal_pvalues(cal, {0.5}, false)[0] == doctest::Approx(1.0));  // capped
  }
  SUBCASE("discreteness: multiples of 1/(n_cal+1)") {
    std::mt19937_64 rng = make_stream(3, 0);
    std::vector<double> big_cal(200), tests(50);
    for (double& v : big_cal) v = uniform01(rng);
    for (double& v : tests) v = uniform01(rng);
    for (double p : conformal_pvalues(big_cal, tests, true)) {
      const double scaled = p * 201.0;
      CHECK(std::fabs(scaled - std::round(scaled)) < 1e-9);
    }
  }
}

TEST_CASE("inlier conformal p-values are super-uniform") {
  ConformalConfig cfg = small_config();
  cfg.n_cal = 400;
  cfg.n_test = 1000;
  cfg.outlier_fraction = 0.0;
  std::mt19937_64 rng = make_stream(7, 0);
  const MixtureDraw draw = generate_mixture(cfg, rng);
  const std::vector<double> cal_scores = score_set(draw.cal, draw.train, cfg.knn_k, 2);
  const std::vector<double> test_scores = score_set(draw.test, draw.train, cfg.knn_k, 2);
  const std::vector<double> pvals = conformal_pvalues(cal_scores, test_scores, true);
  // Empirical CDF must not exceed the identity by more than a wide DKW band.
  std::vector<double> sorted = pvals;
  std::sort(sorted.begin(), sorted.end());
  const double band = 3.0 * std::sqrt(1.0 / (2.0 * sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double ecdf = static_cast<double>(i + 1) / sorted.size();
    CHECK(ecdf <= sorted[i] + band);
  }
}

TEST_CASE("score ranks are exchangeable between calibration and inlier tests") {
  // Wilcoxon rank-sum normal approximation at signal strength 1.
  ConformalConfig cfg = small_config();
  cfg.signal_strength = 1.0;
  cfg.outlier_fraction = 0.0;
  cfg.n_cal = 300;
  cfg.n_test = 300;
  std::mt19937_64 rng = make_stream(13, 0);
  const MixtureDraw draw = generate_mixture(cfg, rng);
  const std::vector<double> cal_scores = score_set(draw.cal, draw.train, cfg.knn_k, 2);
  const std::vector<double> test_scores = score_set(draw.test, draw.train, cfg.knn_k, 2);
  std::vector<std::pair<double, int>> pooled;
  for (double s : cal_scores) pooled.emplace_back(s, 0);
  for (double s : test_scores) pooled.emplace_back(s, 1);
  std::sort(pooled.begin(), pooled.end());
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].second == 0) rank_sum += static_cast<double>(i + 1);
  }
  const double n1 = static_cast<double>(cal_scores.size());
  const double n2 = static_cast<double>(test_scores.size());
  const double mean = n1 * (n1 + n2 + 1) / 2.0;
  const double sd = std::sqrt(n1 * n2 * (n1 + n2 + 1) / 12.0);
  CHECK(std::fabs(rank_sum - mean) / sd < 2.807);  // two-sided 1% z
}

TEST_CASE("attack integrity on conformal p-values") {
  ConformalConfig cfg = small_config();
  cfg.signal_strength = 1.5;
  std::mt19937_64 rng = make_stream(29, 0);
  const MixtureDraw draw = generate_mixture(cfg, rng);
  const std::vector<double> cal_scores = score_set(draw.cal, draw.train, cfg.knn_k, 2);
  const std::vector<double> test_scores = score_set(draw.test, draw.train, cfg.knn_k, 2);
  const std::vector<double> pvals = conformal_pvalues(cal_scores, test_scores, true);
  std::vector<PValueEntry> entries;
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    entries.push_back(PValueEntry{static_cast<int>(i) + 1, pvals[i],
                                  draw.test_labels[i]});
  }
  const LabeledPValues pv(std::move(entries));
  const BinLoads loads = compute_loads(pv, BinSystem::create(pv.size(), cfg.q));
  for (int c : {1, 3}) {
    const PerturbationPlan plan = increase_c(pv, cfg.q, c);
    if (loads.beyond_null() >= c) {
      CHECK(plan.induced_k == raised_rejection_count(loads, c));
    } else {
      CHECK(plan.moves.empty());
    }
  }
}

TEST_CASE("experiment table rows and ingest path") {
  ConformalConfig cfg = small_config();
  cfg.reps = 25;
  const std::vector<ConformalRow> rows = run_conformal_table(cfg, {1.0, 2.0}, {1, 3});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].signal_strength == 1.0);
  CHECK(rows[0].c == 1);
  CHECK(rows[3].signal_strength == 2.0);
  for (const ConformalRow& r : rows) {
    CHECK(r.fdp_after_mean >= r.fdp_before_mean - 1e-9);
  }

  const std::vector<double> cal{0.1, 0.4, 0.5, 0.9, 1.3, 2.2};
  const std::vector<double> test{2.5, 0.2, 1.0};
  const ConformalRow ing = run_conformal_ingest(
      cal, test,
      {TestLabel::kAlternative, TestLabel::kNull, TestLabel::kNull}, 1, 0.2, true);
  CHECK(ing.reps == 1);
  CHECK(std::isfinite(ing.fdp_after_mean));
}
