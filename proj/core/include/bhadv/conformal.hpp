#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bhadv/core.hpp"

namespace bhadv {

/// A contiguous set of points in R^dim (row-major).
struct PointSet {
  int dim = 0;
  std::vector<double> xs;

  int size() const { return dim > 0 ? static_cast<int>(xs.size()) / dim : 0; }
  const double* row(int i) const { return xs.data() + static_cast<std::size_t>(i) * dim; }
};

struct ConformalConfig {
  int dim = 50;
  int n_train = 1000;
  int n_cal = 1000;
  int n_test = 1000;
  double signal_strength = 1.0;   // a >= 1; outliers share the mixture means
                                  // but have covariance a * identity
  double outlier_fraction = 0.1;  // expected fraction of outliers in the test set
  int c = 1;
  long long reps = 1000;
  std::uint64_t master_seed = 0;
  int knn_k = 10;
  bool plus_one_denominator = true;  // (1 + rank)/(n_cal + 1); false uses /n_cal
  double q = 0.1;
  int threads = 0;
};

struct MixtureDraw {
  PointSet train;  // inliers only
  PointSet cal;    // inliers only
  PointSet test;
  std::vector<TestLabel> test_labels;  // kAlternative marks a true outlier
};

/// Inliers come from an equal-weight mixture of three unit-covariance
/// Gaussians with fixed means (+3 e1, -3 e1, +3 e2); outliers use the same
/// means with covariance scaled by signal_strength.
MixtureDraw generate_mixture(const ConformalConfig& config, std::mt19937_64& rng);

/// Average Euclidean distance to the k nearest reference points; larger
/// means more anomalous.
double one_class_score(const double* point, const PointSet& reference, int k);

std::vector<double> score_set(const PointSet& points, const PointSet& reference, int k,
                              int threads = 0);

/// Rank-based p-values of test scores against calibration scores under the
/// larger-is-more-anomalous orientation: p = (1 + #{cal >= s}) / (n_cal + 1)
/// (denominator n_cal when plus_one is false).
std::vector<double> conformal_pvalues(const std::vector<double>& cal_scores,
                                      const std::vector<double>& test_scores, bool plus_one);

struct ConformalRow {
  double signal_strength = 0.0;
  int c = 0;
  long long reps = 0;
  double fdp_before_mean = 0.0, fdp_before_se = 0.0;
  double fdp_after_mean = 0.0, fdp_after_se = 0.0;
};

/// Full synthetic experiment: per signal strength the training set is drawn
/// once; each replication draws fresh calibration and test sets, then the
/// same replication's p-values are attacked once per budget.  Rows come out
/// in (a, c) grid order.
std::vector<ConformalRow> run_conformal_table(const ConformalConfig& base,
                                              const std::vector<double>& a_values,
                                              const std::vector<int>& c_values);

/// Ingestion path: precomputed scores (calibration + labeled test) are turned
/// into conformal p-values and attacked once.  Returns the single row plus
/// the labeled collection through `out_pv` when non-null.
ConformalRow run_conformal_ingest(const std::vector<double>& cal_scores,
                                  const std::vector<double>& test_scores,
                                  const std::vector<TestLabel>& test_labels, int c, double q,
                                  bool plus_one);

}  // namespace bhadv
