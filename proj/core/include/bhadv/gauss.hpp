#pragma once

#include <random>
#include <vector>

#include "bhadv/core.hpp"

namespace bhadv {

/// Standard normal CDF, absolute error well below 1e-12 (complementary error
/// function route, accurate in both tails).  Throws std::domain_error on
/// non-finite input.
double std_normal_cdf(double x);

/// Standard normal quantile on (0,1): rational approximation refined by one
/// Newton step against the CDF; |cdf(quantile(u)) - u| stays below 1e-14.
/// Throws std::domain_error outside (0,1).
double std_normal_quantile(double u);

/// z-score of a p-value under p = P(Z > z).  Returns +inf for p <= 0 and
/// -inf for p >= 1 instead of throwing; distance bookkeeping relies on the
/// infinite extremes ordering correctly.
double z_of_p(double p);

/// Instance model: null z-scores are standard normal, alternative z-scores
/// are N(mu1, 1), and every p-value is the upper tail probability of its
/// z-score.  mu1 = 0 makes the alternatives exactly uniform.
struct GaussianAltModel {
  int n = 1;
  int n0 = 1;
  double q = 0.1;
  double mu1 = 0.0;

  int n1() const { return n - n0; }
  static GaussianAltModel create(int n, int n0, double q, double mu1);
};

/// P(p <= x) for an alternative p-value; exactly x when mu1 == 0.
double alt_cdf(const GaussianAltModel& model, double x);

/// Excess alternative mass below q relative to uniform: P1(p <= q) - q.
double delta(const GaussianAltModel& model);

/// Excess alternative mass in bin j relative to the uniform q/N.
double delta_j(const GaussianAltModel& model, int j);

/// Sum of delta_j over j = 1..c (telescoped closed form).
double delta_prefix(const GaussianAltModel& model, int c);

/// Sum of delta_j over j = c+1..N (telescoped closed form).
double delta_suffix(const GaussianAltModel& model, int c);

struct InstanceDraw {
  LabeledPValues pv;
  std::vector<double> z;  // aligned with pv.entries()
};

/// Draws n0 null and n1 alternative tests.  Nulls are generated first, then
/// alternatives; ids run 1..n in that order.  The draw order is part of the
/// reproducibility contract.
InstanceDraw generate_instance(const GaussianAltModel& model, std::mt19937_64& rng);

}  // namespace bhadv
