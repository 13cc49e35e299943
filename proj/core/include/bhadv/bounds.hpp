#pragma once

#include <cstdint>

#include "bhadv/gauss.hpp"

namespace bhadv {

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long reps = 0;  // replications drawn
  long long hits = 0;  // replications satisfying the conditioning event
};

/// Probability that every prefix of n exchangeable equiprobable bins holds
/// fewer balls than its length when x balls are placed: 1 - x/n.
/// Throws std::domain_error unless n >= 1 and 0 <= x <= n.
double ballot_prob(int n, int x);

/// Law of the rejection count when every p-value is uniform:
/// P(count = ell) for ell in [0, n].  Uses the 0^0 = 1 convention at ell = 0.
double rejection_count_pmf(int n, double q, int ell);

struct ClampedProb {
  double value = 0.0;
  bool clamped = false;
};

/// Conditional probability that the raised count equals the budget exactly,
/// given the number of null values beyond the bins.  The closed form can
/// leave [0,1] for extreme inputs; the result is clamped and flagged.
/// Requires beyond_nulls >= c (std::domain_error otherwise).
ClampedProb raised_count_equals_budget_prob(int n, int n0, double q, int c, int beyond_nulls);

/// Monte-Carlo estimate of the expected FDR increase of INCREASE-c:
/// mean of (c / raised_count) restricted to draws with at least c null
/// values beyond the bins.  std_error uses all reps (unconditional mean).
McEstimate fdr_increase_mc(const GaussianAltModel& model, int c, long long reps,
                           std::uint64_t seed, int threads = 1);

/// Conditional MC mean of (raised_count - count) given the attack is feasible.
McEstimate count_gain_mc(const GaussianAltModel& model, int c, long long reps,
                         std::uint64_t seed, int threads = 1);

/// Conditional MC mean of the raised count given the attack is feasible.
McEstimate raised_count_mc(const GaussianAltModel& model, int c, long long reps,
                           std::uint64_t seed, int threads = 1);

/// MC-backed lower bound on the conditional expected count gain for c >= 2:
/// plugs the estimated conditional fraction of nulls in the bins past the
/// unperturbed rejection range into (c-1)/(1 - fraction) + 1.  The reported
/// std_error is propagated through that map.
McEstimate count_gain_lower_bound_mc(const GaussianAltModel& model, int c, long long reps,
                                     std::uint64_t seed, int threads = 1);

/// Bounds for strongly concentrated alternatives: an upper bound on the FDR
/// increase and a lower bound on the conditional expected raised count.
/// Conditional expectations are evaluated exactly (finite sums over the null
/// placement law) up to `exact_cap` nulls, by MC beyond that.
struct ConcentratedAltBounds {
  double upper_on_fdr_increase = 1.0;
  double lower_on_expected_raised_count = 0.0;
  double p_all_alts_in_head = 0.0;  // P(every alternative lands in bins 1..c)
};

ConcentratedAltBounds concentrated_alt_bounds(const GaussianAltModel& model, int c,
                                              int exact_cap = 2000, long long mc_reps = 200000,
                                              std::uint64_t seed = 1);

/// Which form of the m_c component enters the closed-form lower bound: the
/// printed ratio, or the exact binomial expectation it abbreviates (the
/// printed form omits an exponent; see the report fields for both values).
enum class MTermVariant { kAsPrinted, kExact };

struct BoundReport {
  int n = 0, n0 = 0, n1 = 0, c = 0;
  double q = 0.0, mu1 = 0.0;
  double delta = 0.0;        // excess alternative mass below q
  double delta_head = 0.0;   // over bins 1..c
  double delta_rest = 0.0;   // over bins c+1..n
  double pi_c = 0.0;
  double v_c = 0.0;
  double m_c = 0.0;  // the variant that entered l_c
  double m_c_as_printed = 0.0;
  double m_c_exact = 0.0;
  double z_c = 0.0;
  double d_kl = 0.0;
  double l_c = 0.0;
  bool vacuous = false;  // l_c <= 0 (the bound still holds, it just says nothing)
  MTermVariant variant = MTermVariant::kAsPrinted;
};

/// Closed-form lower bound on the FDR increase of INCREASE-c.  Deterministic;
/// throws std::domain_error (naming the offending bin) when some alternative
/// bin probability is not positive.
BoundReport fdr_increase_lower_bound(const GaussianAltModel& model, int c,
                                     MTermVariant variant = MTermVariant::kAsPrinted);

}  // namespace bhadv
