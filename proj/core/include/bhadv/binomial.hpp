#pragma once

namespace bhadv {

// Exact finite-sum Binomial(n, p) helpers, evaluated with log-space
// coefficients so that n in the thousands stays accurate.

double log_choose(int n, int k);

double binom_pmf(int n, double p, int k);

/// P(B >= c); exact, summing whichever side has fewer terms.
double binom_sf_geq(int n, double p, int c);

/// E[B | B >= c]; requires P(B >= c) > 0.
double binom_mean_given_geq(int n, double p, int c);

/// E[B | B <= cap]; requires P(B <= cap) > 0.
double binom_mean_given_leq(int n, double p, int cap);

/// Partial expectation E[base^{-B}; B <= k_max] (0 when k_max < 0).
double binom_partial_neg_pow(int n, double p, double base, int k_max);

}  // namespace bhadv
