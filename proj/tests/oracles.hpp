// Test-only reference implementations, kept independent of the library paths
// they check: a series-based normal CDF, a bisection quantile built on it,
// exhaustive enumeration for the ballot probability, and exhaustive
// enumeration of the bin-placement law for the budget-probability formula.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

// erf via its Maclaurin series in long double; adequate for |x| <= ~4, which
// covers every CDF comparison the tests make.
inline long double erf_series(long double x) {
  const long double two_over_sqrt_pi = 1.1283791670955125738961589031L;
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const long double contrib = term / (2 * n + 1);
    sum += contrib;
    if (std::fabs(contrib) < 1e-30L * std::fabs(sum)) break;
  }
  return two_over_sqrt_pi * sum;
}

inline double normal_cdf_series(double x) {
  return static_cast<double>(0.5L * (1.0L + erf_series(x / 1.4142135623730950488L)));
}

// Bisection against the series CDF.
inline double normal_quantile_bisect(double u) {
  double lo = -10.0, hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf_series(mid) < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// P(every prefix of the n equiprobable bins holds fewer balls than its
// length) by enumerating all n^x equiprobable placements of x balls.
inline double ballot_prob_enumerated(int n, int x) {
  if (x == 0) return 1.0;
  std::vector<int> assign(static_cast<std::size_t>(x), 0);
  long long good = 0, total = 0;
  while (true) {
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int b = 0; b < x; ++b) ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(b)])];
    int prefix = 0;
    bool ok = true;
    for (int r = 1; r <= n; ++r) {
      prefix += counts[static_cast<std::size_t>(r - 1)];
      if (prefix >= r) {
        ok = false;
        break;
      }
    }
    ++total;
    if (ok) ++good;
    int pos = 0;
    while (pos < x) {
      if (++assign[static_cast<std::size_t>(pos)] < n) break;
      assign[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == x) break;
  }
  return static_cast<double>(good) / static_cast<double>(total);
}

// Exact conditional probability that the budget-raised rejection count equals
// the budget, given exactly `beyond` nulls lie beyond the bins.  Enumerates
// the placements of the remaining nulls (uniform over the n bins) and of the
// alternatives (uniform over [0,1]: each bin with mass q/n, beyond-the-bins
// with mass 1-q).  Feasible only for tiny instances.
inline double raised_eq_budget_enumerated(int n, int n0, double q, int c, int beyond) {
  const int in_nulls = n0 - beyond;
  const int n1 = n - n0;
  const double w = q / n;

  // Alternative region index n means "beyond the bins".
  std::vector<int> alt_assign(static_cast<std::size_t>(n1), 0);
  std::vector<int> null_assign(static_cast<std::size_t>(in_nulls), 0);
  long double hit = 0.0L, total = 0.0L;

  auto scan_nulls = [&](long double alt_weight, const std::vector<int>& alt_bins) {
    while (true) {
      std::vector<int> counts(static_cast<std::size_t>(n), 0);
      for (int b : alt_bins) {
        if (b < n) ++counts[static_cast<std::size_t>(b)];
      }
      for (int b : null_assign) ++counts[static_cast<std::size_t>(b)];
      int raised = 0;
      int prefix = 0;
      for (int i = 1; i <= n; ++i) {
        prefix += counts[static_cast<std::size_t>(i - 1)];
        if (prefix == i - c) raised = i;
      }
      const long double weight = alt_weight;  // null placements all equiprobable
      total += weight;
      if (raised == c) hit += weight;
      int pos = 0;
      while (pos < in_nulls) {
        if (++null_assign[static_cast<std::size_t>(pos)] < n) break;
        null_assign[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == in_nulls) break;
    }
    null_assign.assign(static_cast<std::size_t>(in_nulls), 0);
  };

  while (true) {
    long double alt_weight = 1.0L;
    for (int b : alt_assign) alt_weight *= (b < n ? w : 1.0 - q);
    scan_nulls(alt_weight, alt_assign);
    int pos = 0;
    while (pos < n1) {
      if (++alt_assign[static_cast<std::size_t>(pos)] <= n) break;
      alt_assign[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == n1) break;
  }
  return static_cast<double>(hit / total);
}

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
inline double ks_uniform_statistic(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double cdf = xs[i];
    const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
    const double lo = cdf - static_cast<double>(i) / n;
    if (hi > d) d = hi;
    if (lo > d) d = lo;
  }
  return d;
}

// Two-sample KS statistic.
inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double diff = std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size());
    if (diff > d) d = diff;
  }
  return d;
}

}  // namespace oracles
