#include "bhadv/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace bhadv {

namespace {

void check_np(int n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p must lie in [0,1]");
}

double log_pmf(int n, double p, int k) {
  if (p == 0.0) return k == 0 ? 0.0 : -INFINITY;
  if (p == 1.0) return k == n ? 0.0 : -INFINITY;
  return log_choose(n, k) + k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

double log_choose(int n, int k) {
  if (k < 0 || k > n) return -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double binom_pmf(int n, double p, int k) {
  check_np(n, p);
  if (k < 0 || k > n) return 0.0;
  return std::exp(log_pmf(n, p, k));
}

double binom_sf_geq(int n, double p, int c) {
  check_np(n, p);
  if (c <= 0) return 1.0;
  if (c > n) return 0.0;
  long double acc = 0.0L;
  if (c > n - c + 1) {
    for (int k = c; k <= n; ++k) acc += std::exp(log_pmf(n, p, k));
    return static_cast<double>(acc);
  }
  for (int k = 0; k < c; ++k) acc += std::exp(log_pmf(n, p, k));
  return static_cast<double>(1.0L - acc);
}

double binom_mean_given_geq(int n, double p, int c) {
  check_np(n, p);
  if (c <= 0) return n * p;
  long double num = 0.0L, den = 0.0L;
  for (int k = c; k <= n; ++k) {
    const long double w = std::exp(log_pmf(n, p, k));
    num += w * k;
    den += w;
  }
  if (den <= 0.0L) throw std::domain_error("binomial: conditioning event has probability 0");
  return static_cast<double>(num / den);
}

double binom_mean_given_leq(int n, double p, int cap) {
  check_np(n, p);
  if (cap >= n) return n * p;
  if (cap < 0) throw std::domain_error("binomial: conditioning event has probability 0");
  long double num = 0.0L, den = 0.0L;
  for (int k = 0; k <= cap; ++k) {
    const long double w = std::exp(log_pmf(n, p, k));
    num += w * k;
    den += w;
  }
  if (den <= 0.0L) throw std::domain_error("binomial: conditioning event has probability 0");
  return static_cast<double>(num / den);
}

double binom_partial_neg_pow(int n, double p, double base, int k_max) {
  check_np(n, p);
  if (!(base > 0.0)) throw std::invalid_argument("binomial: base must be positive");
  if (k_max < 0) return 0.0;
  long double acc = 0.0L;
  const int hi = k_max > n ? n : k_max;
  for (int k = 0; k <= hi; ++k) {
    acc += std::exp(log_pmf(n, p, k) - k * std::log(base));
  }
  return static_cast<double>(acc);
}

}  // namespace bhadv
