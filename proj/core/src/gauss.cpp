#include "bhadv/gauss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhadv/rng.hpp"

namespace bhadv {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

}  // namespace

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("std_normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("std_normal_quantile: input outside (0,1)");

  // Acklam's rational approximation (~1e-9 relative), then one Newton step.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (u < plow) {
    const double r = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (u <= 1.0 - plow) {
    const double r = u - 0.5;
    const double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    const double r = std::sqrt(-2.0 * std::log1p(-u));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }

  const double pdf = std_normal_pdf(x);
  if (pdf > 0.0) {
    x -= (std_normal_cdf(x) - u) / pdf;
  }
  return x;
}

double z_of_p(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) return -std::numeric_limits<double>::infinity();
  return -std_normal_quantile(p);  // quantile(1 - p) by symmetry
}

GaussianAltModel GaussianAltModel::create(int n, int n0, double q, double mu1) {
  if (n < 1) throw std::invalid_argument("test count must be >= 1");
  if (n0 < 0 || n0 > n) throw std::invalid_argument("null count must lie in [0, n]");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("control level q must lie in (0,1)");
  if (!(mu1 >= 0.0)) throw std::invalid_argument("mu1 must be >= 0");
  return GaussianAltModel{n, n0, q, mu1};
}

double alt_cdf(const GaussianAltModel& model, double x) {
  if (model.mu1 == 0.0) return x;  // exact: alternatives are uniform
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  // P(p <= x) = P(Z > quantile(1-x) - mu1) for Z standard normal.
  return std_normal_cdf(model.mu1 - std_normal_quantile(1.0 - x));
}

double delta(const GaussianAltModel& model) { return alt_cdf(model, model.q) - model.q; }

double delta_j(const GaussianAltModel& model, int j) {
  if (j < 1 || j > model.n) throw std::domain_error("bin index outside [1, n]");
  const BinSystem bins = BinSystem::create(model.n, model.q);
  return alt_cdf(model, bins.edge(j)) - alt_cdf(model, bins.edge(j - 1)) - bins.width();
}

double delta_prefix(const GaussianAltModel& model, int c) {
  if (c < 0 || c > model.n) throw std::domain_error("prefix index outside [0, n]");
  const BinSystem bins = BinSystem::create(model.n, model.q);
  return alt_cdf(model, bins.edge(c)) - c * bins.width();
}

double delta_suffix(const GaussianAltModel& model, int c) {
  if (c < 0 || c > model.n) throw std::domain_error("prefix index outside [0, n]");
  const BinSystem bins = BinSystem::create(model.n, model.q);
  return (alt_cdf(model, model.q) - alt_cdf(model, bins.edge(c))) - (model.n - c) * bins.width();
}

InstanceDraw generate_instance(const GaussianAltModel& model, std::mt19937_64& rng) {
  std::vector<PValueEntry> entries;
  std::vector<double> z;
  entries.reserve(static_cast<std::size_t>(model.n));
  z.reserve(static_cast<std::size_t>(model.n));
  for (int i = 0; i < model.n0; ++i) {
    const double u = uniform01(rng);
    entries.push_back(PValueEntry{i + 1, u, TestLabel::kNull});
    z.push_back(-std_normal_quantile(u));
  }
  for (int i = model.n0; i < model.n; ++i) {
    const double zi = model.mu1 + std_normal_quantile(uniform01(rng));
    entries.push_back(PValueEntry{i + 1, std_normal_cdf(-zi), TestLabel::kAlternative});
    z.push_back(zi);
  }
  return InstanceDraw{LabeledPValues(std::move(entries)), std::move(z)};
}

}  // namespace bhadv
