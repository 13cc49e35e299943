#include "bhadv/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhadv/attack.hpp"
#include "bhadv/bh.hpp"
#include "bhadv/binomial.hpp"
#include "bhadv/parallel.hpp"
#include "bhadv/rng.hpp"

namespace bhadv {

namespace {

constexpr double kHalfLn2 = 0.34657359027997265471;  // (ln 2)/2

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
  MeanSe out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  out.mean = static_cast<double>(sum / n);
  if (n < 2) return out;
  long double ss = 0.0L;
  for (double x : xs) {
    const long double d = x - out.mean;
    ss += d * d;
  }
  out.se = std::sqrt(static_cast<double>(ss / (n - 1)) / static_cast<double>(n));
  return out;
}

// Per-replication raw material shared by the MC estimators.
struct DrawSummary {
  int k = 0;
  int raised = 0;
  bool feasible = false;       // at least c nulls beyond the bins
  double rest_null_frac = 0.0; // nulls in bins k+2..n over n-(k+1), if defined
  bool rest_defined = false;
};

DrawSummary summarize_draw(const GaussianAltModel& model, int c, std::mt19937_64& rng) {
  const InstanceDraw draw = generate_instance(model, rng);
  const BinLoads loads = compute_loads(draw.pv, BinSystem::create(model.n, model.q));
  DrawSummary s;
  s.k = bh_bins(loads);
  s.feasible = loads.beyond_null() >= c;
  s.raised = raised_rejection_count(loads, c);
  if (s.k + 1 < model.n) {
    const int rest_nulls =
        loads.prefix(LoadKind::kNull, model.n) - loads.prefix(LoadKind::kNull, s.k + 1);
    s.rest_null_frac = static_cast<double>(rest_nulls) / (model.n - (s.k + 1));
    s.rest_defined = true;
  }
  return s;
}

std::vector<DrawSummary> run_draws(const GaussianAltModel& model, int c, long long reps,
                                   std::uint64_t seed, int threads) {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  std::vector<DrawSummary> out(static_cast<std::size_t>(reps));
  parallel_chunks(reps, threads, [&](long long begin, long long end) {
    for (long long r = begin; r < end; ++r) {
      std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(r));
      out[static_cast<std::size_t>(r)] = summarize_draw(model, c, rng);
    }
  });
  return out;
}

}  // namespace

double ballot_prob(int n, int x) {
  if (n < 1) throw std::domain_error("ballot_prob: need n >= 1");
  if (x < 0 || x > n) throw std::domain_error("ballot_prob: need 0 <= x <= n");
  return 1.0 - static_cast<double>(x) / static_cast<double>(n);
}

double rejection_count_pmf(int n, double q, int ell) {
  if (n < 1) throw std::invalid_argument("rejection_count_pmf: need n >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("rejection_count_pmf: q outside (0,1)");
  if (ell < 0 || ell > n) throw std::domain_error("rejection_count_pmf: ell outside [0, n]");
  if (ell == 0) return 1.0 - q;  // 0^0 = 1 convention
  const double frac = q * ell / n;
  const double log_hit = log_choose(n, ell) + ell * std::log(frac) + (n - ell) * std::log1p(-frac);
  const double prefactor = (1.0 - q) / (1.0 - q + (n - ell) * q / n);
  return prefactor * std::exp(log_hit);
}

ClampedProb raised_count_equals_budget_prob(int n, int n0, double q, int c, int beyond_nulls) {
  if (n < 1 || n0 < 0 || n0 > n) throw std::invalid_argument("invalid test counts");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q outside (0,1)");
  if (c < 1 || c >= n) throw std::invalid_argument("budget outside [1, n)");
  if (beyond_nulls < c) throw std::domain_error("conditioning requires beyond_nulls >= c");
  if (beyond_nulls > n0) throw std::domain_error("beyond_nulls exceeds the null count");
  const int n1 = n - n0;
  const double raw = std::pow(1.0 - c * q / n, n1) * std::pow(1.0 - static_cast<double>(c) / n, n0 - beyond_nulls) *
                     (1.0 - static_cast<double>(n0 - beyond_nulls) / (n - c) - n1 * q / (n - c * q));
  ClampedProb out;
  out.value = raw;
  if (raw < 0.0) {
    out.value = 0.0;
    out.clamped = true;
  } else if (raw > 1.0) {
    out.value = 1.0;
    out.clamped = true;
  }
  return out;
}

McEstimate fdr_increase_mc(const GaussianAltModel& model, int c, long long reps,
                           std::uint64_t seed, int threads) {
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  const std::vector<DrawSummary> draws = run_draws(model, c, reps, seed, threads);
  std::vector<double> xs;
  xs.reserve(draws.size());
  long long hits = 0;
  for (const DrawSummary& d : draws) {
    if (d.feasible) {
      xs.push_back(static_cast<double>(c) / d.raised);
      ++hits;
    } else {
      xs.push_back(0.0);
    }
  }
  const MeanSe ms = mean_se(xs);
  return McEstimate{ms.mean, ms.se, reps, hits};
}

McEstimate count_gain_mc(const GaussianAltModel& model, int c, long long reps, std::uint64_t seed,
                         int threads) {
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  const std::vector<DrawSummary> draws = run_draws(model, c, reps, seed, threads);
  std::vector<double> xs;
  for (const DrawSummary& d : draws) {
    if (d.feasible) xs.push_back(static_cast<double>(d.raised - d.k));
  }
  const MeanSe ms = mean_se(xs);
  return McEstimate{ms.mean, ms.se, reps, static_cast<long long>(xs.size())};
}

McEstimate raised_count_mc(const GaussianAltModel& model, int c, long long reps,
                           std::uint64_t seed, int threads) {
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  const std::vector<DrawSummary> draws = run_draws(model, c, reps, seed, threads);
  std::vector<double> xs;
  for (const DrawSummary& d : draws) {
    if (d.feasible) xs.push_back(static_cast<double>(d.raised));
  }
  const MeanSe ms = mean_se(xs);
  return McEstimate{ms.mean, ms.se, reps, static_cast<long long>(xs.size())};
}

McEstimate count_gain_lower_bound_mc(const GaussianAltModel& model, int c, long long reps,
                                     std::uint64_t seed, int threads) {
  if (c < 2) throw std::invalid_argument("the count-gain bound needs c >= 2");
  const std::vector<DrawSummary> draws = run_draws(model, c, reps, seed, threads);
  std::vector<double> xs;
  for (const DrawSummary& d : draws) {
    if (d.feasible && d.rest_defined) xs.push_back(d.rest_null_frac);
  }
  const MeanSe inner = mean_se(xs);
  const double denom = 1.0 - inner.mean;
  if (!(denom > 0.0)) throw std::domain_error("degenerate inner expectation");
  const double rhs = (c - 1) / denom + 1.0;
  const double rhs_se = (c - 1) / (denom * denom) * inner.se;
  return McEstimate{rhs, rhs_se, reps, static_cast<long long>(xs.size())};
}

ConcentratedAltBounds concentrated_alt_bounds(const GaussianAltModel& model, int c, int exact_cap,
                                              long long mc_reps, std::uint64_t seed) {
  if (c < 1 || c >= model.n) throw std::invalid_argument("budget outside [1, n)");
  const int n = model.n, n0 = model.n0, n1 = model.n1();
  if (n1 + c > n) throw std::invalid_argument("head region n1 + c exceeds the bin count");
  const double q = model.q;
  const BinSystem bins = BinSystem::create(n, q);

  ConcentratedAltBounds out;
  out.p_all_alts_in_head = std::pow(alt_cdf(model, bins.edge(c)), n1);

  // E[c / (c + n1 + U) | T >= c], with U the nulls in bins 1..n1+c and T the
  // nulls beyond the bins.  (U, T) is trinomial over the n0 nulls.
  const double p_head = bins.edge(n1 + c);
  const double p_beyond = 1.0 - q;
  const double p_mid = 1.0 - p_head - p_beyond;
  double cond_mean = 0.0;
  if (n0 == 0) {
    cond_mean = static_cast<double>(c) / (c + n1);
  } else if (n0 <= exact_cap) {
    long double num = 0.0L, den = 0.0L;
    const double lf_n0 = std::lgamma(n0 + 1.0);
    for (int t = c; t <= n0; ++t) {
      for (int u = 0; u + t <= n0; ++u) {
        const int rest = n0 - u - t;
        double lw = lf_n0 - std::lgamma(u + 1.0) - std::lgamma(t + 1.0) - std::lgamma(rest + 1.0) +
                    u * std::log(p_head) + t * std::log(p_beyond);
        if (rest > 0) lw += rest * std::log(p_mid);
        const long double w = std::exp(static_cast<long double>(lw));
        num += w * (static_cast<double>(c) / (c + n1 + u));
        den += w;
      }
    }
    if (den <= 0.0L) throw std::domain_error("conditioning event has probability 0");
    cond_mean = static_cast<double>(num / den);
  } else {
    long long hits = 0;
    long double acc = 0.0L;
    std::mt19937_64 rng = make_stream(seed, 0);
    for (long long r = 0; r < mc_reps; ++r) {
      int u = 0, t = 0;
      for (int i = 0; i < n0; ++i) {
        const double x = uniform01(rng);
        if (x < p_head) {
          ++u;
        } else if (x < p_head + p_beyond) {
          ++t;
        }
      }
      if (t >= c) {
        acc += static_cast<double>(c) / (c + n1 + u);
        ++hits;
      }
    }
    if (hits == 0) throw std::domain_error("conditioning event not hit by MC fallback");
    cond_mean = static_cast<double>(acc / hits);
  }
  out.upper_on_fdr_increase =
      out.p_all_alts_in_head * cond_mean + (1.0 - out.p_all_alts_in_head);

  // Lower bound on the conditional expected raised count.  The denominator is
  // a truncated mean of the binomial law of nulls inside the bins.
  const double trunc_mean = binom_mean_given_leq(n0, q, n0 - c) / n;
  out.lower_on_expected_raised_count = (n1 + c) * out.p_all_alts_in_head / (1.0 - trunc_mean);
  return out;
}

BoundReport fdr_increase_lower_bound(const GaussianAltModel& model, int c, MTermVariant variant) {
  const int n = model.n, n0 = model.n0, n1 = model.n1();
  if (c < 1 || c >= n) throw std::invalid_argument("budget outside [1, n)");
  const double q = model.q;
  const BinSystem bins = BinSystem::create(n, q);
  const double w = bins.width();

  // Alternative CDF at every bin edge; checks the positivity assumption on
  // the way (each bin must carry positive alternative mass).
  std::vector<double> cdf(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    cdf[static_cast<std::size_t>(j)] = alt_cdf(model, bins.edge(j));
    if (!(cdf[static_cast<std::size_t>(j)] - cdf[static_cast<std::size_t>(j - 1)] > 0.0)) {
      throw std::domain_error("alternative bin probability not positive at bin " +
                              std::to_string(j));
    }
  }

  BoundReport rep;
  rep.n = n;
  rep.n0 = n0;
  rep.n1 = n1;
  rep.c = c;
  rep.q = q;
  rep.mu1 = model.mu1;
  rep.variant = variant;
  rep.delta = cdf[static_cast<std::size_t>(n)] - q;
  rep.delta_head = cdf[static_cast<std::size_t>(c)] - c * w;
  rep.delta_rest = rep.delta - rep.delta_head;

  const double head_mass = cdf[static_cast<std::size_t>(c)];        // P1(bins 1..c)
  const double rest_mass = cdf[static_cast<std::size_t>(n)] - head_mass;  // P1(bins c+1..n)
  const double expected_rest_alts = n1 * rest_mass / (1.0 - head_mass);
  rep.pi_c = (n0 + expected_rest_alts) / (n - c);

  if (model.mu1 == 0.0) {
    rep.d_kl = 0.0;  // identical placement laws
  } else {
    long double acc = 0.0L;
    for (int j = c + 1; j <= n; ++j) {
      const double pj = cdf[static_cast<std::size_t>(j)] - cdf[static_cast<std::size_t>(j - 1)];
      acc += std::log(rest_mass / ((n - c) * pj));
    }
    rep.d_kl = static_cast<double>(acc) / (n - c);
  }
  const double v_sq = kHalfLn2 * expected_rest_alts * rep.d_kl;
  rep.v_c = v_sq > 0.0 ? std::sqrt(v_sq) : 0.0;

  // The count of nulls beyond the bins is Binomial(n0, 1-q).
  const double p_beyond = 1.0 - q;
  const double shrink = 1.0 - static_cast<double>(c) / n;
  const double partial = binom_partial_neg_pow(n0, p_beyond, shrink, c - 1);
  rep.m_c_as_printed = (n - c * q) / (n - c) - partial;
  rep.m_c_exact = std::pow((n - c * q) / (n - c), n0) - partial;
  rep.m_c = variant == MTermVariant::kAsPrinted ? rep.m_c_as_printed : rep.m_c_exact;

  const double sf = binom_sf_geq(n0, p_beyond, c);
  if (sf > 0.0) {
    const double tail_mean = binom_mean_given_geq(n0, p_beyond, c);
    rep.z_c = sf * std::pow(shrink, n0 - tail_mean) * tail_mean / (n - c);
  }

  const double head_factor = std::pow(1.0 - c * q / n - rep.delta_head, n1);
  rep.l_c = head_factor * (std::pow(shrink, n0) * (1.0 - rep.pi_c - rep.v_c) * rep.m_c + rep.z_c);
  rep.vacuous = !(rep.l_c > 0.0);
  return rep;
}

}  // namespace bhadv
