#include "bhadv/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bhadv/attack.hpp"
#include "bhadv/bh.hpp"
#include "bhadv/gauss.hpp"
#include "bhadv/parallel.hpp"
#include "bhadv/rng.hpp"

namespace bhadv {

namespace {

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

void check_config(const ConformalConfig& c) {
  if (c.dim < 1 || c.n_train < 1 || c.n_cal < 1 || c.n_test < 1) {
    throw std::invalid_argument("conformal set sizes and dimension must be >= 1");
  }
  if (!(c.signal_strength >= 1.0)) throw std::invalid_argument("signal strength a must be >= 1");
  if (!(c.outlier_fraction >= 0.0 && c.outlier_fraction <= 1.0)) {
    throw std::invalid_argument("outlier fraction must lie in [0,1]");
  }
  if (c.knn_k < 1) throw std::invalid_argument("knn k must be >= 1");
  if (!(c.q > 0.0 && c.q < 1.0)) throw std::invalid_argument("q must lie in (0,1)");
}

// Component means of the inlier mixture.
void component_mean(int component, int dim, double* out) {
  std::fill(out, out + dim, 0.0);
  if (component == 0) {
    out[0] = 3.0;
  } else if (component == 1) {
    out[0] = -3.0;
  } else if (dim > 1) {
    out[1] = 3.0;
  } else {
    out[0] = 3.0;
  }
}

void draw_point(std::mt19937_64& rng, int dim, double scale, double* out) {
  const int component = static_cast<int>(uniform_index(rng, 3));
  component_mean(component, dim, out);
  for (int d = 0; d < dim; ++d) {
    out[d] += scale * std_normal_quantile(uniform01(rng));
  }
}

PointSet draw_set(std::mt19937_64& rng, int count, int dim, double scale) {
  PointSet set;
  set.dim = dim;
  set.xs.resize(static_cast<std::size_t>(count) * dim);
  for (int i = 0; i < count; ++i) {
    draw_point(rng, dim, scale, set.xs.data() + static_cast<std::size_t>(i) * dim);
  }
  return set;
}

}  // namespace

MixtureDraw generate_mixture(const ConformalConfig& config, std::mt19937_64& rng) {
  check_config(config);
  MixtureDraw draw;
  draw.train = draw_set(rng, config.n_train, config.dim, 1.0);
  draw.cal = draw_set(rng, config.n_cal, config.dim, 1.0);
  draw.test.dim = config.dim;
  draw.test.xs.resize(static_cast<std::size_t>(config.n_test) * config.dim);
  draw.test_labels.resize(static_cast<std::size_t>(config.n_test));
  const double outlier_scale = std::sqrt(config.signal_strength);
  for (int i = 0; i < config.n_test; ++i) {
    const bool outlier = uniform01(rng) < config.outlier_fraction;
    draw.test_labels[static_cast<std::size_t>(i)] =
        outlier ? TestLabel::kAlternative : TestLabel::kNull;
    draw_point(rng, config.dim, outlier ? outlier_scale : 1.0,
               draw.test.xs.data() + static_cast<std::size_t>(i) * config.dim);
  }
  return draw;
}

double one_class_score(const double* point, const PointSet& reference, int k) {
  const int n = reference.size();
  if (n < 1) throw std::invalid_argument("reference set must be nonempty");
  const int kk = k < n ? k : n;
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double* r = reference.row(i);
    double acc = 0.0;
    for (int d = 0; d < reference.dim; ++d) {
      const double diff = point[d] - r[d];
      acc += diff * diff;
    }
    d2[static_cast<std::size_t>(i)] = acc;
  }
  std::nth_element(d2.begin(), d2.begin() + (kk - 1), d2.end());
  double acc = 0.0;
  for (int i = 0; i < kk; ++i) acc += std::sqrt(d2[static_cast<std::size_t>(i)]);
  return acc / kk;
}

std::vector<double> score_set(const PointSet& points, const PointSet& reference, int k,
                              int threads) {
  std::vector<double> scores(static_cast<std::size_t>(points.size()));
  parallel_chunks(points.size(), threads, [&](long long begin, long long end) {
    for (long long i = begin; i < end; ++i) {
      scores[static_cast<std::size_t>(i)] =
          one_class_score(points.row(static_cast<int>(i)), reference, k);
    }
  });
  return scores;
}

std::vector<double> conformal_pvalues(const std::vector<double>& cal_scores,
                                      const std::vector<double>& test_scores, bool plus_one) {
  if (cal_scores.empty()) throw std::invalid_argument("calibration set must be nonempty");
  std::vector<double> sorted = cal_scores;
  std::sort(sorted.begin(), sorted.end());
  const double n_cal = static_cast<double>(sorted.size());
  const double denom = plus_one ? n_cal + 1.0 : n_cal;
  std::vector<double> out;
  out.reserve(test_scores.size());
  for (double s : test_scores) {
    const auto geq = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), s);
    double p = (1.0 + static_cast<double>(geq)) / denom;
    if (p > 1.0) p = 1.0;  // the printed denominator can exceed 1 by 1/n_cal
    out.push_back(p);
  }
  return out;
}

namespace {

LabeledPValues to_collection(const std::vector<double>& pvals,
                             const std::vector<TestLabel>& labels) {
  std::vector<PValueEntry> entries(pvals.size());
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    entries[i] = PValueEntry{static_cast<int>(i) + 1, pvals[i], labels[i]};
  }
  return LabeledPValues(std::move(entries));
}

}  // namespace

std::vector<ConformalRow> run_conformal_table(const ConformalConfig& base,
                                              const std::vector<double>& a_values,
                                              const std::vector<int>& c_values) {
  check_config(base);
  if (base.reps < 1) throw std::invalid_argument("reps must be >= 1");
  for (int c : c_values) {
    if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  }
  std::vector<ConformalRow> rows;
  for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
    ConformalConfig cfg = base;
    cfg.signal_strength = a_values[ai];
    check_config(cfg);

    // The training set (the scorer's reference) is drawn once per signal
    // strength; calibration and test sets are redrawn every replication so
    // the conformal guarantee holds marginally over the whole experiment.
    // Stream 0 is the shared draw, stream r+1 belongs to replication r.
    const std::uint64_t seed = base.master_seed + 0x1000000ULL * static_cast<std::uint64_t>(ai);
    std::mt19937_64 shared_rng = make_stream(seed, 0);
    const PointSet train = draw_set(shared_rng, cfg.n_train, cfg.dim, 1.0);

    std::vector<std::vector<double>> before(c_values.size());
    std::vector<std::vector<double>> after(c_values.size());
    for (auto& v : before) v.resize(static_cast<std::size_t>(cfg.reps));
    for (auto& v : after) v.resize(static_cast<std::size_t>(cfg.reps));

    parallel_chunks(cfg.reps, cfg.threads, [&](long long begin, long long end) {
      for (long long r = begin; r < end; ++r) {
        std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(r) + 1);
        const PointSet cal = draw_set(rng, cfg.n_cal, cfg.dim, 1.0);
        PointSet test;
        test.dim = cfg.dim;
        test.xs.resize(static_cast<std::size_t>(cfg.n_test) * cfg.dim);
        std::vector<TestLabel> labels(static_cast<std::size_t>(cfg.n_test));
        const double outlier_scale = std::sqrt(cfg.signal_strength);
        for (int i = 0; i < cfg.n_test; ++i) {
          const bool outlier = uniform01(rng) < cfg.outlier_fraction;
          labels[static_cast<std::size_t>(i)] =
              outlier ? TestLabel::kAlternative : TestLabel::kNull;
          draw_point(rng, cfg.dim, outlier ? outlier_scale : 1.0,
                     test.xs.data() + static_cast<std::size_t>(i) * cfg.dim);
        }
        std::vector<double> cal_scores(static_cast<std::size_t>(cfg.n_cal));
        for (int i = 0; i < cfg.n_cal; ++i) {
          cal_scores[static_cast<std::size_t>(i)] = one_class_score(cal.row(i), train, cfg.knn_k);
        }
        std::vector<double> test_scores(static_cast<std::size_t>(cfg.n_test));
        for (int i = 0; i < cfg.n_test; ++i) {
          test_scores[static_cast<std::size_t>(i)] =
              one_class_score(test.row(i), train, cfg.knn_k);
        }
        const LabeledPValues pv = to_collection(
            conformal_pvalues(cal_scores, test_scores, cfg.plus_one_denominator), labels);
        for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
          const PerturbationPlan plan =
              increase_c(pv, cfg.q, c_values[ci], AdversaryMode::kOmniscient);
          before[ci][static_cast<std::size_t>(r)] = plan.fdp_before;
          after[ci][static_cast<std::size_t>(r)] = plan.fdp_after;
        }
      }
    });

    for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
      ConformalRow row;
      row.signal_strength = cfg.signal_strength;
      row.c = c_values[ci];
      row.reps = cfg.reps;
      const MeanSe b = mean_se(before[ci]);
      row.fdp_before_mean = b.mean;
      row.fdp_before_se = b.se;
      const MeanSe a = mean_se(after[ci]);
      row.fdp_after_mean = a.mean;
      row.fdp_after_se = a.se;
      rows.push_back(row);
    }
  }
  return rows;
}

ConformalRow run_conformal_ingest(const std::vector<double>& cal_scores,
                                  const std::vector<double>& test_scores,
                                  const std::vector<TestLabel>& test_labels, int c, double q,
                                  bool plus_one) {
  if (test_scores.size() != test_labels.size()) {
    throw std::invalid_argument("test scores and labels differ in length");
  }
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  const LabeledPValues pv =
      to_collection(conformal_pvalues(cal_scores, test_scores, plus_one), test_labels);
  const PerturbationPlan plan = increase_c(pv, q, c, AdversaryMode::kOmniscient);
  ConformalRow row;
  row.signal_strength = std::nan("");
  row.c = c;
  row.reps = 1;
  row.fdp_before_mean = plan.fdp_before;
  row.fdp_after_mean = plan.fdp_after;
  return row;
}

}  // namespace bhadv
