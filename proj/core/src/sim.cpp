#include "bhadv/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "bhadv/bh.hpp"
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

AttackRecord record_of(const PerturbationPlan& plan) {
  AttackRecord rec;
  rec.fdp_after = plan.fdp_after;
  rec.k_after = plan.induced_k;
  rec.z_l1 = plan.z_l1_distance.value_or(0.0);
  rec.feasible = !plan.moves.empty();
  return rec;
}

AttackAggregates aggregate_attack(const std::vector<ReplicationRecord>& records,
                                  bool use_increase) {
  std::vector<double> fdp_after, delta, gain, dist;
  long long feasible = 0;
  for (const ReplicationRecord& r : records) {
    const std::optional<AttackRecord>& a = use_increase ? r.increase : r.move1;
    if (!a) continue;
    fdp_after.push_back(a->fdp_after);
    delta.push_back(a->fdp_after - r.fdp_before);
    gain.push_back(static_cast<double>(a->k_after - r.k_before));
    dist.push_back(a->z_l1);
    if (a->feasible) ++feasible;
  }
  AttackAggregates agg;
  const MeanSe f = mean_se(fdp_after);
  agg.fdp_after_mean = f.mean;
  agg.fdp_after_se = f.se;
  const MeanSe d = mean_se(delta);
  agg.delta_fdp_mean = d.mean;
  agg.delta_fdp_se = d.se;
  const MeanSe g = mean_se(gain);
  agg.k_gain_mean = g.mean;
  agg.k_gain_se = g.se;
  const MeanSe z = mean_se(dist);
  agg.z_l1_mean = z.mean;
  agg.z_l1_se = z.se;
  agg.feasible_fraction =
      fdp_after.empty() ? 0.0 : static_cast<double>(feasible) / static_cast<double>(fdp_after.size());
  return agg;
}

}  // namespace

SimResult run_paired(const SimConfig& config) {
  if (config.reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (config.c < 1) throw std::invalid_argument("budget c must be >= 1");
  const GaussianAltModel model = config.model();

  SimResult result;
  result.config = config;
  result.records.resize(static_cast<std::size_t>(config.reps));

  const bool run_increase =
      config.attack == AttackKind::kIncreaseC || config.attack == AttackKind::kBoth;
  const bool run_move1 = config.attack == AttackKind::kMove1 || config.attack == AttackKind::kBoth;

  parallel_chunks(config.reps, config.threads, [&](long long begin, long long end) {
    for (long long r = begin; r < end; ++r) {
      std::mt19937_64 rng = make_stream(config.master_seed, static_cast<std::uint64_t>(r));
      const InstanceDraw draw = generate_instance(model, rng);
      const BinLoads loads = compute_loads(draw.pv, BinSystem::create(config.n, config.q));
      ReplicationRecord rec;
      rec.k_before = bh_bins(loads);
      rec.fdp_before = rec.k_before > 0
                           ? static_cast<double>(loads.prefix(LoadKind::kNull, rec.k_before)) /
                                 rec.k_before
                           : 0.0;
      rec.tail_null = loads.tail_null();
      rec.beyond_null = loads.beyond_null();
      if (run_increase) {
        rec.increase =
            record_of(increase_c(draw.pv, config.q, config.c, config.adversary, &rng));
      }
      if (run_move1) {
        rec.move1 = record_of(move_1(draw.pv, config.q, DistanceSpace::kZScore));
      }
      result.records[static_cast<std::size_t>(r)] = std::move(rec);
    }
  });

  std::vector<double> fdp_before, k_before;
  fdp_before.reserve(result.records.size());
  for (const ReplicationRecord& r : result.records) {
    fdp_before.push_back(r.fdp_before);
    k_before.push_back(static_cast<double>(r.k_before));
  }
  const MeanSe fb = mean_se(fdp_before);
  result.aggregates.fdp_before_mean = fb.mean;
  result.aggregates.fdp_before_se = fb.se;
  result.aggregates.k_before_mean = mean_se(k_before).mean;
  if (run_increase) result.aggregates.increase = aggregate_attack(result.records, true);
  if (run_move1) result.aggregates.move1 = aggregate_attack(result.records, false);
  return result;
}

std::vector<QsweepRow> run_qsweep(int n, int n0, double mu1, long long reps_per_q,
                                  std::uint64_t master_seed, const std::vector<double>& q_grid,
                                  int threads) {
  std::vector<QsweepRow> rows;
  rows.reserve(q_grid.size());
  std::uint64_t stream_base = 0;
  for (double q : q_grid) {
    SimConfig cfg;
    cfg.n = n;
    cfg.n0 = n0;
    cfg.q = q;
    cfg.mu1 = mu1;
    cfg.c = 1;
    cfg.reps = reps_per_q;
    // Distinct stream ranges per grid point keep the draws independent while
    // staying a pure function of (master_seed, grid position).
    cfg.master_seed = master_seed + 0x100000ULL * stream_base;
    cfg.attack = AttackKind::kIncreaseC;
    cfg.threads = threads;
    const SimResult sim = run_paired(cfg);

    QsweepRow row;
    row.q = q;
    row.delta1_hat = sim.aggregates.increase->delta_fdp_mean;
    row.delta1_se = sim.aggregates.increase->delta_fdp_se;
    const GaussianAltModel model = GaussianAltModel::create(n, n0, q, mu1);
    row.l1_as_printed = fdr_increase_lower_bound(model, 1, MTermVariant::kAsPrinted).l_c;
    row.l1_exact = fdr_increase_lower_bound(model, 1, MTermVariant::kExact).l_c;
    rows.push_back(row);
    ++stream_base;
  }
  return rows;
}

std::vector<Move1Row> run_move1_table(const SimConfig& base,
                                      const std::vector<double>& mu1_values) {
  std::vector<Move1Row> rows;
  rows.reserve(mu1_values.size());
  for (double mu1 : mu1_values) {
    SimConfig cfg = base;
    cfg.mu1 = mu1;
    cfg.c = 1;
    cfg.attack = AttackKind::kBoth;
    const SimResult sim = run_paired(cfg);
    Move1Row row;
    row.mu1 = mu1;
    row.move1_fdp_mean = sim.aggregates.move1->fdp_after_mean;
    row.move1_fdp_se = sim.aggregates.move1->fdp_after_se;
    row.increase1_fdp_mean = sim.aggregates.increase->fdp_after_mean;
    row.increase1_fdp_se = sim.aggregates.increase->fdp_after_se;
    row.move1_dist_mean = sim.aggregates.move1->z_l1_mean;
    row.move1_dist_se = sim.aggregates.move1->z_l1_se;
    row.increase1_dist_mean = sim.aggregates.increase->z_l1_mean;
    row.increase1_dist_se = sim.aggregates.increase->z_l1_se;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bhadv
