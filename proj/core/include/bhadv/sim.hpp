#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bhadv/attack.hpp"
#include "bhadv/bounds.hpp"
#include "bhadv/gauss.hpp"

namespace bhadv {

enum class AttackKind { kIncreaseC, kMove1, kBoth };

struct SimConfig {
  int n = 1000;
  int n0 = 900;
  double q = 0.1;
  double mu1 = 0.0;
  int c = 1;
  long long reps = 1;
  std::uint64_t master_seed = 0;
  AttackKind attack = AttackKind::kIncreaseC;
  AdversaryMode adversary = AdversaryMode::kOmniscient;
  int threads = 0;  // 0 = hardware concurrency

  GaussianAltModel model() const { return GaussianAltModel::create(n, n0, q, mu1); }
};

struct AttackRecord {
  double fdp_after = 0.0;
  int k_after = 0;
  double z_l1 = 0.0;
  bool feasible = false;  // the attack actually moved something
};

struct ReplicationRecord {
  double fdp_before = 0.0;
  int k_before = 0;
  int tail_null = 0;    // nulls with p >= 1-q
  int beyond_null = 0;  // nulls beyond the last bin edge (attack source pool)
  std::optional<AttackRecord> increase;
  std::optional<AttackRecord> move1;
};

struct AttackAggregates {
  double fdp_after_mean = 0.0, fdp_after_se = 0.0;
  double delta_fdp_mean = 0.0, delta_fdp_se = 0.0;  // paired fdp_after - fdp_before
  double k_gain_mean = 0.0, k_gain_se = 0.0;
  double z_l1_mean = 0.0, z_l1_se = 0.0;
  double feasible_fraction = 0.0;
};

struct SimAggregates {
  double fdp_before_mean = 0.0, fdp_before_se = 0.0;
  double k_before_mean = 0.0;
  std::optional<AttackAggregates> increase;
  std::optional<AttackAggregates> move1;
};

struct SimResult {
  SimConfig config;
  std::vector<ReplicationRecord> records;
  SimAggregates aggregates;
};

/// Paired before/after experiment: each replication draws one instance, runs
/// the procedure, applies the configured attack(s) to the same instance and
/// runs it again.  Replication r uses the stream (master_seed, r), so the
/// result is byte-identical for any thread count.
SimResult run_paired(const SimConfig& config);

struct QsweepRow {
  double q = 0.0;
  double delta1_hat = 0.0;
  double delta1_se = 0.0;
  double l1_as_printed = 0.0;
  double l1_exact = 0.0;
};

/// Per grid point: paired INCREASE-1 estimate of the FDR increase plus both
/// variants of the closed-form lower bound.
std::vector<QsweepRow> run_qsweep(int n, int n0, double mu1, long long reps_per_q,
                                  std::uint64_t master_seed, const std::vector<double>& q_grid,
                                  int threads = 0);

struct Move1Row {
  double mu1 = 0.0;
  double move1_fdp_mean = 0.0, move1_fdp_se = 0.0;
  double increase1_fdp_mean = 0.0, increase1_fdp_se = 0.0;
  double move1_dist_mean = 0.0, move1_dist_se = 0.0;
  double increase1_dist_mean = 0.0, increase1_dist_se = 0.0;
};

/// MOVE-1 versus INCREASE-1 comparison (budget 1), one row per mu1 value.
std::vector<Move1Row> run_move1_table(const SimConfig& base,
                                      const std::vector<double>& mu1_values);

}  // namespace bhadv
