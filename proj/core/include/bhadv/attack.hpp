#pragma once

#include <optional>
#include <random>
#include <vector>

#include "bhadv/bh.hpp"
#include "bhadv/core.hpp"

namespace bhadv {

enum class AdversaryMode { kOmniscient, kOblivious };

/// Metric used when several perturbations attain the same FDP: z-score space
/// (the instance models derive p-values from z-scores) or plain p space.
enum class DistanceSpace { kZScore, kPValue };

struct Move {
  int id = 0;
  double old_p = 0.0;
  double new_p = 0.0;
};

struct PerturbationPlan {
  std::vector<Move> moves;
  int induced_k = 0;       // rejection count after applying the moves
  double fdp_after = 0.0;  // FDP after applying the moves
  int k_before = 0;
  double fdp_before = 0.0;
  /// Sum of |z - z'| over moves; absent when an endpoint sits at p in {0,1}.
  std::optional<double> z_l1_distance;

  int l0_distance() const { return static_cast<int>(moves.size()); }
};

/// The rejection count the increase attack with budget c forces: the largest
/// i whose first i bins hold exactly i - c values.  Falls back to the
/// unperturbed rejection count when fewer than c null values lie beyond the
/// bins (the attack has nothing to move).
int raised_rejection_count(const BinLoads& loads, int c);

/// INCREASE-c.  Omniscient mode moves the c null values beyond the bins with
/// the largest z-scores (smallest p) into the raised target bin; if fewer
/// than c such nulls exist the collection is left unperturbed.  Oblivious
/// mode requires c values of any label beyond the bins and picks the sources
/// uniformly at random (rng required); fdp_after is still evaluated against
/// the true labels.
PerturbationPlan increase_c(const LabeledPValues& pv, double q, int c,
                            AdversaryMode mode = AdversaryMode::kOmniscient,
                            std::mt19937_64* rng = nullptr);

/// Rejection counts reachable by perturbing a single value.
///   raised:  counts above k, reachable by decreasing one value; for each
///            element i the prefix of the first i bins is i - 1.
///   lowered: counts below k, reachable by increasing one value.  Ascending;
///            its first element is the pivot.
///   pivot:   0, or the largest i < k whose prefix exceeds i by exactly one.
struct CandidateSets {
  std::vector<int> raised;
  std::vector<int> lowered;
  int pivot = 0;
};

CandidateSets candidate_sets(const BinLoads& loads);

/// Optimal single-value perturbation: evaluates every reachable rejection
/// count with its best admissible source and returns a plan attaining the
/// maximum FDP.  Among FDP-optimal plans the one of minimal perturbation
/// distance (in the chosen space) is returned; keeping the collection
/// untouched counts as distance zero.
PerturbationPlan move_1(const LabeledPValues& pv, double q,
                        DistanceSpace space = DistanceSpace::kZScore);

/// Exhaustive single-move solver: tries every (value, destination) pair over
/// the bin-edge destinations plus 1.0 and re-runs the procedure.  FDP depends
/// on the perturbed value only through bin membership, so this enumeration is
/// exact.  Refuses instances larger than `cap`.
PerturbationPlan brute_force_1(const LabeledPValues& pv, double q, int cap = 14,
                               DistanceSpace space = DistanceSpace::kZScore);

}  // namespace bhadv
