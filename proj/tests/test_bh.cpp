#include <cmath>
#include <stdexcept>
#include <vector>

#include "bhadv/bh.hpp"
#include "bhadv/gauss.hpp"
#include "bhadv/rng.hpp"
#include "doctest.h"

using namespace bhadv;

namespace {

LabeledPValues all_null(const std::vector<double>& p) {
  return LabeledPValues::from_values(p, std::vector<TestLabel>(p.size(), TestLabel::kNull));
}

LabeledPValues random_collection(std::mt19937_64& rng, int n, const BinSystem& bins,
                                 bool edge_heavy) {
  std::vector<PValueEntry> entries;
  for (int i = 0; i < n; ++i) {
    double p;
    const double coin = uniform01(rng);
    if (edge_heavy && coin < 0.5) {
      // Land exactly on a bin edge to stress the tie conventions.
      p = bins.edge(static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n) + 1)));
    } else {
      p = uniform01(rng);
    }
    entries.push_back(PValueEntry{i + 1, p,
                                  uniform01(rng) < 0.5 ? TestLabel::kNull
                                                       : TestLabel::kAlternative});
  }
  return LabeledPValues(std::move(entries));
}

}  // namespace

TEST_CASE("sorted-form rejection on worked examples") {
  SUBCASE("three smallest rejected") {
    const LabeledPValues pv = all_null({0.05, 0.2, 0.3, 0.8, 0.9});
    const RejectionOutcome out = bh_sorted(pv, 0.5);
    CHECK(out.k == 3);
    CHECK(out.rejected_ids == std::vector<int>{1, 2, 3});
    CHECK(out.fdp == doctest::Approx(1.0));
  }
  SUBCASE("all p = 1 rejects nothing") {
    const RejectionOutcome out = bh_sorted(all_null({1.0, 1.0, 1.0}), 0.5);
    CHECK(out.k == 0);
    CHECK(out.fdp == 0.0);
  }
  SUBCASE("all p = 0 rejects everything") {
    const RejectionOutcome out = bh_sorted(all_null({0.0, 0.0, 0.0, 0.0}), 0.2);
    CHECK(out.k == 4);
  }
}

TEST_CASE("bins-form rejection count on worked loads") {
  SUBCASE("prefixes 1,2,2,3,3 give 2") {
    const LabeledPValues pv = all_null({0.05, 0.15, 0.35, 0.77, 0.9});
    // q=0.5, n=5: loads 1,1,0,1,0
    CHECK(bh_bins(compute_loads(pv, BinSystem::create(5, 0.5))) == 2);
  }
  SUBCASE("empty bins give 0") {
    CHECK(bh_bins(compute_loads(all_null({0.9, 0.95}), BinSystem::create(2, 0.5))) == 0);
  }
  SUBCASE("an overloaded first bin forces a later equality") {
    // loads 2,0,1: prefixes 2,2,3 -> count 3
    const LabeledPValues pv = all_null({0.05, 0.08, 0.45});
    CHECK(bh_bins(compute_loads(pv, BinSystem::create(3, 0.6))) == 3);
  }
}

TEST_CASE("fdp_of") {
  const LabeledPValues pv = LabeledPValues({{1, 0.1, TestLabel::kNull},
                                            {2, 0.2, TestLabel::kNull},
                                            {3, 0.3, TestLabel::kAlternative},
                                            {4, 0.4, TestLabel::kAlternative}});
  CHECK(fdp_of({1, 2, 3, 4}, pv) == doctest::Approx(0.5));
  CHECK(fdp_of({}, pv) == 0.0);
  CHECK(fdp_of({1, 2}, pv) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fdp_of({99}, pv), std::domain_error);
}

TEST_CASE("sorted and bins forms agree exactly, ties included") {
  std::mt19937_64 rng = make_stream(1234, 0);
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 30));
    const double q = 0.05 + 0.9 * uniform01(rng);
    const BinSystem bins = BinSystem::create(n, q);
    const LabeledPValues pv = random_collection(rng, n, bins, rep % 2 == 0);
    const BinLoads loads = compute_loads(pv, bins);
    const int k_bins = bh_bins(loads);
    const RejectionOutcome sorted = bh_sorted(pv, q);
    CHECK(sorted.k == k_bins);
    // The rejected-set null count must match the prefix null count.
    if (k_bins > 0) {
      CHECK(sorted.false_count == loads.prefix(LoadKind::kNull, k_bins));
    }
    // Beyond the rejection count every prefix must fall short by at least one.
    for (int i = k_bins + 1; i <= n; ++i) {
      CHECK(loads.prefix(LoadKind::kTotal, i) <= i - 1);
    }
  }
}

TEST_CASE("decreasing one p-value never decreases the rejection count") {
  std::mt19937_64 rng = make_stream(99, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 12));
    const double q = 0.1 + 0.8 * uniform01(rng);
    const BinSystem bins = BinSystem::create(n, q);
    const LabeledPValues pv = random_collection(rng, n, bins, true);
    const int k = bh_bins(compute_loads(pv, bins));
    const int pos = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const PValueEntry& e = pv.at(pos);
    const double lowered = e.p * uniform01(rng);
    const LabeledPValues moved = pv.with_replaced({{e.id, lowered}});
    CHECK(bh_bins(compute_loads(moved, bins)) >= k);
  }
}

TEST_CASE("false detection rate equals pi0 * q under uniform nulls") {
  // n=1000, n0=900, q=0.1: the mean FDP over replications must sit within
  // three standard errors of 0.09, whatever the alternative law.
  const GaussianAltModel model = GaussianAltModel::create(1000, 900, 0.1, 1.0);
  const int reps = 10000;
  long double sum = 0.0L, sumsq = 0.0L;
  for (int r = 0; r < reps; ++r) {
    std::mt19937_64 rng = make_stream(2024, static_cast<std::uint64_t>(r));
    const InstanceDraw draw = generate_instance(model, rng);
    const BinLoads loads = compute_loads(draw.pv, BinSystem::create(model.n, model.q));
    const int k = bh_bins(loads);
    const double fdp = k > 0 ? static_cast<double>(loads.prefix(LoadKind::kNull, k)) / k : 0.0;
    sum += fdp;
    sumsq += fdp * fdp;
  }
  const double mean = static_cast<double>(sum / reps);
  const double var = static_cast<double>(sumsq / reps) - mean * mean;
  const double se = std::sqrt(var / reps);
  CHECK(std::fabs(mean - 0.09) <= 3.0 * se);
}
