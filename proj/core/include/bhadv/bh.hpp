#pragma once

#include <vector>

#include "bhadv/core.hpp"

namespace bhadv {

struct RejectionOutcome {
  int k = 0;                      // rejection count
  std::vector<int> rejected_ids;  // ids of rejected tests, ascending
  int false_count = 0;            // rejected nulls
  double fdp = 0.0;               // false_count / max(k, 1)
};

/// Step-up procedure at control level q in its classical sorted form: find
/// the largest i with p_(i) <= i*q/N and reject the tests holding the i
/// smallest p-values.  Ties at the threshold are all rejected, so the output
/// is permutation invariant.
RejectionOutcome bh_sorted(const LabeledPValues& pv, double q);

/// The same rejection count read off bin loads: the largest i whose first i
/// bins hold exactly i values, 0 if none.  Agrees with bh_sorted exactly,
/// including boundary ties, because both compare against the same bin edges.
int bh_bins(const BinLoads& loads);

/// False detection proportion of a rejected set against the collection's
/// labels.  Throws std::domain_error when an id is not in the collection.
double fdp_of(const std::vector<int>& rejected_ids, const LabeledPValues& pv);

}  // namespace bhadv
