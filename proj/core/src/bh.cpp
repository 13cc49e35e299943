#include "bhadv/bh.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace bhadv {

RejectionOutcome bh_sorted(const LabeledPValues& pv, double q) {
  const int n = pv.size();
  RejectionOutcome out;
  if (n == 0) return out;
  const BinSystem bins = BinSystem::create(n, q);

  std::vector<double> sorted;
  sorted.reserve(static_cast<std::size_t>(n));
  for (const PValueEntry& e : pv.entries()) sorted.push_back(e.p);
  std::sort(sorted.begin(), sorted.end());

  int i_max = 0;
  for (int i = 1; i <= n; ++i) {
    if (sorted[static_cast<std::size_t>(i - 1)] <= bins.edge(i)) i_max = i;
  }
  out.k = i_max;
  if (i_max == 0) return out;

  // Rejection is by threshold value, not sort position; equal p-values at the
  // cutoff are all included (their count is exactly i_max, see tests).
  const double cutoff = sorted[static_cast<std::size_t>(i_max - 1)];
  for (const PValueEntry& e : pv.entries()) {
    if (e.p <= cutoff) {
      out.rejected_ids.push_back(e.id);
      if (e.label == TestLabel::kNull) ++out.false_count;
    }
  }
  std::sort(out.rejected_ids.begin(), out.rejected_ids.end());
  out.fdp = static_cast<double>(out.false_count) / static_cast<double>(std::max(out.k, 1));
  return out;
}

int bh_bins(const BinLoads& loads) {
  for (int i = loads.n(); i >= 1; --i) {
    if (loads.prefix(LoadKind::kTotal, i) == i) return i;
  }
  return 0;
}

double fdp_of(const std::vector<int>& rejected_ids, const LabeledPValues& pv) {
  std::unordered_map<int, TestLabel> labels;
  labels.reserve(pv.entries().size());
  for (const PValueEntry& e : pv.entries()) labels.emplace(e.id, e.label);
  int false_count = 0;
  for (int id : rejected_ids) {
    auto it = labels.find(id);
    if (it == labels.end()) throw std::domain_error("unknown test id " + std::to_string(id));
    if (it->second == TestLabel::kNull) ++false_count;
  }
  const std::size_t k = rejected_ids.size();
  return static_cast<double>(false_count) / static_cast<double>(std::max<std::size_t>(k, 1));
}

}  // namespace bhadv
