#include "bhadv/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace bhadv {

LabeledPValues::LabeledPValues(std::vector<PValueEntry> entries) : entries_(std::move(entries)) {
  std::unordered_set<int> ids;
  ids.reserve(entries_.size());
  for (const PValueEntry& e : entries_) {
    if (!(e.p >= 0.0 && e.p <= 1.0)) {
      throw std::invalid_argument("p-value out of [0,1] for id " + std::to_string(e.id));
    }
    if (!ids.insert(e.id).second) {
      throw std::invalid_argument("duplicate test id " + std::to_string(e.id));
    }
    if (e.label == TestLabel::kNull) ++null_count_;
  }
}

LabeledPValues LabeledPValues::from_values(const std::vector<double>& p,
                                           const std::vector<TestLabel>& labels) {
  if (p.size() != labels.size()) {
    throw std::invalid_argument("p-values and labels differ in length");
  }
  std::vector<PValueEntry> entries(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    entries[i] = PValueEntry{static_cast<int>(i) + 1, p[i], labels[i]};
  }
  return LabeledPValues(std::move(entries));
}

double LabeledPValues::pi0() const {
  if (entries_.empty()) return 0.0;
  return static_cast<double>(null_count_) / static_cast<double>(entries_.size());
}

int LabeledPValues::find_id(int id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

LabeledPValues LabeledPValues::with_replaced(
    const std::vector<std::pair<int, double>>& moves) const {
  std::vector<PValueEntry> entries = entries_;
  for (const auto& [id, new_p] : moves) {
    bool found = false;
    for (PValueEntry& e : entries) {
      if (e.id == id) {
        e.p = new_p;
        found = true;
        break;
      }
    }
    if (!found) throw std::domain_error("unknown test id " + std::to_string(id));
  }
  return LabeledPValues(std::move(entries));
}

BinSystem BinSystem::create(int n, double q) {
  if (n < 1) throw std::invalid_argument("bin count must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("control level q must lie in (0,1)");
  return BinSystem{n, q};
}

std::optional<int> assign_bin(double p, const BinSystem& bins) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p-value outside [0,1]");
  if (p > bins.edge(bins.n)) return std::nullopt;
  // Smallest i >= 1 with p <= edge(i).  edge() is nondecreasing, so a plain
  // binary search is exact even on boundary values.
  int lo = 1, hi = bins.n;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (p <= bins.edge(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

BinLoads::BinLoads(BinSystem bins, std::vector<int> bin_total, std::vector<int> bin_null,
                   int tail_total, int tail_null, int beyond_total, int beyond_null)
    : bins_(bins),
      tail_total_(tail_total),
      tail_null_(tail_null),
      beyond_total_(beyond_total),
      beyond_null_(beyond_null) {
  const std::size_t n = static_cast<std::size_t>(bins_.n);
  if (bin_total.size() != n || bin_null.size() != n) {
    throw std::invalid_argument("load vectors must have one entry per bin");
  }
  prefix_total_.assign(n + 1, 0);
  prefix_null_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (bin_null[i] > bin_total[i] || bin_null[i] < 0) {
      throw std::invalid_argument("bin null load exceeds total load");
    }
    prefix_total_[i + 1] = prefix_total_[i] + bin_total[i];
    prefix_null_[i + 1] = prefix_null_[i] + bin_null[i];
  }
}

int BinLoads::count(LoadKind kind, int bin) const {
  if (bin < 1 || bin > bins_.n) throw std::domain_error("bin index outside [1, n]");
  return prefix(kind, bin) - prefix(kind, bin - 1);
}

int BinLoads::prefix(LoadKind kind, int i) const {
  if (i < 0 || i > bins_.n) throw std::domain_error("prefix index outside [0, n]");
  const std::size_t k = static_cast<std::size_t>(i);
  switch (kind) {
    case LoadKind::kTotal:
      return prefix_total_[k];
    case LoadKind::kNull:
      return prefix_null_[k];
    case LoadKind::kAlt:
      return prefix_total_[k] - prefix_null_[k];
  }
  return 0;
}

BinLoads compute_loads(const LabeledPValues& pv, const BinSystem& bins) {
  std::vector<int> total(static_cast<std::size_t>(bins.n), 0);
  std::vector<int> nulls(static_cast<std::size_t>(bins.n), 0);
  int tail_total = 0, tail_null = 0, beyond_total = 0, beyond_null = 0;
  const double tail_start = bins.tail_start();
  const double last_edge = bins.edge(bins.n);
  for (const PValueEntry& e : pv.entries()) {
    const bool is_null = e.label == TestLabel::kNull;
    if (auto bin = assign_bin(e.p, bins)) {
      ++total[static_cast<std::size_t>(*bin - 1)];
      if (is_null) ++nulls[static_cast<std::size_t>(*bin - 1)];
    }
    if (e.p >= tail_start) {
      ++tail_total;
      if (is_null) ++tail_null;
    }
    if (e.p > last_edge) {
      ++beyond_total;
      if (is_null) ++beyond_null;
    }
  }
  return BinLoads(bins, std::move(total), std::move(nulls), tail_total, tail_null, beyond_total,
                  beyond_null);
}

int prefix_load(const BinLoads& loads, LoadKind kind, int i) { return loads.prefix(kind, i); }

}  // namespace bhadv
