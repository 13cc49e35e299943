#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace bhadv {

enum class TestLabel : std::uint8_t { kNull = 0, kAlternative = 1 };

struct PValueEntry {
  int id = 0;
  double p = 0.0;
  TestLabel label = TestLabel::kNull;
};

/// An immutable collection of labeled p-values.  Construction validates that
/// every p lies in [0,1] and that ids are unique.  The empty collection is
/// permitted; front ends that require at least one test enforce that
/// themselves.
class LabeledPValues {
 public:
  LabeledPValues() = default;
  explicit LabeledPValues(std::vector<PValueEntry> entries);

  static LabeledPValues from_values(const std::vector<double>& p,
                                    const std::vector<TestLabel>& labels);

  int size() const { return static_cast<int>(entries_.size()); }
  int null_count() const { return null_count_; }
  int alt_count() const { return static_cast<int>(entries_.size()) - null_count_; }
  double pi0() const;

  const std::vector<PValueEntry>& entries() const { return entries_; }
  const PValueEntry& at(int pos) const { return entries_[static_cast<std::size_t>(pos)]; }

  /// Position of the entry with the given id, or -1.
  int find_id(int id) const;

  /// Copy with the p-values of the listed (id, new_p) pairs replaced.
  LabeledPValues with_replaced(const std::vector<std::pair<int, double>>& moves) const;

 private:
  std::vector<PValueEntry> entries_;
  int null_count_ = 0;
};

/// The q-and-N-parameterized partition of [0, q] into N half-open cells,
/// right-closed: cell 1 is [0, q/N], cell i is ((i-1)q/N, iq/N] for i >= 2.
/// The right-closed convention makes cell prefix counts agree exactly with
/// the sorted-threshold rejection rule, ties included.
struct BinSystem {
  int n = 1;
  double q = 0.5;

  static BinSystem create(int n, double q);

  double width() const { return q / n; }
  /// Right edge of bin i; edge(0) == 0.  Every threshold comparison in the
  /// library goes through this expression so boundary behavior is identical
  /// everywhere.
  double edge(int i) const { return q * static_cast<double>(i) / n; }
  /// Left boundary of the tail statistic region [1-q, 1].
  double tail_start() const { return 1.0 - q; }
};

/// Bin index in [1, n] containing p, or nullopt when p lies beyond the last
/// bin edge.  Throws std::domain_error when p is outside [0,1].
std::optional<int> assign_bin(double p, const BinSystem& bins);

enum class LoadKind { kTotal, kNull, kAlt };

/// Per-bin occupancy counts of a collection, split by label, plus two
/// summary regions:
///   tail_*    counts entries with p >= 1-q (may overlap bins when q > 1/2);
///   beyond_*  counts entries strictly beyond the last bin edge, i.e. the
///             part of [0,1] not covered by any bin.  Perturbation attacks
///             draw their sources from the beyond region.
class BinLoads {
 public:
  BinLoads(BinSystem bins, std::vector<int> bin_total, std::vector<int> bin_null,
           int tail_total, int tail_null, int beyond_total, int beyond_null);

  const BinSystem& bins() const { return bins_; }
  int n() const { return bins_.n; }

  int count(LoadKind kind, int bin) const;   // bin in [1, n]
  int prefix(LoadKind kind, int i) const;    // i in [0, n]

  int tail_total() const { return tail_total_; }
  int tail_null() const { return tail_null_; }
  int tail_alt() const { return tail_total_ - tail_null_; }

  int beyond_total() const { return beyond_total_; }
  int beyond_null() const { return beyond_null_; }
  int beyond_alt() const { return beyond_total_ - beyond_null_; }

 private:
  BinSystem bins_;
  std::vector<int> prefix_total_;  // size n+1, prefix_total_[0] == 0
  std::vector<int> prefix_null_;
  int tail_total_ = 0;
  int tail_null_ = 0;
  int beyond_total_ = 0;
  int beyond_null_ = 0;
};

BinLoads compute_loads(const LabeledPValues& pv, const BinSystem& bins);

/// Sum of the chosen load kind over bins 1..i (i = 0 gives 0).
/// Throws std::domain_error when i is outside [0, n].
int prefix_load(const BinLoads& loads, LoadKind kind, int i);

}  // namespace bhadv
