#include "bhadv/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bhadv/gauss.hpp"
#include "bhadv/rng.hpp"

namespace bhadv {

namespace {

struct Evaluated {
  int k = 0;
  double fdp = 0.0;
};

Evaluated evaluate(const LabeledPValues& pv, double q) {
  if (pv.size() == 0) return {};
  const BinLoads loads = compute_loads(pv, BinSystem::create(pv.size(), q));
  const int k = bh_bins(loads);
  const double fdp = k > 0 ? static_cast<double>(loads.prefix(LoadKind::kNull, k)) / k : 0.0;
  return {k, fdp};
}

// max{i : prefix_total(i) = i - c}; guaranteed to exist once at least c
// values lie beyond the bins.
std::optional<int> raw_raised_count(const BinLoads& loads, int c) {
  for (int i = loads.n(); i >= 1; --i) {
    if (loads.prefix(LoadKind::kTotal, i) == i - c) return i;
  }
  return std::nullopt;
}

double move_distance(double p_from, double p_to, DistanceSpace space) {
  if (space == DistanceSpace::kPValue) return std::abs(p_from - p_to);
  return std::abs(z_of_p(p_from) - z_of_p(p_to));
}

// Applies the moves, re-runs the procedure and fills the outcome fields.
// Re-running (rather than trusting the candidate analysis) keeps the plan
// invariant "applying moves reproduces induced_k and fdp_after" true by
// construction.
PerturbationPlan finalize(const LabeledPValues& pv, double q, int k_before, double fdp_before,
                          std::vector<Move> moves) {
  PerturbationPlan plan;
  plan.k_before = k_before;
  plan.fdp_before = fdp_before;
  if (moves.empty()) {
    plan.induced_k = k_before;
    plan.fdp_after = fdp_before;
    plan.z_l1_distance = 0.0;
    return plan;
  }
  std::vector<std::pair<int, double>> repl;
  repl.reserve(moves.size());
  double z_sum = 0.0;
  for (const Move& m : moves) {
    repl.emplace_back(m.id, m.new_p);
    z_sum += std::abs(z_of_p(m.old_p) - z_of_p(m.new_p));
  }
  const Evaluated after = evaluate(pv.with_replaced(repl), q);
  plan.moves = std::move(moves);
  plan.induced_k = after.k;
  plan.fdp_after = after.fdp;
  if (std::isfinite(z_sum)) plan.z_l1_distance = z_sum;
  return plan;
}

}  // namespace

int raised_rejection_count(const BinLoads& loads, int c) {
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  if (loads.beyond_null() < c) return bh_bins(loads);
  if (auto i = raw_raised_count(loads, c)) return *i;
  return bh_bins(loads);  // unreachable: beyond_null >= c forces existence
}

PerturbationPlan increase_c(const LabeledPValues& pv, double q, int c, AdversaryMode mode,
                            std::mt19937_64* rng) {
  if (c < 1) throw std::invalid_argument("budget c must be >= 1");
  if (mode == AdversaryMode::kOblivious && rng == nullptr) {
    throw std::invalid_argument("oblivious mode requires an rng");
  }
  const int n = pv.size();
  if (n == 0) return {};
  const BinSystem bins = BinSystem::create(n, q);
  const BinLoads loads = compute_loads(pv, bins);
  const int k_before = bh_bins(loads);
  const double fdp_before =
      k_before > 0 ? static_cast<double>(loads.prefix(LoadKind::kNull, k_before)) / k_before : 0.0;

  const double last_edge = bins.edge(n);
  std::vector<int> sources;  // positions into pv.entries()
  if (mode == AdversaryMode::kOmniscient) {
    if (loads.beyond_null() < c) return finalize(pv, q, k_before, fdp_before, {});
    std::vector<int> pool;
    for (int pos = 0; pos < n; ++pos) {
      const PValueEntry& e = pv.at(pos);
      if (e.label == TestLabel::kNull && e.p > last_edge) pool.push_back(pos);
    }
    // Largest z-scores first, i.e. smallest p; ties toward the larger id.
    std::sort(pool.begin(), pool.end(), [&](int a, int b) {
      const PValueEntry& ea = pv.at(a);
      const PValueEntry& eb = pv.at(b);
      if (ea.p != eb.p) return ea.p < eb.p;
      return ea.id > eb.id;
    });
    sources.assign(pool.begin(), pool.begin() + c);
  } else {
    if (loads.beyond_total() < c) return finalize(pv, q, k_before, fdp_before, {});
    std::vector<int> pool;
    for (int pos = 0; pos < n; ++pos) {
      if (pv.at(pos).p > last_edge) pool.push_back(pos);
    }
    for (int i = 0; i < c; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) + uniform_index(*rng, pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
    }
    sources.assign(pool.begin(), pool.begin() + c);
  }

  const std::optional<int> target = raw_raised_count(loads, c);
  if (!target) return finalize(pv, q, k_before, fdp_before, {});
  const double dest = bins.edge(*target);
  std::vector<Move> moves;
  moves.reserve(static_cast<std::size_t>(c));
  for (int pos : sources) {
    const PValueEntry& e = pv.at(pos);
    moves.push_back(Move{e.id, e.p, dest});
  }
  return finalize(pv, q, k_before, fdp_before, std::move(moves));
}

CandidateSets candidate_sets(const BinLoads& loads) {
  const int n = loads.n();
  const int k = bh_bins(loads);
  CandidateSets cs;
  for (int i = k + 1; i <= n; ++i) {
    if (loads.prefix(LoadKind::kTotal, i) == i - 1) cs.raised.push_back(i);
  }
  for (int i = 1; i <= k - 1; ++i) {
    if (loads.prefix(LoadKind::kTotal, i) == i + 1) cs.pivot = i;
  }
  cs.lowered.push_back(cs.pivot);
  for (int i = cs.pivot + 1; i <= k - 1; ++i) {
    if (loads.prefix(LoadKind::kTotal, i) == i) cs.lowered.push_back(i);
  }
  return cs;
}

namespace {

struct Item {
  double p;
  int id;
  int pos;
};

// Items with lo < p <= hi, on a vector sorted by (p, id).
struct Window {
  const std::vector<Item>& v;
  std::size_t lo_idx, hi_idx;

  Window(const std::vector<Item>& items, double lo, double hi) : v(items) {
    auto cmp = [](const Item& it, double x) { return it.p <= x; };
    lo_idx = static_cast<std::size_t>(
        std::partition_point(v.begin(), v.end(), [&](const Item& it) { return cmp(it, lo); }) -
        v.begin());
    hi_idx = static_cast<std::size_t>(
        std::partition_point(v.begin(), v.end(), [&](const Item& it) { return cmp(it, hi); }) -
        v.begin());
  }
  bool empty() const { return lo_idx >= hi_idx; }
  const Item& lowest() const { return v[lo_idx]; }       // smallest p in window
  const Item& highest() const { return v[hi_idx - 1]; }  // largest p in window
};

struct Choice {
  double fdp = 0.0;
  double dist = 0.0;
  bool is_move = false;
  int induced = 0;
  int src_pos = -1;
  double dest = 0.0;
};

bool better(const Choice& a, const Choice& b) {
  if (a.fdp != b.fdp) return a.fdp > b.fdp;
  if (a.dist != b.dist) return a.dist < b.dist;
  if (a.is_move != b.is_move) return !a.is_move;
  if (a.induced != b.induced) return a.induced < b.induced;
  return a.src_pos < b.src_pos;
}

}  // namespace

PerturbationPlan move_1(const LabeledPValues& pv, double q, DistanceSpace space) {
  const int n = pv.size();
  if (n == 0) return {};
  const BinSystem bins = BinSystem::create(n, q);
  const BinLoads loads = compute_loads(pv, bins);
  const int k = bh_bins(loads);
  const double fdp0 =
      k > 0 ? static_cast<double>(loads.prefix(LoadKind::kNull, k)) / k : 0.0;
  const CandidateSets cs = candidate_sets(loads);

  std::vector<Item> all, nulls, alts;
  all.reserve(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) {
    const PValueEntry& e = pv.at(pos);
    all.push_back(Item{e.p, e.id, pos});
    (e.label == TestLabel::kNull ? nulls : alts).push_back(Item{e.p, e.id, pos});
  }
  auto by_p_id = [](const Item& a, const Item& b) {
    if (a.p != b.p) return a.p < b.p;
    return a.id < b.id;
  };
  std::sort(all.begin(), all.end(), by_p_id);
  std::sort(nulls.begin(), nulls.end(), by_p_id);
  std::sort(alts.begin(), alts.end(), by_p_id);

  Choice best{fdp0, 0.0, false, k, -1, 0.0};

  auto consider = [&](const Choice& c) {
    if (better(c, best)) best = c;
  };

  // Counts above k: decrease one value from the window just above the
  // candidate into the candidate's bin range.  A null source adds a false
  // detection and strictly dominates, so a non-null source is only used when
  // no null lies in the window.
  for (std::size_t idx = 0; idx < cs.raised.size(); ++idx) {
    const int i = cs.raised[idx];
    const double lo = bins.edge(i);
    const double hi = idx + 1 < cs.raised.size() ? bins.edge(cs.raised[idx + 1]) : 1.0;
    const double dest = bins.edge(i);
    const int base = loads.prefix(LoadKind::kNull, i);
    const Window null_win(nulls, lo, hi);
    if (!null_win.empty()) {
      const Item& src = null_win.lowest();
      consider(Choice{static_cast<double>(base + 1) / i, move_distance(src.p, dest, space), true,
                      i, src.pos, dest});
    } else {
      const Window any_win(all, lo, hi);
      // Consecutive reachable counts always have at least one value between
      // them, so the window cannot be empty.
      const Item& src = any_win.lowest();
      consider(Choice{static_cast<double>(base) / i, move_distance(src.p, dest, space), true, i,
                      src.pos, dest});
    }
  }

  // Counts below k: push one value from the window just above the candidate
  // beyond bin k.  The rejected set keeps its null count, so the source label
  // does not matter except at the pivot.
  const double dest_up = k < n ? bins.edge(k + 1) : 1.0;
  for (std::size_t idx = 1; idx < cs.lowered.size(); ++idx) {
    const int i = cs.lowered[idx];
    const double lo = bins.edge(i);
    const double hi = idx + 1 < cs.lowered.size() ? bins.edge(cs.lowered[idx + 1]) : bins.edge(k);
    const Window any_win(all, lo, hi);
    const Item& src = any_win.highest();
    consider(Choice{static_cast<double>(loads.prefix(LoadKind::kNull, i)) / i,
                    move_distance(src.p, dest_up, space), true, i, src.pos, dest_up});
  }

  // The pivot sheds one value out of the rejected prefix itself; keeping a
  // null in and moving an alternative out is preferred when possible.
  if (cs.pivot >= 1) {
    const int i = cs.pivot;
    const double hi = bins.edge(i);
    const Window alt_win(alts, -1.0, hi);
    const int base = loads.prefix(LoadKind::kNull, i);
    if (!alt_win.empty()) {
      const Item& src = alt_win.highest();
      consider(Choice{static_cast<double>(base) / i, move_distance(src.p, dest_up, space), true, i,
                      src.pos, dest_up});
    } else {
      const Window null_win(nulls, -1.0, hi);
      const Item& src = null_win.highest();
      consider(Choice{static_cast<double>(base - 1) / i, move_distance(src.p, dest_up, space),
                      true, i, src.pos, dest_up});
    }
  }
  // Forcing the count to zero has FDP 0 and is dominated by doing nothing.

  if (!best.is_move) return finalize(pv, q, k, fdp0, {});
  const PValueEntry& src = pv.at(best.src_pos);
  return finalize(pv, q, k, fdp0, {Move{src.id, src.p, best.dest}});
}

PerturbationPlan brute_force_1(const LabeledPValues& pv, double q, int cap, DistanceSpace space) {
  const int n = pv.size();
  if (n == 0) return {};
  if (n > cap) {
    throw std::domain_error("instance exceeds the exhaustive-search cap of " +
                            std::to_string(cap));
  }
  const BinSystem bins = BinSystem::create(n, q);
  const Evaluated before = evaluate(pv, q);

  std::vector<double> dests;
  for (int i = 0; i <= n; ++i) dests.push_back(bins.edge(i));
  dests.push_back(1.0);

  Choice best{before.fdp, 0.0, false, before.k, -1, 0.0};
  for (int pos = 0; pos < n; ++pos) {
    const PValueEntry& src = pv.at(pos);
    for (double dest : dests) {
      const Evaluated after = evaluate(pv.with_replaced({{src.id, dest}}), q);
      const Choice c{after.fdp, move_distance(src.p, dest, space), true, after.k, pos, dest};
      if (better(c, best)) best = c;
    }
  }
  if (!best.is_move) return finalize(pv, q, before.k, before.fdp, {});
  const PValueEntry& src = pv.at(best.src_pos);
  return finalize(pv, q, before.k, before.fdp, {Move{src.id, src.p, best.dest}});
}

}  // namespace bhadv
