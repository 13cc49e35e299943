// bhadv — experiment front end: paired attack simulations, theoretical-bound
// evaluation, q-grid sweeps, conformal experiments, and single-instance
// attacks on ingested p-value files.
//
// Exit codes: 0 success, 2 usage or domain error, 3 I/O failure.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bhadv/attack.hpp"
#include "bhadv/bh.hpp"
#include "bhadv/bounds.hpp"
#include "bhadv/conformal.hpp"
#include "bhadv/io.hpp"
#include "bhadv/rng.hpp"
#include "bhadv/sim.hpp"
#include "bhadv/version.hpp"

namespace {

using namespace bhadv;

int env_threads_default() {
  if (const char* env = std::getenv("BHADV_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
      // fall through to auto
    }
  }
  return 0;  // resolve to hardware concurrency
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

class ManifestClock {
 public:
  ManifestClock() : start_(std::chrono::steady_clock::now()) {}
  long long elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// duration_ms is wall-clock and therefore the single field of any run that is
// not byte-reproducible; the data files are.
void write_manifest(const std::string& path, const std::string& subcommand,
                    unsigned long long seed, const std::string& config_json_fragment,
                    const std::vector<std::string>& outputs, const ManifestClock& clock) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"subcommand\": \"" << subcommand << "\",\n";
  out << "  \"tool_version\": \"" << kVersion << "\",\n";
  out << "  \"master_seed\": " << seed << ",\n";
  out << "  \"config\": " << config_json_fragment << ",\n";
  out << "  \"outputs\": [";
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out << (i ? ", " : "") << '"' << std::filesystem::path(outputs[i]).filename().string() << '"';
  }
  out << "],\n";
  out << "  \"duration_ms\": " << clock.elapsed_ms() << "\n";
  out << "}\n";
  write_text_file(path, out.str());
  std::cout << "wrote " << path << "\n";
}

void announce(const std::string& path) { std::cout << "wrote " << path << "\n"; }

std::string attack_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::kIncreaseC: return "increase";
    case AttackKind::kMove1: return "move1";
    case AttackKind::kBoth: return "both";
  }
  return "?";
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  SimConfig cfg;
  std::string out_dir = ".";
};

void attack_agg_json(JsonWriter& w, const AttackAggregates& a) {
  w.field("fdp_after_mean", a.fdp_after_mean);
  w.field("fdp_after_se", a.fdp_after_se);
  w.field("delta_fdp_mean", a.delta_fdp_mean);
  w.field("delta_fdp_se", a.delta_fdp_se);
  w.field("k_gain_mean", a.k_gain_mean);
  w.field("k_gain_se", a.k_gain_se);
  w.field("z_l1_mean", a.z_l1_mean);
  w.field("z_l1_se", a.z_l1_se);
  w.field("feasible_fraction", a.feasible_fraction);
}

int run_simulate(const SimulateOpts& opts) {
  ManifestClock clock;
  const SimResult result = run_paired(opts.cfg);

  std::ostringstream csv;
  csv << "rep,fdp_before,k_before,tail_null,beyond_null,"
         "inc_fdp_after,inc_k_after,inc_z_l1,inc_feasible,"
         "move1_fdp_after,move1_k_after,move1_z_l1,move1_feasible\n";
  for (std::size_t r = 0; r < result.records.size(); ++r) {
    const ReplicationRecord& rec = result.records[r];
    csv << r << ',' << format_csv(rec.fdp_before) << ',' << rec.k_before << ','
        << rec.tail_null << ',' << rec.beyond_null << ',';
    if (rec.increase) {
      csv << format_csv(rec.increase->fdp_after) << ',' << rec.increase->k_after << ','
          << format_csv(rec.increase->z_l1) << ',' << (rec.increase->feasible ? 1 : 0);
    } else {
      csv << ",,,";
    }
    csv << ',';
    if (rec.move1) {
      csv << format_csv(rec.move1->fdp_after) << ',' << rec.move1->k_after << ','
          << format_csv(rec.move1->z_l1) << ',' << (rec.move1->feasible ? 1 : 0);
    } else {
      csv << ",,,";
    }
    csv << '\n';
  }
  const std::string csv_path = out_path(opts.out_dir, "simulate_replications.csv");
  write_text_file(csv_path, csv.str());
  announce(csv_path);

  std::ostringstream cfg_json;
  cfg_json << "{\"n\": " << opts.cfg.n << ", \"n0\": " << opts.cfg.n0
           << ", \"q\": " << format_json_number(opts.cfg.q)
           << ", \"mu1\": " << format_json_number(opts.cfg.mu1) << ", \"c\": " << opts.cfg.c
           << ", \"reps\": " << opts.cfg.reps << ", \"attack\": \"" << attack_name(opts.cfg.attack)
           << "\", \"adversary\": \""
           << (opts.cfg.adversary == AdversaryMode::kOmniscient ? "omniscient" : "oblivious")
           << "\"}";

  JsonWriter w;
  w.begin_object();
  w.field("n", opts.cfg.n);
  w.field("n0", opts.cfg.n0);
  w.field("q", opts.cfg.q);
  w.field("mu1", opts.cfg.mu1);
  w.field("c", opts.cfg.c);
  w.field("reps", static_cast<long long>(opts.cfg.reps));
  w.field("master_seed", static_cast<unsigned long long>(opts.cfg.master_seed));
  w.field("attack", attack_name(opts.cfg.attack));
  w.field("adversary",
          opts.cfg.adversary == AdversaryMode::kOmniscient ? "omniscient" : "oblivious");
  w.field("fdp_before_mean", result.aggregates.fdp_before_mean);
  w.field("fdp_before_se", result.aggregates.fdp_before_se);
  w.field("k_before_mean", result.aggregates.k_before_mean);
  if (result.aggregates.increase) {
    w.begin_array("increase");
    w.begin_object_in_array();
    attack_agg_json(w, *result.aggregates.increase);
    w.end_object();
    w.end_array();
  }
  if (result.aggregates.move1) {
    w.begin_array("move1");
    w.begin_object_in_array();
    attack_agg_json(w, *result.aggregates.move1);
    w.end_object();
    w.end_array();
  }
  w.end_object();
  const std::string agg_path = out_path(opts.out_dir, "simulate_aggregates.json");
  write_text_file(agg_path, w.str());
  announce(agg_path);

  write_manifest(out_path(opts.out_dir, "simulate_manifest.json"), "simulate",
                 opts.cfg.master_seed, cfg_json.str(), {csv_path, agg_path}, clock);
  return 0;
}

// ------------------------------------------------------------------- bound

struct BoundOpts {
  std::string which;
  int n = 1000, n0 = 900, c = 1, ell = 0, x = 0, b0 = -1;
  double q = 0.1, mu1 = 0.0;
  long long mc_reps = 100000;
  unsigned long long seed = 0;
  std::string m_variant = "as_printed";
  std::string out_dir = ".";
  int threads = 0;
};

int run_bound(const BoundOpts& o) {
  ManifestClock clock;
  JsonWriter w;
  w.begin_object();
  w.field("which", o.which);

  if (o.which == "ballot") {
    w.field("n", o.n);
    w.field("x", o.x);
    w.field("value", ballot_prob(o.n, o.x));
  } else if (o.which == "rejectzero") {
    w.field("n", o.n);
    w.field("q", o.q);
    w.field("ell", o.ell);
    w.field("value", rejection_count_pmf(o.n, o.q, o.ell));
  } else if (o.which == "lc") {
    const GaussianAltModel model = GaussianAltModel::create(o.n, o.n0, o.q, o.mu1);
    const MTermVariant variant =
        o.m_variant == "exact" ? MTermVariant::kExact : MTermVariant::kAsPrinted;
    const BoundReport rep = fdr_increase_lower_bound(model, o.c, variant);
    w.field("n", rep.n);
    w.field("n0", rep.n0);
    w.field("n1", rep.n1);
    w.field("c", rep.c);
    w.field("q", rep.q);
    w.field("mu1", rep.mu1);
    w.field("delta", rep.delta);
    w.field("delta_head", rep.delta_head);
    w.field("delta_rest", rep.delta_rest);
    w.field("pi_c", rep.pi_c);
    w.field("v_c", rep.v_c);
    w.field("d_kl", rep.d_kl);
    w.field("m_c", rep.m_c);
    w.field("m_c_as_printed", rep.m_c_as_printed);
    w.field("m_c_exact", rep.m_c_exact);
    w.field("m_c_variant", o.m_variant == "exact" ? "exact" : "as_printed");
    w.field("z_c", rep.z_c);
    w.field("l_c", rep.l_c);
    w.field("vacuous", rep.vacuous);
  } else if (o.which == "thm1") {
    const GaussianAltModel model = GaussianAltModel::create(o.n, o.n0, o.q, o.mu1);
    const McEstimate est = count_gain_lower_bound_mc(model, o.c, o.mc_reps, o.seed, o.threads);
    w.field("n", o.n);
    w.field("n0", o.n0);
    w.field("c", o.c);
    w.field("q", o.q);
    w.field("mu1", o.mu1);
    w.field("mc_reps", est.reps);
    w.field("hits", est.hits);
    w.field("value", est.mean);
    w.field("std_error", est.std_error);
  } else if (o.which == "thm3") {
    const GaussianAltModel model = GaussianAltModel::create(o.n, o.n0, o.q, o.mu1);
    const ConcentratedAltBounds b = concentrated_alt_bounds(model, o.c);
    w.field("n", o.n);
    w.field("n0", o.n0);
    w.field("c", o.c);
    w.field("q", o.q);
    w.field("mu1", o.mu1);
    w.field("p_all_alts_in_head", b.p_all_alts_in_head);
    w.field("upper_on_fdr_increase", b.upper_on_fdr_increase);
    w.field("lower_on_expected_raised_count", b.lower_on_expected_raised_count);
  } else if (o.which == "budgetprob") {
    const ClampedProb p = raised_count_equals_budget_prob(o.n, o.n0, o.q, o.c, o.b0);
    w.field("n", o.n);
    w.field("n0", o.n0);
    w.field("q", o.q);
    w.field("c", o.c);
    w.field("beyond_nulls", o.b0);
    w.field("value", p.value);
    w.field("clamped", p.clamped);
  } else {
    throw std::invalid_argument("unknown bound '" + o.which + "'");
  }
  w.end_object();

  const std::string path = out_path(o.out_dir, "bound_report.json");
  write_text_file(path, w.str());
  announce(path);

  std::ostringstream cfg;
  cfg << "{\"which\": \"" << o.which << "\", \"n\": " << o.n << ", \"n0\": " << o.n0
      << ", \"q\": " << format_json_number(o.q) << ", \"mu1\": " << format_json_number(o.mu1)
      << ", \"c\": " << o.c << "}";
  write_manifest(out_path(o.out_dir, "bound_manifest.json"), "bound", o.seed, cfg.str(), {path},
                 clock);
  return 0;
}

// ------------------------------------------------------------------ qsweep

struct QsweepOpts {
  int n = 1000, n0 = 900;
  double mu1 = 0.0;
  long long reps_per_q = 1000;
  unsigned long long seed = 0;
  std::vector<double> grid;
  std::string out_dir = ".";
  int threads = 0;
};

int run_qsweep_cmd(const QsweepOpts& o) {
  ManifestClock clock;
  std::vector<double> grid = o.grid;
  if (grid.empty()) {
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
  }
  for (double q : grid) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("grid values must lie in (0,1)");
  }
  const std::vector<QsweepRow> rows =
      run_qsweep(o.n, o.n0, o.mu1, o.reps_per_q, o.seed, grid, o.threads);

  std::ostringstream csv;
  csv << "q,delta1_hat,delta1_se,l1_as_printed,l1_exact\n";
  for (const QsweepRow& r : rows) {
    csv << format_csv(r.q) << ',' << format_csv(r.delta1_hat) << ',' << format_csv(r.delta1_se)
        << ',' << format_csv(r.l1_as_printed) << ',' << format_csv(r.l1_exact) << '\n';
  }
  const std::string path = out_path(o.out_dir, "qsweep.csv");
  write_text_file(path, csv.str());
  announce(path);

  std::ostringstream cfg;
  cfg << "{\"n\": " << o.n << ", \"n0\": " << o.n0 << ", \"mu1\": " << format_json_number(o.mu1)
      << ", \"reps_per_q\": " << o.reps_per_q << ", \"grid_points\": " << grid.size() << "}";
  write_manifest(out_path(o.out_dir, "qsweep_manifest.json"), "qsweep", o.seed, cfg.str(), {path},
                 clock);
  return 0;
}

// ---------------------------------------------------------------- conformal

struct ConformalOpts {
  std::vector<double> a_values;
  std::vector<int> c_values;
  long long reps = 1000;
  unsigned long long seed = 0;
  std::string ingest;
  ConformalConfig base;
  std::string out_dir = ".";
};

int run_conformal_cmd(const ConformalOpts& o) {
  ManifestClock clock;
  std::vector<ConformalRow> rows;
  if (!o.ingest.empty()) {
    const ScoreTable table = read_score_csv(o.ingest);
    std::vector<int> cs = o.c_values.empty() ? std::vector<int>{1} : o.c_values;
    for (int c : cs) {
      rows.push_back(run_conformal_ingest(table.cal_scores, table.test_scores, table.test_labels,
                                          c, o.base.q, o.base.plus_one_denominator));
    }
  } else {
    ConformalConfig base = o.base;
    base.reps = o.reps;
    base.master_seed = o.seed;
    const std::vector<double> as = o.a_values.empty() ? std::vector<double>{1.0} : o.a_values;
    const std::vector<int> cs = o.c_values.empty() ? std::vector<int>{1} : o.c_values;
    rows = run_conformal_table(base, as, cs);
  }

  std::ostringstream csv;
  csv << "a,c,reps,fdp_before_mean,fdp_before_se,fdp_after_mean,fdp_after_se\n";
  for (const ConformalRow& r : rows) {
    csv << format_csv(r.signal_strength) << ',' << r.c << ',' << r.reps << ','
        << format_csv(r.fdp_before_mean) << ',' << format_csv(r.fdp_before_se) << ','
        << format_csv(r.fdp_after_mean) << ',' << format_csv(r.fdp_after_se) << '\n';
  }
  const std::string path = out_path(o.out_dir, "conformal_table.csv");
  write_text_file(path, csv.str());
  announce(path);

  std::ostringstream cfg;
  cfg << "{\"mode\": \"" << (o.ingest.empty() ? "synthetic" : "ingest")
      << "\", \"reps\": " << o.reps << ", \"rows\": " << rows.size()
      << ", \"q\": " << format_json_number(o.base.q) << "}";
  write_manifest(out_path(o.out_dir, "conformal_manifest.json"), "conformal", o.seed, cfg.str(),
                 {path}, clock);
  return 0;
}

// ------------------------------------------------------------------- attack

struct AttackOpts {
  std::string input;
  double q = 0.1;
  std::string attack = "increase";
  int c = 1;
  std::string adversary = "omniscient";
  unsigned long long seed = 0;
  std::string out_dir = ".";
};

int run_attack_cmd(const AttackOpts& o) {
  ManifestClock clock;
  const LabeledPValues pv = read_labeled_csv(o.input);
  if (pv.size() == 0) throw std::invalid_argument("input collection is empty");

  PerturbationPlan plan;
  if (o.attack == "increase") {
    const AdversaryMode mode =
        o.adversary == "oblivious" ? AdversaryMode::kOblivious : AdversaryMode::kOmniscient;
    std::mt19937_64 rng = make_stream(o.seed, 0);
    plan = increase_c(pv, o.q, o.c, mode, &rng);
  } else if (o.attack == "move1") {
    if (o.c != 1) throw std::invalid_argument("move1 perturbs exactly one value; use --c 1");
    plan = move_1(pv, o.q, DistanceSpace::kZScore);
  } else {
    throw std::invalid_argument("unknown attack '" + o.attack + "'");
  }

  JsonWriter w;
  w.begin_object();
  w.field("attack", o.attack);
  w.field("q", o.q);
  w.field("c", o.c);
  w.field("n", pv.size());
  w.field("k_before", plan.k_before);
  w.field("fdp_before", plan.fdp_before);
  w.field("induced_k", plan.induced_k);
  w.field("fdp_after", plan.fdp_after);
  w.field("l0_distance", plan.l0_distance());
  if (plan.z_l1_distance) {
    w.field("z_l1_distance", *plan.z_l1_distance);
  }
  w.begin_array("moves");
  for (const Move& m : plan.moves) {
    w.begin_object_in_array();
    w.field("id", m.id);
    w.field("old_p", m.old_p);
    w.field("new_p", m.new_p);
    w.end_object();
  }
  w.end_array();
  w.end_object();

  const std::string path = out_path(o.out_dir, "attack_plan.json");
  write_text_file(path, w.str());
  announce(path);

  std::ostringstream cfg;
  cfg << "{\"input\": \"" << o.input << "\", \"q\": " << format_json_number(o.q)
      << ", \"attack\": \"" << o.attack << "\", \"c\": " << o.c << "}";
  write_manifest(out_path(o.out_dir, "attack_manifest.json"), "attack", o.seed, cfg.str(), {path},
                 clock);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial perturbation experiments for step-up multiple testing"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Exit codes: 0 success, 2 usage/domain error, 3 I/O failure.");

  int threads = env_threads_default();
  app.add_option("--threads", threads,
                 "Worker threads (default: BHADV_THREADS or hardware concurrency)");

  SimulateOpts sim_opts;
  std::string sim_attack = "increase", sim_adversary = "omniscient";
  unsigned long long sim_seed = 0;
  long long sim_reps = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "Paired before/after attack simulation");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--n", sim_opts.cfg.n, "Number of tests")->required();
  sim_cmd->add_option("--n0", sim_opts.cfg.n0, "Number of true nulls")->required();
  sim_cmd->add_option("--q", sim_opts.cfg.q, "Control level in (0,1)")->required();
  sim_cmd->add_option("--mu1", sim_opts.cfg.mu1, "Alternative mean (>= 0)")->required();
  sim_cmd->add_option("--c", sim_opts.cfg.c, "Perturbation budget (>= 1)")->required();
  sim_cmd->add_option("--reps", sim_reps, "Replications (>= 1)")->required();
  sim_cmd->add_option("--seed", sim_seed, "Master seed")->required();
  sim_cmd->add_option("--attack", sim_attack, "increase | move1 | both");
  sim_cmd->add_option("--adversary", sim_adversary, "omniscient | oblivious");
  sim_cmd->add_option("--out", sim_opts.out_dir, "Output directory");

  BoundOpts bound_opts;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate a theoretical quantity");
  bound_cmd->fallthrough();
  bound_cmd
      ->add_option("--which", bound_opts.which,
                   "lc | thm1 | thm3 | rejectzero | ballot | budgetprob")
      ->required();
  bound_cmd->add_option("--n", bound_opts.n, "Number of tests / bins");
  bound_cmd->add_option("--n0", bound_opts.n0, "Number of true nulls");
  bound_cmd->add_option("--q", bound_opts.q, "Control level");
  bound_cmd->add_option("--mu1", bound_opts.mu1, "Alternative mean");
  bound_cmd->add_option("--c", bound_opts.c, "Perturbation budget");
  bound_cmd->add_option("--ell", bound_opts.ell, "Rejection count (rejectzero)");
  bound_cmd->add_option("--x", bound_opts.x, "Ball count (ballot)");
  bound_cmd->add_option("--b0", bound_opts.b0, "Conditioning null count (budgetprob)");
  bound_cmd->add_option("--mc-reps", bound_opts.mc_reps, "Replications for MC-backed bounds");
  bound_cmd->add_option("--seed", bound_opts.seed, "Master seed for MC-backed bounds");
  bound_cmd->add_option("--mc-variant", bound_opts.m_variant,
                        "m_c variant for lc: as_printed | exact");
  bound_cmd->add_option("--out", bound_opts.out_dir, "Output directory");

  QsweepOpts qsweep_opts;
  auto* qsweep_cmd = app.add_subcommand("qsweep", "FDR-increase estimate vs. bound over a q grid");
  qsweep_cmd->fallthrough();
  qsweep_cmd->add_option("--mu1", qsweep_opts.mu1, "Alternative mean")->required();
  qsweep_cmd->add_option("--n", qsweep_opts.n, "Number of tests")->required();
  qsweep_cmd->add_option("--n0", qsweep_opts.n0, "Number of true nulls")->required();
  qsweep_cmd->add_option("--reps-per-q", qsweep_opts.reps_per_q, "Replications per grid point")
      ->required();
  qsweep_cmd->add_option("--seed", qsweep_opts.seed, "Master seed")->required();
  qsweep_cmd->add_option("--grid", qsweep_opts.grid,
                         "Comma-separated q grid (default 0.01..0.99 step 0.01)")
      ->delimiter(',');
  qsweep_cmd->add_option("--out", qsweep_opts.out_dir, "Output directory");

  ConformalOpts conf_opts;
  auto* conf_cmd = app.add_subcommand("conformal", "Conformal p-value experiment");
  conf_cmd->fallthrough();
  conf_cmd->add_option("--a", conf_opts.a_values, "Signal strengths (comma list, each >= 1)")
      ->delimiter(',');
  conf_cmd->add_option("--c", conf_opts.c_values, "Budgets (comma list)")->delimiter(',');
  conf_cmd->add_option("--reps", conf_opts.reps, "Replications per signal strength");
  conf_cmd->add_option("--seed", conf_opts.seed, "Master seed");
  conf_cmd->add_option("--ingest", conf_opts.ingest, "Precomputed score CSV (id,score,label,split)");
  conf_cmd->add_option("--q", conf_opts.base.q, "Control level");
  conf_cmd->add_option("--dim", conf_opts.base.dim, "Feature dimension");
  conf_cmd->add_option("--n-train", conf_opts.base.n_train, "Training set size");
  conf_cmd->add_option("--n-cal", conf_opts.base.n_cal, "Calibration set size");
  conf_cmd->add_option("--n-test", conf_opts.base.n_test, "Test set size");
  conf_cmd->add_option("--pi1", conf_opts.base.outlier_fraction, "Outlier fraction");
  conf_cmd->add_option("--knn", conf_opts.base.knn_k, "Nearest neighbors in the score");
  conf_cmd->add_flag("--printed-denominator", [&](std::int64_t) {
    conf_opts.base.plus_one_denominator = false;
  }, "Divide ranks by n_cal instead of n_cal + 1");
  conf_cmd->add_option("--out", conf_opts.out_dir, "Output directory");

  AttackOpts attack_opts;
  auto* attack_cmd = app.add_subcommand("attack", "Attack a labeled p-value CSV once");
  attack_cmd->fallthrough();
  attack_cmd->add_option("--input", attack_opts.input, "CSV (test_id,p_value,label)")->required();
  attack_cmd->add_option("--q", attack_opts.q, "Control level")->required();
  attack_cmd->add_option("--attack", attack_opts.attack, "increase | move1")->required();
  attack_cmd->add_option("--c", attack_opts.c, "Perturbation budget")->required();
  attack_cmd->add_option("--adversary", attack_opts.adversary, "omniscient | oblivious");
  attack_cmd->add_option("--seed", attack_opts.seed, "Seed (oblivious source sampling)");
  attack_cmd->add_option("--out", attack_opts.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim_cmd->parsed()) {
      if (!(sim_opts.cfg.q > 0.0 && sim_opts.cfg.q < 1.0)) {
        throw std::invalid_argument("--q must lie in (0,1)");
      }
      if (sim_opts.cfg.n < 1 || sim_opts.cfg.n0 < 0 || sim_opts.cfg.n0 > sim_opts.cfg.n) {
        throw std::invalid_argument("--n0 must lie in [0, --n]");
      }
      if (sim_opts.cfg.c < 1) throw std::invalid_argument("--c must be >= 1");
      if (sim_reps < 1) throw std::invalid_argument("--reps must be >= 1");
      if (!(sim_opts.cfg.mu1 >= 0.0)) throw std::invalid_argument("--mu1 must be >= 0");
      sim_opts.cfg.reps = sim_reps;
      sim_opts.cfg.master_seed = sim_seed;
      sim_opts.cfg.threads = threads;
      if (sim_attack == "increase") {
        sim_opts.cfg.attack = AttackKind::kIncreaseC;
      } else if (sim_attack == "move1") {
        sim_opts.cfg.attack = AttackKind::kMove1;
      } else if (sim_attack == "both") {
        sim_opts.cfg.attack = AttackKind::kBoth;
      } else {
        throw std::invalid_argument("--attack must be increase, move1 or both");
      }
      if (sim_adversary == "omniscient") {
        sim_opts.cfg.adversary = AdversaryMode::kOmniscient;
      } else if (sim_adversary == "oblivious") {
        sim_opts.cfg.adversary = AdversaryMode::kOblivious;
      } else {
        throw std::invalid_argument("--adversary must be omniscient or oblivious");
      }
      return run_simulate(sim_opts);
    }
    if (bound_cmd->parsed()) {
      bound_opts.threads = threads;
      return run_bound(bound_opts);
    }
    if (qsweep_cmd->parsed()) {
      qsweep_opts.threads = threads;
      if (qsweep_opts.reps_per_q < 1) throw std::invalid_argument("--reps-per-q must be >= 1");
      if (!(qsweep_opts.mu1 >= 0.0)) throw std::invalid_argument("--mu1 must be >= 0");
      return run_qsweep_cmd(qsweep_opts);
    }
    if (conf_cmd->parsed()) {
      conf_opts.base.threads = threads;
      for (double a : conf_opts.a_values) {
        if (!(a >= 1.0)) throw std::invalid_argument("--a values must be >= 1");
      }
      for (int c : conf_opts.c_values) {
        if (c < 1) throw std::invalid_argument("--c values must be >= 1");
      }
      if (conf_opts.ingest.empty() && conf_opts.reps < 1) {
        throw std::invalid_argument("--reps must be >= 1");
      }
      return run_conformal_cmd(conf_opts);
    }
    if (attack_cmd->parsed()) {
      if (!(attack_opts.q > 0.0 && attack_opts.q < 1.0)) {
        throw std::invalid_argument("--q must lie in (0,1)");
      }
      if (attack_opts.c < 1) throw std::invalid_argument("--c must be >= 1");
      return run_attack_cmd(attack_opts);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
