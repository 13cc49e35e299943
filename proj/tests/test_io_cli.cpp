#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bhadv/bh.hpp"
#include "bhadv/io.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bhadv;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("bhadv_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tool_path() {
  const char* env = std::getenv("BHADV_BIN");
  REQUIRE_MESSAGE(env != nullptr, "BHADV_BIN must point at the CLI binary");
  return env;
}

int run_cli(const std::string& args) {
  const std::string cmd = tool_path() + std::string(" ") + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_five_test_csv(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << "test_id,p_value,label\n"
      << "1,0.05,1\n"
      << "2,0.2,1\n"
      << "3,0.35,0\n"
      << "4,0.77,0\n"
      << "5,0.9,0\n";
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_csv(0.5) == "0.5");
  CHECK(format_csv(1.0 / 3.0) == "0.3333333333");
  CHECK(format_json_number(0.1) == "0.10000000000000001");
  CHECK(format_csv(std::nan("")) == "nan");
}

TEST_CASE("labeled CSV round trip preserves the procedure output") {
  const fs::path dir = temp_dir("roundtrip");
  const LabeledPValues pv = LabeledPValues({{1, 0.031, TestLabel::kAlternative},
                                            {2, 0.44, TestLabel::kNull},
                                            {3, 0.9999999999, TestLabel::kNull},
                                            {4, 0.1, TestLabel::kAlternative}});
  const fs::path file = dir / "pv.csv";
  write_labeled_csv(file.string(), pv);
  const LabeledPValues back = read_labeled_csv(file.string());
  REQUIRE(back.size() == pv.size());
  const RejectionOutcome a = bh_sorted(pv, 0.3);
  const RejectionOutcome b = bh_sorted(back, 0.3);
  CHECK(a.k == b.k);
  CHECK(a.rejected_ids == b.rejected_ids);
  CHECK(a.fdp == b.fdp);
}

TEST_CASE("labeled CSV parse errors carry line numbers") {
  const fs::path dir = temp_dir("badcsv");
  const fs::path file = dir / "bad.csv";
  {
    std::ofstream out(file);
    out << "test_id,p_value,label\n1,0.5,0\n2,oops,1\n";
  }
  try {
    read_labeled_csv(file.string());
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line_number == 3);
  }
  CHECK_THROWS_AS(read_labeled_csv((dir / "missing.csv").string()), IoError);
}

TEST_CASE("score CSV parsing") {
  const fs::path dir = temp_dir("scorecsv");
  const fs::path file = dir / "scores.csv";
  {
    std::ofstream out(file);
    out << "id,score,label,split\n1,0.5,0,cal\n2,0.7,0,cal\n3,2.5,1,test\n4,0.2,0,test\n";
  }
  const ScoreTable table = read_score_csv(file.string());
  CHECK(table.cal_scores.size() == 2);
  CHECK(table.test_scores.size() == 2);
  CHECK(table.test_labels[0] == TestLabel::kAlternative);
  {
    std::ofstream out(file);
    out << "id,score,label,split\n1,0.5,0,validation\n";
  }
  CHECK_THROWS_AS(read_score_csv(file.string()), FormatError);
}

TEST_CASE("json writer emits parseable documents") {
  JsonWriter w;
  w.begin_object();
  w.field("name", "x\"y");
  w.field("value", 0.25);
  w.field("count", 3);
  w.field("flag", true);
  w.begin_array("rows");
  w.begin_object_in_array();
  w.field("a", 1.5);
  w.end_object();
  w.begin_object_in_array();
  w.field("a", 2.5);
  w.end_object();
  w.end_array();
  w.end_object();
  const nlohmann::json parsed = nlohmann::json::parse(w.str());
  CHECK(parsed["name"] == "x\"y");
  CHECK(parsed["value"] == 0.25);
  CHECK(parsed["rows"][1]["a"] == 2.5);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = temp_dir("cli_exit");
  write_five_test_csv(dir / "pv.csv");
  CHECK(run_cli("simulate --n 10 --n0 9 --q 1.5 --mu1 0 --c 1 --reps 1 --seed 1 --out " +
                (dir / "o1").string()) == 2);
  CHECK(run_cli("attack --input " + (dir / "pv.csv").string() +
                " --q 0.5 --attack increase --c 0") == 2);
  CHECK(run_cli("attack --input " + (dir / "missing.csv").string() +
                " --q 0.5 --attack increase --c 1") == 3);
  CHECK(run_cli("conformal --a 0.5 --c 1 --reps 2 --seed 1 --out " + (dir / "o2").string()) == 2);
  CHECK(run_cli("qsweep --n 10 --n0 9 --reps-per-q 1 --seed 1") == 2);  // missing --mu1
  CHECK(run_cli("bound --which nosuch") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli attack subcommand reproduces the worked instance") {
  const fs::path dir = temp_dir("cli_attack");
  write_five_test_csv(dir / "pv.csv");

  CHECK(run_cli("attack --input " + (dir / "pv.csv").string() +
                " --q 0.5 --attack increase --c 1 --out " + (dir / "inc").string()) == 0);
  const nlohmann::json inc = nlohmann::json::parse(slurp(dir / "inc" / "attack_plan.json"));
  CHECK(inc["fdp_after"] == 0.5);
  CHECK(inc["induced_k"] == 4);
  CHECK(inc["k_before"] == 2);

  CHECK(run_cli("attack --input " + (dir / "pv.csv").string() +
                " --q 0.5 --attack move1 --c 1 --out " + (dir / "mv").string()) == 0);
  const nlohmann::json mv = nlohmann::json::parse(slurp(dir / "mv" / "attack_plan.json"));
  CHECK(mv["fdp_after"] == 0.5);
}

TEST_CASE("cli ingest rejects malformed score files") {
  const fs::path dir = temp_dir("cli_ingest");
  {
    std::ofstream out(dir / "scores.csv");
    out << "id,score,label,split\n1,0.5,0,cal\n2,not_a_number,0,test\n";
  }
  CHECK(run_cli("conformal --ingest " + (dir / "scores.csv").string() + " --c 1 --out " +
                (dir / "o").string()) == 2);
  {
    std::ofstream out(dir / "scores.csv");
    out << "id,score,label,split\n1,0.5,0,cal\n2,1.5,0,test\n3,0.7,1,test\n";
  }
  CHECK(run_cli("conformal --ingest " + (dir / "scores.csv").string() + " --c 1 --out " +
                (dir / "o").string()) == 0);
}

TEST_CASE("cli simulate is byte-deterministic") {
  const fs::path dir = temp_dir("cli_det");
  const std::string flags = "simulate --n 100 --n0 90 --q 0.1 --mu1 1 --c 2 --reps 50 --seed 4 ";
  CHECK(run_cli(flags + "--threads 1 --out " + (dir / "a").string()) == 0);
  CHECK(run_cli(flags + "--threads 2 --out " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "simulate_replications.csv") ==
        slurp(dir / "b" / "simulate_replications.csv"));
  CHECK(slurp(dir / "a" / "simulate_aggregates.json") ==
        slurp(dir / "b" / "simulate_aggregates.json"));
  const nlohmann::json manifest =
      nlohmann::json::parse(slurp(dir / "a" / "simulate_manifest.json"));
  CHECK(manifest["subcommand"] == "simulate");
  CHECK(manifest["outputs"].size() == 2);
}
