#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bhadv/core.hpp"

namespace bhadv {

/// File-system or stream failure; front ends map it to their I/O exit code.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input content; carries the 1-based line number when known.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_number(line) {}
  long line_number = 0;
};

/// %.10g for CSV cells, %.17g for JSON numbers (round-trip fidelity).
std::string format_csv(double v);
std::string format_json_number(double v);

/// Labeled p-value CSV: header `test_id,p_value,label`, label in {0,1} with
/// 0 = null; UTF-8, LF line endings.
LabeledPValues read_labeled_csv(const std::string& path);
void write_labeled_csv(const std::string& path, const LabeledPValues& pv);

/// Score CSV: header `id,score,label,split`, split in {cal,test}.  Labels of
/// calibration rows are ignored.
struct ScoreTable {
  std::vector<double> cal_scores;
  std::vector<double> test_scores;
  std::vector<TestLabel> test_labels;
};

ScoreTable read_score_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

/// Minimal deterministic JSON emitter: insertion-ordered keys, two-space
/// indent, LF endings, numbers through format_json_number.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array(const std::string& key);
  JsonWriter& begin_object_in_array();
  JsonWriter& end_array();
  JsonWriter& field(const std::string& key, const std::string& value);
  JsonWriter& field(const std::string& key, const char* value);
  JsonWriter& field(const std::string& key, double value);
  JsonWriter& field(const std::string& key, long long value);
  JsonWriter& field(const std::string& key, int value);
  JsonWriter& field(const std::string& key, unsigned long long value);
  JsonWriter& field(const std::string& key, bool value);
  JsonWriter& element(double value);

  std::string str() const;

 private:
  void indent();
  void comma();
  std::string out_;
  int depth_ = 0;
  std::vector<bool> has_items_;
};

}  // namespace bhadv
