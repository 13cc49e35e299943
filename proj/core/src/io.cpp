#include "bhadv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bhadv {

namespace {

std::string format_g(double v, const char* fmt) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, long line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw FormatError("trailing characters in number '" + s + "'", line);
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("not a number: '" + s + "'", line);
  }
}

long parse_long(const std::string& s, long line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw FormatError("trailing characters in integer '" + s + "'", line);
    return v;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FormatError("not an integer: '" + s + "'", line);
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

std::string format_csv(double v) { return format_g(v, "%.10g"); }
std::string format_json_number(double v) { return format_g(v, "%.17g"); }

LabeledPValues read_labeled_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw FormatError("empty file " + path, 1);
  if (split_csv_line(lines[0]) != std::vector<std::string>{"test_id", "p_value", "label"}) {
    throw FormatError("expected header 'test_id,p_value,label'", 1);
  }
  std::vector<PValueEntry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 3) throw FormatError("expected 3 fields", line_no);
    const long id = parse_long(fields[0], line_no);
    const double p = parse_double(fields[1], line_no);
    const long label = parse_long(fields[2], line_no);
    if (label != 0 && label != 1) throw FormatError("label must be 0 or 1", line_no);
    if (!(p >= 0.0 && p <= 1.0)) throw FormatError("p_value outside [0,1]", line_no);
    entries.push_back(PValueEntry{static_cast<int>(id), p,
                                  label == 0 ? TestLabel::kNull : TestLabel::kAlternative});
  }
  try {
    return LabeledPValues(std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_labeled_csv(const std::string& path, const LabeledPValues& pv) {
  std::ostringstream out;
  out << "test_id,p_value,label\n";
  for (const PValueEntry& e : pv.entries()) {
    out << e.id << ',' << format_csv(e.p) << ',' << (e.label == TestLabel::kNull ? 0 : 1) << '\n';
  }
  write_text_file(path, out.str());
}

ScoreTable read_score_csv(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw FormatError("empty file " + path, 1);
  if (split_csv_line(lines[0]) != std::vector<std::string>{"id", "score", "label", "split"}) {
    throw FormatError("expected header 'id,score,label,split'", 1);
  }
  ScoreTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const long line_no = static_cast<long>(i) + 1;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 4) throw FormatError("expected 4 fields", line_no);
    const double score = parse_double(fields[1], line_no);
    const long label = parse_long(fields[2], line_no);
    if (label != 0 && label != 1) throw FormatError("label must be 0 or 1", line_no);
    if (fields[3] == "cal") {
      table.cal_scores.push_back(score);
    } else if (fields[3] == "test") {
      table.test_scores.push_back(score);
      table.test_labels.push_back(label == 0 ? TestLabel::kNull : TestLabel::kAlternative);
    } else {
      throw FormatError("split must be 'cal' or 'test'", line_no);
    }
  }
  if (table.cal_scores.empty()) throw FormatError("no calibration rows in " + path);
  if (table.test_scores.empty()) throw FormatError("no test rows in " + path);
  return table;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void JsonWriter::indent() {
  for (int i = 0; i < depth_; ++i) out_ += "  ";
}

void JsonWriter::comma() {
  if (!has_items_.empty()) {
    if (has_items_.back()) out_ += ",";
    has_items_.back() = true;
  }
  if (!out_.empty()) out_ += "\n";
  indent();
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += "{";
  ++depth_;
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  --depth_;
  has_items_.pop_back();
  out_ += "\n";
  indent();
  out_ += "}";
  return *this;
}

JsonWriter& JsonWriter::begin_array(const std::string& key) {
  comma();
  out_ += "\"" + json_escape(key) + "\": [";
  ++depth_;
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::begin_object_in_array() {
  comma();
  out_ += "{";
  ++depth_;
  has_items_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  --depth_;
  has_items_.pop_back();
  out_ += "\n";
  indent();
  out_ += "]";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const std::string& value) {
  comma();
  out_ += "\"" + json_escape(key) + "\": \"" + json_escape(value) + "\"";
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, const char* value) {
  return field(key, std::string(value));
}

JsonWriter& JsonWriter::field(const std::string& key, double value) {
  comma();
  if (std::isfinite(value)) {
    out_ += "\"" + json_escape(key) + "\": " + format_json_number(value);
  } else {
    out_ += "\"" + json_escape(key) + "\": \"" + format_json_number(value) + "\"";
  }
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, long long value) {
  comma();
  out_ += "\"" + json_escape(key) + "\": " + std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, int value) {
  return field(key, static_cast<long long>(value));
}

JsonWriter& JsonWriter::field(const std::string& key, unsigned long long value) {
  comma();
  out_ += "\"" + json_escape(key) + "\": " + std::to_string(value);
  return *this;
}

JsonWriter& JsonWriter::field(const std::string& key, bool value) {
  comma();
  out_ += "\"" + json_escape(key) + "\": " + (value ? "true" : "false");
  return *this;
}

JsonWriter& JsonWriter::element(double value) {
  comma();
  out_ += std::isfinite(value) ? format_json_number(value)
                               : "\"" + format_json_number(value) + "\"";
  return *this;
}

std::string JsonWriter::str() const { return out_ + "\n"; }

}  // namespace bhadv
