#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rdopt/dataset.hpp"
#include "rdopt/optimizer.hpp"

namespace rdopt {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits, enough to round-trip any double exactly.
std::string format_double(double v);
std::string format_json_array(const Vec& v);

// One evaluation record as a single JSON line (no trailing newline).
std::string dataset_line(const EvaluationRecord& rec);
EvaluationRecord parse_dataset_line(const std::string& line);

std::string trace_line(const IterationRecord& rec);
IterationRecord parse_trace_line(const std::string& line);

// Whole-file replacement through a sibling temp file and rename, so readers
// never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);
bool file_exists(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);

std::vector<EvaluationRecord> read_dataset(const std::string& path);
std::vector<IterationRecord> read_trace(const std::string& path);

// Append-style persistence that rewrites the target atomically on every
// flush; keeps the full content in memory, which the modest trace and
// dataset sizes here make cheap.
class JsonlWriter {
 public:
  explicit JsonlWriter(std::string path);
  // Starts from existing file content (resume) or empty.
  void load_existing();
  void append(const std::string& line);
  void flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::string content_;
  bool dirty_ = false;
};

}  // namespace rdopt
