#include "rdopt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rdopt {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_json_array(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  out += ']';
  return out;
}

std::string dataset_line(const EvaluationRecord& rec) {
  std::string out = "{\"site\":";
  out += format_json_array(rec.site);
  out += ",\"value\":";
  out += format_double(rec.value);
  out += ",\"iteration\":";
  out += std::to_string(rec.iteration);
  out += ",\"tag\":\"";
  out += tag_name(rec.tag);
  out += "\"}";
  return out;
}

namespace {

Vec to_vec(const json& j) {
  Vec v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

json parse_json_line(const std::string& line, const char* what) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw IoError(std::string("malformed ") + what + " line: " + line);
  return j;
}

}  // namespace

EvaluationRecord parse_dataset_line(const std::string& line) {
  const json j = parse_json_line(line, "dataset");
  try {
    EvaluationRecord rec;
    rec.site = to_vec(j.at("site"));
    rec.value = j.at("value").get<double>();
    rec.iteration = j.at("iteration").get<int>();
    rec.tag = tag_from_name(j.at("tag").get<std::string>());
    return rec;
  } catch (const json::exception& e) {
    throw IoError("malformed dataset line: " + std::string(e.what()));
  }
}

std::string trace_line(const IterationRecord& rec) {
  std::string out = "{\"k\":";
  out += std::to_string(rec.k);
  out += ",\"x\":";
  out += format_json_array(rec.x);
  out += ",\"f_center\":";
  out += format_double(rec.f_center);
  out += ",\"f_accepted\":";
  out += format_double(rec.f_accepted);
  out += ",\"step\":";
  out += format_json_array(rec.step);
  out += ",\"ranges\":";
  out += format_json_array(rec.ranges);
  out += ",\"sigmas\":";
  out += format_json_array(rec.sigmas);
  out += ",\"best_value\":";
  out += format_double(rec.best_value);
  out += ",\"best_x\":";
  out += format_json_array(rec.best_x);
  out += '}';
  return out;
}

IterationRecord parse_trace_line(const std::string& line) {
  const json j = parse_json_line(line, "trace");
  try {
    IterationRecord rec;
    rec.k = j.at("k").get<int>();
    rec.x = to_vec(j.at("x"));
    rec.f_center = j.at("f_center").get<double>();
    rec.f_accepted = j.at("f_accepted").get<double>();
    rec.step = to_vec(j.at("step"));
    rec.ranges = to_vec(j.at("ranges"));
    rec.sigmas = to_vec(j.at("sigmas"));
    rec.best_value = j.at("best_value").get<double>();
    rec.best_x = to_vec(j.at("best_x"));
    return rec;
  } catch (const json::exception& e) {
    throw IoError("malformed trace line: " + std::string(e.what()));
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw IoError("cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool file_exists(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return static_cast<bool>(in);
}

std::vector<std::string> read_lines(const std::string& path) {
  const std::string content = read_file(path);
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string::npos) end = content.size();
    if (end > start) lines.push_back(content.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<EvaluationRecord> read_dataset(const std::string& path) {
  std::vector<EvaluationRecord> records;
  for (const std::string& line : read_lines(path))
    records.push_back(parse_dataset_line(line));
  return records;
}

std::vector<IterationRecord> read_trace(const std::string& path) {
  std::vector<IterationRecord> records;
  for (const std::string& line : read_lines(path))
    records.push_back(parse_trace_line(line));
  return records;
}

JsonlWriter::JsonlWriter(std::string path) : path_(std::move(path)) {}

void JsonlWriter::load_existing() {
  if (file_exists(path_)) content_ = read_file(path_);
}

void JsonlWriter::append(const std::string& line) {
  content_ += line;
  content_ += '\n';
  dirty_ = true;
}

void JsonlWriter::flush() {
  if (!dirty_) return;
  write_file_atomic(path_, content_);
  dirty_ = false;
}

}  // namespace rdopt
