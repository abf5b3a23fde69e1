#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lscale/harness.hpp"
#include "text_io.hpp"

namespace lscale {

std::vector<CheckpointStats> aggregate(std::span<const AccuracyRecord> records) {
  std::map<int, std::vector<double>> by_checkpoint;
  for (const auto& r : records) by_checkpoint[r.checkpoint].push_back(r.accuracy);

  std::vector<CheckpointStats> out;
  out.reserve(by_checkpoint.size());
  for (const auto& [checkpoint, values] : by_checkpoint) {
    CheckpointStats s;
    s.checkpoint = checkpoint;
    s.count = static_cast<int>(values.size());
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / s.count;
    if (s.count > 1) {
      double ss = 0.0;
      for (const double v : values) ss += (v - s.mean) * (v - s.mean);
      s.stddev = std::sqrt(ss / (s.count - 1));
    } else {
      s.stddev = 0.0;
      s.degenerate = true;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CheckpointStats> ExperimentReport::summary() const { return aggregate(records); }

void write_records_csv(std::span<const AccuracyRecord> records, const std::string& path) {
  if (records.empty()) throw std::runtime_error("nothing to report");
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "run,seed,checkpoint,accuracy\n";
  char buf[64];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof(buf), "%.9f", r.accuracy);
    out << r.run << ',' << r.seed << ',' << r.checkpoint << ',' << buf << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<AccuracyRecord> read_records(const std::string& path) {
  auto in = detail::open_or_throw(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) detail::fail_at(path, 1, "missing header");
  ++line_no;
  if (line.rfind("run,seed,checkpoint,accuracy", 0) != 0)
    detail::fail_at(path, line_no, "unexpected header '" + line + "'");

  std::vector<AccuracyRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 4) detail::fail_at(path, line_no, "expected 4 comma-separated fields");
    AccuracyRecord r;
    r.run = static_cast<int>(detail::parse_long(fields[0], path, line_no));
    r.seed = static_cast<std::uint64_t>(detail::parse_long(fields[1], path, line_no));
    r.checkpoint = static_cast<int>(detail::parse_long(fields[2], path, line_no));
    r.accuracy = detail::parse_double(fields[3], path, line_no);
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(std::span<const CheckpointStats> stats, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "checkpoint,count,mean,std,degenerate\n";
  char mean_buf[64], std_buf[64];
  for (const auto& s : stats) {
    std::snprintf(mean_buf, sizeof(mean_buf), "%.9f", s.mean);
    std::snprintf(std_buf, sizeof(std_buf), "%.9f", s.stddev);
    out << s.checkpoint << ',' << s.count << ',' << mean_buf << ',' << std_buf << ','
        << (s.degenerate ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::string format_summary(std::span<const CheckpointStats> stats) {
  std::ostringstream out;
  out << "budget  runs  accuracy%  std%\n";
  char buf[96];
  for (const auto& s : stats) {
    std::snprintf(buf, sizeof(buf), "%-7d %-5d %6.2f  %c %4.2f\n", s.checkpoint, s.count,
                  100.0 * s.mean, s.degenerate ? '!' : ' ', 100.0 * s.stddev);
    out << buf;
  }
  return out.str();
}

void write_report(const ExperimentReport& report, const std::string& dir) {
  if (report.records.empty()) throw std::runtime_error("nothing to report");
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_records_csv(report.records, (fs::path(dir) / "records.csv").string());
  const auto stats = report.summary();
  write_summary_csv(stats, (fs::path(dir) / "summary.csv").string());
}

}  // namespace lscale
