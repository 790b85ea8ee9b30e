#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace viscac {

// 17 significant digits so values survive a text round trip.
inline std::string fmt_num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Two comment lines, then the column header. Only the second comment line
// (the timestamp) changes between identical runs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns, const std::string& config_hash,
            const std::string& version)
      : out_(path), ncol_(columns.size()) {
    if (!out_) throw std::runtime_error("cannot write '" + path + "'");
    out_ << "# viscac " << version << " config " << config_hash << "\n";
    out_ << "# generated " << utc_timestamp() << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  // Cells are preformatted; use fmt_num for numbers.
  void row(const std::vector<std::string>& cells) {
    if (cells.size() != ncol_) throw std::logic_error("csv row has the wrong number of cells");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t ncol_;
};

// Reads back a file written by CsvWriter, skipping '#' lines. Used by tests
// and by tools that compare runs.
inline std::vector<std::string> csv_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') lines.push_back(line);
  return lines;
}

}  // namespace viscac
