#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace dsbn::cli {

std::string format_double(double v);

/// Flags and seed of one invocation, embedded in every report.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::string format = "tsv";
  std::vector<std::pair<std::string, std::string>> params;

  void set(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
};

/// TSV report: `#`-prefixed header block, then typed rows. Each row kind may
/// carry a `#kind\tcol...` column line emitted before its first row.
class Report {
 public:
  Report(std::string title, RunConfig config) : title_(std::move(title)), config_(std::move(config)) {}

  void columns(const std::string& kind, std::vector<std::string> names);
  void row(std::vector<std::string> cells);
  void note(const std::string& key, const std::string& value) { notes_.emplace_back(key, value); }

  void write(std::ostream& out) const;
  std::string str() const;

 private:
  std::string title_;
  RunConfig config_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::pair<std::string, std::vector<std::string>>> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `content` to `path` through a temporary file and rename.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace dsbn::cli
