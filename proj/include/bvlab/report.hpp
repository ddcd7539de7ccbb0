#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace bvlab {

struct ReportLine {
  std::string key;      // stable identifier, e.g. "e2.3"
  std::string title;    // human-readable claim or check
  bool passed = true;
  std::string outcome;  // e.g. "Pass", "Fail", "SupportedUpToHorizon"
  std::vector<std::string> details;  // witness values, scope notes
  std::vector<std::pair<std::string, std::string>> machine;  // appended as key.name=value
  double seconds = 0;
};

/// Human lines with runtimes, a summary, then a `# machine` block that
/// contains no timing so repeated runs are byte-identical.
class Report {
 public:
  void add(ReportLine line) { lines_.push_back(std::move(line)); }
  /// Extra machine-only key=value entries (e.g. "s_min=2").
  void note(std::string key, std::string value) { notes_.emplace_back(std::move(key), std::move(value)); }
  void append(const Report& other);

  const std::vector<ReportLine>& lines() const noexcept { return lines_; }
  std::size_t passed() const;
  std::size_t failed() const;
  bool all_passed() const { return failed() == 0; }
  int exit_status() const { return all_passed() ? 0 : 1; }

  std::string human() const;
  std::string machine() const;
  std::string render() const { return human() + machine(); }

 private:
  std::vector<ReportLine> lines_;
  std::vector<std::pair<std::string, std::string>> notes_;
};

}  // namespace bvlab
