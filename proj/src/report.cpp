#include "bvlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace bvlab {
namespace {

std::string runtime(double seconds) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3fs", seconds);
  return buffer;
}

std::string sanitize(std::string value) {
  std::replace(value.begin(), value.end(), '\n', ' ');
  return value;
}

}  // namespace

void Report::append(const Report& other) {
  lines_.insert(lines_.end(), other.lines_.begin(), other.lines_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
}

std::size_t Report::passed() const {
  return static_cast<std::size_t>(std::count_if(lines_.begin(), lines_.end(), [](const auto& l) { return l.passed; }));
}

std::size_t Report::failed() const { return lines_.size() - passed(); }

std::string Report::human() const {
  std::ostringstream out;
  for (const auto& line : lines_) {
    out << (line.passed ? "[PASS] " : "[FAIL] ") << line.title << ": " << line.outcome << " (" << runtime(line.seconds)
        << ")\n";
    for (const auto& d : line.details) out << "       " << d << '\n';
  }
  out << "summary: " << passed() << " passed, " << failed() << " failed\n";
  return out.str();
}

std::string Report::machine() const {
  std::ostringstream out;
  out << "# machine\n";
  for (const auto& line : lines_) {
    out << line.key << ".status=" << (line.passed ? "pass" : "fail") << '\n';
    out << line.key << ".outcome=" << sanitize(line.outcome) << '\n';
    for (const auto& [k, v] : line.machine) out << line.key << '.' << k << '=' << sanitize(v) << '\n';
  }
  for (const auto& [k, v] : notes_) out << k << '=' << sanitize(v) << '\n';
  out << "summary.passed=" << passed() << '\n';
  out << "summary.failed=" << failed() << '\n';
  return out.str();
}

}  // namespace bvlab
