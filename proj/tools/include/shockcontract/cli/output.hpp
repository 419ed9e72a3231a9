#pragma once

#include "shockcontract/types.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace shockcontract::cli {

/// Shortest round-trip formatting, so equal doubles print identically.
[[nodiscard]] std::string fmt(double x);
[[nodiscard]] std::string fmt(const Vector& v, const char* sep = ",");

/// A CSV table with '#'-prefixed metadata lines.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  void meta(const std::string& key, const std::string& value);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> meta_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

/// Writes to dir/name through a temporary file and rename.
void write_atomic(const std::string& dir, const std::string& name, const std::string& content);

/// Sends named CSV documents either to files under a directory or, when no
/// directory is configured, to the report stream one after another.
class Sink {
 public:
  Sink(std::ostream& report, std::string dir);

  [[nodiscard]] std::ostream& report() { return report_; }
  [[nodiscard]] bool to_files() const noexcept { return !dir_.empty(); }
  void emit(const std::string& name, const std::string& csv);

 private:
  std::ostream& report_;
  std::string dir_;
};

/// Worker count from the flag, else SHOCKCONTRACT_JOBS, else 1.
[[nodiscard]] int resolve_jobs(int flag);

/// Runs body(k) for k in [0, n) on `jobs` threads. Exceptions are rethrown
/// on the caller (the one with the smallest index wins).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

}  // namespace shockcontract::cli
