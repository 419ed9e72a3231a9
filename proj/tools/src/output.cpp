#include "shockcontract/cli/output.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace shockcontract::cli {

namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

std::string fmt(const Vector& v, const char* sep) {
  std::string out;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k) out += sep;
    out += fmt(v(k));
  }
  return out;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void Table::meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }

void Table::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(fmt(v));
  row(cells);
}

void Table::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) {
    throw Error(ErrorKind::BadParameter, "row has " + std::to_string(cells.size()) + " cells, table has " +
                                             std::to_string(columns_.size()) + " columns");
  }
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += cells[k];
  }
  rows_.push_back(std::move(line));
}

std::string Table::str() const {
  std::ostringstream out;
  for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << '\n';
  for (std::size_t k = 0; k < columns_.size(); ++k) out << (k ? "," : "") << columns_[k];
  out << '\n';
  for (const auto& r : rows_) out << r << '\n';
  return out.str();
}

void write_atomic(const std::string& dir, const std::string& name, const std::string& content) {
  const fs::path target = fs::path(dir) / name;
  fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::ConfigError, "short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

Sink::Sink(std::ostream& report, std::string dir) : report_(report), dir_(std::move(dir)) {}

void Sink::emit(const std::string& name, const std::string& csv) {
  if (dir_.empty()) {
    report_ << "# --- " << name << '\n' << csv;
    return;
  }
  write_atomic(dir_, name, csv);
  report_ << "# wrote " << (fs::path(dir_) / name).string() << '\n';
}

int resolve_jobs(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("SHOCKCONTRACT_JOBS")) {
    int value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, value);
    if (res.ec != std::errc{} || res.ptr != end || value < 1) {
      throw Error(ErrorKind::ConfigError, std::string("SHOCKCONTRACT_JOBS must be a positive integer, got '") + env + "'");
    }
    return value;
  }
  return 1;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t k = 0; k < n; ++k) body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n; k = next++) {
          try {
            body(k);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace shockcontract::cli
