#pragma once

#include "shockcontract/system.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace shockcontract::cli {

inline constexpr int kConfigVersion = 1;

/// Inclusive uniform grid lo, ..., hi with `count` points.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  [[nodiscard]] std::vector<double> points() const;
};

struct SimBlock {
  int cells = 1000;
  double x_lo = -8.0;
  double x_hi = 8.0;
  double cfl = 0.45;
  double t_end = 1.0;
  /// "exact" (u_L | u_R) or "corollary" (plateau/ramp layout).
  std::string initial = "exact";
  std::optional<State> u_minus;
  std::optional<State> u_plus;
  /// Alternative to u_minus: u_L + t * direction, u_plus from the maximal shock.
  std::optional<double> corollary_t;
  std::optional<Vector> direction;
  double plateau = 1.0;
  double ramp = 1.0;
  int trace_offset = 3;
  int record_every = 1;
  std::vector<double> snapshot_times;
  double monotonicity_tolerance = 0.0;
};

/// Shared configuration of every subcommand. Fields are optional where a
/// subcommand may or may not need them; `require_*` enforce presence.
struct RunConfig {
  int version = kConfigVersion;
  std::optional<SystemSpec> system;
  std::optional<State> state;
  std::optional<int> family;
  std::optional<double> s;
  std::vector<double> s_list;
  std::optional<double> C;
  std::optional<Grid> C_scan;
  std::optional<double> delta;
  std::optional<double> smax;
  std::optional<State> at;
  int samples = 0;
  double radius = 1e-2;
  std::optional<SimBlock> sim;
  std::string output_dir;
  std::uint64_t seed = 0;
  int jobs = 0;

  [[nodiscard]] HyperbolicSystem require_system() const;
  [[nodiscard]] const State& require_state() const;
  [[nodiscard]] Family require_family() const;
  [[nodiscard]] double require_s() const;
  [[nodiscard]] double require_C() const;
};

/// Parses a JSON document. Throws ConfigError with a line number for syntax
/// errors and the dotted field name for type or range errors.
[[nodiscard]] RunConfig parse_run_config(const std::string& text);
[[nodiscard]] RunConfig load_run_config(const std::string& path);

/// Checks invariants that do not depend on the subcommand: finite numbers,
/// sorted nonempty scan lists, known built-in, state dimension.
void validate(const RunConfig& config);

}  // namespace shockcontract::cli
