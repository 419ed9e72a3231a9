#pragma once

#include "shockcontract/dissipation.hpp"

#include <functional>
#include <vector>

namespace shockcontract {

enum class InitialKind {
  /// Riemann data u_L | u_R at x = 0.
  ExactShock,
  /// u_L | ramp | u_minus | u_plus | ramp | u_R with the jump at x = 0.
  CorollaryPair,
  /// Any profile x -> u(x).
  Custom,
};

struct SimConfig {
  explicit SimConfig(ContractionContext ctx) : context(std::move(ctx)) {}

  ContractionContext context;
  int cells = 1000;
  double x_lo = -8.0;
  double x_hi = 8.0;
  double cfl = 0.45;
  double t_end = 1.0;

  InitialKind initial = InitialKind::ExactShock;
  State u_minus;
  State u_plus;
  /// Plateau width of u_minus and u_plus next to the jump.
  double plateau = 1.0;
  /// Width of each smooth (cubic) transition.
  double ramp = 1.0;
  std::function<State(double)> profile;
  /// Discontinuities of `profile`, used to split quadrature cells.
  std::vector<double> breakpoints;

  /// Traces are read this many cells away from the cell containing h.
  int trace_offset = 3;
  /// Record every k-th step (the last step is always recorded).
  int record_every = 1;
  std::vector<double> snapshot_times;
  /// Allowed rise of E for the non-increasing verdict.
  double monotonicity_tolerance = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<State> cells;
};

struct SimResult {
  std::vector<double> x;  // cell centres
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> h;
  /// Forward difference of E between consecutive records.
  std::vector<double> dE_dt;
  std::vector<State> trace_minus;
  std::vector<State> trace_plus;
  /// D_RH evaluated on the traces with the speed used for h.
  std::vector<double> d_rh_traces;
  std::vector<Snapshot> snapshots;
  std::vector<State> final_cells;
  long steps = 0;

  /// Largest per-step defect of the conservation balance (max norm).
  double conservation_defect = 0.0;
  /// Largest per-step increase of total entropy net of boundary fluxes.
  double entropy_production_max = 0.0;
  /// max_t [E(t) - min_{s <= t} E(s)].
  double max_rise = 0.0;
  double tolerance = 0.0;
  bool non_increasing = false;
};

/// Cell averages of the configured initial data (3-point Gauss per piece,
/// cells split at every breakpoint).
[[nodiscard]] std::vector<State> build_initial_data(const SimConfig& config);

/// Weighted pseudo-distance a int_{x<h} eta(u|u_L) + int_{x>h} eta(u|u_R);
/// the cell containing h is split using a minmod-limited linear reconstruction.
[[nodiscard]] double pseudo_distance(const ContractionContext& ctx, const std::vector<State>& cells,
                                     double x_lo, double dx, double h);

/// First-order finite-volume run with an HLL flux, tracking h(t) by the
/// i-th averaged-matrix speed of the traces.
[[nodiscard]] SimResult run(const SimConfig& config);

/// Least-squares slope of E over records with t in [t0, t1].
[[nodiscard]] double fitted_slope(const SimResult& result, double t0, double t1);

}  // namespace shockcontract
