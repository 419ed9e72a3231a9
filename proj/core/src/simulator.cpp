#include "shockcontract/simulator.hpp"

#include "shockcontract/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace shockcontract {

namespace {

double smoothstep(double xi) { return xi * xi * (3.0 - 2.0 * xi); }

Vector sorted_speeds(const Matrix& J) {
  if (J.isApprox(J.transpose(), 0.0)) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(J, Eigen::EigenvaluesOnly).eigenvalues();
  }
  const Eigen::EigenSolver<Matrix> solver(J, false);
  const auto& ev = solver.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  Vector out(ev.size());
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k).imag()) > 1e-10 * scale) {
      throw Error(ErrorKind::ComplexSpectrum, "non-real speed during time stepping");
    }
    out(k) = ev(k).real();
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Profile {
  std::function<State(double)> u;
  std::vector<double> breaks;
};

Profile make_profile(const SimConfig& c) {
  const auto& ctx = c.context;
  const State uL = ctx.u_L(), uR = ctx.u_R();
  switch (c.initial) {
    case InitialKind::ExactShock:
      return {[uL, uR](double x) { return x < 0.0 ? uL : uR; }, {0.0}};
    case InitialKind::CorollaryPair: {
      const double P = c.plateau, R = c.ramp;
      if (!(P > 0.0) || !(R > 0.0)) throw Error(ErrorKind::BadLayout, "plateau and ramp widths must be positive");
      if (c.u_minus.size() != uL.size() || c.u_plus.size() != uL.size()) {
        throw Error(ErrorKind::BadLayout, "corollary pair needs u_minus and u_plus");
      }
      const State um = c.u_minus, up = c.u_plus;
      auto u = [=](double x) -> State {
        if (x < -(P + R)) return uL;
        if (x <= -P) return uL + smoothstep((x + P + R) / R) * (um - uL);
        if (x < 0.0) return um;
        if (x < P) return up;
        if (x <= P + R) return up + smoothstep((x - P) / R) * (uR - up);
        return uR;
      };
      return {u, {-(P + R), -P, 0.0, P, P + R}};
    }
    case InitialKind::Custom:
      if (!c.profile) throw Error(ErrorKind::BadLayout, "custom initial data needs a profile");
      return {c.profile, c.breakpoints};
  }
  throw Error(ErrorKind::BadLayout, "unknown initial data kind");
}

void validate(const SimConfig& c) {
  if (c.cells < 100) throw Error(ErrorKind::BadParameter, "at least 100 cells are required");
  if (!(c.x_hi > c.x_lo)) throw Error(ErrorKind::BadLayout, "empty spatial domain");
  if (!(c.cfl > 0.0 && c.cfl < 1.0)) throw Error(ErrorKind::CFLViolation, "cfl must lie in (0, 1)");
  if (!(c.t_end > 0.0) || !std::isfinite(c.t_end)) throw Error(ErrorKind::BadParameter, "t_end must be positive");
  if (c.trace_offset < 0 || c.record_every < 1) throw Error(ErrorKind::BadParameter, "bad trace offset or record stride");
  if (c.initial == InitialKind::CorollaryPair) {
    const double reach = c.plateau + c.ramp;
    if (-reach <= c.x_lo || reach >= c.x_hi) {
      throw Error(ErrorKind::BadLayout, "perturbation layout does not fit in the domain");
    }
  }
}

Vector hll(const State& a, const State& b, const Vector& fa,
           const Vector& fb, const Vector& sa, const Vector& sb) {
  const double sl = std::min(sa(0), sb(0));
  const double sr = std::max(sa(sa.size() - 1), sb(sb.size() - 1));
  if (sl >= 0.0) return fa;
  if (sr <= 0.0) return fb;
  return (sr * fa - sl * fb + sl * sr * (b - a)) / (sr - sl);
}

}  // namespace

std::vector<State> build_initial_data(const SimConfig& config) {
  validate(config);
  const Profile prof = make_profile(config);
  const auto& sys = config.context.system();
  const double dx = (config.x_hi - config.x_lo) / config.cells;
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(config.cells));
  for (int j = 0; j < config.cells; ++j) {
    const double a = config.x_lo + j * dx, b = a + dx;
    std::vector<double> cuts = {a};
    for (const double p : prof.breaks) {
      if (p > a && p < b) cuts.push_back(p);
    }
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    State avg = State::Zero(sys.dimension());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      const double lo = cuts[k], len = cuts[k + 1] - cuts[k];
      for (const auto& node : numerics::unit_gauss3()) avg += (node.w * len) * prof.u(lo + node.x * len);
    }
    avg /= dx;
    if (!sys.contains(avg)) throw Error(ErrorKind::DomainViolation, "initial cell average outside the domain");
    out.push_back(std::move(avg));
  }
  return out;
}

double pseudo_distance(const ContractionContext& ctx, const std::vector<State>& cells, double x_lo,
                       double dx, double h) {
  const auto& sys = ctx.system();
  const double a = ctx.weight();
  const long n = static_cast<long>(cells.size());
  const long jh = std::clamp(static_cast<long>(std::floor((h - x_lo) / dx)), 0L, n - 1);
  double left = 0.0, right = 0.0;
  for (long j = 0; j < jh; ++j) left += relative_entropy(sys, cells[static_cast<std::size_t>(j)], ctx.u_L());
  for (long j = jh + 1; j < n; ++j) right += relative_entropy(sys, cells[static_cast<std::size_t>(j)], ctx.u_R());
  double E = (a * left + right) * dx;

  // Minmod slope: exact for linear data, flat next to a jump, so an exact
  // shock sitting on a cell face gives E = 0.
  const State& uj = cells[static_cast<std::size_t>(jh)];
  const State& um = cells[static_cast<std::size_t>(std::max(jh - 1, 0L))];
  const State& up = cells[static_cast<std::size_t>(std::min(jh + 1, n - 1))];
  Vector slope = Vector::Zero(uj.size());
  for (Eigen::Index k = 0; k < slope.size(); ++k) {
    const double dl = uj(k) - um(k), dr = up(k) - uj(k);
    if (dl * dr > 0.0) slope(k) = (dl > 0.0 ? 1.0 : -1.0) * std::min(std::abs(dl), std::abs(dr)) / dx;
  }
  const double xl = x_lo + static_cast<double>(jh) * dx, xc = xl + 0.5 * dx, xr = xl + dx;
  const double cut = std::clamp(h, xl, xr);
  const auto recon = [&](double x) -> State {
    State v = uj + (x - xc) * slope;
    return sys.contains(v) ? v : uj;
  };
  for (const auto& node : numerics::unit_gauss3()) {
    const double wl = cut - xl, wr = xr - cut;
    if (wl > 0.0) E += node.w * wl * a * relative_entropy(sys, recon(xl + node.x * wl), ctx.u_L());
    if (wr > 0.0) E += node.w * wr * relative_entropy(sys, recon(cut + node.x * wr), ctx.u_R());
  }
  return E;
}

SimResult run(const SimConfig& config) {
  std::vector<State> U = build_initial_data(config);
  const auto& ctx = config.context;
  const auto& sys = ctx.system();
  const int N = config.cells;
  const auto n = static_cast<Eigen::Index>(sys.dimension());
  const double dx = (config.x_hi - config.x_lo) / N;
  const std::size_t fam = ctx.family().slot();

  SimResult res;
  res.x.resize(static_cast<std::size_t>(N));
  for (int j = 0; j < N; ++j) res.x[static_cast<std::size_t>(j)] = config.x_lo + (j + 0.5) * dx;

  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  while (next_snap < snaps.size() && snaps[next_snap] <= 0.0) {
    res.snapshots.push_back({0.0, U});
    ++next_snap;
  }

  double t = 0.0, h = 0.0;
  const auto traces = [&](double hh) {
    const long jh = static_cast<long>(std::floor((hh - config.x_lo) / dx));
    const long jl = jh - config.trace_offset, jr = jh + config.trace_offset;
    if (jl < 0 || jr >= N) throw Error(ErrorKind::TraceAmbiguity, "trace cells fall outside the grid");
    return std::pair<State, State>{U[static_cast<std::size_t>(jl)], U[static_cast<std::size_t>(jr)]};
  };
  const auto trace_speed = [&](const State& a, const State& b) {
    return sorted_speeds(averaged_matrix(sys, a, b))(static_cast<Eigen::Index>(fam));
  };
  const auto record = [&](double tt, double hh) {
    const auto [um, up] = traces(hh);
    const double sig = trace_speed(um, up);
    res.times.push_back(tt);
    res.h.push_back(hh);
    res.E.push_back(pseudo_distance(ctx, U, config.x_lo, dx, hh));
    res.trace_minus.push_back(um);
    res.trace_plus.push_back(up);
    res.d_rh_traces.push_back(d_rh(ctx, um, up, sig));
  };
  record(0.0, 0.0);

  std::vector<Vector> F(static_cast<std::size_t>(N)), S(static_cast<std::size_t>(N));
  std::vector<Vector> G(static_cast<std::size_t>(N + 1));
  std::vector<State> next(static_cast<std::size_t>(N));
  long step = 0;
  while (t < config.t_end) {
    double amax = 0.0;
    for (int j = 0; j < N; ++j) {
      const auto J = static_cast<std::size_t>(j);
      F[J] = sys.flux(U[J]);
      S[J] = sorted_speeds(sys.flux_jacobian(U[J]));
      amax = std::max({amax, std::abs(S[J](0)), std::abs(S[J](n - 1))});
    }
    if (!std::isfinite(amax)) throw Error(ErrorKind::DomainExit, "non-finite wave speed");
    double dt = amax > 0.0 ? config.cfl * dx / amax : config.t_end - t;
    bool snap_now = false;
    if (next_snap < snaps.size() && t + dt >= snaps[next_snap]) {
      dt = snaps[next_snap] - t;
      snap_now = true;
    }
    bool last = false;
    if (t + dt >= config.t_end) {
      dt = config.t_end - t;
      last = true;
    }
    if (!(dt > 0.0)) break;

    // Interfaces 0..N with constant extrapolation at both ends.
    G[0] = F[0];
    G[static_cast<std::size_t>(N)] = F[static_cast<std::size_t>(N - 1)];
    for (int j = 1; j < N; ++j) {
      const auto a = static_cast<std::size_t>(j - 1), b = static_cast<std::size_t>(j);
      G[b] = hll(U[a], U[b], F[a], F[b], S[a], S[b]);
    }
    Vector mass_change = Vector::Zero(n);
    double entropy_change = 0.0;
    for (int j = 0; j < N; ++j) {
      const auto J = static_cast<std::size_t>(j);
      next[J] = U[J] - (dt / dx) * (G[J + 1] - G[J]);
      if (!sys.contains(next[J]) || !next[J].allFinite()) {
        throw Error(ErrorKind::DomainExit, "solution left the domain at t = " + std::to_string(t));
      }
      mass_change += (next[J] - U[J]) * dx;
      entropy_change += (sys.entropy(next[J]) - sys.entropy(U[J])) * dx;
    }
    const Vector boundary = dt * (G[static_cast<std::size_t>(N)] - G[0]);
    res.conservation_defect =
        std::max(res.conservation_defect, (mass_change + boundary).lpNorm<Eigen::Infinity>());
    const double q_out = dt * (sys.entropy_flux(U.back()) - sys.entropy_flux(U.front()));
    res.entropy_production_max = std::max(res.entropy_production_max, entropy_change + q_out);

    const auto [um, up] = traces(h);
    h += dt * trace_speed(um, up);
    U.swap(next);
    t += dt;
    ++step;

    if (snap_now) {
      res.snapshots.push_back({t, U});
      ++next_snap;
    }
    if (last || step % config.record_every == 0) record(t, h);
    if (last) break;
  }
  res.steps = step;
  res.final_cells = U;

  for (std::size_t k = 0; k + 1 < res.times.size(); ++k) {
    res.dE_dt.push_back((res.E[k + 1] - res.E[k]) / (res.times[k + 1] - res.times[k]));
  }
  res.dE_dt.push_back(res.dE_dt.empty() ? 0.0 : res.dE_dt.back());

  double running_min = std::numeric_limits<double>::infinity();
  for (const double e : res.E) {
    running_min = std::min(running_min, e);
    res.max_rise = std::max(res.max_rise, e - running_min);
  }
  res.tolerance = config.monotonicity_tolerance;
  res.non_increasing = res.max_rise <= res.tolerance;
  return res;
}

double fitted_slope(const SimResult& result, double t0, double t1) {
  double st = 0.0, se = 0.0, stt = 0.0, ste = 0.0;
  int m = 0;
  for (std::size_t k = 0; k < result.times.size(); ++k) {
    const double t = result.times[k];
    if (t < t0 || t > t1) continue;
    st += t;
    se += result.E[k];
    stt += t * t;
    ste += t * result.E[k];
    ++m;
  }
  if (m < 2) throw Error(ErrorKind::BadParameter, "fewer than two records in the fit window");
  const double den = m * stt - st * st;
  return (m * ste - st * se) / den;
}

}  // namespace shockcontract
