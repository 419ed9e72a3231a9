#include "shockcontract/cli/commands.hpp"

#include "shockcontract/cli/paper_checks.hpp"
#include "shockcontract/criterion.hpp"
#include "shockcontract/shock_curves.hpp"
#include "shockcontract/simulator.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace shockcontract::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> indexed(const std::string& prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index k = 1; k <= n; ++k) out.push_back(prefix + std::to_string(k));
  return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<double> values(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void common_meta(Table& t, const RunConfig& c) {
  if (c.system) t.meta("system", describe(*c.system));
  if (c.state) t.meta("state", fmt(*c.state));
  if (c.family) t.meta("family", std::to_string(*c.family));
  if (c.s) t.meta("s", fmt(*c.s));
  if (c.C) t.meta("C", fmt(*c.C));
}

Table matrix_table(const Matrix& m, const std::string& col_prefix) {
  Table t(concat({"row"}, indexed(col_prefix, m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> cells{std::to_string(i + 1)};
    for (Eigen::Index j = 0; j < m.cols(); ++j) cells.push_back(fmt(m(i, j)));
    t.row(cells);
  }
  return t;
}

ContractionContext context(const RunConfig& c) {
  return {c.require_system(), c.require_family(), c.require_state(), c.require_s(), c.require_C()};
}

}  // namespace

std::string describe(const SystemSpec& spec) {
  std::string out = spec.name + "(";
  bool first = true;
  for (const auto& [k, v] : spec.params) {
    out += (first ? "" : ",") + k + "=" + fmt(v);
    first = false;
  }
  return out + ")";
}

int run_eigen(const RunConfig& c, Sink& sink) {
  const auto sys = c.require_system();
  const State& u = c.require_state();
  const auto eig = eigenstructure(sys, u);
  const auto n = eig.eigenvalues.size();
  Table t(concat(concat({"family", "lambda", "kind", "g"}, indexed("r", n)), indexed("l", n)));
  common_meta(t, c);
  t.meta("min_gap", fmt(eig.min_gap));
  for (Eigen::Index k = 0; k < n; ++k) {
    std::vector<std::string> cells{std::to_string(k + 1), fmt(eig.eigenvalues(k)),
                                   eig.kinds[static_cast<std::size_t>(k)] == FamilyKind::GenuinelyNonlinear ? "GNL" : "LD",
                                   fmt(eig.gnl(k))};
    for (Eigen::Index j = 0; j < n; ++j) cells.push_back(fmt(eig.right(j, k)));
    for (Eigen::Index j = 0; j < n; ++j) cells.push_back(fmt(eig.left(k, j)));
    t.row(cells);
  }
  sink.emit("eigen.csv", t.str());
  return kExitOk;
}

int run_hugoniot(const RunConfig& c, Sink& sink) {
  const auto sys = c.require_system();
  const State& u = c.require_state();
  const Family i = c.require_family();
  if (!c.smax) throw Error(ErrorKind::ConfigError, "field 'smax': required");
  // Positive smax follows the Lax branch (s < 0 in curve coordinates).
  const auto curve = HugoniotCurve::trace(sys, u, i, -*c.smax);
  const auto n = u.size();
  Table t(concat(concat({"s"}, indexed("u_plus", n)), {"sigma", "rh_residual", "lax_margin"}));
  common_meta(t, c);
  t.meta("smax", fmt(*c.smax));
  t.meta("parameter", "s = l_i(u) . (u_plus - u); the Lax branch is s < 0");
  for (const auto& p : curve.samples()) {
    std::vector<std::string> row{fmt(p.s)};
    for (Eigen::Index k = 0; k < n; ++k) row.push_back(fmt(p.u_plus(k)));
    row.push_back(fmt(p.sigma));
    row.push_back(fmt(p.rh_residual));
    row.push_back(fmt(p.lax_margin));
    t.row(row);
  }
  sink.emit("hugoniot.csv", t.str());
  return kExitOk;
}

int run_dmax(const RunConfig& c, Sink& sink) {
  const auto ctx = context(c);
  const State at = c.at ? *c.at : ctx.u_L();
  if (at.size() != ctx.u_L().size()) throw Error(ErrorKind::ConfigError, "field 'at': dimension mismatch");
  const int jobs = resolve_jobs(c.jobs);

  // Sample states are drawn before any evaluation so the sweep does not
  // depend on the worker count.
  std::vector<State> points{at};
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < c.samples; ++k) {
    State p = at;
    for (Eigen::Index j = 0; j < p.size(); ++j) p(j) += c.radius * unit(rng);
    points.push_back(p);
  }

  std::vector<DmaxValue> results(points.size());
  std::vector<std::string> status(points.size(), "ok");
  parallel_for(points.size(), jobs, [&](std::size_t k) {
    try {
      results[k] = evaluate_d_max(ctx, points[k], 2);
    } catch (const Error& e) {
      if (k == 0) throw;
      status[k] = to_string(e.kind());
    }
  });

  const auto ms = maximal_shock(ctx, at, false);
  Table value({"quantity", "value"});
  common_meta(value, c);
  value.meta("at", fmt(at));
  value.meta("u_R", fmt(ctx.u_R()));
  value.meta("sigma_LR", fmt(ctx.sigma_LR()));
  value.row(std::vector<std::string>{"d_max", fmt(results[0].value)});
  value.row(std::vector<std::string>{"s_star", fmt(ms.s_star)});
  value.row(std::vector<std::string>{"sigma_pm", fmt(ms.sigma_pm)});
  for (Eigen::Index k = 0; k < ms.u_plus.size(); ++k) {
    value.row(std::vector<std::string>{"u_plus" + std::to_string(k + 1), fmt(ms.u_plus(k))});
  }
  sink.emit("dmax_value.csv", value.str());

  Table grad({"component", "value"});
  for (Eigen::Index k = 0; k < results[0].gradient.size(); ++k) {
    grad.row(std::vector<std::string>{std::to_string(k + 1), fmt(results[0].gradient(k))});
  }
  sink.emit("dmax_gradient.csv", grad.str());
  sink.emit("dmax_hessian.csv", matrix_table(results[0].hessian, "c").str());

  if (c.samples > 0) {
    const auto n = at.size();
    Table sweep(concat(concat({"k"}, indexed("u", n)), {"d_max", "grad_norm", "hess_lambda_max", "status"}));
    common_meta(sweep, c);
    sweep.meta("seed", std::to_string(c.seed));
    sweep.meta("radius", fmt(c.radius));
    for (std::size_t k = 1; k < points.size(); ++k) {
      std::vector<std::string> row{std::to_string(k)};
      for (Eigen::Index j = 0; j < n; ++j) row.push_back(fmt(points[k](j)));
      const bool ok = status[k] == "ok";
      row.push_back(fmt(ok ? results[k].value : kNaN));
      row.push_back(fmt(ok ? results[k].gradient.norm() : kNaN));
      row.push_back(fmt(ok ? Eigen::SelfAdjointEigenSolver<Matrix>(results[k].hessian).eigenvalues().maxCoeff() : kNaN));
      row.push_back(status[k]);
      sweep.row(row);
    }
    sink.emit("dmax_sweep.csv", sweep.str());
  }
  return kExitOk;
}

int run_criterion(const RunConfig& c, const CommandFlags& flags, Sink& sink) {
  const auto sys = c.require_system();
  const State& u = c.require_state();
  const Family i = c.require_family();
  if (!flags.scan && !c.C) throw Error(ErrorKind::ConfigError, "criterion needs --C or --scan");
  const auto data = criterion_data(sys, u, i);
  auto& out = sink.report();
  int code = kExitOk;

  out << "# criterion " << describe(*c.system) << " state " << fmt(u) << " family " << i.index << '\n';
  for (const auto& [name, m] : {std::pair{"A_hat", data.restricted_A()}, std::pair{"B_hat", data.restricted_B()}}) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) out << "# " << name << " row " << r + 1 << ": " << fmt(Vector(m.row(r).transpose()), ", ") << '\n';
  }

  if (c.C) {
    const auto verdict = necessary_check(data, *c.C);
    out << "# C: " << fmt(*c.C) << '\n'
        << "# lambda_max: " << fmt(verdict.lambda_max) << '\n'
        << "# tolerance: " << fmt(verdict.tolerance) << '\n'
        << "# necessary condition: " << (verdict.pass ? "PASS" : "FAIL") << '\n';
    if (!verdict.pass) {
      out << "# positive direction: " << fmt(verdict.witness) << '\n';
      code = kExitVerdictFail;
    }
    Table m = matrix_table(data.restricted(*c.C), "c");
    common_meta(m, c);
    sink.emit("restricted_matrix.csv", m.str());
  }

  if (flags.scan) {
    const auto rep = feasibility(data);
    out << "# feasible: " << (rep.feasible ? "yes" : "no") << '\n';
    if (rep.feasible) {
      out << "# interval: (" << fmt(rep.c_lo) << ", " << fmt(rep.c_hi) << ")\n";
    } else {
      out << "# certified: " << (rep.certified ? "yes" : "no") << '\n'
          << "# v_left: " << fmt(rep.v_left) << '\n'
          << "# v_right: " << fmt(rep.v_right) << '\n';
      code = kExitVerdictFail;
    }
    out << "# best C: " << fmt(rep.c_best) << " lambda_max " << fmt(rep.lambda_best) << '\n'
        << "# search bracket: [" << fmt(-rep.bracket) << ", " << fmt(rep.bracket) << "]\n";

    const Grid g = c.C_scan ? *c.C_scan : Grid{-10.0, 10.0, 401};
    const auto Cs = g.points();
    std::vector<double> lam(Cs.size());
    parallel_for(Cs.size(), resolve_jobs(c.jobs), [&](std::size_t k) { lam[k] = data.lambda_max(Cs[k]); });
    Table t({"C", "lambda_max"});
    common_meta(t, c);
    t.meta("feasible", rep.feasible ? "yes" : "no");
    if (rep.feasible) {
      t.meta("c_lo", fmt(rep.c_lo));
      t.meta("c_hi", fmt(rep.c_hi));
    }
    for (std::size_t k = 0; k < Cs.size(); ++k) t.row({Cs[k], lam[k]});
    sink.emit("criterion_scan.csv", t.str());
  }
  return code;
}

int run_limit_check(const RunConfig& c, Sink& sink) {
  const auto sys = c.require_system();
  const State& u = c.require_state();
  const Family i = c.require_family();
  const double C = c.require_C();
  const std::vector<double> s_list = c.s_list.empty() ? std::vector<double>{1e-2, 5e-3, 2.5e-3} : c.s_list;
  const auto data = criterion_data(sys, u, i);

  std::vector<ConvergenceRow> rows(s_list.size());
  parallel_for(s_list.size(), resolve_jobs(c.jobs),
               [&](std::size_t k) { rows[k] = limit_convergence(sys, u, i, C, {s_list[k]}).front(); });

  Table t({"s", "block_error", "ratio", "ii_entry", "ii_limit", "ii_error", "mixed"});
  common_meta(t, c);
  bool pass = true;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double ratio = k ? rows[k - 1].block_error / rows[k].block_error : kNaN;
    // Each halving of s should roughly halve the error (first order).
    const double refine = k ? s_list[k - 1] / s_list[k] : 1.0;
    if (k && std::abs(refine - 2.0) < 1e-12) pass = pass && ratio >= 1.5 && ratio <= 2.5;
    if (k && refine > 1.0) pass = pass && rows[k].block_error < rows[k - 1].block_error;
    t.row({rows[k].s, rows[k].block_error, ratio, rows[k].ii_entry, data.ii_limit, rows[k].ii_error, rows[k].mixed});
  }
  sink.emit("limit_check.csv", t.str());
  sink.report() << "# limit convergence: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitVerdictFail;
}

int run_counterexample(const RunConfig& c, Sink& sink) {
  const auto ctx = context(c);
  if (!c.delta) throw Error(ErrorKind::ConfigError, "field 'delta': required");
  Counterexample cx;
  try {
    cx = find_counterexample(ctx, *c.delta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoPositiveDirection) throw;
    sink.report() << "# no counterexample: " << e.what() << '\n';
    return kExitVerdictFail;
  }
  auto& out = sink.report();
  out << "# counterexample " << describe(*c.system) << " delta " << fmt(*c.delta) << '\n'
      << "# sigma: " << fmt(cx.sigma) << '\n'
      << "# d_rh: " << fmt(cx.d_rh) << '\n'
      << "# t: " << fmt(cx.t) << '\n'
      << "# rh_residual: " << fmt(cx.rh_residual) << '\n'
      << "# distance: " << fmt(cx.distance) << '\n'
      << "# hessian_model: " << fmt(cx.hessian_model) << '\n'
      << "# limit_model: " << fmt(cx.limit_model) << '\n';

  const auto n = cx.u_minus.size();
  Table pair(concat({"state"}, indexed("c", n)));
  common_meta(pair, c);
  pair.meta("delta", fmt(*c.delta));
  pair.meta("sigma", fmt(cx.sigma));
  pair.meta("d_rh", fmt(cx.d_rh));
  auto add = [&](const std::string& name, const Vector& v) {
    std::vector<std::string> row{name};
    for (double x : values(v)) row.push_back(fmt(x));
    pair.row(row);
  };
  add("u_minus", cx.u_minus);
  add("u_plus", cx.u_plus);
  add("u_L", ctx.u_L());
  add("u_R", ctx.u_R());
  add("direction", cx.direction);
  sink.emit("counterexample.csv", pair.str());

  Table refine({"t", "d_rh", "ratio"});
  common_meta(refine, c);
  for (const auto& st : cx.refinement) refine.row({st.t, st.d_rh, st.ratio});
  sink.emit("counterexample_refinement.csv", refine.str());
  return cx.d_rh > 0.0 ? kExitOk : kExitVerdictFail;
}

int run_simulate(const RunConfig& c, Sink& sink) {
  if (!c.sim) throw Error(ErrorKind::ConfigError, "field 'sim': required");
  const auto ctx = context(c);
  const SimBlock& b = *c.sim;

  SimConfig sc(ctx);
  sc.cells = b.cells;
  sc.x_lo = b.x_lo;
  sc.x_hi = b.x_hi;
  sc.cfl = b.cfl;
  sc.t_end = b.t_end;
  sc.plateau = b.plateau;
  sc.ramp = b.ramp;
  sc.trace_offset = b.trace_offset;
  sc.record_every = b.record_every;
  sc.snapshot_times = b.snapshot_times;
  sc.monotonicity_tolerance = b.monotonicity_tolerance;
  if (b.initial == "corollary") {
    sc.initial = InitialKind::CorollaryPair;
    sc.u_minus = b.u_minus ? *b.u_minus : State(ctx.u_L() + *b.corollary_t * *b.direction);
    sc.u_plus = b.u_plus ? *b.u_plus : maximal_shock(ctx, sc.u_minus, false).u_plus;
  }
  const auto r = run(sc);

  Table t({"t", "E", "h", "dE_dt", "dist_minus", "dist_plus", "d_rh_traces"});
  common_meta(t, c);
  t.meta("cells", std::to_string(b.cells));
  t.meta("domain", "[" + fmt(b.x_lo) + ", " + fmt(b.x_hi) + "]");
  t.meta("initial", b.initial);
  if (sc.initial == InitialKind::CorollaryPair) {
    t.meta("u_minus", fmt(sc.u_minus));
    t.meta("u_plus", fmt(sc.u_plus));
  }
  t.meta("steps", std::to_string(r.steps));
  t.meta("conservation_defect", fmt(r.conservation_defect));
  t.meta("entropy_production_max", fmt(r.entropy_production_max));
  t.meta("max_rise", fmt(r.max_rise));
  t.meta("non_increasing", r.non_increasing ? "yes" : "no");
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.row({r.times[k], r.E[k], r.h[k], r.dE_dt[k], (r.trace_minus[k] - ctx.u_L()).norm(),
           (r.trace_plus[k] - ctx.u_R()).norm(), r.d_rh_traces[k]});
  }
  sink.emit("simulate.csv", t.str());

  for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
    const auto& snap = r.snapshots[k];
    const auto n = ctx.u_L().size();
    Table s(concat({"x"}, indexed("u", n)));
    common_meta(s, c);
    s.meta("t", fmt(snap.t));
    for (std::size_t j = 0; j < snap.cells.size(); ++j) {
      std::vector<double> row{r.x[j]};
      for (double x : values(snap.cells[j])) row.push_back(x);
      s.row(row);
    }
    std::ostringstream name;
    name << "snapshot_" << std::setw(3) << std::setfill('0') << k << ".csv";
    sink.emit(name.str(), s.str());
  }
  sink.report() << "# E(0) " << fmt(r.E.front()) << " E(end) " << fmt(r.E.back()) << " max rise " << fmt(r.max_rise)
                << '\n';
  return kExitOk;
}

int run_reproduce(const RunConfig& c, Sink& sink) {
  const auto rows = paper_checks(resolve_jobs(c.jobs));
  Table t({"check", "result", "detail"});
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    t.row(std::vector<std::string>{r.name, r.pass ? "PASS" : "FAIL", "\"" + r.detail + "\""});
  }
  sink.emit("reproduce.csv", t.str());
  auto& out = sink.report();
  if (sink.to_files()) {
    for (const auto& r : rows) out << (r.pass ? "PASS " : "FAIL ") << r.name << " | " << r.detail << '\n';
  }
  return all ? kExitOk : kExitVerdictFail;
}

}  // namespace shockcontract::cli
