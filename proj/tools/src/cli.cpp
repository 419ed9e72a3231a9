#include "shockcontract/cli/cli.hpp"

#include "shockcontract/cli/commands.hpp"
#include "shockcontract/system_config.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace shockcontract::cli {

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> system;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> gamma;
  std::vector<std::string> params;
  std::optional<std::string> state;
  std::optional<int> family;
  std::optional<double> s;
  std::optional<double> C;
  bool scan = false;
  std::optional<double> c_min;
  std::optional<double> c_max;
  std::optional<int> c_count;
  std::optional<std::string> s_list;
  std::optional<double> delta;
  std::optional<double> smax;
  std::optional<std::string> at;
  std::optional<int> samples;
  std::optional<double> radius;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
};

void add_system_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration; flags override its fields");
  sub->add_option("--system", f.system, "built-in system: burgers, p_system, example3x3, mhd2d");
  sub->add_option("--alpha", f.alpha, "example3x3 coupling");
  sub->add_option("--beta", f.beta, "mhd2d transverse field");
  sub->add_option("--gamma", f.gamma, "pressure exponent (p_system, mhd2d)");
  sub->add_option("--param", f.params, "extra system parameter name=value (repeatable)");
  sub->add_option("--out", f.out, "output directory; CSV goes to stdout when absent");
  sub->add_option("--jobs", f.jobs, "worker threads (default: SHOCKCONTRACT_JOBS or 1)");
}

void add_state_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--state", f.state, "base state u_L, comma separated");
  sub->add_option("--family", f.family, "characteristic family i (1-based)");
}

void add_shock_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--s", f.s, "shock strength s > 0");
  sub->add_option("--C", f.C, "weight slope, a = 1 + C s");
}

std::vector<double> parse_list(const std::string& text) {
  const Vector v = parse_state(text);
  return {v.data(), v.data() + v.size()};
}

void apply_param(SystemSpec& spec, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::ConfigError, "--param expects name=value, got '" + kv + "'");
  const std::string value = kv.substr(eq + 1);
  double x = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), x);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw Error(ErrorKind::ConfigError, "--param " + kv + ": value is not a number");
  }
  spec.params[kv.substr(0, eq)] = x;
}

RunConfig assemble(const Flags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : load_run_config(f.config);

  if (f.system) c.system = SystemSpec{*f.system, {}};
  const bool any_param = f.alpha || f.beta || f.gamma || !f.params.empty();
  if (any_param && !c.system) throw Error(ErrorKind::ConfigError, "system parameters given without --system");
  if (f.alpha) c.system->params["alpha"] = *f.alpha;
  if (f.beta) c.system->params["beta"] = *f.beta;
  if (f.gamma) c.system->params["gamma"] = *f.gamma;
  for (const auto& kv : f.params) apply_param(*c.system, kv);

  auto vec = [](const std::string& flag, const std::string& text) {
    try {
      return parse_state(text);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigError, flag + ": " + e.what());
    }
  };
  if (f.state) c.state = vec("--state", *f.state);
  if (f.at) c.at = vec("--at", *f.at);
  if (f.s_list) c.s_list = parse_list(*f.s_list);
  if (f.family) c.family = *f.family;
  if (f.s) c.s = *f.s;
  if (f.C) c.C = *f.C;
  if (f.delta) c.delta = *f.delta;
  if (f.smax) c.smax = *f.smax;
  if (f.samples) c.samples = *f.samples;
  if (f.radius) c.radius = *f.radius;
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output_dir = *f.out;
  if (f.jobs) c.jobs = *f.jobs;
  if (f.c_min || f.c_max || f.c_count) {
    Grid g = c.C_scan ? *c.C_scan : Grid{-10.0, 10.0, 401};
    if (f.c_min) g.lo = *f.c_min;
    if (f.c_max) g.hi = *f.c_max;
    if (f.c_count) g.count = *f.c_count;
    c.C_scan = g;
  }
  return c;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Small-shock a-contraction analysis for 1-D hyperbolic systems", "shockcontract"};
  app.require_subcommand(1);
  Flags f;
  std::map<const CLI::App*, std::function<int(const RunConfig&, Sink&)>> actions;

  auto* eigen = app.add_subcommand("eigen", "sorted eigenstructure of f'(u)");
  add_system_flags(eigen, f);
  add_state_flags(eigen, f);
  actions[eigen] = run_eigen;

  auto* hug = app.add_subcommand("hugoniot", "trace an i-shock curve");
  add_system_flags(hug, f);
  add_state_flags(hug, f);
  hug->add_option("--smax", f.smax, "curve length; positive follows the Lax branch");
  actions[hug] = run_hugoniot;

  auto* dmax = app.add_subcommand("dmax", "D_max with gradient and Hessian");
  add_system_flags(dmax, f);
  add_state_flags(dmax, f);
  add_shock_flags(dmax, f);
  dmax->add_option("--at", f.at, "evaluation state (default: u_L)");
  dmax->add_option("--samples", f.samples, "additional random states around --at");
  dmax->add_option("--radius", f.radius, "half-width of the sampling box");
  dmax->add_option("--seed", f.seed, "sampling seed");
  actions[dmax] = run_dmax;

  auto* crit = app.add_subcommand("criterion", "definiteness criterion at u_L");
  add_system_flags(crit, f);
  add_state_flags(crit, f);
  crit->add_option("--C", f.C, "check the necessary condition at this slope");
  crit->add_flag("--scan", f.scan, "find the feasible C interval and tabulate lambda_max");
  crit->add_option("--c-min", f.c_min, "scan grid start");
  crit->add_option("--c-max", f.c_max, "scan grid end");
  crit->add_option("--c-count", f.c_count, "scan grid points");
  CommandFlags cflags;
  actions[crit] = [&](const RunConfig& c, Sink& sink) {
    cflags.scan = f.scan;
    return run_criterion(c, cflags, sink);
  };

  auto* lim = app.add_subcommand("limit-check", "convergence of the scaled Hessian to the limit matrix");
  add_system_flags(lim, f);
  add_state_flags(lim, f);
  lim->add_option("--C", f.C, "weight slope");
  lim->add_option("--s-list", f.s_list, "shock strengths, comma separated");
  actions[lim] = run_limit_check;

  auto* cex = app.add_subcommand("counterexample", "construct a shock pair with positive D_RH");
  add_system_flags(cex, f);
  add_state_flags(cex, f);
  add_shock_flags(cex, f);
  cex->add_option("--delta", f.delta, "distance budget");
  actions[cex] = run_counterexample;

  auto* sim = app.add_subcommand("simulate", "finite-volume run measuring E(t)");
  add_system_flags(sim, f);
  add_state_flags(sim, f);
  add_shock_flags(sim, f);
  actions[sim] = run_simulate;

  auto* rep = app.add_subcommand("reproduce-paper", "closed-form regression table");
  rep->add_option("--out", f.out, "output directory");
  rep->add_option("--jobs", f.jobs, "worker threads");
  actions[rep] = run_reproduce;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    if (chosen == sim && f.config.empty()) throw Error(ErrorKind::ConfigError, "simulate needs --config");
    const RunConfig config = assemble(f);
    validate(config);
    Sink sink(out, config.output_dir);
    return actions.at(chosen)(config, sink);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace shockcontract::cli
