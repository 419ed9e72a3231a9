#include "shockcontract/cli/run_config.hpp"

#include "shockcontract/system_config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace shockcontract::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, "field '" + field + "': " + msg);
}

int line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(field, "must be finite");
  return x;
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) fail(field, "expected an integer");
  return j.get<int>();
}

std::string string(const json& j, const std::string& field) {
  if (!j.is_string()) fail(field, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], field + "[" + std::to_string(k) + "]"));
  return out;
}

Vector vector(const json& j, const std::string& field) {
  if (j.is_string()) {
    try {
      return parse_state(j.get<std::string>());
    } catch (const Error& e) {
      fail(field, e.what());
    }
  }
  const auto v = numbers(j, field);
  if (v.empty()) fail(field, "must not be empty");
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) fail(prefix + key, "unknown field");
  }
}

Grid grid(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "expected {\"lo\", \"hi\", \"count\"}");
  reject_unknown(j, {"lo", "hi", "count"}, field + ".");
  for (const char* key : {"lo", "hi", "count"}) {
    if (!j.contains(key)) fail(field + "." + key, "missing");
  }
  return {number(j["lo"], field + ".lo"), number(j["hi"], field + ".hi"), integer(j["count"], field + ".count")};
}

SimBlock sim_block(const json& j) {
  if (!j.is_object()) fail("sim", "expected an object");
  reject_unknown(j,
                 {"cells", "x_lo", "x_hi", "cfl", "t_end", "initial", "u_minus", "u_plus", "corollary_t", "direction",
                  "plateau", "ramp", "trace_offset", "record_every", "snapshot_times", "monotonicity_tolerance"},
                 "sim.");
  SimBlock b;
  auto num = [&](const char* key, double& dst) {
    if (j.contains(key)) dst = number(j[key], std::string("sim.") + key);
  };
  auto whole = [&](const char* key, int& dst) {
    if (j.contains(key)) dst = integer(j[key], std::string("sim.") + key);
  };
  whole("cells", b.cells);
  num("x_lo", b.x_lo);
  num("x_hi", b.x_hi);
  num("cfl", b.cfl);
  num("t_end", b.t_end);
  num("plateau", b.plateau);
  num("ramp", b.ramp);
  num("monotonicity_tolerance", b.monotonicity_tolerance);
  whole("trace_offset", b.trace_offset);
  whole("record_every", b.record_every);
  if (j.contains("initial")) b.initial = string(j["initial"], "sim.initial");
  if (j.contains("u_minus")) b.u_minus = vector(j["u_minus"], "sim.u_minus");
  if (j.contains("u_plus")) b.u_plus = vector(j["u_plus"], "sim.u_plus");
  if (j.contains("direction")) b.direction = vector(j["direction"], "sim.direction");
  if (j.contains("corollary_t")) b.corollary_t = number(j["corollary_t"], "sim.corollary_t");
  if (j.contains("snapshot_times")) b.snapshot_times = numbers(j["snapshot_times"], "sim.snapshot_times");
  return b;
}

void check_sorted(const std::vector<double>& v, const std::string& field) {
  if (!std::is_sorted(v.begin(), v.end())) fail(field, "must be sorted ascending");
}

}  // namespace

std::vector<double> Grid::points() const {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
  }
  return out;
}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ConfigError, "line 1: top level must be an object");
  reject_unknown(doc,
                 {"version", "system", "params", "state", "family", "s", "s_list", "C", "C_scan", "delta", "smax",
                  "at", "samples", "radius", "sim", "output_dir", "seed", "jobs"},
                 "");

  RunConfig c;
  if (!doc.contains("version")) fail("version", "missing");
  c.version = integer(doc["version"], "version");
  if (c.version != kConfigVersion) fail("version", "unsupported version " + std::to_string(c.version));

  if (doc.contains("system")) {
    json sys = {{"system", doc["system"]}};
    if (doc.contains("params")) sys["params"] = doc["params"];
    try {
      c.system = parse_system_config(sys.dump());
    } catch (const Error& e) {
      fail("system", e.what());
    }
  } else if (doc.contains("params")) {
    fail("params", "given without 'system'");
  }
  if (doc.contains("state")) c.state = vector(doc["state"], "state");
  if (doc.contains("family")) c.family = integer(doc["family"], "family");
  if (doc.contains("s")) c.s = number(doc["s"], "s");
  if (doc.contains("s_list")) c.s_list = numbers(doc["s_list"], "s_list");
  if (doc.contains("C")) c.C = number(doc["C"], "C");
  if (doc.contains("C_scan")) c.C_scan = grid(doc["C_scan"], "C_scan");
  if (doc.contains("delta")) c.delta = number(doc["delta"], "delta");
  if (doc.contains("smax")) c.smax = number(doc["smax"], "smax");
  if (doc.contains("at")) c.at = vector(doc["at"], "at");
  if (doc.contains("samples")) c.samples = integer(doc["samples"], "samples");
  if (doc.contains("radius")) c.radius = number(doc["radius"], "radius");
  if (doc.contains("sim")) c.sim = sim_block(doc["sim"]);
  if (doc.contains("output_dir")) c.output_dir = string(doc["output_dir"], "output_dir");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) fail("seed", "expected a nonnegative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("jobs")) c.jobs = integer(doc["jobs"], "jobs");
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void validate(const RunConfig& c) {
  auto finite = [](double x, const std::string& field) {
    if (!std::isfinite(x)) fail(field, "must be finite");
  };
  auto finite_vec = [&](const Vector& v, const std::string& field) {
    if (!v.allFinite()) fail(field, "must be finite");
  };

  std::optional<HyperbolicSystem> sys;
  if (c.system) {
    try {
      sys = builtin(*c.system);
    } catch (const Error& e) {
      fail("system", e.what());
    }
  }
  if (c.state) {
    finite_vec(*c.state, "state");
    if (sys && c.state->size() != sys->dimension()) {
      fail("state", "has " + std::to_string(c.state->size()) + " components, system '" + sys->name() + "' needs " +
                        std::to_string(sys->dimension()));
    }
    if (sys && !sys->contains(*c.state)) fail("state", "outside the domain " + sys->definition().domain_description);
  }
  if (c.at) {
    finite_vec(*c.at, "at");
    if (sys && c.at->size() != sys->dimension()) fail("at", "dimension mismatch");
  }
  if (c.family) {
    if (*c.family < 1 || (sys && *c.family > sys->dimension())) fail("family", "out of range");
  }
  if (c.s) {
    finite(*c.s, "s");
    if (*c.s <= 0.0) fail("s", "must be positive");
  }
  if (!c.s_list.empty()) {
    for (double s : c.s_list) {
      if (!(s > 0.0)) fail("s_list", "entries must be positive");
    }
    // Refinement sequences usually run downward, so either order is fine.
    const bool up = std::adjacent_find(c.s_list.begin(), c.s_list.end(), std::greater_equal<>()) == c.s_list.end();
    const bool down = std::adjacent_find(c.s_list.begin(), c.s_list.end(), std::less_equal<>()) == c.s_list.end();
    if (!up && !down) fail("s_list", "must be strictly monotone");
  }
  if (c.C) finite(*c.C, "C");
  if (c.C_scan) {
    if (c.C_scan->count < 2) fail("C_scan.count", "needs at least two points");
    if (!(c.C_scan->lo < c.C_scan->hi)) fail("C_scan", "needs lo < hi");
  }
  if (c.delta && !(*c.delta > 0.0)) fail("delta", "must be positive");
  if (c.smax && *c.smax == 0.0) fail("smax", "must be nonzero");
  if (c.samples < 0) fail("samples", "must be nonnegative");
  if (!(c.radius > 0.0)) fail("radius", "must be positive");
  if (c.jobs < 0) fail("jobs", "must be nonnegative");
  if (c.sim) {
    const auto& b = *c.sim;
    if (b.initial != "exact" && b.initial != "corollary") fail("sim.initial", "expected \"exact\" or \"corollary\"");
    if (b.cells < 100) fail("sim.cells", "needs at least 100 cells");
    if (!(b.x_lo < b.x_hi)) fail("sim", "needs x_lo < x_hi");
    if (!(b.cfl > 0.0 && b.cfl < 1.0)) fail("sim.cfl", "must lie in (0, 1)");
    if (!(b.t_end > 0.0)) fail("sim.t_end", "must be positive");
    if (b.record_every < 1) fail("sim.record_every", "must be at least 1");
    if (b.trace_offset < 1) fail("sim.trace_offset", "must be at least 1");
    check_sorted(b.snapshot_times, "sim.snapshot_times");
    if (b.initial == "corollary" && !b.u_minus && !b.corollary_t) {
      fail("sim", "corollary data needs u_minus or corollary_t");
    }
    if (b.corollary_t && !b.direction) fail("sim.direction", "required with corollary_t");
    if (sys) {
      for (const auto* v : {&b.u_minus, &b.u_plus, &b.direction}) {
        if (*v && (*v)->size() != sys->dimension()) fail("sim", "vector dimension mismatch");
      }
    }
  }
}

HyperbolicSystem RunConfig::require_system() const {
  if (!system) fail("system", "required");
  return builtin(*system);
}

const State& RunConfig::require_state() const {
  if (!state) fail("state", "required");
  return *state;
}

Family RunConfig::require_family() const {
  if (!family) fail("family", "required");
  return Family{*family};
}

double RunConfig::require_s() const {
  if (!s) fail("s", "required");
  return *s;
}

double RunConfig::require_C() const {
  if (!C) fail("C", "required");
  return *C;
}

}  // namespace shockcontract::cli
