#include "shockcontract/dissipation.hpp"

#include "shockcontract/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shockcontract {

double relative_entropy(const HyperbolicSystem& sys, const State& u, const State& v) {
  sys.require_domain(u);
  sys.require_domain(v);
  return sys.entropy(u) - sys.entropy(v) - sys.entropy_gradient(v).dot(u - v);
}

double relative_flux(const HyperbolicSystem& sys, const State& u, const State& v) {
  sys.require_domain(u);
  sys.require_domain(v);
  return sys.entropy_flux(u) - sys.entropy_flux(v) -
         sys.entropy_gradient(v).dot(sys.flux(u) - sys.flux(v));
}

ContractionContext::ContractionContext(HyperbolicSystem sys, Family i, State u_L, double s, double C,
                                       StarWindow window)
    : sys_(std::move(sys)), family_(i), u_L_(std::move(u_L)), s_(s), C_(C), a_(1.0 + C * s),
      window_(window) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error(ErrorKind::BadParameter, "shock strength must be positive");
  if (!std::isfinite(C)) throw Error(ErrorKind::BadParameter, "weight slope must be finite");
  if (!(a_ > 0.0)) throw Error(ErrorKind::BadParameter, "weight a = 1 + C s must be positive");
  if (!(window_.factor > 1.0)) throw Error(ErrorKind::BadParameter, "window factor must exceed 1");
  shock_ = hugoniot_point(sys_, u_L_, family_, -s_);
  if (!(shock_.lax_margin > 0.0) &&
      eigenstructure(sys_, u_L_).kinds[family_.slot()] == FamilyKind::GenuinelyNonlinear) {
    throw Error(ErrorKind::BadParameter, "shock of strength " + std::to_string(s) +
                                             " is not Lax admissible");
  }
}

double tilde_eta(const ContractionContext& ctx, const State& u) {
  return ctx.weight() * relative_entropy(ctx.system(), u, ctx.u_L()) -
         relative_entropy(ctx.system(), u, ctx.u_R());
}

double tilde_q(const ContractionContext& ctx, const State& u) {
  return ctx.weight() * relative_flux(ctx.system(), u, ctx.u_L()) -
         relative_flux(ctx.system(), u, ctx.u_R());
}

bool in_region(const ContractionContext& ctx, const State& u) { return tilde_eta(ctx, u) < 0.0; }

double d_cont(const ContractionContext& ctx, const State& u) {
  const double lambda = eigenstructure(ctx.system(), u).lambda(ctx.family());
  return -tilde_q(ctx, u) + lambda * tilde_eta(ctx, u);
}

double d_rh(const ContractionContext& ctx, const State& u_minus, const State& u_plus, double sigma) {
  const auto& sys = ctx.system();
  return relative_flux(sys, u_plus, ctx.u_R()) - sigma * relative_entropy(sys, u_plus, ctx.u_R()) -
         ctx.weight() * (relative_flux(sys, u_minus, ctx.u_L()) -
                         sigma * relative_entropy(sys, u_minus, ctx.u_L()));
}

namespace {

struct StarProblem {
  const ContractionContext& ctx;
  State u;
  double eta_tilde;
  double s_bar;
  HugoniotCurve curve;

  // phi(t) and phi'(t) at the curve point S_u(-t).
  struct Sample {
    double phi;
    double dphi;
    ShockPoint point;
  };

  [[nodiscard]] Sample eval(double t) const {
    ShockPoint p = curve.at(-t);
    const auto& sys = ctx.system();
    const Vector gap = u - p.u_plus;
    const double phi = relative_entropy(sys, u, p.u_plus) + eta_tilde;
    const double dphi = gap.dot(sys.entropy_hessian(p.u_plus) * p.tangent);
    return {phi, dphi, std::move(p)};
  }
};

HugoniotCurve trace_window(const ContractionContext& ctx, const State& u, double& s_bar) {
  CurveOptions opts;
  opts.classify = false;
  for (int attempt = 0;; ++attempt) {
    try {
      return HugoniotCurve::trace(ctx.system(), u, ctx.family(), -s_bar, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainExit || attempt >= 8) throw;
      s_bar *= 0.5;
    }
  }
}

double quadratic_guess(const ContractionContext& ctx, const State& u, double eta_tilde) {
  const Vector r = eigenstructure(ctx.system(), u).r(ctx.family());
  return std::sqrt(-2.0 * eta_tilde / r.dot(ctx.system().entropy_hessian(u) * r));
}

StarProblem make_problem(const ContractionContext& ctx, const State& u) {
  ctx.system().require_domain(u);
  const double et = tilde_eta(ctx, u);
  if (et > 0.0) throw Error(ErrorKind::OutsideRegion, "tilde eta > 0: state is outside Pi");
  const double t0 = et < 0.0 ? quadratic_guess(ctx, u, et) : 0.0;
  double s_bar = ctx.window().factor * std::max(ctx.strength(), t0);
  if (ctx.window().cap > 0.0) s_bar = std::min(s_bar, ctx.window().cap);
  HugoniotCurve curve = trace_window(ctx, u, s_bar);
  return StarProblem{ctx, u, et, s_bar, std::move(curve)};
}

struct StarResult {
  StarSolution solution;
  ShockPoint point;
};

StarResult solve_star(const ContractionContext& ctx, const State& u) {
  StarProblem prob = make_problem(ctx, u);
  StarSolution sol;
  sol.s_bar = prob.s_bar;
  if (prob.eta_tilde == 0.0) {
    return {sol, prob.curve.samples().front()};
  }

  // Monotonicity over the stored samples up to the first sign change. Past
  // the crossing the curve may leave the small-shock branch; that part does
  // not affect s*.
  const auto& samples = prob.curve.samples();
  double lo = 0.0, hi = -1.0;
  double phi_lo = prob.eta_tilde, phi_hi = 0.0;
  for (std::size_t k = 1; k < samples.size() && hi < 0.0; ++k) {
    const double t = -samples[k].s;
    const auto e = prob.eval(t);
    if (!(e.dphi > 0.0)) {
      throw Error(ErrorKind::NonMonotone,
                  "eta(u|S_u(-t)) is not increasing at t = " + std::to_string(t));
    }
    if (e.phi < 0.0) {
      lo = t;
      phi_lo = e.phi;
    } else {
      hi = t;
      phi_hi = e.phi;
    }
  }
  if (hi < 0.0) {
    throw Error(ErrorKind::NoBracket, "no root of eta(u|S) = -tilde eta below s_bar = " +
                                          std::to_string(prob.s_bar));
  }

  const double t0 = quadratic_guess(ctx, u, prob.eta_tilde);
  double t = std::clamp(t0, lo, hi);
  StarProblem::Sample cur = prob.eval(t);
  int it = 0;
  for (; it < 100; ++it) {
    if (cur.phi < 0.0) {
      lo = t;
      phi_lo = cur.phi;
    } else {
      hi = t;
      phi_hi = cur.phi;
    }
    if (std::abs(cur.phi) <= 1e-15 * std::abs(prob.eta_tilde)) break;
    double next = t - cur.phi / cur.dphi;
    if (!(cur.dphi > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - t);
    t = next;
    cur = prob.eval(t);
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * t) break;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }

  sol.s_star = t;
  sol.iterations = it + 1;
  // Tight certificate around the root when rounding allows it.
  const double a = t * (1.0 - 1e-8), b = t * (1.0 + 1e-8);
  const double pa = prob.eval(a).phi, pb = prob.eval(b).phi;
  if (pa < 0.0 && pb > 0.0) {
    sol.lo = a;
    sol.hi = b;
    sol.phi_lo = pa;
    sol.phi_hi = pb;
  } else {
    sol.lo = lo;
    sol.hi = hi;
    sol.phi_lo = phi_lo;
    sol.phi_hi = phi_hi;
  }
  return {sol, std::move(cur.point)};
}

}  // namespace

StarSolution solve_s_star(const ContractionContext& ctx, const State& u) {
  return solve_star(ctx, u).solution;
}

double solve_s_star_bisection(const ContractionContext& ctx, const State& u, double tol) {
  const StarProblem prob = make_problem(ctx, u);
  if (prob.eta_tilde == 0.0) return 0.0;
  const auto phi = [&prob](double t) {
    return relative_entropy(prob.ctx.system(), prob.u, prob.curve.at(-t).u_plus) + prob.eta_tilde;
  };
  if (phi(prob.s_bar) < 0.0) {
    throw Error(ErrorKind::NoBracket, "phi stays negative on the window");
  }
  return numerics::bisect_root(phi, 0.0, prob.s_bar, tol);
}

MaximalShock maximal_shock(const ContractionContext& ctx, const State& u, bool with_gradient) {
  const auto& sys = ctx.system();
  StarResult star = solve_star(ctx, u);
  MaximalShock out;
  out.u = u;
  out.s_star = star.solution.s_star;
  out.u_plus = star.point.u_plus;
  out.sigma_pm = star.point.sigma;
  if (!with_gradient) return out;

  const auto n = u.size();
  const double a = ctx.weight();
  const double sigma = out.sigma_pm;
  const Matrix I = Matrix::Identity(n, n);
  Matrix M = Matrix::Zero(n + 1, n + 1);
  M.topLeftCorner(n, n) = sys.flux_jacobian(out.u_plus) - sigma * I;
  M.topRightCorner(n, 1) = -(out.u_plus - u);
  M.bottomLeftCorner(1, n) = (u - out.u_plus).transpose() * sys.entropy_hessian(out.u_plus);

  Matrix rhs(n + 1, n);
  rhs.topRows(n) = sys.flux_jacobian(u) - sigma * I;
  rhs.bottomRows(1) = (sys.entropy_gradient(ctx.u_R()) - sys.entropy_gradient(out.u_plus) +
                       a * (sys.entropy_gradient(u) - sys.entropy_gradient(ctx.u_L())))
                          .transpose();

  const Eigen::FullPivLU<Matrix> lu(M);
  const double scale = std::max(numerics::max_abs(M), 1e-300);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-300 ||
      lu.rcond() < 1e-13) {
    throw Error(ErrorKind::SingularLinearSystem,
                "differentiated maximal-shock system is singular (s* = " +
                    std::to_string(out.s_star) + ", scale " + std::to_string(scale) + ")");
  }
  const Matrix d = lu.solve(rhs);
  out.grad_u_plus = d.topRows(n);
  out.grad_sigma = d.bottomRows(1);
  return out;
}

DmaxValue evaluate_d_max(const ContractionContext& ctx, const State& u, int order) {
  if (order < 0 || order > 2) throw Error(ErrorKind::BadParameter, "derivative order must be 0, 1 or 2");
  const auto& sys = ctx.system();
  const MaximalShock ms = maximal_shock(ctx, u, order >= 2);
  DmaxValue out;
  out.value = d_rh(ctx, u, ms.u_plus, ms.sigma_pm);
  if (order == 0) return out;

  const auto n = u.size();
  const double a = ctx.weight();
  const Matrix F = sys.flux_jacobian(u) - ms.sigma_pm * Matrix::Identity(n, n);
  const Vector c = sys.entropy_gradient(ms.u_plus) - sys.entropy_gradient(ctx.u_R()) -
                   a * (sys.entropy_gradient(u) - sys.entropy_gradient(ctx.u_L()));
  out.gradient = F.transpose() * c;
  if (order == 1) return out;

  const Matrix G = sys.entropy_hessian(ms.u_plus) * ms.grad_u_plus - a * sys.entropy_hessian(u);
  out.hessian = F.transpose() * G + weighted_slices(sys.flux_hessian(u), c) - c * ms.grad_sigma;
  return out;
}

double d_max(const ContractionContext& ctx, const State& u) { return evaluate_d_max(ctx, u, 0).value; }

Vector grad_d_max(const ContractionContext& ctx, const State& u) {
  return evaluate_d_max(ctx, u, 1).gradient;
}

Matrix hess_d_max(const ContractionContext& ctx, const State& u) {
  return evaluate_d_max(ctx, u, 2).hessian;
}

}  // namespace shockcontract
