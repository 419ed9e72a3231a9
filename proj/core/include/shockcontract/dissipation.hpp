#pragma once

#include "shockcontract/shock_curves.hpp"
#include "shockcontract/system.hpp"

namespace shockcontract {

/// eta(u|v) = eta(u) - eta(v) - eta'(v)(u - v).
[[nodiscard]] double relative_entropy(const HyperbolicSystem& sys, const State& u, const State& v);

/// q(u;v) = q(u) - q(v) - eta'(v)(f(u) - f(v)).
[[nodiscard]] double relative_flux(const HyperbolicSystem& sys, const State& u, const State& v);

/// Search window for s*(u): roots are sought in (0, s_bar] with
/// s_bar = factor * max(s, t0(u)), t0 the quadratic-model guess.
struct StarWindow {
  double factor = 8.0;
  /// Absolute cap on s_bar; 0 means none.
  double cap = 0.0;
};

/// A fixed i-shock (u_L, u_R, sigma_LR) of strength s > 0 with weight
/// a = 1 + C s on the left side.
///
/// The strength is measured along -r_i: u_R = S_{u_L}(-s) on the curve
/// whose tangent at 0 is r_i. With r_i oriented so that the family speed
/// increases along it, that is the Lax-admissible branch.
class ContractionContext {
 public:
  ContractionContext(HyperbolicSystem sys, Family i, State u_L, double s, double C,
                     StarWindow window = {});

  [[nodiscard]] const HyperbolicSystem& system() const noexcept { return sys_; }
  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const State& u_L() const noexcept { return u_L_; }
  [[nodiscard]] const State& u_R() const noexcept { return shock_.u_plus; }
  [[nodiscard]] double sigma_LR() const noexcept { return shock_.sigma; }
  [[nodiscard]] double strength() const noexcept { return s_; }
  [[nodiscard]] double slope() const noexcept { return C_; }
  [[nodiscard]] double weight() const noexcept { return a_; }
  [[nodiscard]] const ShockPoint& shock() const noexcept { return shock_; }
  [[nodiscard]] const StarWindow& window() const noexcept { return window_; }

 private:
  HyperbolicSystem sys_;
  Family family_;
  State u_L_;
  double s_;
  double C_;
  double a_;
  StarWindow window_;
  ShockPoint shock_;
};

/// a eta(u|u_L) - eta(u|u_R).
[[nodiscard]] double tilde_eta(const ContractionContext& ctx, const State& u);
/// a q(u;u_L) - q(u;u_R).
[[nodiscard]] double tilde_q(const ContractionContext& ctx, const State& u);
/// u in Pi, i.e. tilde_eta(u) < 0.
[[nodiscard]] bool in_region(const ContractionContext& ctx, const State& u);

/// -tilde_q(u) + lambda_i(u) tilde_eta(u).
[[nodiscard]] double d_cont(const ContractionContext& ctx, const State& u);

/// q(u+;u_R) - sigma eta(u+|u_R) - a [q(u-;u_L) - sigma eta(u-|u_L)].
[[nodiscard]] double d_rh(const ContractionContext& ctx, const State& u_minus, const State& u_plus,
                          double sigma);

/// Root t* of phi(t) = eta(u | S_u(-t)) + tilde_eta(u) with the sign
/// change certified on [lo, hi].
struct StarSolution {
  double s_star = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double phi_lo = 0.0;
  double phi_hi = 0.0;
  double s_bar = 0.0;
  int iterations = 0;
};

/// Safeguarded Newton for s*(u). Throws OutsideRegion when tilde_eta(u) > 0,
/// NonMonotone when phi' <= 0 is seen inside the window and NoBracket when
/// phi stays negative up to s_bar.
[[nodiscard]] StarSolution solve_s_star(const ContractionContext& ctx, const State& u);

/// Same root by plain bisection on the stored curve; an independent oracle.
[[nodiscard]] double solve_s_star_bisection(const ContractionContext& ctx, const State& u,
                                            double tol = 1e-13);

struct MaximalShock {
  State u;
  double s_star = 0.0;
  State u_plus;
  double sigma_pm = 0.0;
  /// Filled when requested; column k is d u+ / d u_k.
  Matrix grad_u_plus;
  RowVector grad_sigma;
};

/// u+(u) = S_u(-s*(u)). The gradient solves the differentiated RH and
/// entropy-distance relations; it is singular on the boundary of Pi.
[[nodiscard]] MaximalShock maximal_shock(const ContractionContext& ctx, const State& u,
                                         bool with_gradient = true);

struct DmaxValue {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;
};

/// D_max and its derivatives up to `order` (0, 1 or 2).
[[nodiscard]] DmaxValue evaluate_d_max(const ContractionContext& ctx, const State& u, int order = 2);

[[nodiscard]] double d_max(const ContractionContext& ctx, const State& u);
[[nodiscard]] Vector grad_d_max(const ContractionContext& ctx, const State& u);
[[nodiscard]] Matrix hess_d_max(const ContractionContext& ctx, const State& u);

}  // namespace shockcontract
