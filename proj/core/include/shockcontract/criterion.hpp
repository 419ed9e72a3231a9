#pragma once

#include "shockcontract/dissipation.hpp"
#include "shockcontract/system.hpp"

#include <limits>
#include <vector>

namespace shockcontract {

/// sum_k (eta''(u) r)_k f_k''(u), the curvature part of the limit matrix
/// for an arbitrary (possibly unnormalized) direction r.
[[nodiscard]] Matrix curvature_matrix(const HyperbolicSystem& sys, const State& u, const Vector& r);

/// Ingredients of the small-shock limit at u_L for family i:
///   M(C) = -C A + B,  A = eta''(f' - lambda_i I),  B = curvature_matrix(r_i),
/// restricted to V = span{r_k, k != i} through the basis block P.
struct CriterionData {
  State u_L;
  Family family;
  EigenStructure eigen;
  Matrix A;
  Matrix B;
  Matrix P;
  /// -1/2 g_i (r_i^T eta'' r_i): limit of the (i,i) entry of (1/s) r^T D''_max r.
  double ii_limit = 0.0;

  [[nodiscard]] Matrix full(double C) const { return -C * A + B; }
  /// sym(P^T M(C) P).
  [[nodiscard]] Matrix restricted(double C) const;
  [[nodiscard]] Matrix restricted_A() const;
  [[nodiscard]] Matrix restricted_B() const;
  [[nodiscard]] double lambda_max(double C) const;
  /// Scale for "zero" in definiteness verdicts.
  [[nodiscard]] double scale() const;
};

[[nodiscard]] CriterionData criterion_data(const HyperbolicSystem& sys, const State& u_L, Family i);

/// Same data with the basis of V replaced by P * diag(c), used for
/// basis-invariance checks.
[[nodiscard]] CriterionData rescaled(const CriterionData& data, const Vector& c);

/// M(C) expressed in the eigenbasis, (j,k) -> r_j^T M r_k, assembled from
/// the term-by-term limit of the Hessian:
///   -C (lambda_k - lambda_i) r_j eta'' r_k
///   - (lambda_k - lambda_i) eta''':(r_k, r_j, r_i) + r_k eta'' f'':(r_i, r_j).
/// The (i, .) row and column are not part of the statement and are left as is.
[[nodiscard]] Matrix limit_matrix_decomposed(const HyperbolicSystem& sys, const State& u_L, Family i,
                                             double C);

struct FeasibilityReport {
  bool feasible = false;
  /// Open interval {C : lambda_max(M_hat(C)) < 0}; endpoints may be infinite.
  double c_lo = std::numeric_limits<double>::quiet_NaN();
  double c_hi = std::numeric_limits<double>::quiet_NaN();
  /// Minimizer of the convex function C -> lambda_max(M_hat(C)) on the search bracket.
  double c_best = 0.0;
  double lambda_best = 0.0;
  double bracket = 0.0;
  /// Top eigenvector of M_hat(c_best) mapped to state space (P y).
  Vector witness;
  /// Infeasibility certificate in state space: A-form >= 0 for v_left,
  /// <= 0 for v_right, and both M-forms >= 0 at c_best. Every C then has a
  /// direction with nonnegative form.
  Vector v_left;
  Vector v_right;
  bool certified = false;
};

struct FeasibilityOptions {
  /// Search bracket half-width is bracket_factor * max(1, |B_hat| / |A_hat|).
  double bracket_factor = 1e3;
  double root_tol = 1e-10;
};

[[nodiscard]] FeasibilityReport feasibility(const CriterionData& data, const FeasibilityOptions& options = {});

struct SemidefiniteVerdict {
  bool pass = false;
  double lambda_max = 0.0;
  double tolerance = 0.0;
  /// Direction in state space with positive form when the check fails.
  Vector witness;
};

/// Necessary condition: M_hat(C) negative semidefinite up to 1e-8 * scale.
[[nodiscard]] SemidefiniteVerdict necessary_check(const CriterionData& data, double C);

struct ConvergenceRow {
  double s = 0.0;
  /// (1/s) R with R_jk = r_j^T D''_max(u_L) r_k, full eigenbasis.
  Matrix scaled;
  /// Max entrywise error of the symmetrized V-block against M_hat(C).
  double block_error = 0.0;
  double ii_entry = 0.0;
  double ii_error = 0.0;
  /// Largest |(i, k)| entry with k != i.
  double mixed = 0.0;
};

[[nodiscard]] std::vector<ConvergenceRow> limit_convergence(const HyperbolicSystem& sys,
                                                            const State& u_L, Family i, double C,
                                                            const std::vector<double>& s_list);

struct CounterexampleOptions {
  double backtrack = 0.5;
  int max_halvings = 40;
  /// D_RH must exceed this fraction of the quadratic model at the chosen t.
  double margin = 0.5;
};

struct CounterexampleStep {
  double t = 0.0;
  double d_rh = 0.0;
  /// D_RH / t^2.
  double ratio = 0.0;
};

struct Counterexample {
  State u_minus;
  State u_plus;
  double sigma = 0.0;
  double d_rh = 0.0;
  double t = 0.0;
  /// Unit direction v in V with u_minus = u_L + t v.
  Vector direction;
  double rh_residual = 0.0;
  /// |u_minus - u_L| + |u_plus - u_R|.
  double distance = 0.0;
  /// 1/2 v^T D''_max(u_L) v at the context's shock strength.
  double hessian_model = 0.0;
  /// 1/2 s v^T M(C) v, the small-shock limit of the same quantity.
  double limit_model = 0.0;
  /// D_RH / t^2 at t, t/2, t/4.
  std::vector<CounterexampleStep> refinement;
};

/// Corollary-style construction: searches directions of V with a positive
/// limit form, then backtracks t from delta / (Lip(u+) + 1) until
/// D_RH(u_L + t v, u+(u_L + t v)) is positive with margin. Throws
/// NoPositiveDirection when no direction qualifies.
[[nodiscard]] Counterexample find_counterexample(const ContractionContext& ctx, double delta,
                                                 const CounterexampleOptions& options = {});

}  // namespace shockcontract
