#pragma once

#include "shockcontract/types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace shockcontract {

enum class DerivativeMode { Analytic, FiniteDifference };

enum class FamilyKind { GenuinelyNonlinear, LinearlyDegenerate };

/// Evaluators describing u_t + f(u)_x = 0 with a convex entropy pair.
/// Any optional derivative left empty is supplied by central differences of
/// the next lower derivative; a missing entropy flux is integrated from
/// eta' f' along the segment from `anchor`.
struct SystemDefinition {
  std::string name;
  int dimension = 0;

  std::function<Vector(const Vector&)> flux;
  std::function<Matrix(const Vector&)> flux_jacobian;
  std::function<Tensor3(const Vector&)> flux_hessian;

  std::function<double(const Vector&)> entropy;
  std::function<Vector(const Vector&)> entropy_gradient;
  std::function<Matrix(const Vector&)> entropy_hessian;
  std::function<Tensor3(const Vector&)> entropy_third;
  std::function<double(const Vector&)> entropy_flux;

  /// Empty means the whole of R^n.
  std::function<bool(const Vector&)> in_domain;
  std::string domain_description = "R^n";

  /// Anchor state for integrating the entropy flux when none is given.
  std::optional<Vector> anchor;

  /// Optional per-family classification; when empty it is inferred from
  /// the size of grad(lambda_i) . r_i at each state.
  std::vector<FamilyKind> families;

  /// Relative eigenvalue gap below which strict hyperbolicity is rejected.
  double hyperbolicity_floor = 1e-8;
};

/// Sorted eigen-decomposition of f'(u).
struct EigenStructure {
  Vector eigenvalues;             // lambda_1 < ... < lambda_n
  Matrix right;                   // column i is r_i, unit Euclidean norm
  Matrix left;                    // row i is l_i, l_i r_j = delta_ij
  Vector gnl;                     // grad(lambda_i) . r_i
  std::vector<FamilyKind> kinds;
  double min_gap = 0.0;

  [[nodiscard]] double lambda(Family i) const { return eigenvalues(static_cast<Eigen::Index>(i.slot())); }
  [[nodiscard]] Vector r(Family i) const { return right.col(static_cast<Eigen::Index>(i.slot())); }
  [[nodiscard]] RowVector l(Family i) const { return left.row(static_cast<Eigen::Index>(i.slot())); }
  [[nodiscard]] double g(Family i) const { return gnl(static_cast<Eigen::Index>(i.slot())); }
};

/// Immutable, thread-safe handle to a hyperbolic system.
class HyperbolicSystem {
 public:
  explicit HyperbolicSystem(SystemDefinition def, DerivativeMode mode = DerivativeMode::Analytic);

  [[nodiscard]] const std::string& name() const noexcept { return def_->name; }
  [[nodiscard]] int dimension() const noexcept { return def_->dimension; }
  [[nodiscard]] DerivativeMode mode() const noexcept { return mode_; }
  [[nodiscard]] double hyperbolicity_floor() const noexcept { return def_->hyperbolicity_floor; }
  [[nodiscard]] const SystemDefinition& definition() const noexcept { return *def_; }

  /// Same evaluators, different derivative mode.
  [[nodiscard]] HyperbolicSystem with_mode(DerivativeMode mode) const;

  [[nodiscard]] bool contains(const Vector& u) const;
  /// Throws DomainViolation when u is outside the phase-space domain.
  void require_domain(const Vector& u) const;

  [[nodiscard]] Vector flux(const Vector& u) const;
  [[nodiscard]] Matrix flux_jacobian(const Vector& u) const;
  [[nodiscard]] Tensor3 flux_hessian(const Vector& u) const;

  [[nodiscard]] double entropy(const Vector& u) const;
  [[nodiscard]] Vector entropy_gradient(const Vector& u) const;
  [[nodiscard]] Matrix entropy_hessian(const Vector& u) const;
  [[nodiscard]] Tensor3 entropy_third(const Vector& u) const;
  [[nodiscard]] double entropy_flux(const Vector& u) const;

 private:
  HyperbolicSystem(std::shared_ptr<const SystemDefinition> def, DerivativeMode mode);
  [[nodiscard]] bool analytic() const noexcept { return mode_ == DerivativeMode::Analytic; }

  std::shared_ptr<const SystemDefinition> def_;
  DerivativeMode mode_;
};

/// f'(u); throws DomainViolation outside the domain.
[[nodiscard]] Matrix flux_jacobian(const HyperbolicSystem& sys, const State& u);

/// Sorted, biorthonormal eigenstructure of f'(u). Genuinely nonlinear
/// families are oriented so that grad(lambda_i) . r_i > 0; linearly
/// degenerate ones follow `reference` when given, otherwise the largest
/// component of r_i is made positive.
[[nodiscard]] EigenStructure eigenstructure(const HyperbolicSystem& sys, const State& u,
                                            const EigenStructure* reference = nullptr);

/// Residual of the entropy compatibility eta' f' = q' at u (max norm).
[[nodiscard]] double entropy_compatibility_residual(const HyperbolicSystem& sys, const State& u);

// ---------------------------------------------------------------------------
// Built-in systems
// ---------------------------------------------------------------------------

/// f = u^2/2, eta = u^2/2.
[[nodiscard]] HyperbolicSystem burgers();

/// Isentropic p-system in Lagrangian coordinates (v, u), p(v) = v^-gamma.
[[nodiscard]] HyperbolicSystem p_system(double gamma = 1.4);

/// 3x3 family with symmetric Jacobian and quadratic entropy |U|^2/2.
[[nodiscard]] HyperbolicSystem example3x3(double alpha);

/// 2D isentropic MHD in conservative variables (v, q = vB, u, w) with
/// p(v) = v^-gamma. States with q = 0 are outside the domain.
[[nodiscard]] HyperbolicSystem mhd2d(double beta = 1.0, double gamma = 5.0 / 3.0);

/// Name plus numeric parameters of a built-in, e.g. {"example3x3", {{"alpha", 1}}}.
struct SystemSpec {
  std::string name;
  std::map<std::string, double> params;
};

/// Throws BadParameter for unknown names or invalid parameters.
[[nodiscard]] HyperbolicSystem builtin(const SystemSpec& spec);

/// Closed-form MHD wave data at a state: alpha_+-, sound speed squared and
/// the unnormalized eigenvectors r_1..r_4 written with first component +-1.
struct MhdWaveData {
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double sound_speed_sq = 0.0;
  Vector speeds;     // (-sqrt(a+), -sqrt(a-), sqrt(a-), sqrt(a+))
  Matrix vectors;    // columns r_1..r_4
};

[[nodiscard]] MhdWaveData mhd_wave_data(double beta, double gamma, const State& u);

}  // namespace shockcontract
