#pragma once

#include "shockcontract/system.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace shockcontract {

/// A Rankine-Hugoniot triple on the i-curve through u_minus.
struct ShockPoint {
  State u_minus;
  State u_plus;
  double sigma = 0.0;
  Family family;
  /// Curve parameter. The tangent at s = 0 is r_i(u_minus), so for a GNL
  /// family with grad(lambda_i) . r_i > 0 the Lax branch is s < 0.
  double s = 0.0;
  double rh_residual = 0.0;
  /// min(sigma - lambda_i(u_plus), lambda_i(u_minus) - sigma) for GNL
  /// families; minus the larger speed mismatch for LD families.
  double lax_margin = 0.0;
  /// dS/ds and dsigma/ds at this point.
  Vector tangent;
  double sigma_dot = 0.0;

  [[nodiscard]] bool admissible(double tol = 0.0) const { return lax_margin > -tol; }
};

struct CurveOptions {
  double initial_step = 1e-3;
  double max_step = 0.05;
  double min_step = 1e-12;
  int max_newton = 50;
  /// Newton stops once |residual| <= rh_tol * max(1, |f'(u)|).
  double rh_tol = 1e-12;
  /// +1 follows r_i, -1 follows -r_i (which mirrors the s axis).
  double orientation = 1.0;
  /// Fill ShockPoint::lax_margin (two eigen-decompositions per point).
  bool classify = true;
};

/// i-shock curve s -> S_u(s) traced by predictor-corrector continuation.
///
/// S(s) = u + s w(s) with l_i(u) . w = 1 and A(u, S(s)) w = sigma w, so
/// s is the projection of S(s) - u on l_i(u). That keeps the problem
/// regular through s = 0 where the RH equations degenerate.
class HugoniotCurve {
 public:
  /// Traces from s = 0 to s_end (either sign).
  static HugoniotCurve trace(const HyperbolicSystem& sys, const State& u, Family i, double s_end,
                             const CurveOptions& options = {});

  [[nodiscard]] const State& base() const noexcept { return base_; }
  [[nodiscard]] Family family() const noexcept { return family_; }
  [[nodiscard]] const std::vector<ShockPoint>& samples() const noexcept { return samples_; }
  /// Signed end of the traced range.
  [[nodiscard]] double max_s() const noexcept { return max_s_; }

  /// Point at any s inside the traced range, corrected from the nearest sample.
  [[nodiscard]] ShockPoint at(double s) const;

 private:
  HugoniotCurve(HyperbolicSystem sys, State base, Family family, CurveOptions options);

  HyperbolicSystem sys_;
  State base_;
  Family family_;
  CurveOptions options_;
  RowVector l_;
  double tol_ = 0.0;
  double max_s_ = 0.0;
  std::vector<ShockPoint> samples_;
  std::vector<Vector> w_;
  std::vector<Vector> w_dot_;

  struct Solved {
    Vector w;
    double sigma;
  };
  [[nodiscard]] std::optional<Solved> correct(double s, Vector w, double sigma) const;
  // (dw/ds, dsigma/ds) stacked.
  [[nodiscard]] Vector rates(double s, const Vector& w, double sigma) const;
  [[nodiscard]] ShockPoint make_point(double s, const Vector& w, double sigma) const;
};

/// int_0^s g(S(t)) dt along a traced curve by adaptive Gauss-Kronrod.
[[nodiscard]] double integrate_along(const HugoniotCurve& curve, double s,
                                     const std::function<double(const ShockPoint&)>& g,
                                     double abs_tol = 1e-10);

/// Single point S_u(s); traces the curve from 0 to s.
[[nodiscard]] ShockPoint hugoniot_point(const HyperbolicSystem& sys, const State& u, Family i,
                                        double s, const CurveOptions& options = {});

/// A(a, b) = int_0^1 f'(a + t (b - a)) dt.
[[nodiscard]] Matrix averaged_matrix(const HyperbolicSystem& sys, const State& a, const State& b);

/// |f(u+) - f(u-) - sigma (u+ - u-)| in the max norm.
[[nodiscard]] double rh_residual(const HyperbolicSystem& sys, const State& u_minus,
                                 const State& u_plus, double sigma);

/// Gradient of u -> sigma(u, u+(u)) for a shock of family i, given the
/// Jacobian of u -> u+(u). Computed as l dA r / (l r) with (l, r) the
/// eigenpair of the averaged matrix A(u, u+) belonging to sigma.
[[nodiscard]] RowVector averaged_speed_gradient(const HyperbolicSystem& sys, const State& u,
                                                const State& u_plus, double sigma,
                                                const Matrix& grad_u_plus);

/// Family of the discontinuity (u_minus, u_plus, sigma) judged against a
/// reference shock. Returns nullopt when the RH residual exceeds rh_tol
/// (scaled by the flux size). Throws AmbiguousFamily when the speed band
/// containing sigma overlaps a neighbouring band.
[[nodiscard]] std::optional<Family> identify_family(const HyperbolicSystem& sys,
                                                    const State& u_minus, const State& u_plus,
                                                    double sigma, const ShockPoint& reference,
                                                    double rh_tol = 1e-10);

}  // namespace shockcontract
