#include "shockcontract/shock_curves.hpp"

#include "shockcontract/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace shockcontract {

namespace {

// (f(u + s w) - f(u)) / s without the cancellation at small s.
Vector secant_flux(const HyperbolicSystem& sys, const State& u, double s, const Vector& w) {
  Vector out = Vector::Zero(u.size());
  for (const auto& node : numerics::unit_gauss20()) {
    out += node.w * (sys.flux_jacobian(u + (node.x * s) * w) * w);
  }
  return out;
}

// d/ds of secant_flux at fixed w: int_0^1 t f''(u + t s w):(w, w) dt.
Vector secant_flux_ds(const HyperbolicSystem& sys, const State& u, double s, const Vector& w) {
  Vector out = Vector::Zero(u.size());
  for (const auto& node : numerics::unit_gauss20()) {
    out += (node.w * node.x) * contract(sys.flux_hessian(u + (node.x * s) * w), w, w);
  }
  return out;
}

Matrix bordered(const Matrix& block, const Vector& column, const RowVector& row) {
  const auto n = block.rows();
  Matrix J = Matrix::Zero(n + 1, n + 1);
  J.topLeftCorner(n, n) = block;
  J.topRightCorner(n, 1) = column;
  J.bottomLeftCorner(1, n) = row;
  return J;
}

}  // namespace

HugoniotCurve::HugoniotCurve(HyperbolicSystem sys, State base, Family family, CurveOptions options)
    : sys_(std::move(sys)), base_(std::move(base)), family_(family), options_(options) {}

std::optional<HugoniotCurve::Solved> HugoniotCurve::correct(double s, Vector w, double sigma) const {
  const auto n = base_.size();
  for (int it = 0; it < options_.max_newton; ++it) {
    const State x = base_ + s * w;
    if (!sys_.contains(x)) return std::nullopt;
    Vector G(n + 1);
    G.head(n) = secant_flux(sys_, base_, s, w) - sigma * w;
    G(n) = l_.dot(w) - 1.0;
    if (!G.allFinite()) return std::nullopt;
    if (G.lpNorm<Eigen::Infinity>() <= tol_) return Solved{std::move(w), sigma};
    const Matrix J = bordered(sys_.flux_jacobian(x) - sigma * Matrix::Identity(n, n), -w, l_);
    const Eigen::PartialPivLU<Matrix> lu(J);
    const Vector delta = lu.solve(-G);
    if (!delta.allFinite()) return std::nullopt;
    w += delta.head(n);
    sigma += delta(n);
  }
  return std::nullopt;
}

Vector HugoniotCurve::rates(double s, const Vector& w, double sigma) const {
  const auto n = base_.size();
  const Matrix J = bordered(sys_.flux_jacobian(base_ + s * w) - sigma * Matrix::Identity(n, n), -w, l_);
  Vector rhs = Vector::Zero(n + 1);
  rhs.head(n) = -secant_flux_ds(sys_, base_, s, w);
  return J.partialPivLu().solve(rhs);
}

ShockPoint HugoniotCurve::make_point(double s, const Vector& w, double sigma) const {
  ShockPoint p;
  p.u_minus = base_;
  p.u_plus = base_ + s * w;
  p.sigma = sigma;
  p.family = family_;
  p.s = s;
  p.rh_residual = rh_residual(sys_, p.u_minus, p.u_plus, sigma);

  const Vector d = rates(s, w, sigma);
  p.tangent = w + s * d.head(w.size());
  p.sigma_dot = d(w.size());

  if (!options_.classify) {
    p.lax_margin = std::numeric_limits<double>::quiet_NaN();
    return p;
  }
  try {
    const EigenStructure lo = eigenstructure(sys_, p.u_minus);
    const EigenStructure hi = eigenstructure(sys_, p.u_plus, &lo);
    const double lm = lo.lambda(family_), lp = hi.lambda(family_);
    if (lo.kinds[family_.slot()] == FamilyKind::GenuinelyNonlinear) {
      p.lax_margin = std::min(sigma - lp, lm - sigma);
    } else {
      p.lax_margin = -std::max(std::abs(sigma - lm), std::abs(sigma - lp));
    }
  } catch (const Error&) {
    p.lax_margin = std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

HugoniotCurve HugoniotCurve::trace(const HyperbolicSystem& sys, const State& u, Family i,
                                   double s_end, const CurveOptions& options) {
  if (i.index < 1 || i.index > sys.dimension()) {
    throw Error(ErrorKind::BadParameter, "family index out of range");
  }
  if (!std::isfinite(s_end)) throw Error(ErrorKind::BadParameter, "curve end must be finite");
  if (options.orientation != 1.0 && options.orientation != -1.0) {
    throw Error(ErrorKind::BadParameter, "orientation must be +1 or -1");
  }
  const EigenStructure es = eigenstructure(sys, u);
  HugoniotCurve curve(sys, u, i, options);
  curve.l_ = options.orientation * es.l(i);
  curve.tol_ = options.rh_tol * std::max(1.0, sys.flux_jacobian(u).lpNorm<Eigen::Infinity>());

  Vector w = options.orientation * es.r(i);
  double sigma = es.lambda(i);
  double s = 0.0;
  curve.samples_.push_back(curve.make_point(0.0, w, sigma));
  curve.w_.push_back(w);
  curve.w_dot_.push_back(curve.rates(0.0, w, sigma).head(u.size()));

  const double direction = s_end < 0.0 ? -1.0 : 1.0;
  double ds = std::min(options.initial_step, options.max_step);
  bool hit_domain = false;
  while (std::abs(s_end - s) > 0.0) {
    const double step = std::min(ds, std::abs(s_end - s));
    const double s_next = std::abs(s_end - s) - step <= 1e-14 * std::max(1.0, std::abs(s_end))
                              ? s_end
                              : s + direction * step;
    const double h = s_next - s;
    const ShockPoint& last = curve.samples_.back();
    Vector w_pred = w + h * curve.w_dot_.back();
    const double sigma_pred = sigma + h * last.sigma_dot;
    const auto solved = curve.correct(s_next, w_pred, sigma_pred);
    if (!solved) {
      hit_domain = hit_domain || !sys.contains(u + s_next * w_pred);
      ds *= 0.5;
      if (ds < options.min_step) {
        throw Error(hit_domain ? ErrorKind::DomainExit : ErrorKind::ContinuationFailure,
                    "shock curve stalled at s = " + std::to_string(s));
      }
      continue;
    }
    s = s_next;
    w = solved->w;
    sigma = solved->sigma;
    curve.samples_.push_back(curve.make_point(s, w, sigma));
    curve.w_.push_back(w);
    curve.w_dot_.push_back(curve.rates(s, w, sigma).head(u.size()));
    ds = std::min(2.0 * ds, options.max_step);
    hit_domain = false;
  }
  curve.max_s_ = s;
  return curve;
}

ShockPoint HugoniotCurve::at(double s) const {
  const double lo = std::min(0.0, max_s_), hi = std::max(0.0, max_s_);
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (!(s >= lo - slack && s <= hi + slack)) {
    throw Error(ErrorKind::BadParameter, "s = " + std::to_string(s) + " outside traced range");
  }
  std::size_t k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < samples_.size(); ++j) {
    const double d = std::abs(samples_[j].s - s);
    if (d < best) {
      best = d;
      k = j;
    }
  }
  if (best == 0.0) return samples_[k];
  const double h = s - samples_[k].s;
  const auto solved = correct(s, w_[k] + h * w_dot_[k], samples_[k].sigma + h * samples_[k].sigma_dot);
  if (!solved) {
    throw Error(ErrorKind::ContinuationFailure, "corrector failed at s = " + std::to_string(s));
  }
  return make_point(s, solved->w, solved->sigma);
}

double integrate_along(const HugoniotCurve& curve, double s,
                       const std::function<double(const ShockPoint&)>& g, double abs_tol) {
  if (s == 0.0) return 0.0;
  return numerics::integrate([&](double t) { return g(curve.at(t)); }, 0.0, s, abs_tol);
}

ShockPoint hugoniot_point(const HyperbolicSystem& sys, const State& u, Family i, double s,
                          const CurveOptions& options) {
  return HugoniotCurve::trace(sys, u, i, s, options).samples().back();
}

Matrix averaged_matrix(const HyperbolicSystem& sys, const State& a, const State& b) {
  Matrix out = Matrix::Zero(a.size(), a.size());
  for (const auto& node : numerics::unit_gauss20()) out += node.w * sys.flux_jacobian(a + node.x * (b - a));
  return out;
}

double rh_residual(const HyperbolicSystem& sys, const State& u_minus, const State& u_plus,
                   double sigma) {
  return (sys.flux(u_plus) - sys.flux(u_minus) - sigma * (u_plus - u_minus)).lpNorm<Eigen::Infinity>();
}

RowVector averaged_speed_gradient(const HyperbolicSystem& sys, const State& u, const State& u_plus,
                                  double sigma, const Matrix& grad_u_plus) {
  const auto n = u.size();
  const Matrix A = averaged_matrix(sys, u, u_plus);
  Eigen::EigenSolver<Matrix> solver(A, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ComplexSpectrum, "averaged matrix is not diagonalizable");
  }
  Eigen::Index k = 0;
  (solver.eigenvalues().array() - sigma).abs().minCoeff(&k);
  const Eigen::MatrixXcd V = solver.eigenvectors();
  const Eigen::MatrixXcd Vinv = V.inverse();
  const Vector r = V.col(k).real();
  const RowVector l = Vinv.row(k).real();
  const double lr = l.dot(r);
  if (std::abs(lr) < 1e-14 * r.norm() * l.norm()) {
    throw Error(ErrorKind::SingularLinearSystem, "degenerate eigenpair of the averaged matrix");
  }

  Matrix dA_minus = Matrix::Zero(n, n);  // column k: l-weighted d(A r)/du_k at fixed u+
  Matrix dA_plus = Matrix::Zero(n, n);
  for (const auto& node : numerics::unit_gauss20()) {
    const Tensor3 H = sys.flux_hessian(u + node.x * (u_plus - u));
    Matrix K(n, n);  // K(m, j) = (H_m r)_j
    for (Eigen::Index m = 0; m < n; ++m) K.row(m) = (H[static_cast<std::size_t>(m)] * r).transpose();
    dA_minus += (node.w * (1.0 - node.x)) * K;
    dA_plus += (node.w * node.x) * K;
  }
  return (l * (dA_minus + dA_plus * grad_u_plus)) / lr;
}

std::optional<Family> identify_family(const HyperbolicSystem& sys, const State& u_minus,
                                      const State& u_plus, double sigma,
                                      const ShockPoint& reference, double rh_tol) {
  const double scale = std::max(
      {1.0, sys.flux(u_minus).lpNorm<Eigen::Infinity>(), sys.flux(u_plus).lpNorm<Eigen::Infinity>()});
  if (rh_residual(sys, u_minus, u_plus, sigma) > rh_tol * scale) return std::nullopt;

  const int n = sys.dimension();
  const EigenStructure e0 = eigenstructure(sys, reference.u_minus);
  const std::vector<EigenStructure> ends = {
      e0, eigenstructure(sys, reference.u_plus, &e0), eigenstructure(sys, u_minus, &e0),
      eigenstructure(sys, u_plus, &e0)};
  std::vector<double> lo(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<double> hi(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  for (const auto& es : ends) {
    for (int k = 0; k < n; ++k) {
      lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], es.eigenvalues(k));
      hi[static_cast<std::size_t>(k)] = std::max(hi[static_cast<std::size_t>(k)], es.eigenvalues(k));
    }
  }
  lo[reference.family.slot()] = std::min(lo[reference.family.slot()], reference.sigma);
  hi[reference.family.slot()] = std::max(hi[reference.family.slot()], reference.sigma);

  // Nearest band; sigma sits inside a band for a small shock of that family.
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const auto K = static_cast<std::size_t>(k);
    const double d = sigma < lo[K] ? lo[K] - sigma : (sigma > hi[K] ? sigma - hi[K] : 0.0);
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  const auto B = static_cast<std::size_t>(best);
  const bool overlaps = (best > 0 && hi[B - 1] >= lo[B]) || (best + 1 < n && hi[B] >= lo[B + 1]);
  if (overlaps) {
    throw Error(ErrorKind::AmbiguousFamily, "speed bands of neighbouring families overlap");
  }
  return Family{best + 1};
}

}  // namespace shockcontract
