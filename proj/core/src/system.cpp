#include "shockcontract/system.hpp"

#include "shockcontract/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace shockcontract {

namespace {

std::string describe(const Vector& u) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index k = 0; k < u.size(); ++k) os << (k ? ", " : "") << u(k);
  os << ")";
  return os.str();
}

}  // namespace

HyperbolicSystem::HyperbolicSystem(SystemDefinition def, DerivativeMode mode)
    : def_(std::make_shared<const SystemDefinition>(std::move(def))), mode_(mode) {
  if (def_->dimension <= 0) throw Error(ErrorKind::BadParameter, "system dimension must be positive");
  if (!def_->flux || !def_->entropy) {
    throw Error(ErrorKind::BadParameter, "flux and entropy evaluators are required");
  }
  if (!def_->entropy_flux) {
    const Vector anchor = def_->anchor.value_or(Vector::Zero(def_->dimension));
    if (def_->in_domain && !def_->in_domain(anchor)) {
      throw Error(ErrorKind::BadParameter, "entropy flux anchor lies outside the domain");
    }
  }
}

HyperbolicSystem::HyperbolicSystem(std::shared_ptr<const SystemDefinition> def, DerivativeMode mode)
    : def_(std::move(def)), mode_(mode) {}

HyperbolicSystem HyperbolicSystem::with_mode(DerivativeMode mode) const {
  return HyperbolicSystem(def_, mode);
}

bool HyperbolicSystem::contains(const Vector& u) const {
  if (u.size() != def_->dimension || !u.allFinite()) return false;
  return !def_->in_domain || def_->in_domain(u);
}

void HyperbolicSystem::require_domain(const Vector& u) const {
  if (!contains(u)) {
    throw Error(ErrorKind::DomainViolation,
                "state " + describe(u) + " outside " + def_->domain_description);
  }
}

Vector HyperbolicSystem::flux(const Vector& u) const { return def_->flux(u); }

Matrix HyperbolicSystem::flux_jacobian(const Vector& u) const {
  if (analytic() && def_->flux_jacobian) return def_->flux_jacobian(u);
  return numerics::central_jacobian(def_->flux, u, 3.0);
}

Tensor3 HyperbolicSystem::flux_hessian(const Vector& u) const {
  if (analytic() && def_->flux_hessian) return def_->flux_hessian(u);
  // d/du_a of the Jacobian gives slice a with entries (k, b); regroup by k.
  const Tensor3 by_direction = numerics::central_matrix_derivative(
      [this](const Vector& x) { return flux_jacobian(x); }, u,
      analytic() && def_->flux_jacobian ? 3.0 : 4.0);
  const int n = dimension();
  Tensor3 out = zero_tensor(n);
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < n; ++k) {
      for (int b = 0; b < n; ++b) out[static_cast<std::size_t>(k)](a, b) = by_direction[static_cast<std::size_t>(a)](k, b);
    }
  }
  for (auto& slice : out) slice = 0.5 * (slice + slice.transpose()).eval();
  return out;
}

double HyperbolicSystem::entropy(const Vector& u) const { return def_->entropy(u); }

Vector HyperbolicSystem::entropy_gradient(const Vector& u) const {
  if (analytic() && def_->entropy_gradient) return def_->entropy_gradient(u);
  return numerics::central_gradient(def_->entropy, u, 3.0);
}

Matrix HyperbolicSystem::entropy_hessian(const Vector& u) const {
  if (analytic() && def_->entropy_hessian) return def_->entropy_hessian(u);
  const double root = analytic() && def_->entropy_gradient ? 3.0 : 4.0;
  Matrix H = numerics::central_jacobian([this](const Vector& x) { return entropy_gradient(x); }, u,
                                        root);
  return 0.5 * (H + H.transpose());
}

Tensor3 HyperbolicSystem::entropy_third(const Vector& u) const {
  if (analytic() && def_->entropy_third) return def_->entropy_third(u);
  Tensor3 T = numerics::central_matrix_derivative(
      [this](const Vector& x) { return entropy_hessian(x); }, u, 4.0);
  // Symmetrize over all index permutations.
  const int n = dimension();
  Tensor3 out = zero_tensor(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b),
                   C = static_cast<std::size_t>(c);
        out[A](b, c) = (T[A](b, c) + T[A](c, b) + T[B](a, c) + T[B](c, a) + T[C](a, b) +
                        T[C](b, a)) / 6.0;
      }
  return out;
}

double HyperbolicSystem::entropy_flux(const Vector& u) const {
  if (def_->entropy_flux) return def_->entropy_flux(u);
  const Vector anchor = def_->anchor.value_or(Vector::Zero(dimension()));
  const Vector du = u - anchor;
  double q = 0.0;
  for (const auto& node : numerics::unit_gauss20()) {
    const Vector x = anchor + node.x * du;
    q += node.w * entropy_gradient(x).dot(flux_jacobian(x) * du);
  }
  return q;
}

Matrix flux_jacobian(const HyperbolicSystem& sys, const State& u) {
  sys.require_domain(u);
  return sys.flux_jacobian(u);
}

EigenStructure eigenstructure(const HyperbolicSystem& sys, const State& u,
                              const EigenStructure* reference) {
  const Matrix J = flux_jacobian(sys, u);
  const int n = sys.dimension();

  Eigen::EigenSolver<Matrix> solver(J, true);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ComplexSpectrum, "eigen-decomposition failed at " + describe(u));
  }
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();
  const double scale = std::max(values.cwiseAbs().maxCoeff(), 1e-300);
  for (int k = 0; k < n; ++k) {
    if (std::abs(values(k).imag()) > 1e-10 * scale) {
      throw Error(ErrorKind::ComplexSpectrum, "non-real characteristic speed at " + describe(u));
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values(a).real() < values(b).real(); });

  EigenStructure es;
  es.eigenvalues.resize(n);
  es.right.resize(n, n);
  for (int k = 0; k < n; ++k) {
    const int src = order[static_cast<std::size_t>(k)];
    es.eigenvalues(k) = values(src).real();
    Vector r = vectors.col(src).real();
    es.right.col(k) = r.normalized();
  }

  es.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) {
    es.min_gap = std::min(es.min_gap, es.eigenvalues(k + 1) - es.eigenvalues(k));
  }
  if (n > 1 && es.min_gap <= sys.hyperbolicity_floor() * scale) {
    throw Error(ErrorKind::StrictHyperbolicityViolation,
                "eigenvalue gap " + std::to_string(es.min_gap) + " at " + describe(u));
  }

  const Tensor3 H = sys.flux_hessian(u);
  Matrix left = es.right.inverse();
  es.gnl.resize(n);
  es.kinds.resize(static_cast<std::size_t>(n));
  const double hscale = [&] {
    double m = 0.0;
    for (const auto& s : H) m = std::max(m, numerics::max_abs(s));
    return m;
  }();
  for (int k = 0; k < n; ++k) {
    const Vector r = es.right.col(k);
    const double g = left.row(k).dot(contract(H, r, r));
    FamilyKind kind;
    if (!sys.definition().families.empty()) {
      kind = sys.definition().families[static_cast<std::size_t>(k)];
    } else {
      kind = std::abs(g) > 1e-9 * std::max(hscale, 1e-300) ? FamilyKind::GenuinelyNonlinear
                                                           : FamilyKind::LinearlyDegenerate;
    }
    double sign = 1.0;
    if (kind == FamilyKind::GenuinelyNonlinear) {
      sign = g < 0.0 ? -1.0 : 1.0;
    } else if (reference != nullptr && reference->right.cols() == n) {
      sign = r.dot(reference->right.col(k)) < 0.0 ? -1.0 : 1.0;
    } else {
      Eigen::Index imax = 0;
      r.cwiseAbs().maxCoeff(&imax);
      sign = r(imax) < 0.0 ? -1.0 : 1.0;
    }
    es.right.col(k) *= sign;
    left.row(k) *= sign;
    es.gnl(k) = sign * g;
    es.kinds[static_cast<std::size_t>(k)] = kind;
  }
  es.left = left;
  return es;
}

double entropy_compatibility_residual(const HyperbolicSystem& sys, const State& u) {
  sys.require_domain(u);
  const RowVector lhs = sys.entropy_gradient(u).transpose() * sys.flux_jacobian(u);
  const Vector qgrad = numerics::central_gradient(
      [&sys](const Vector& x) { return sys.entropy_flux(x); }, u, 3.0);
  return (lhs.transpose() - qgrad).cwiseAbs().maxCoeff();
}

}  // namespace shockcontract
