#include "shockcontract/criterion.hpp"

#include "shockcontract/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace shockcontract {

namespace {

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

struct TopPair {
  double value;
  Vector vector;
};

TopPair top_eigen(const Matrix& s) {
  const Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  const auto n = s.rows();
  return {solver.eigenvalues()(n - 1), solver.eigenvectors().col(n - 1)};
}

double spectral_norm(const Matrix& s) {
  if (s.size() == 0) return 0.0;
  return Eigen::SelfAdjointEigenSolver<Matrix>(s, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
}

double triple(const Tensor3& T, const Vector& x, const Vector& y, const Vector& z) {
  double out = 0.0;
  for (std::size_t a = 0; a < T.size(); ++a) out += x(static_cast<Eigen::Index>(a)) * y.dot(T[a] * z);
  return out;
}

}  // namespace

Matrix curvature_matrix(const HyperbolicSystem& sys, const State& u, const Vector& r) {
  sys.require_domain(u);
  return weighted_slices(sys.flux_hessian(u), sys.entropy_hessian(u) * r);
}

Matrix CriterionData::restricted(double C) const { return sym(P.transpose() * full(C) * P); }
Matrix CriterionData::restricted_A() const { return sym(P.transpose() * A * P); }
Matrix CriterionData::restricted_B() const { return sym(P.transpose() * B * P); }

double CriterionData::lambda_max(double C) const {
  if (P.cols() == 0) return -std::numeric_limits<double>::infinity();
  return top_eigen(restricted(C)).value;
}

double CriterionData::scale() const {
  return std::max({spectral_norm(restricted_A()), spectral_norm(restricted_B()), 1e-300});
}

CriterionData criterion_data(const HyperbolicSystem& sys, const State& u_L, Family i) {
  const int n = sys.dimension();
  if (i.index < 1 || i.index > n) throw Error(ErrorKind::BadParameter, "family index out of range");
  CriterionData d;
  d.u_L = u_L;
  d.family = i;
  d.eigen = eigenstructure(sys, u_L);
  const Matrix H = sys.entropy_hessian(u_L);
  const Matrix J = sys.flux_jacobian(u_L);
  d.A = H * (J - d.eigen.lambda(i) * Matrix::Identity(n, n));
  d.B = curvature_matrix(sys, u_L, d.eigen.r(i));
  d.P.resize(n, n - 1);
  for (int k = 0, col = 0; k < n; ++k) {
    if (k == static_cast<int>(i.slot())) continue;
    d.P.col(col++) = d.eigen.right.col(k);
  }
  const Vector r = d.eigen.r(i);
  d.ii_limit = -0.5 * d.eigen.g(i) * r.dot(H * r);
  return d;
}

CriterionData rescaled(const CriterionData& data, const Vector& c) {
  if (c.size() != data.P.cols()) throw Error(ErrorKind::BadParameter, "rescaling has wrong length");
  CriterionData out = data;
  out.P = data.P * c.asDiagonal();
  return out;
}

Matrix limit_matrix_decomposed(const HyperbolicSystem& sys, const State& u_L, Family i, double C) {
  const EigenStructure es = eigenstructure(sys, u_L);
  const Matrix H = sys.entropy_hessian(u_L);
  const Tensor3 T = sys.entropy_third(u_L);
  const Tensor3 F = sys.flux_hessian(u_L);
  const int n = sys.dimension();
  const auto ii = static_cast<Eigen::Index>(i.slot());
  const Vector ri = es.right.col(ii);
  Matrix out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const Vector rj = es.right.col(j), rk = es.right.col(k);
      const double gap = es.eigenvalues(k) - es.eigenvalues(ii);
      const double d_term = -C * gap * rj.dot(H * rk);
      const double e_term = -gap * triple(T, rk, rj, ri);
      const double f_term = rk.dot(H * contract(F, ri, rj));
      out(j, k) = d_term + e_term + f_term;
    }
  }
  return out;
}

FeasibilityReport feasibility(const CriterionData& data, const FeasibilityOptions& options) {
  FeasibilityReport rep;
  const Matrix Ah = data.restricted_A();
  const Matrix Bh = data.restricted_B();
  const double na = spectral_norm(Ah), nb = spectral_norm(Bh);
  const double W = options.bracket_factor * std::max(1.0, na > 0.0 ? nb / na : 1.0);
  rep.bracket = W;
  const auto g = [&data](double C) { return data.lambda_max(C); };
  const auto to_state = [&data](const Vector& y) -> Vector {
    const Vector v = data.P * y;
    return v / v.norm();
  };

  const auto [c_best, g_best] = numerics::minimize_unimodal(g, -W, W);
  rep.c_best = c_best;
  rep.lambda_best = g_best;
  rep.witness = to_state(top_eigen(data.restricted(c_best)).vector);
  rep.feasible = g_best < 0.0;

  if (rep.feasible) {
    const Eigen::SelfAdjointEigenSolver<Matrix> ae(Ah, Eigen::EigenvaluesOnly);
    const double a_min = ae.eigenvalues()(0), a_max = ae.eigenvalues()(ae.eigenvalues().size() - 1);
    // As C -> -inf the form behaves like -C A_hat: negative iff A_hat < 0.
    double left = -W;
    for (int k = 0; k < 60 && g(left) < 0.0 && !(a_max < 0.0); ++k) left *= 2.0;
    rep.c_lo = g(left) < 0.0 ? -std::numeric_limits<double>::infinity()
                             : numerics::bisect_root(g, left, c_best, options.root_tol);
    double right = W;
    for (int k = 0; k < 60 && g(right) < 0.0 && !(a_min > 0.0); ++k) right *= 2.0;
    rep.c_hi = g(right) < 0.0 ? std::numeric_limits<double>::infinity()
                              : numerics::bisect_root(g, c_best, right, options.root_tol);
    return rep;
  }

  // Both one-sided top eigenvectors around the minimizer.
  const double h = 1e-6 * std::max(1.0, std::abs(c_best));
  const Vector yl = top_eigen(data.restricted(c_best - h)).vector;
  const Vector yr = top_eigen(data.restricted(c_best + h)).vector;
  rep.v_left = to_state(yl);
  rep.v_right = to_state(yr);
  const double tol = 1e-8 * data.scale() * std::max(1.0, std::abs(c_best));
  const auto form = [](const Matrix& m, const Vector& y) { return y.dot(m * y); };
  const Matrix Mb = data.restricted(c_best);
  rep.certified = form(Ah, yl) >= -tol && form(Ah, yr) <= tol && form(Mb, yl) >= -tol &&
                  form(Mb, yr) >= -tol;
  return rep;
}

SemidefiniteVerdict necessary_check(const CriterionData& data, double C) {
  SemidefiniteVerdict out;
  const Matrix Mh = data.restricted(C);
  const TopPair top = top_eigen(Mh);
  out.lambda_max = top.value;
  out.tolerance = 1e-8 * std::max({spectral_norm(data.restricted_B()),
                                   std::abs(C) * spectral_norm(data.restricted_A()), 1e-300});
  out.pass = top.value <= out.tolerance;
  if (!out.pass) {
    const Vector v = data.P * top.vector;
    out.witness = v / v.norm();
  }
  return out;
}

std::vector<ConvergenceRow> limit_convergence(const HyperbolicSystem& sys, const State& u_L,
                                              Family i, double C,
                                              const std::vector<double>& s_list) {
  const CriterionData data = criterion_data(sys, u_L, i);
  const Matrix target = data.restricted(C);
  const auto ii = static_cast<Eigen::Index>(i.slot());
  std::vector<ConvergenceRow> rows;
  for (const double s : s_list) {
    const ContractionContext ctx(sys, i, u_L, s, C);
    const Matrix H = hess_d_max(ctx, u_L);
    ConvergenceRow row;
    row.s = s;
    row.scaled = data.eigen.right.transpose() * H * data.eigen.right / s;
    const Matrix block = sym(data.P.transpose() * H * data.P) / s;
    row.block_error = numerics::max_abs(block - target);
    row.ii_entry = row.scaled(ii, ii);
    row.ii_error = std::abs(row.ii_entry - data.ii_limit);
    for (Eigen::Index k = 0; k < row.scaled.rows(); ++k) {
      if (k == ii) continue;
      row.mixed = std::max({row.mixed, std::abs(row.scaled(ii, k)), std::abs(row.scaled(k, ii))});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Counterexample find_counterexample(const ContractionContext& ctx, double delta,
                                   const CounterexampleOptions& options) {
  if (!(delta > 0.0)) throw Error(ErrorKind::BadParameter, "delta must be positive");
  const auto& sys = ctx.system();
  const CriterionData data = criterion_data(sys, ctx.u_L(), ctx.family());
  const double C = ctx.slope();
  const Matrix Mfull = data.full(C);
  const MaximalShock base = maximal_shock(ctx, ctx.u_L(), true);
  const Matrix H = evaluate_d_max(ctx, ctx.u_L(), 2).hessian;
  const double lip = base.grad_u_plus.operatorNorm();

  // Candidate directions: eigenvectors of M_hat(C) with positive eigenvalue
  // and, when infeasible, the certificate directions. Both signs.
  std::vector<Vector> candidates;
  const Eigen::SelfAdjointEigenSolver<Matrix> es(data.restricted(C));
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    if (es.eigenvalues()(k) <= 0.0) break;
    candidates.push_back((data.P * es.eigenvectors().col(k)).normalized());
  }
  const FeasibilityReport rep = feasibility(data);
  if (!rep.feasible) {
    candidates.push_back(rep.witness);
    candidates.push_back(rep.v_left);
    candidates.push_back(rep.v_right);
  }
  std::vector<std::pair<double, Vector>> ranked;
  for (const Vector& v : candidates) {
    for (const double sign : {1.0, -1.0}) {
      const Vector d = sign * v;
      const double model = 0.5 * d.dot(H * d);
      if (model > 0.0 && 0.5 * ctx.strength() * d.dot(Mfull * d) > 0.0) ranked.emplace_back(model, d);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });

  const auto attempt = [&](const Vector& v, double t) -> std::optional<Counterexample> {
    const State um = ctx.u_L() + t * v;
    if (!sys.contains(um) || !in_region(ctx, um)) return std::nullopt;
    MaximalShock ms;
    try {
      ms = maximal_shock(ctx, um, false);
    } catch (const Error&) {
      return std::nullopt;
    }
    Counterexample cx;
    cx.u_minus = um;
    cx.u_plus = ms.u_plus;
    cx.sigma = ms.sigma_pm;
    cx.d_rh = d_rh(ctx, um, ms.u_plus, ms.sigma_pm);
    cx.t = t;
    cx.direction = v;
    cx.rh_residual = rh_residual(sys, um, ms.u_plus, ms.sigma_pm);
    cx.distance = (um - ctx.u_L()).norm() + (ms.u_plus - ctx.u_R()).norm();
    cx.hessian_model = 0.5 * v.dot(H * v);
    cx.limit_model = 0.5 * ctx.strength() * v.dot(Mfull * v);
    return cx;
  };

  for (const auto& [model, v] : ranked) {
    double t = delta / (lip + 1.0);
    for (int k = 0; k <= options.max_halvings; ++k, t *= options.backtrack) {
      auto cx = attempt(v, t);
      if (!cx || cx->distance >= delta) continue;
      if (!(cx->d_rh > options.margin * model * t * t)) continue;
      for (const double tt : {t, 0.5 * t, 0.25 * t}) {
        const auto r = attempt(v, tt);
        if (r) cx->refinement.push_back({tt, r->d_rh, r->d_rh / (tt * tt)});
      }
      return *cx;
    }
  }
  throw Error(ErrorKind::NoPositiveDirection,
              "no direction in V gave D_RH > 0; the limit form may be semidefinite");
}

}  // namespace shockcontract
