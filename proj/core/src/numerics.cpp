#include "shockcontract/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace shockcontract::numerics {

namespace {

template <unsigned N>
std::array<QuadratureNode, N> build_unit_rule() {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  std::array<QuadratureNode, N> out{};
  std::size_t k = 0;
  for (std::size_t j = 0; j < abscissa.size(); ++j) {
    const double x = abscissa[j];
    const double w = weights[j];
    if (x == 0.0) {
      out[k++] = {0.5, 0.5 * w};
    } else {
      out[k++] = {0.5 * (1.0 - x), 0.5 * w};
      out[k++] = {0.5 * (1.0 + x), 0.5 * w};
    }
  }
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.x < b.x; });
  return out;
}

}  // namespace

std::span<const QuadratureNode> unit_gauss8() {
  static const auto rule = build_unit_rule<8>();
  return rule;
}

std::span<const QuadratureNode> unit_gauss3() {
  static const auto rule = build_unit_rule<3>();
  return rule;
}

std::span<const QuadratureNode> unit_gauss20() {
  static const auto rule = build_unit_rule<20>();
  return rule;
}

Vector difference_steps(const Vector& u, double root) {
  const double base = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / root);
  Vector h(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) h(k) = base * std::max(1.0, std::abs(u(k)));
  return h;
}

Matrix central_jacobian(const std::function<Vector(const Vector&)>& F, const Vector& u,
                        double root) {
  const Vector h = difference_steps(u, root);
  Matrix J;
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    Vector up = u, um = u;
    up(k) += h(k);
    um(k) -= h(k);
    const Vector col = (F(up) - F(um)) / (up(k) - um(k));
    if (k == 0) J.resize(col.size(), u.size());
    J.col(k) = col;
  }
  return J;
}

Vector central_gradient(const std::function<double(const Vector&)>& F, const Vector& u,
                        double root) {
  const Vector h = difference_steps(u, root);
  Vector g(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    Vector up = u, um = u;
    up(k) += h(k);
    um(k) -= h(k);
    g(k) = (F(up) - F(um)) / (up(k) - um(k));
  }
  return g;
}

Tensor3 central_matrix_derivative(const std::function<Matrix(const Vector&)>& F, const Vector& u,
                                  double root) {
  const Vector h = difference_steps(u, root);
  Tensor3 out;
  out.reserve(static_cast<std::size_t>(u.size()));
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    Vector up = u, um = u;
    up(k) += h(k);
    um(k) -= h(k);
    out.push_back((F(up) - F(um)) / (up(k) - um(k)));
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  // The relative tolerance argument is derived from the requested absolute one.
  const double scale = std::max(std::abs(b - a), 1e-300);
  const double rel = std::max(abs_tol / scale, 1e-15);
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel, &error,
                                                                       &l1);
}

std::pair<double, double> minimize_unimodal(const std::function<double(double)>& f, double lo,
                                            double hi) {
  const auto r = boost::math::tools::brent_find_minima(f, lo, hi, 52);
  return {r.first, r.second};
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
  auto done = [x_tol](double a, double b) { return std::abs(b - a) <= x_tol; };
  const auto r = boost::math::tools::bisect(f, lo, hi, done);
  return 0.5 * (r.first + r.second);
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace shockcontract::numerics
