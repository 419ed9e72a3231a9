#pragma once

#include "shockcontract/types.hpp"

#include <functional>
#include <span>
#include <utility>

namespace shockcontract::numerics {

struct QuadratureNode {
  double x;
  double w;
};

/// 8-point Gauss-Legendre rule mapped to [0, 1].
[[nodiscard]] std::span<const QuadratureNode> unit_gauss8();
/// 3-point Gauss-Legendre rule mapped to [0, 1].
[[nodiscard]] std::span<const QuadratureNode> unit_gauss3();
/// 20-point Gauss-Legendre rule mapped to [0, 1].
[[nodiscard]] std::span<const QuadratureNode> unit_gauss20();

/// Per-coordinate central difference step eps^(1/order) * max(1, |u_k|).
[[nodiscard]] Vector difference_steps(const Vector& u, double root);

/// Central-difference Jacobian of F at u; column k is dF/du_k.
[[nodiscard]] Matrix central_jacobian(const std::function<Vector(const Vector&)>& F,
                                      const Vector& u, double root = 3.0);

/// Central-difference gradient of a scalar function.
[[nodiscard]] Vector central_gradient(const std::function<double(const Vector&)>& F,
                                      const Vector& u, double root = 3.0);

/// Central differences of a matrix-valued function; slice k is dM/du_k.
[[nodiscard]] Tensor3 central_matrix_derivative(const std::function<Matrix(const Vector&)>& F,
                                                const Vector& u, double root = 3.0);

/// Adaptive Gauss-Kronrod integral of a scalar function on [a, b].
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a, double b,
                               double abs_tol);

/// Minimizer and minimum of a unimodal function on [lo, hi].
[[nodiscard]] std::pair<double, double> minimize_unimodal(const std::function<double(double)>& f,
                                                          double lo, double hi);

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
[[nodiscard]] double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                                 double x_tol);

/// Largest absolute entry.
[[nodiscard]] double max_abs(const Matrix& m);

}  // namespace shockcontract::numerics
