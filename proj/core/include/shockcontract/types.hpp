#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shockcontract {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;
using State = Eigen::VectorXd;

/// Third-order tensor stored as n slices. For a flux f, slice k is the
/// Hessian of the component f_k. For an entropy, slice a holds
/// d^3 eta / du_a du_b du_c indexed by (b, c).
using Tensor3 = std::vector<Matrix>;

/// Characteristic family, numbered 1..n in increasing wave speed.
struct Family {
  int index = 1;

  [[nodiscard]] constexpr std::size_t slot() const noexcept {
    return static_cast<std::size_t>(index - 1);
  }
  friend constexpr bool operator==(Family, Family) = default;
};

enum class ErrorKind {
  DomainViolation,
  StrictHyperbolicityViolation,
  ComplexSpectrum,
  BadParameter,
  ContinuationFailure,
  DomainExit,
  AmbiguousFamily,
  NoBracket,
  NonMonotone,
  SingularLinearSystem,
  OutsideRegion,
  NoPositiveDirection,
  CFLViolation,
  TraceAmbiguity,
  BadLayout,
  ConfigError,
};

[[nodiscard]] const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// v_k = a^T T_k b for every slice k.
[[nodiscard]] Vector contract(const Tensor3& tensor, const Vector& a, const Vector& b);

/// sum_k w_k T_k.
[[nodiscard]] Matrix weighted_slices(const Tensor3& tensor, const Vector& weights);

/// Zero tensor of dimension n.
[[nodiscard]] Tensor3 zero_tensor(int n);

}  // namespace shockcontract
