#include "shockcontract/types.hpp"

namespace shockcontract {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::StrictHyperbolicityViolation: return "StrictHyperbolicityViolation";
    case ErrorKind::ComplexSpectrum: return "ComplexSpectrum";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::ContinuationFailure: return "ContinuationFailure";
    case ErrorKind::DomainExit: return "DomainExit";
    case ErrorKind::AmbiguousFamily: return "AmbiguousFamily";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::SingularLinearSystem: return "SingularLinearSystem";
    case ErrorKind::OutsideRegion: return "OutsideRegion";
    case ErrorKind::NoPositiveDirection: return "NoPositiveDirection";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::TraceAmbiguity: return "TraceAmbiguity";
    case ErrorKind::BadLayout: return "BadLayout";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

Vector contract(const Tensor3& tensor, const Vector& a, const Vector& b) {
  Vector out(static_cast<Eigen::Index>(tensor.size()));
  for (std::size_t k = 0; k < tensor.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = a.dot(tensor[k] * b);
  }
  return out;
}

Matrix weighted_slices(const Tensor3& tensor, const Vector& weights) {
  const auto n = weights.size();
  Matrix out = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < tensor.size(); ++k) {
    out += weights(static_cast<Eigen::Index>(k)) * tensor[k];
  }
  return out;
}

Tensor3 zero_tensor(int n) { return Tensor3(static_cast<std::size_t>(n), Matrix::Zero(n, n)); }

}  // namespace shockcontract
