#include "shockcontract/system.hpp"

#include <cmath>

namespace shockcontract {

namespace {

void require_gamma(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 1.0) {
    throw Error(ErrorKind::BadParameter, "gamma must exceed 1");
  }
}

// p(v) = v^-gamma and its first two derivatives.
struct Pressure {
  double gamma;
  [[nodiscard]] double p(double v) const { return std::pow(v, -gamma); }
  [[nodiscard]] double dp(double v) const { return -gamma * std::pow(v, -gamma - 1.0); }
  [[nodiscard]] double ddp(double v) const { return gamma * (gamma + 1.0) * std::pow(v, -gamma - 2.0); }
  [[nodiscard]] double potential(double v) const { return std::pow(v, 1.0 - gamma) / (gamma - 1.0); }
};

}  // namespace

HyperbolicSystem burgers() {
  SystemDefinition d;
  d.name = "burgers";
  d.dimension = 1;
  d.flux = [](const Vector& u) { return Vector::Constant(1, 0.5 * u(0) * u(0)); };
  d.flux_jacobian = [](const Vector& u) { return Matrix::Constant(1, 1, u(0)); };
  d.flux_hessian = [](const Vector&) { return Tensor3{Matrix::Constant(1, 1, 1.0)}; };
  d.entropy = [](const Vector& u) { return 0.5 * u(0) * u(0); };
  d.entropy_gradient = [](const Vector& u) { return u; };
  d.entropy_hessian = [](const Vector&) { return Matrix::Identity(1, 1); };
  d.entropy_third = [](const Vector&) { return zero_tensor(1); };
  d.entropy_flux = [](const Vector& u) { return u(0) * u(0) * u(0) / 3.0; };
  d.domain_description = "R";
  d.families = {FamilyKind::GenuinelyNonlinear};
  return HyperbolicSystem(std::move(d));
}

HyperbolicSystem p_system(double gamma) {
  require_gamma(gamma);
  const Pressure pr{gamma};
  SystemDefinition d;
  d.name = "p_system";
  d.dimension = 2;
  // State (v, u).
  d.flux = [pr](const Vector& x) { return Vector{{-x(1), pr.p(x(0))}}; };
  d.flux_jacobian = [pr](const Vector& x) {
    Matrix J{{0.0, -1.0}, {pr.dp(x(0)), 0.0}};
    return J;
  };
  d.flux_hessian = [pr](const Vector& x) {
    Tensor3 H = zero_tensor(2);
    H[1](0, 0) = pr.ddp(x(0));
    return H;
  };
  d.entropy = [pr](const Vector& x) { return 0.5 * x(1) * x(1) + pr.potential(x(0)); };
  d.entropy_gradient = [pr](const Vector& x) { return Vector{{-pr.p(x(0)), x(1)}}; };
  d.entropy_hessian = [pr](const Vector& x) {
    Matrix H{{-pr.dp(x(0)), 0.0}, {0.0, 1.0}};
    return H;
  };
  d.entropy_third = [pr](const Vector& x) {
    Tensor3 T = zero_tensor(2);
    T[0](0, 0) = -pr.ddp(x(0));
    return T;
  };
  d.entropy_flux = [pr](const Vector& x) { return pr.p(x(0)) * x(1); };
  d.in_domain = [](const Vector& x) { return x(0) > 0.0; };
  d.domain_description = "{v > 0}";
  d.families = {FamilyKind::GenuinelyNonlinear, FamilyKind::GenuinelyNonlinear};
  return HyperbolicSystem(std::move(d));
}

HyperbolicSystem example3x3(double alpha) {
  if (!std::isfinite(alpha)) throw Error(ErrorKind::BadParameter, "alpha must be finite");
  SystemDefinition d;
  d.name = "example3x3";
  d.dimension = 3;
  // Flux is the gradient of
  //   phi = (u+1)^3/3 + v^3/3 + (w-1)^3/3 - u^2 v - 3 v w^2 + 2 alpha u v w.
  const auto phi = [alpha](const Vector& x) {
    const double u = x(0), v = x(1), w = x(2);
    return std::pow(u + 1.0, 3) / 3.0 + v * v * v / 3.0 + std::pow(w - 1.0, 3) / 3.0 - u * u * v -
           3.0 * v * w * w + 2.0 * alpha * u * v * w;
  };
  d.flux = [alpha](const Vector& x) {
    const double u = x(0), v = x(1), w = x(2);
    return Vector{{(u + 1.0) * (u + 1.0) + v * (2.0 * alpha * w - 2.0 * u),
                   v * v - u * u - 3.0 * w * w + 2.0 * alpha * u * w,
                   (w - 1.0) * (w - 1.0) + v * (2.0 * alpha * u - 6.0 * w)}};
  };
  d.flux_jacobian = [alpha](const Vector& x) {
    const double u = x(0), v = x(1), w = x(2);
    Matrix J{{2.0 * (u + 1.0) - 2.0 * v, -2.0 * u + 2.0 * alpha * w, 2.0 * alpha * v},
             {-2.0 * u + 2.0 * alpha * w, 2.0 * v, -6.0 * w + 2.0 * alpha * u},
             {2.0 * alpha * v, -6.0 * w + 2.0 * alpha * u, 2.0 * (w - 1.0) - 6.0 * v}};
    return J;
  };
  d.flux_hessian = [alpha](const Vector&) {
    const double a2 = 2.0 * alpha;
    Tensor3 H = zero_tensor(3);
    H[0] = Matrix{{2.0, -2.0, 0.0}, {-2.0, 0.0, a2}, {0.0, a2, 0.0}};
    H[1] = Matrix{{-2.0, 0.0, a2}, {0.0, 2.0, 0.0}, {a2, 0.0, -6.0}};
    H[2] = Matrix{{0.0, a2, 0.0}, {a2, 0.0, -6.0}, {0.0, -6.0, 2.0}};
    return H;
  };
  d.entropy = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  d.entropy_gradient = [](const Vector& x) { return x; };
  d.entropy_hessian = [](const Vector&) { return Matrix::Identity(3, 3); };
  d.entropy_third = [](const Vector&) { return zero_tensor(3); };
  d.entropy_flux = [phi, flux = d.flux](const Vector& x) { return x.dot(flux(x)) - phi(x); };
  d.domain_description = "R^3";
  return HyperbolicSystem(std::move(d));
}

HyperbolicSystem mhd2d(double beta, double gamma) {
  require_gamma(gamma);
  if (!std::isfinite(beta) || beta == 0.0) {
    throw Error(ErrorKind::BadParameter, "beta must be finite and nonzero");
  }
  const Pressure pr{gamma};
  SystemDefinition d;
  d.name = "mhd2d";
  d.dimension = 4;
  // State (v, q, u, w) with q = vB.
  d.flux = [pr, beta](const Vector& x) {
    const double v = x(0), q = x(1), u = x(2), w = x(3);
    return Vector{{-u, -beta * w, pr.p(v) + q * q / (2.0 * v * v), -beta * q / v}};
  };
  d.flux_jacobian = [pr, beta](const Vector& x) {
    const double v = x(0), q = x(1);
    Matrix J = Matrix::Zero(4, 4);
    J(0, 2) = -1.0;
    J(1, 3) = -beta;
    J(2, 0) = pr.dp(v) - q * q / (v * v * v);
    J(2, 1) = q / (v * v);
    J(3, 0) = beta * q / (v * v);
    J(3, 1) = -beta / v;
    return J;
  };
  d.flux_hessian = [pr, beta](const Vector& x) {
    const double v = x(0), q = x(1);
    Tensor3 H = zero_tensor(4);
    H[2](0, 0) = pr.ddp(v) + 3.0 * q * q / std::pow(v, 4);
    H[2](0, 1) = H[2](1, 0) = -2.0 * q / (v * v * v);
    H[2](1, 1) = 1.0 / (v * v);
    H[3](0, 0) = -2.0 * beta * q / (v * v * v);
    H[3](0, 1) = H[3](1, 0) = beta / (v * v);
    return H;
  };
  d.entropy = [pr](const Vector& x) {
    const double v = x(0), q = x(1), u = x(2), w = x(3);
    return pr.potential(v) + 0.5 * (u * u + w * w) + q * q / (2.0 * v);
  };
  d.entropy_gradient = [pr](const Vector& x) {
    const double v = x(0), q = x(1);
    return Vector{{-pr.p(v) - q * q / (2.0 * v * v), q / v, x(2), x(3)}};
  };
  d.entropy_hessian = [pr](const Vector& x) {
    const double v = x(0), q = x(1);
    Matrix H = Matrix::Identity(4, 4);
    H(0, 0) = -pr.dp(v) + q * q / (v * v * v);
    H(0, 1) = H(1, 0) = -q / (v * v);
    H(1, 1) = 1.0 / v;
    return H;
  };
  d.entropy_third = [pr](const Vector& x) {
    const double v = x(0), q = x(1);
    const double vvv = -pr.ddp(v) - 3.0 * q * q / std::pow(v, 4);
    const double vvq = 2.0 * q / (v * v * v);
    const double vqq = -1.0 / (v * v);
    Tensor3 T = zero_tensor(4);
    T[0](0, 0) = vvv;
    T[0](0, 1) = T[0](1, 0) = T[1](0, 0) = vvq;
    T[0](1, 1) = T[1](0, 1) = T[1](1, 0) = vqq;
    return T;
  };
  d.entropy_flux = [pr, beta](const Vector& x) {
    const double v = x(0), q = x(1), u = x(2), w = x(3);
    return u * (pr.p(v) + q * q / (2.0 * v * v)) - beta * w * q / v;
  };
  d.in_domain = [](const Vector& x) { return x(0) > 0.0 && x(1) != 0.0; };
  d.domain_description = "{v > 0, q != 0}";
  d.families = std::vector<FamilyKind>(4, FamilyKind::GenuinelyNonlinear);
  return HyperbolicSystem(std::move(d));
}

HyperbolicSystem builtin(const SystemSpec& spec) {
  const auto param = [&spec](const std::string& key, std::optional<double> fallback) {
    if (auto it = spec.params.find(key); it != spec.params.end()) return it->second;
    if (!fallback) throw Error(ErrorKind::BadParameter, spec.name + " requires parameter " + key);
    return *fallback;
  };
  const auto reject_unknown = [&spec](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : spec.params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw Error(ErrorKind::BadParameter, "unknown parameter " + key + " for " + spec.name);
    }
  };
  if (spec.name == "burgers") {
    reject_unknown({});
    return burgers();
  }
  if (spec.name == "p_system") {
    reject_unknown({"gamma"});
    return p_system(param("gamma", 1.4));
  }
  if (spec.name == "example3x3") {
    reject_unknown({"alpha"});
    return example3x3(param("alpha", std::nullopt));
  }
  if (spec.name == "mhd2d") {
    reject_unknown({"beta", "gamma"});
    return mhd2d(param("beta", 1.0), param("gamma", 5.0 / 3.0));
  }
  throw Error(ErrorKind::BadParameter, "unknown system " + spec.name);
}

MhdWaveData mhd_wave_data(double beta, double gamma, const State& u) {
  require_gamma(gamma);
  if (u.size() != 4 || !(u(0) > 0.0) || u(1) == 0.0) {
    throw Error(ErrorKind::DomainViolation, "mhd2d wave data needs v > 0 and q != 0");
  }
  const Pressure pr{gamma};
  const double v = u(0), q = u(1);
  const double c2 = -pr.dp(v);
  const double b = q * q / (v * v * v) + beta * beta / v + c2;
  const double disc = std::sqrt(std::max(b * b - 4.0 * beta * beta * c2 / v, 0.0));
  MhdWaveData out;
  out.sound_speed_sq = c2;
  out.alpha_plus = 0.5 * (b + disc);
  // Product form avoids cancellation when alpha_- is tiny.
  out.alpha_minus = (beta * beta * c2 / v) / out.alpha_plus;
  const double sp = std::sqrt(out.alpha_plus), sm = std::sqrt(out.alpha_minus);
  out.speeds = Vector{{-sp, -sm, sm, sp}};

  const auto column = [&](double a, double sign) {
    const double root = std::sqrt(a);
    return Vector{{sign, sign * (q / v - (a - c2) / q * v * v), root,
                   -beta * v * (a - c2) / (q * root)}};
  };
  out.vectors.resize(4, 4);
  out.vectors.col(0) = column(out.alpha_plus, 1.0);
  out.vectors.col(1) = column(out.alpha_minus, 1.0);
  out.vectors.col(2) = column(out.alpha_minus, -1.0);
  out.vectors.col(3) = column(out.alpha_plus, -1.0);
  return out;
}

}  // namespace shockcontract
