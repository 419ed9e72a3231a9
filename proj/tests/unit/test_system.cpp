#include "shockcontract/numerics.hpp"
#include "shockcontract/system.hpp"
#include "shockcontract/system_config.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace shockcontract;

namespace {

double tensor_diff(const Tensor3& a, const Tensor3& b) {
  double err = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) err = std::max(err, numerics::max_abs(a[k] - b[k]));
  return err;
}

void expect_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(kind);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Builtins, BurgersSpeedIsState) {
  const auto eig = eigenstructure(burgers(), State::Constant(1, 0.7));
  EXPECT_DOUBLE_EQ(eig.eigenvalues(0), 0.7);
  EXPECT_DOUBLE_EQ(eig.right(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(eig.g(Family{1}), 1.0);
}

TEST(Builtins, PSystemSoundSpeeds) {
  const double gamma = 1.4;
  const double v = 0.8;
  const auto eig = eigenstructure(p_system(gamma), State{{v, 0.3}});
  const double c = std::sqrt(gamma * std::pow(v, -gamma - 1.0));
  EXPECT_NEAR(eig.eigenvalues(0), -c, 1e-13);
  EXPECT_NEAR(eig.eigenvalues(1), c, 1e-13);
  // Both families are genuinely nonlinear and oriented so that g > 0.
  EXPECT_GT(eig.g(Family{1}), 0.0);
  EXPECT_GT(eig.g(Family{2}), 0.0);
}

TEST(Builtins, Example3x3AtOrigin) {
  for (double alpha : {0.0, 1.0, 2.0}) {
    const auto eig = eigenstructure(example3x3(alpha), Vector::Zero(3));
    EXPECT_NEAR(eig.eigenvalues(0), -2.0, 1e-14);
    EXPECT_NEAR(eig.eigenvalues(1), 0.0, 1e-14);
    EXPECT_NEAR(eig.eigenvalues(2), 2.0, 1e-14);
    EXPECT_NEAR(eig.g(Family{2}), 2.0, 1e-12);
    EXPECT_NEAR(std::abs(eig.right(1, 1)), 1.0, 1e-14);
  }
}

TEST(Builtins, MhdSpeedsMatchClosedForm) {
  const State u{{100.0, 1.0, 0.0, 0.0}};
  const auto sys = mhd2d(1.0, 5.0 / 3.0);
  const auto w = mhd_wave_data(1.0, 5.0 / 3.0, u);
  const auto eig = eigenstructure(sys, u);
  const Matrix J = flux_jacobian(sys, u);
  for (Eigen::Index k = 0; k < 4; ++k) {
    EXPECT_NEAR(eig.eigenvalues(k), w.speeds(k), 1e-12 * std::abs(w.speeds(k)));
    const Vector r = w.vectors.col(k);
    EXPECT_LT((J * r - w.speeds(k) * r).norm(), 1e-12 * r.norm() * J.norm());
  }
  EXPECT_NEAR(w.speeds(2), std::sqrt(w.alpha_minus), 1e-15);
  EXPECT_NEAR(w.speeds(3), std::sqrt(w.alpha_plus), 1e-15);
}

TEST(Eigenstructure, BiorthonormalForAllBuiltins) {
  const std::vector<std::pair<HyperbolicSystem, State>> cases{
      {burgers(), State::Constant(1, -0.4)},
      {p_system(1.4), State{{1.3, -0.2}}},
      {example3x3(1.0), State{{0.1, -0.2, 0.05}}},
      {mhd2d(1.0, 5.0 / 3.0), State{{2.0, 0.7, 0.1, -0.3}}},
  };
  for (const auto& [sys, u] : cases) {
    const auto eig = eigenstructure(sys, u);
    const auto n = eig.eigenvalues.size();
    EXPECT_LT(numerics::max_abs(eig.left * eig.right - Matrix::Identity(n, n)), 1e-12) << sys.name();
    for (Eigen::Index k = 1; k < n; ++k) EXPECT_LT(eig.eigenvalues(k - 1), eig.eigenvalues(k));
    EXPECT_LT(entropy_compatibility_residual(sys, u), 1e-7) << sys.name();
  }
}

TEST(Eigenstructure, ReferenceKeepsLinearlyDegenerateOrientation) {
  // f = (u1^2/2, 0): the second family has zero speed and is LD.
  SystemDefinition d;
  d.name = "split";
  d.dimension = 2;
  d.flux = [](const Vector& u) { return Vector{{0.5 * u(0) * u(0) + 3.0 * u(0), 0.0}}; };
  d.entropy = [](const Vector& u) { return 0.5 * u.squaredNorm(); };
  d.anchor = Vector::Zero(2);
  const HyperbolicSystem sys(std::move(d));
  const auto ref = eigenstructure(sys, State{{0.2, 0.0}});
  EXPECT_EQ(ref.kinds[0], FamilyKind::LinearlyDegenerate);
  EXPECT_EQ(ref.kinds[1], FamilyKind::GenuinelyNonlinear);
  const auto eig = eigenstructure(sys, State{{0.3, 0.1}}, &ref);
  EXPECT_GT(eig.r(Family{1}).dot(ref.r(Family{1})), 0.0);
}

TEST(Derivatives, FiniteDifferenceModeAgreesWithAnalytic) {
  const std::vector<std::pair<HyperbolicSystem, State>> cases{
      {p_system(1.4), State{{1.3, -0.2}}},
      {example3x3(1.0), State{{0.1, -0.2, 0.05}}},
      {mhd2d(1.0, 5.0 / 3.0), State{{2.0, 0.7, 0.1, -0.3}}},
  };
  for (const auto& [sys, u] : cases) {
    const auto fd = sys.with_mode(DerivativeMode::FiniteDifference);
    EXPECT_LT(numerics::max_abs(fd.flux_jacobian(u) - sys.flux_jacobian(u)), 1e-8) << sys.name();
    EXPECT_LT(tensor_diff(fd.flux_hessian(u), sys.flux_hessian(u)), 1e-5) << sys.name();
    EXPECT_LT((fd.entropy_gradient(u) - sys.entropy_gradient(u)).cwiseAbs().maxCoeff(), 1e-8) << sys.name();
    EXPECT_LT(numerics::max_abs(fd.entropy_hessian(u) - sys.entropy_hessian(u)), 1e-5) << sys.name();
    EXPECT_LT(tensor_diff(fd.entropy_third(u), sys.entropy_third(u)), 1e-3) << sys.name();
  }
}

TEST(Derivatives, MissingEntropyFluxIsIntegrated) {
  SystemDefinition d;
  d.name = "burgers-bare";
  d.dimension = 1;
  d.flux = [](const Vector& u) { return Vector::Constant(1, 0.5 * u(0) * u(0)); };
  d.entropy = [](const Vector& u) { return 0.5 * u(0) * u(0); };
  d.anchor = Vector::Zero(1);
  const HyperbolicSystem sys(std::move(d));
  EXPECT_NEAR(sys.entropy_flux(State::Constant(1, 1.5)), 1.5 * 1.5 * 1.5 / 3.0, 1e-9);
}

TEST(Errors, DomainAndSpectrum) {
  expect_kind(ErrorKind::DomainViolation, [] { (void)flux_jacobian(p_system(1.4), State{{-1.0, 0.0}}); });
  expect_kind(ErrorKind::DomainViolation, [] { (void)flux_jacobian(mhd2d(), State{{1.0, 0.0, 0.0, 0.0}}); });

  SystemDefinition rot;
  rot.name = "rotation";
  rot.dimension = 2;
  rot.flux = [](const Vector& u) { return Vector{{-u(1), u(0)}}; };
  rot.entropy = [](const Vector& u) { return 0.5 * u.squaredNorm(); };
  rot.anchor = Vector::Zero(2);
  const HyperbolicSystem rotation(std::move(rot));
  expect_kind(ErrorKind::ComplexSpectrum, [&] { (void)eigenstructure(rotation, Vector::Zero(2)); });

  SystemDefinition lin;
  lin.name = "degenerate";
  lin.dimension = 2;
  lin.flux = [](const Vector& u) { return u; };
  lin.entropy = [](const Vector& u) { return 0.5 * u.squaredNorm(); };
  lin.anchor = Vector::Zero(2);
  const HyperbolicSystem degenerate(std::move(lin));
  expect_kind(ErrorKind::StrictHyperbolicityViolation, [&] { (void)eigenstructure(degenerate, Vector::Zero(2)); });
}

TEST(Errors, BuiltinParameters) {
  expect_kind(ErrorKind::BadParameter, [] { (void)builtin({"example3x3", {}}); });
  expect_kind(ErrorKind::BadParameter, [] { (void)builtin({"nope", {}}); });
  expect_kind(ErrorKind::BadParameter, [] { (void)builtin({"burgers", {{"alpha", 1.0}}}); });
  expect_kind(ErrorKind::BadParameter, [] { (void)p_system(1.0); });
  expect_kind(ErrorKind::BadParameter, [] { (void)mhd2d(0.0); });
  EXPECT_EQ(builtin({"mhd2d", {}}).dimension(), 4);
}

TEST(SystemConfig, RoundTrip) {
  const SystemSpec spec{"mhd2d", {{"beta", 0.5}, {"gamma", 1.4}}};
  const auto back = parse_system_config(to_config_text(spec));
  EXPECT_EQ(back.name, spec.name);
  EXPECT_EQ(back.params, spec.params);
  EXPECT_THROW((void)parse_system_config("{\"system\": 3}"), Error);
  EXPECT_THROW((void)parse_system_config("{"), Error);
  const Vector u = parse_state("1, 0.5,-2");
  ASSERT_EQ(u.size(), 3);
  EXPECT_DOUBLE_EQ(u(2), -2.0);
  EXPECT_THROW((void)parse_state("1,,2"), Error);
}
