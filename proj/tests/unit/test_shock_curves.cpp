#include "shockcontract/numerics.hpp"
#include "shockcontract/shock_curves.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace shockcontract;

TEST(HugoniotCurve, BurgersIsAStraightLine) {
  const State u = State::Constant(1, 1.0);
  const auto curve = HugoniotCurve::trace(burgers(), u, Family{1}, -0.5);
  ASSERT_GE(curve.samples().size(), 3u);
  for (const auto& p : curve.samples()) {
    EXPECT_NEAR(p.u_plus(0), 1.0 + p.s, 1e-14);
    EXPECT_NEAR(p.sigma, 1.0 + 0.5 * p.s, 1e-14);
    EXPECT_NEAR(p.sigma_dot, 0.5, 1e-12);
  }
  const auto mid = curve.at(-0.3);
  EXPECT_NEAR(mid.u_plus(0), 0.7, 1e-14);
  EXPECT_NEAR(curve.max_s(), -0.5, 1e-15);
}

TEST(HugoniotCurve, PSystemSatisfiesAlgebraicLocus) {
  const double gamma = 1.4;
  const State u{{1.0, 0.2}};
  const auto p = [gamma](double v) { return std::pow(v, -gamma); };
  for (int fam : {1, 2}) {
    const auto curve = HugoniotCurve::trace(p_system(gamma), u, Family{fam}, -0.3);
    for (const auto& pt : curve.samples()) {
      if (pt.s == 0.0) continue;
      const double dv = pt.u_plus(0) - u(0);
      const double du = pt.u_plus(1) - u(1);
      const double dp = p(pt.u_plus(0)) - p(u(0));
      EXPECT_NEAR(du * du, -dp * dv, 1e-12);
      EXPECT_NEAR(pt.sigma * pt.sigma, -dp / dv, 1e-10);
      EXPECT_LT(pt.rh_residual, 1e-12);
      // Lax branch.
      EXPECT_GT(pt.lax_margin, 0.0);
    }
  }
}

TEST(HugoniotCurve, NonLaxBranchFailsAdmissibility) {
  const auto curve = HugoniotCurve::trace(p_system(1.4), State{{1.0, 0.0}}, Family{2}, 0.2);
  const auto& last = curve.samples().back();
  EXPECT_GT(last.s, 0.0);
  EXPECT_FALSE(last.admissible());
}

TEST(HugoniotCurve, Example3x3MiddleFamilyFromOrigin) {
  // f'(0) is diagonal, and S_0(s) = s e_2 with sigma = s for the quadratic flux.
  const auto pt = hugoniot_point(example3x3(1.0), Vector::Zero(3), Family{2}, -0.05);
  EXPECT_NEAR(pt.u_plus(0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(pt.u_plus(1)), 0.05, 1e-14);
  EXPECT_NEAR(pt.u_plus(2), 0.0, 1e-14);
  EXPECT_NEAR(pt.sigma, -0.05, 1e-14);
}

TEST(HugoniotCurve, OrientationMirrorsParameter) {
  const auto sys = mhd2d();
  const State u{{2.0, 0.7, 0.1, -0.3}};
  CurveOptions flip;
  flip.orientation = -1.0;
  const auto a = hugoniot_point(sys, u, Family{3}, -0.1);
  const auto b = hugoniot_point(sys, u, Family{3}, 0.1, flip);
  EXPECT_LT((a.u_plus - b.u_plus).norm(), 1e-12);
  EXPECT_NEAR(a.sigma, b.sigma, 1e-12);
}

TEST(HugoniotCurve, DomainExitIsReported) {
  SystemDefinition d;
  d.name = "burgers-half-line";
  d.dimension = 1;
  d.flux = [](const Vector& u) { return Vector::Constant(1, 0.5 * u(0) * u(0)); };
  d.entropy = [](const Vector& u) { return 0.5 * u(0) * u(0); };
  d.in_domain = [](const Vector& u) { return u(0) > 0.5; };
  d.anchor = State::Constant(1, 1.0);
  const HyperbolicSystem sys(std::move(d));
  try {
    (void)HugoniotCurve::trace(sys, State::Constant(1, 1.0), Family{1}, -1.0);
    ADD_FAILURE() << "expected DomainExit";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DomainExit);
  }
}

TEST(AveragedMatrix, QuadraticFluxIsMidpointJacobian) {
  const auto sys = example3x3(1.3);
  const State a{{0.1, -0.2, 0.3}};
  const State b{{-0.4, 0.5, 0.2}};
  const Matrix A = averaged_matrix(sys, a, b);
  EXPECT_LT(numerics::max_abs(A - sys.flux_jacobian(0.5 * (a + b))), 1e-14);
  EXPECT_LT((A * (b - a) - (sys.flux(b) - sys.flux(a))).norm(), 1e-14);
}

TEST(AveragedMatrix, IntegralIdentityForMhd) {
  const auto sys = mhd2d();
  const State a{{2.0, 0.7, 0.1, -0.3}};
  const State b{{1.8, 0.9, 0.2, -0.1}};
  EXPECT_LT((averaged_matrix(sys, a, b) * (b - a) - (sys.flux(b) - sys.flux(a))).norm(), 1e-13);
}

TEST(IntegrateAlong, RecoversSigmaIntegral) {
  // Burgers: sigma(t) = 1 + t/2, so int_0^s sigma = s + s^2/4.
  const auto curve = HugoniotCurve::trace(burgers(), State::Constant(1, 1.0), Family{1}, -0.6);
  const double s = -0.6;
  EXPECT_NEAR(integrate_along(curve, s, [](const ShockPoint& p) { return p.sigma; }), s + s * s / 4.0, 1e-12);
}

TEST(IdentifyFamily, RecognizesShockAndRejectsNonShock) {
  const auto sys = p_system(1.4);
  const State u{{1.0, 0.0}};
  const auto ref = hugoniot_point(sys, u, Family{2}, -0.1);
  const auto same = hugoniot_point(sys, State{{1.01, 0.005}}, Family{2}, -0.08);
  const auto fam = identify_family(sys, same.u_minus, same.u_plus, same.sigma, ref);
  ASSERT_TRUE(fam.has_value());
  EXPECT_EQ(*fam, Family{2});
  EXPECT_FALSE(identify_family(sys, same.u_minus, same.u_plus, same.sigma + 0.1, ref).has_value());
  EXPECT_EQ(rh_residual(sys, same.u_minus, same.u_plus, same.sigma) < 1e-12, true);
}
