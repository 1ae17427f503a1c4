#include <gtest/gtest.h>

#include <cmath>

#include "fmcf/jet.hpp"

using fmcf::Jet2;
using J = Jet2<6>;

namespace {

// exp(2x + y) has partial(p, q) = 2^p e^{2x+y}.
TEST(Jet, ExpOfLinearFormHasExactPartials) {
  const J x = J::variable(0.3, 0), y = J::variable(-0.2, 1);
  const J f = exp(2.0 * x + y);
  const double base = std::exp(0.4);
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) EXPECT_NEAR(f.partial(p, q), std::pow(2.0, p) * base, 1e-12);
}

TEST(Jet, ElementaryFunctionsMatchUnivariateDerivatives) {
  const double a = 0.7;
  const J x = J::variable(a, 0);
  // d^k/dx^k at a, k = 0..3
  const double sh = std::sinh(a), ch = std::cosh(a);
  EXPECT_NEAR(cosh(x).partial(3, 0), sh, 1e-13);
  EXPECT_NEAR(sinh(x).partial(2, 0), sh, 1e-13);
  EXPECT_NEAR(sin(x).partial(3, 0), -std::cos(a), 1e-13);
  EXPECT_NEAR(cos(x).partial(1, 0), -std::sin(a), 1e-13);
  const double th = std::tanh(a);
  EXPECT_NEAR(tanh(x).partial(1, 0), 1.0 - th * th, 1e-13);
  EXPECT_NEAR(tanh(x).partial(2, 0), -2.0 * th * (1.0 - th * th), 1e-13);
  EXPECT_NEAR(sqrt(x).partial(2, 0), -0.25 * std::pow(a, -1.5), 1e-13);
  EXPECT_NEAR(reciprocal(x).partial(3, 0), -6.0 / std::pow(a, 4), 1e-11);
  EXPECT_NEAR((ch * sh), (cosh(x) * sinh(x)).value(), 1e-15);
}

TEST(Jet, ProductIsTruncatedPolynomialProduct) {
  J p = J::variable(0.0, 0) + 1.0;  // 1 + s1
  J q = J::variable(0.0, 1) - 1.0;  // s2 - 1
  const J r = p * q;                // -1 - s1 + s2 + s1 s2
  EXPECT_DOUBLE_EQ(r(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(r(1, 0), -1.0);
  EXPECT_DOUBLE_EQ(r(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(r(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(r(2, 0), 0.0);
}

TEST(Jet, DerivativeShiftsCoefficients) {
  const J x = J::variable(0.1, 0), y = J::variable(0.2, 1);
  const J f = sin(x) * cos(y);
  const J fx = d_dx(f), fy = d_dy(f);
  EXPECT_NEAR(fx.value(), std::cos(0.1) * std::cos(0.2), 1e-15);
  EXPECT_NEAR(fy.value(), -std::sin(0.1) * std::sin(0.2), 1e-15);
  EXPECT_NEAR(d_dy(fx).value(), f.partial(1, 1), 1e-15);
  EXPECT_NEAR(fx.partial(2, 1), f.partial(3, 1), 1e-13);
}

TEST(Jet, ComposeWithInverseMapIsIdentity) {
  const J s1 = J::variable(0.0, 0), s2 = J::variable(0.0, 1);
  // A nonlinear map with invertible Jacobian at 0.
  const J P1 = 1.0 + 2.0 * s1 + 0.3 * s2 + 0.5 * s1 * s2 + 0.2 * sin(s2) * s2;
  const J P2 = -0.5 + 0.1 * s1 + 1.5 * s2 + 0.4 * s1 * s1 + 0.1 * exp(s1) * s1 * s2;
  const auto d = inverse_map(P1, P2);
  const J b1 = compose(P1, d[0], d[1]) - P1.value();
  const J b2 = compose(P2, d[0], d[1]) - P2.value();
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) {
      EXPECT_NEAR(b1(p, q), (p == 1 && q == 0) ? 1.0 : 0.0, 1e-13) << p << "," << q;
      EXPECT_NEAR(b2(p, q), (p == 0 && q == 1) ? 1.0 : 0.0, 1e-13) << p << "," << q;
    }
}

TEST(Jet, ComposeMatchesDirectEvaluation) {
  // f(s) = exp(s1) * cos(s2) around s* = (0.2, 0.4); substituting s* + d with d
  // a jet in b must equal the jet of f(s* + d(b)) built directly.
  const double a = 0.2, c = 0.4;
  const J f = exp(J::variable(a, 0)) * cos(J::variable(c, 1));
  const J b1 = J::variable(0.0, 0), b2 = J::variable(0.0, 1);
  const J d1 = 0.7 * b1 + 0.2 * b1 * b2, d2 = -0.3 * b1 + b2 * b2 + 0.5 * b2;
  const J direct = exp(a + d1) * cos(c + d2);
  const J composed = compose(f, d1, d2);
  for (int p = 0; p <= 6; ++p)
    for (int q = 0; p + q <= 6; ++q) EXPECT_NEAR(composed(p, q), direct(p, q), 1e-13);
}

TEST(Jet, SingularInputsAreRejected) {
  EXPECT_THROW(reciprocal(J(0.0)), std::domain_error);
  EXPECT_THROW(sqrt(J(-1.0)), std::domain_error);
  EXPECT_THROW(inverse_map(J(1.0), J::variable(0.0, 1)), std::domain_error);
}

}  // namespace
