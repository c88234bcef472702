#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fsm/error.hpp"
#include "fsm/hydrogen.hpp"
#include "fsm/quadrature.hpp"

namespace fsm::hydrogen {
namespace {

using std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::InvalidArgument;
}

// Composite Simpson on [0, r_max] with n (even) panels.
double simpson(const std::function<double(double)>& f, double r_max, int n) {
  const double h = r_max / n;
  double s = f(0.0) + f(r_max);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

TEST(Energy, Values) {
  EXPECT_DOUBLE_EQ(energy(1), -0.5);
  EXPECT_DOUBLE_EQ(energy(2), -0.125);
  EXPECT_NEAR(energy(3), -1.0 / 18.0, 1e-16);
  EXPECT_NEAR(energy(3) - energy(2), 5.0 / 72.0, 1e-16);
}

TEST(Validate, Errors) {
  EXPECT_EQ(code_of([] { validate({0, 0, 0}); }), ErrorCode::InvalidQuantumNumber);
  EXPECT_EQ(code_of([] { validate({2, 2, 0}); }), ErrorCode::InvalidQuantumNumber);
  EXPECT_EQ(code_of([] { validate({2, 1, 2}); }), ErrorCode::InvalidQuantumNumber);
  EXPECT_EQ(code_of([] { energy(0); }), ErrorCode::InvalidQuantumNumber);
  EXPECT_NO_THROW(validate({3, 2, -2}));
}

TEST(Laguerre, Values) {
  EXPECT_EQ(laguerre(0, 1.0, 3.7), 1.0);
  EXPECT_DOUBLE_EQ(laguerre(1, 1.0, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(laguerre(2, 1.0, 1.0), 0.5);
  for (double rho : {0.0, 0.3, 1.7, 5.0}) {
    EXPECT_NEAR(laguerre(2, 1.0, rho), 0.5 * rho * rho - 3.0 * rho + 3.0, 1e-13);
    EXPECT_NEAR(laguerre(3, 0.5, rho), -rho * rho * rho / 6.0 + 1.75 * rho * rho - 4.375 * rho + 2.1875, 1e-12);
  }
  EXPECT_EQ(code_of([] { laguerre(-1, 0.0, 1.0); }), ErrorCode::InvalidDegree);
}

TEST(SphericalHarmonics, ClosedForms) {
  const double c0 = std::sqrt(1.0 / (4.0 * pi));
  const double c1 = std::sqrt(3.0 / (4.0 * pi));
  EXPECT_NEAR(real_sph_harm(0, 0, 0.3, 1.2), c0, 1e-15);
  EXPECT_NEAR(real_sph_harm(1, 0, 0.0, 0.0), 0.4886025119029199, 1e-15);
  const Point3 u{0.48, -0.6, 0.64};
  EXPECT_NEAR(real_sph_harm(1, -1, u), c1 * u[1], 1e-15);
  EXPECT_NEAR(real_sph_harm(1, 0, u), c1 * u[2], 1e-15);
  EXPECT_NEAR(real_sph_harm(1, 1, u), c1 * u[0], 1e-15);
  const double theta = std::acos(u[2]);
  const double phi = std::atan2(u[1], u[0]);
  for (int l = 0; l <= 3; ++l)
    for (int k = -l; k <= l; ++k) EXPECT_NEAR(real_sph_harm(l, k, theta, phi), real_sph_harm(l, k, u), 1e-14);
  EXPECT_EQ(code_of([] { real_sph_harm(1, 2, 0.1, 0.1); }), ErrorCode::InvalidOrder);
  EXPECT_EQ(code_of([] { real_sph_harm(-1, 0, 0.1, 0.1); }), ErrorCode::InvalidDegree);
}

TEST(SphericalHarmonics, OrthonormalOnExactRule) {
  const auto rule = quad::product_rule(4);  // degree 7 ≥ 2·3
  for (int l1 = 0; l1 <= 3; ++l1)
    for (int k1 = -l1; k1 <= l1; ++k1)
      for (int l2 = 0; l2 <= 3; ++l2)
        for (int k2 = -l2; k2 <= l2; ++k2) {
          double s = 0.0;
          for (std::size_t i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * real_sph_harm(l1, k1, rule.points[i]) * real_sph_harm(l2, k2, rule.points[i]);
          EXPECT_NEAR(s, (l1 == l2 && k1 == k2) ? 1.0 : 0.0, 1e-10) << l1 << k1 << l2 << k2;
        }
}

TEST(Radial, NormalizedAndOrthogonal) {
  for (int n = 1; n <= 4; ++n)
    for (int l = 0; l < n; ++l) {
      const double norm = simpson([&](double r) { return std::pow(radial(n, l, r) * r, 2); }, 200.0, 100000);
      EXPECT_NEAR(norm, 1.0, 1e-10) << n << l;
    }
  const double cross = simpson([](double r) { return radial(1, 0, r) * radial(2, 0, r) * r * r; }, 200.0, 100000);
  EXPECT_NEAR(cross, 0.0, 1e-10);
}

TEST(Radial, DerivativeMatchesFiniteDifference) {
  const double h = 1e-5;
  for (int n = 1; n <= 4; ++n)
    for (int l = 0; l < n; ++l)
      for (double r : {0.2, 1.0, 2.5, 7.0}) {
        const double fd = (radial(n, l, r + h) - radial(n, l, r - h)) / (2.0 * h);
        EXPECT_NEAR(radial_derivative(n, l, r), fd, 1e-8) << n << l << r;
      }
}

TEST(Psi, ClosedForms) {
  EXPECT_NEAR(psi({1, 0, 0}, {0.0, 0.0, 0.0}), 0.5641895835477563, 1e-15);
  EXPECT_NEAR(psi({1, 0, 0}, {0.0, 1.0, 0.0}), 0.20755374871029736, 1e-15);
  const Point3 x{0.3, -1.1, 0.7};
  const double r = std::sqrt(0.09 + 1.21 + 0.49);
  const double c = 1.0 / std::sqrt(32.0 * pi);
  EXPECT_NEAR(psi({2, 0, 0}, x), (2.0 - r) * std::exp(-r / 2.0) * c, 1e-15);
  EXPECT_NEAR(psi({2, 1, -1}, x), x[1] * std::exp(-r / 2.0) * c, 1e-15);
  EXPECT_NEAR(psi({2, 1, 0}, x), x[2] * std::exp(-r / 2.0) * c, 1e-15);
  EXPECT_NEAR(psi({2, 1, 1}, x), x[0] * std::exp(-r / 2.0) * c, 1e-15);
  const auto v = shell_values(x);
  EXPECT_NEAR(v[0], psi({1, 0, 0}, x), 1e-16);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(v[i + 1], psi(kShellTwo[i], x), 1e-15);
}

TEST(PairAntisym, Antisymmetry) {
  const Point3 a{0.1, 0.4, -0.2};
  const Point3 b{-1.0, 0.5, 2.0};
  for (const auto& orb : kShellTwo) {
    EXPECT_EQ(pair_antisym(orb, a, a), 0.0);
    EXPECT_EQ(pair_antisym(orb, a, b), -pair_antisym(orb, b, a));
    const double expect = (psi({1, 0, 0}, a) * psi(orb, b) - psi(orb, a) * psi({1, 0, 0}, b)) / std::sqrt(2.0);
    EXPECT_NEAR(pair_antisym(orb, a, b), expect, 1e-15);
  }
  EXPECT_EQ(code_of([&] { pair_antisym({1, 0, 0}, a, b); }), ErrorCode::InvalidOrbital);
  EXPECT_EQ(code_of([&] { pair_antisym({3, 0, 0}, a, b); }), ErrorCode::InvalidOrbital);
}

}  // namespace
}  // namespace fsm::hydrogen
