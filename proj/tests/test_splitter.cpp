#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

using namespace lauewalk;
constexpr double pi = std::numbers::pi;

TEST_SUITE_BEGIN("splitter");

TEST_CASE("coefficients at the 50:50 angle") {
  const auto k = derive_coefficients(SplitterParams<double>(0, pi / 4, 0));
  const double r = 1.0 / std::numbers::sqrt2;
  CHECK(k.t_a.real() == doctest::Approx(r).epsilon(1e-14));
  CHECK(k.t_b.real() == doctest::Approx(r).epsilon(1e-14));
  CHECK(k.r_a.real() == doctest::Approx(-r).epsilon(1e-14));
  CHECK(k.r_b.real() == doctest::Approx(r).epsilon(1e-14));
  CHECK(std::abs(k.t_a.imag()) < 1e-15);
}

TEST_CASE("pure transmission and pure reflection") {
  const auto t = derive_coefficients(SplitterParams<double>(0, 0, 0));
  CHECK(std::abs(t.t_a - 1.0) < 1e-15);
  CHECK(std::abs(t.t_b - 1.0) < 1e-15);
  CHECK(std::abs(t.r_a) < 1e-15);
  CHECK(std::abs(t.r_b) < 1e-15);

  const auto r = derive_coefficients(SplitterParams<double>(0, pi / 2, 0));
  CHECK(std::abs(r.t_a) < 1e-12);
  CHECK(std::abs(r.t_b) < 1e-12);
  CHECK(std::abs(r.r_a + 1.0) < 1e-12);
  CHECK(std::abs(r.r_b - 1.0) < 1e-12);
}

TEST_CASE("phases land on the right coefficients") {
  const double xi = 0.37, zeta = -1.2, theta = 0.81;
  const auto k = derive_coefficients(SplitterParams<double>(xi, theta, zeta));
  CHECK(std::abs(k.t_a - std::polar(1.0, xi) * std::cos(theta)) < 1e-15);
  CHECK(std::abs(k.t_b - std::polar(1.0, -xi) * std::cos(theta)) < 1e-15);
  CHECK(std::abs(k.r_a + std::polar(1.0, -zeta) * std::sin(theta)) < 1e-15);
  CHECK(std::abs(k.r_b - std::polar(1.0, zeta) * std::sin(theta)) < 1e-15);
}

TEST_CASE("theta folding into [0, pi]") {
  const SplitterParams<double> p1(0, 3 * pi / 2, 0);
  CHECK(p1.theta == doctest::Approx(pi / 2).epsilon(1e-14));
  CHECK(p1.theta_reduced);

  const SplitterParams<double> p2(0, -pi / 4, 0);
  CHECK(p2.theta == doctest::Approx(pi / 4).epsilon(1e-14));
  CHECK(p2.theta_reduced);

  const SplitterParams<double> p3(0, pi, 0);
  CHECK(p3.theta == doctest::Approx(pi));
  CHECK_FALSE(p3.theta_reduced);

  // folding only flips reflection signs, so every probability is unchanged
  const auto a = derive_coefficients(SplitterParams<double>(0.2, 0.7, -0.4));
  const auto b = derive_coefficients(SplitterParams<double>(0.2, -0.7, -0.4));
  CHECK(std::abs(std::abs(a.r_a) - std::abs(b.r_a)) < 1e-15);
  CHECK(std::abs(a.t_a - b.t_a) < 1e-15);
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(SplitterParams<double>(0, std::nan(""), 0), InvalidParameterError);
  CHECK_THROWS_AS(SplitterParams<double>(std::numeric_limits<double>::infinity(), 0, 0),
                  InvalidParameterError);
}

TEST_CASE("unitarity holds across random parameter draws") {
  auto rng = testsupport::make_rng(42);
  for (int i = 0; i < 500; ++i) {
    const auto k = derive_coefficients(testsupport::random_params(rng));
    CHECK(k.unitarity_residual() <= 1e-12);
  }
}

TEST_CASE("hadamard coefficient set is unitary but outside the angle family") {
  const auto h = hadamard_coefficients<double>();
  CHECK(h.unitarity_residual() <= 1e-15);
  // determinant -1: t_a*t_b - r_a*r_b = -1
  const auto det = h.t_a * h.t_b - h.r_a * h.r_b;
  CHECK(std::abs(det + 1.0) < 1e-15);
}

TEST_CASE("node parameter source overrides") {
  NodeParameterSource<double> src(SplitterParams<double>(0, pi / 4, 0));
  CHECK_FALSE(src.has_overrides());
  CHECK(src.max_override_plane() == -1);

  src.set_override(2, -1, SplitterParams<double>(0, 0, 0));
  CHECK(src.has_overrides());
  CHECK(src.plane_has_overrides(2));
  CHECK_FALSE(src.plane_has_overrides(1));
  CHECK(src.max_override_plane() == 2);
  CHECK(std::abs(src.coefficients(2, -1).t_a - 1.0) < 1e-15);   // overridden
  CHECK(std::abs(src.coefficients(2, 0).t_a - 1.0) > 0.1);      // untouched node
  CHECK(std::abs(src.coefficients(0, -1).t_a - 1.0) > 0.1);     // untouched plane

  CHECK_THROWS_AS(src.set_override(-1, 0, SplitterParams<double>(0, 0, 0)), InvalidParameterError);
  CHECK_THROWS_AS(NodeParameterSource<double>(NodeCoefficients<double>{1.0, 1.0, 0.5, 0.5}),
                  InvalidParameterError);
}

TEST_SUITE_END();
