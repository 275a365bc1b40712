#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"

using namespace lauewalk;
constexpr double pi = std::numbers::pi;

namespace {

DDParams<double> params(double thickness, double deviation, double exit_ratio = 1.0,
                        double nuclear_phase = 0.0, double vratio_phase = 0.0) {
  DDParams<double> p;
  p.thickness = thickness;
  p.deviation = deviation;
  p.exit_ratio = exit_ratio;
  p.nuclear_phase = nuclear_phase;
  p.vratio_phase = vratio_phase;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("dd_reference");

TEST_CASE("amplitudes at the exact Bragg condition") {
  const auto amp = dd_amplitudes(params(pi / 3, 0.0));
  CHECK(std::abs(amp.t) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(amp.r) == doctest::Approx(std::sin(pi / 3)).epsilon(1e-14));
  // at eta = 0 the reflected amplitude is purely -i sin(A)
  CHECK(amp.r.real() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(amp.r.imag() == doctest::Approx(-std::sin(pi / 3)).epsilon(1e-14));
}

TEST_CASE("large deviation suppresses the reflection") {
  for (const double eta : {10.0, -10.0}) {
    for (const double a : {0.5, 1.0, 2.0, 5.0}) {
      const auto amp = dd_amplitudes(params(a, eta));
      CHECK(std::norm(amp.r) <= 1.0 / (1.0 + eta * eta) + 1e-15);
    }
  }
}

TEST_CASE("energy conservation across the (A, eta) grid") {
  for (const double a : {0.5, 1.0, 2.0, 5.0}) {
    for (int i = 0; i <= 200; ++i) {
      const double eta = -5.0 + 10.0 * i / 200.0;
      const auto amp = dd_amplitudes(params(a, eta, 0.7, 0.3, 0.1));
      CHECK(std::abs(std::norm(amp.t) + std::norm(amp.r) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(dd_amplitudes(params(-1.0, 0.0)), InvalidParameterError);
  CHECK_THROWS_AS(dd_amplitudes(params(1.0, 0.0, 1.5)), InvalidParameterError);
  CHECK_THROWS_AS(dd_amplitudes(params(1.0, std::nan(""))), InvalidParameterError);
}

TEST_CASE("blade angles at the exact Bragg condition") {
  for (const double a : {0.0, 0.3, pi / 6, 1.2, pi / 2}) {
    const auto angles = dd_blade_angles(params(a, 0.0));
    CHECK(std::abs(angles.transmission_phase) <= 1e-14);
    CHECK(angles.reflection_phase == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(angles.mixing_angle == doctest::Approx(a).epsilon(1e-12));
  }
  // the principal arcsin branch folds thicker crystals
  CHECK(dd_blade_angles(params(2 * pi / 3, 0.0)).mixing_angle ==
        doctest::Approx(pi / 3).epsilon(1e-12));
}

TEST_CASE("angles stay finite across the tan poles") {
  // Phi = pi/2 at A = pi/2, eta = 0; nearby eta values hit tan singularities
  for (int i = 0; i <= 100; ++i) {
    const double eta = -0.5 + 1.0 * i / 100.0;
    const auto angles = dd_blade_angles(params(pi / 2, eta));
    CHECK(std::isfinite(angles.transmission_phase));
    CHECK(std::isfinite(angles.mixing_angle));
  }
}

TEST_CASE("unitary from angles") {
  SUBCASE("ideal parameters give the symmetric splitter") {
    const double a = 0.77;
    const auto u = dd_unitary(BladeAngles<double>{0.0, pi / 2, a}, 0.0);
    CHECK(std::abs(u(0, 0) - std::cos(a)) <= 1e-15);
    CHECK(std::abs(u(0, 1) - std::complex<double>(0, std::sin(a))) <= 1e-15);
    CHECK(std::abs(u(1, 0) - std::complex<double>(0, std::sin(a))) <= 1e-15);
    CHECK(std::abs(u(1, 1) - std::cos(a)) <= 1e-15);
  }
  SUBCASE("zero mixing is a pure phase") {
    const auto u = dd_unitary(BladeAngles<double>{0.4, 1.0, 0.0}, 0.9);
    CHECK(std::abs(u(0, 1)) <= 1e-15);
    CHECK(std::abs(std::abs(u(0, 0)) - 1.0) <= 1e-15);
  }
  SUBCASE("always unitary") {
    auto rng = testsupport::make_rng(8);
    std::uniform_real_distribution<double> dist(-pi, pi);
    for (int i = 0; i < 50; ++i) {
      const auto u = dd_unitary(BladeAngles<double>{dist(rng), dist(rng), dist(rng)}, dist(rng));
      const auto residual = (u * u.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff();
      CHECK(residual <= 1e-14);
    }
  }
}

TEST_CASE("angle map is consistent with the amplitudes in magnitude") {
  for (const double a : {0.5, 1.0, 2.0, 5.0}) {
    for (int i = 0; i <= 100; ++i) {
      const double eta = -5.0 + 10.0 * i / 100.0;
      const auto p = params(a, eta);
      const double phi = a * std::sqrt(1 + eta * eta);
      if (std::abs(std::cos(phi)) < 1e-3) continue;  // keep clear of the fold points
      const auto amp = dd_amplitudes(p);
      const auto u = dd_unitary(dd_blade_angles(p), 0.0);
      CHECK(std::abs(std::abs(u(0, 0)) - std::abs(amp.t)) <= 1e-10);
      CHECK(std::abs(std::abs(u(0, 1)) - std::abs(amp.r)) <= 1e-10);
    }
  }
}

TEST_CASE("closed-form three-blade output") {
  SUBCASE("balanced blades close the H beam at zero phase") {
    const auto out = analytic_three_blade(pi / 4, 0.0, 0.0);
    CHECK(std::norm(out.amp_H) <= 1e-12);
    CHECK(std::norm(out.amp_O) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("opposite phase closes the O beam") {
    for (const double v : {0.3, pi / 4, 1.2}) {
      CHECK(std::norm(analytic_three_blade(v, 0.5, pi).amp_O) <= 1e-30);
    }
  }
  SUBCASE("probability never exceeds one") {
    for (int i = 0; i <= 40; ++i) {
      for (int k = 0; k <= 40; ++k) {
        const double v = pi * i / 40.0;
        const double chi = 2 * pi * k / 40.0;
        const auto out = analytic_three_blade(v, 0.0, chi);
        CHECK(std::norm(out.amp_O) + std::norm(out.amp_H) <= 1.0 + 1e-12);
      }
    }
  }
  SUBCASE("visibility formula matches extrema extraction") {
    for (int i = 1; i < 20; ++i) {
      const double v = pi / 2 * i / 20.0;
      double hi = 0, lo = 1e9;
      for (int k = 0; k < 256; ++k) {
        const double chi = 2 * pi * k / 256.0;
        const double ih = std::norm(analytic_three_blade(v, 0.0, chi).amp_H);
        hi = std::max(hi, ih);
        lo = std::min(lo, ih);
      }
      CHECK(std::abs((hi - lo) / (hi + lo) - analytic_h_contrast(v)) <= 1e-12);
    }
  }
}

TEST_CASE("crosscheck: one plane against one closed-form blade") {
  const double a = 0.9;
  const auto report = qi_dd_crosscheck(BladeSpec<double>(1, SplitterParams<double>(0, a, 0)),
                                       params(a, 0.0));
  CHECK(report.qi_transmitted == doctest::Approx(std::cos(a) * std::cos(a)).epsilon(1e-12));
  CHECK(report.dd_transmitted == doctest::Approx(std::cos(a) * std::cos(a)).epsilon(1e-12));
  CHECK(report.intensity_deviation <= 1e-12);
  CHECK(report.implied_plane_thickness_ratio == doctest::Approx(a / pi).epsilon(1e-12));
}

TEST_CASE("crosscheck: both models idle at zero coupling") {
  const auto report = qi_dd_crosscheck(BladeSpec<double>(5, SplitterParams<double>(0, 0, 0)),
                                       params(0.0, 0.0));
  CHECK(report.qi_transmitted == 1.0);
  CHECK(report.dd_transmitted == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(report.intensity_deviation <= 1e-14);
  CHECK(std::isnan(report.qi_contrast_H));  // no modulation to extract
  CHECK(report.analytic_contrast_H == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("crosscheck: multi-plane blade reports its deviation") {
  const auto report = qi_dd_crosscheck(BladeSpec<double>(60, SplitterParams<double>(0, 17 * pi / 36, 0)),
                                       params(17 * pi / 36, 0.0));
  CHECK(report.qi_fringe_residual <= 1e-10);       // lattice fringes stay cosine
  CHECK(report.analytic_fringe_residual <= 1e-10);  // so do the closed-form ones
  CHECK(std::isfinite(report.qi_contrast_H));
  CHECK(std::isfinite(report.analytic_contrast_H));
  CHECK(report.contrast_deviation ==
        doctest::Approx(std::abs(report.qi_contrast_H - report.analytic_contrast_H))
            .epsilon(1e-12));
}

TEST_SUITE_END();
