#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>

#include <Eigen/Dense>

#include "lauewalk/interferometer.hpp"

namespace lauewalk {

/// Inputs of the closed-form Laue-case transmission/reflection amplitudes for
/// a non-absorbing blade. `thickness` is the dimensionless crystal thickness
/// (pi * depth / extinction length), `deviation` the dimensionless offset
/// from the exact Bragg condition, `exit_ratio` the exit-surface coordinate
/// z/D, `vratio_phase` the (unit-modulus) phase of the potential ratio.
template <typename Scalar = double>
struct DDParams {
  Scalar thickness = 0;      // A
  Scalar deviation = 0;      // eta
  Scalar exit_ratio = 1;     // z/D in [0, 1]
  Scalar nuclear_phase = 0;  // chi
  Scalar vratio_phase = 0;

  void validate() const {
    if (!std::isfinite(thickness) || !std::isfinite(deviation) || !std::isfinite(exit_ratio) ||
        !std::isfinite(nuclear_phase) || !std::isfinite(vratio_phase)) {
      throw InvalidParameterError("reference parameters must be finite");
    }
    if (thickness < Scalar(0)) throw InvalidParameterError("dimensionless thickness must be >= 0");
    if (exit_ratio < Scalar(0) || exit_ratio > Scalar(1)) {
      throw InvalidParameterError("exit ratio z/D must lie in [0, 1]");
    }
  }
};

/// Complex transmission and reflection amplitudes; |t|^2 + |r|^2 = 1.
template <typename Scalar = double>
struct DDAmplitudes {
  std::complex<Scalar> t;
  std::complex<Scalar> r;
};

template <typename Scalar>
DDAmplitudes<Scalar> dd_amplitudes(const DDParams<Scalar>& p) {
  p.validate();
  using Complex = std::complex<Scalar>;
  const Scalar root = std::sqrt(Scalar(1) + p.deviation * p.deviation);
  const Scalar phase_arg = p.thickness * root;  // Phi
  const Scalar sin_phi = std::sin(phase_arg);
  const Scalar cos_phi = std::cos(phase_arg);
  const Complex nuclear = std::polar(Scalar(1), p.nuclear_phase);

  DDAmplitudes<Scalar> amp;
  amp.t = nuclear * std::polar(Scalar(1), -p.thickness * p.deviation) *
          Complex(cos_phi, p.deviation / root * sin_phi);
  amp.r = nuclear *
          std::polar(Scalar(1), p.thickness * p.deviation * (Scalar(2) * p.exit_ratio - Scalar(1))) *
          std::polar(Scalar(1), p.vratio_phase) * Complex(Scalar(0), -sin_phi / root);
  return amp;
}

/// Angles of the effective one-blade unitary. mixing_angle is the principal
/// arcsin branch, so it folds thicknesses beyond pi/2.
template <typename Scalar = double>
struct BladeAngles {
  Scalar transmission_phase{};  // phase of the diagonal (transmission) entries
  Scalar reflection_phase{};    // phase of the off-diagonal (reflection) entries
  Scalar mixing_angle{};        // in [-pi/2, pi/2]
};

template <typename Scalar>
BladeAngles<Scalar> dd_blade_angles(const DDParams<Scalar>& p) {
  p.validate();
  const Scalar root = std::sqrt(Scalar(1) + p.deviation * p.deviation);
  const Scalar phase_arg = p.thickness * root;
  // atan2 form stays finite across the tan poles at Phi = pi/2 + k pi and
  // matches the actual phase of the transmission amplitude.
  BladeAngles<Scalar> angles;
  angles.transmission_phase = -p.thickness * p.deviation +
                              std::atan2(p.deviation / root * std::sin(phase_arg), std::cos(phase_arg));
  angles.reflection_phase = p.thickness * p.deviation * (Scalar(2) * p.exit_ratio - Scalar(1)) +
                            std::numbers::pi_v<Scalar> / 2;
  angles.mixing_angle = std::asin(std::clamp(std::sin(phase_arg) / root, Scalar(-1), Scalar(1)));
  return angles;
}

/// e^{i chi} [[e^{i phi} cos v, e^{i rho} sin v], [-e^{-i rho} sin v, e^{-i phi} cos v]].
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 2, 2> dd_unitary(const BladeAngles<Scalar>& angles,
                                                     Scalar nuclear_phase = Scalar(0)) {
  using Complex = std::complex<Scalar>;
  const Complex global = std::polar(Scalar(1), nuclear_phase);
  const Scalar c = std::cos(angles.mixing_angle);
  const Scalar s = std::sin(angles.mixing_angle);
  Eigen::Matrix<Complex, 2, 2> u;
  u(0, 0) = global * std::polar(Scalar(1), angles.transmission_phase) * c;
  u(0, 1) = global * std::polar(Scalar(1), angles.reflection_phase) * s;
  u(1, 0) = -global * std::polar(Scalar(1), -angles.reflection_phase) * s;
  u(1, 1) = global * std::polar(Scalar(1), -angles.transmission_phase) * c;
  return u;
}

template <typename Scalar = double>
struct ThreeBladeOutput {
  std::complex<Scalar> amp_O;
  std::complex<Scalar> amp_H;
};

/// Closed-form three-blade output amplitudes when each blade is the single
/// 2x2 unitary above (ideal standard-theory device):
///   amp_O = -e^{-i phi/2} cos v sin^2 v (e^{-i chi/2} + e^{+i chi/2})
///   amp_H =  i e^{+i phi/2} (cos^2 v sin v e^{+i chi/2} - sin^3 v e^{-i chi/2})
template <typename Scalar>
ThreeBladeOutput<Scalar> analytic_three_blade(Scalar mixing_angle, Scalar transmission_phase,
                                              Scalar chi) {
  using Complex = std::complex<Scalar>;
  const Scalar c = std::cos(mixing_angle);
  const Scalar s = std::sin(mixing_angle);
  const Complex plus = std::polar(Scalar(1), chi / 2);
  const Complex minus = std::polar(Scalar(1), -chi / 2);
  ThreeBladeOutput<Scalar> out;
  out.amp_O = -std::polar(Scalar(1), -transmission_phase / 2) * (c * s * s) * (minus + plus);
  out.amp_H = Complex(0, 1) * std::polar(Scalar(1), transmission_phase / 2) *
              (c * c * s * plus - s * s * s * minus);
  return out;
}

/// H-beam visibility of the closed-form device, 2 c^2 s^2 / (c^4 + s^4).
template <typename Scalar>
Scalar analytic_h_contrast(Scalar mixing_angle) {
  const Scalar c2 = std::cos(mixing_angle) * std::cos(mixing_angle);
  const Scalar s2 = std::sin(mixing_angle) * std::sin(mixing_angle);
  const Scalar denom = c2 * c2 + s2 * s2;
  if (!(denom > Scalar(0))) return std::numeric_limits<Scalar>::quiet_NaN();
  return Scalar(2) * c2 * s2 / denom;
}

/// Side-by-side comparison of a lattice blade against the closed-form
/// reference: integrated intensities, fringe purity of a three-blade stack of
/// the same blade, and H contrast. Deviations are reported, never judged.
template <typename Scalar = double>
struct CrosscheckReport {
  Scalar qi_transmitted{};
  Scalar qi_reflected{};
  Scalar dd_transmitted{};
  Scalar dd_reflected{};
  Scalar intensity_deviation{};
  Scalar qi_fringe_residual{};
  Scalar analytic_fringe_residual{};
  Scalar qi_contrast_H{};
  Scalar analytic_contrast_H{};
  Scalar contrast_deviation{};
  Scalar implied_plane_thickness_ratio{};  // theta/pi, the per-plane thickness fraction
  BladeAngles<Scalar> angles;
};

template <typename Scalar>
CrosscheckReport<Scalar> qi_dd_crosscheck(const BladeSpec<Scalar>& blade, const DDParams<Scalar>& dd) {
  CrosscheckReport<Scalar> report;
  const auto qi = integrated_intensities(blade, BeamState<Scalar>::single_up(0));
  const auto amp = dd_amplitudes(dd);
  report.qi_transmitted = qi.transmitted;
  report.qi_reflected = qi.reflected;
  report.dd_transmitted = std::norm(amp.t);
  report.dd_reflected = std::norm(amp.r);
  report.intensity_deviation = std::max(std::abs(report.qi_transmitted - report.dd_transmitted),
                                        std::abs(report.qi_reflected - report.dd_reflected));
  report.angles = dd_blade_angles(dd);

  const std::vector<Scalar> grid = full_cycle_grid<Scalar>(128);
  const auto spec = InterferometerSpec<Scalar>::identical_blades(3, blade);
  const auto fringes = fringe_scan(spec, std::span<const Scalar>(grid), BeamState<Scalar>::single_up(0));
  std::vector<Scalar> qi_o(grid.size());
  std::vector<Scalar> an_o(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    qi_o[i] = fringes.rows[i].intensity_O;
    const auto three = analytic_three_blade(report.angles.mixing_angle,
                                            report.angles.transmission_phase, grid[i]);
    an_o[i] = std::norm(three.amp_O);
  }
  report.qi_fringe_residual = fit_o_beam_law<Scalar>(grid, qi_o).max_residual;
  report.analytic_fringe_residual = fit_o_beam_law<Scalar>(grid, an_o).max_residual;

  report.qi_contrast_H = std::numeric_limits<Scalar>::quiet_NaN();
  try {
    report.qi_contrast_H = contrast(fringes).contrast_H;
  } catch (const UndefinedContrastError&) {
    // left as NaN
  }
  report.analytic_contrast_H = analytic_h_contrast(report.angles.mixing_angle);
  report.contrast_deviation = std::abs(report.qi_contrast_H - report.analytic_contrast_H);
  report.implied_plane_thickness_ratio =
      blade.nodes.uniform_params()
          ? blade.nodes.uniform_params()->theta / std::numbers::pi_v<Scalar>
          : std::numeric_limits<Scalar>::quiet_NaN();
  return report;
}

}  // namespace lauewalk
