#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lauewalk/crystal.hpp"

namespace lauewalk {

/// Beam label between blades: O rides the upward (forward) sector, H the
/// downward (diffracted) sector.
enum class Branch : unsigned char { O, H };

/// One branch label per inter-blade gap.
struct PathSelector {
  std::vector<Branch> branches;

  friend bool operator==(const PathSelector&, const PathSelector&) = default;
};

/// Multi-blade Mach-Zehnder geometry. Blades are composed back-to-back on the
/// same node lattice; free flight between blades is a rigid index shift and
/// is not modelled. The inter-path phase chi is applied after
/// `phase_after_blade` (1-based). `kept_paths` lists the branch histories
/// that stay inside the device; everything else exits and is counted as
/// discarded intensity at its own port, per branch history (the histories
/// stand in for the spatially separated beams of the real device).
template <typename Scalar = double>
struct InterferometerSpec {
  std::vector<BladeSpec<Scalar>> blades;
  Index phase_after_blade = 1;
  std::vector<PathSelector> kept_paths;  // empty -> default policy

  static InterferometerSpec identical_blades(Index count, const BladeSpec<Scalar>& blade) {
    InterferometerSpec spec;
    spec.blades.assign(static_cast<std::size_t>(count), blade);
    return spec;
  }

  Index gap_count() const { return static_cast<Index>(blades.size()) - 1; }

  void validate() const {
    if (blades.size() < 2) {
      throw InvalidParameterError("an interferometer needs at least two blades");
    }
    if (phase_after_blade < 1 || phase_after_blade > gap_count()) {
      throw InvalidParameterError("phase position must lie between two blades");
    }
    for (const PathSelector& sel : kept_paths) {
      if (static_cast<Index>(sel.branches.size()) != gap_count()) {
        throw InvalidParameterError("kept-path selector length must equal the gap count");
      }
    }
  }

  /// Three blades default to the two histories that reflect at the middle
  /// blade, (O,H) and (H,O); other blade counts without an explicit list keep
  /// every history (pure unitary composition).
  std::vector<PathSelector> resolved_kept_paths() const {
    if (!kept_paths.empty()) return kept_paths;
    if (blades.size() == 3) {
      return {PathSelector{{Branch::O, Branch::H}}, PathSelector{{Branch::H, Branch::O}}};
    }
    std::vector<PathSelector> all;
    const Index gaps = gap_count();
    const std::uint64_t combos = std::uint64_t(1) << gaps;
    all.reserve(combos);
    for (std::uint64_t mask = 0; mask < combos; ++mask) {
      PathSelector sel;
      sel.branches.reserve(static_cast<std::size_t>(gaps));
      for (Index g = 0; g < gaps; ++g) {
        sel.branches.push_back((mask >> g) & 1 ? Branch::H : Branch::O);
      }
      all.push_back(std::move(sel));
    }
    return all;
  }

  bool is_kept(const PathSelector& selector) const {
    const auto kept = resolved_kept_paths();
    return std::find(kept.begin(), kept.end(), selector) != kept.end();
  }
};

/// U_z(chi): multiplies the up sector by e^{+i chi/2} and the down sector by
/// e^{-i chi/2}. Norm preserving.
template <typename Scalar>
BeamState<Scalar> apply_phase(const BeamState<Scalar>& state, Scalar chi) {
  BeamState<Scalar> out = state;
  out.up *= std::polar(Scalar(1), chi / 2);
  out.down *= std::polar(Scalar(1), -chi / 2);
  return out;
}

/// Sector projector P_O (keep up) or P_H (keep down); no renormalization.
template <typename Scalar>
BeamState<Scalar> project_branch(const BeamState<Scalar>& state, Branch branch) {
  BeamState<Scalar> out = state;
  if (branch == Branch::O) {
    out.down.setZero();
  } else {
    out.up.setZero();
  }
  return out;
}

/// Blade-1 .. projector .. blade-2 .. projector .. final blade, no phase.
template <typename Scalar>
BeamState<Scalar> path_amplitude(const InterferometerSpec<Scalar>& spec, const PathSelector& selector,
                                 const BeamState<Scalar>& input) {
  spec.validate();
  if (static_cast<Index>(selector.branches.size()) != spec.gap_count()) {
    throw InvalidParameterError("selector length must equal the gap count");
  }
  BeamState<Scalar> state = propagate_blade(input, spec.blades[0]);
  for (Index g = 0; g < spec.gap_count(); ++g) {
    state = project_branch(state, selector.branches[static_cast<std::size_t>(g)]);
    state = propagate_blade(state, spec.blades[static_cast<std::size_t>(g) + 1]);
  }
  return state;
}

namespace detail {

// Final-blade output per kept history plus the chi-independent discarded
// weight. The phase operator is diagonal on the projected branches, so chi
// enters only as a per-history factor e^{+-i chi/2}; computing the fields
// once makes fringe scans O(window) per chi instead of a full propagation.
template <typename Scalar>
struct KeptPathFields {
  struct Entry {
    int phase_sign;  // +1 if the history rides O at the phase position
    BeamState<Scalar> field;
    PathSelector history;
  };
  std::vector<Entry> entries;
  Scalar discarded = 0;
};

template <typename Scalar>
KeptPathFields<Scalar> kept_path_fields(const InterferometerSpec<Scalar>& spec,
                                        const BeamState<Scalar>& input) {
  spec.validate();
  const auto kept = spec.resolved_kept_paths();
  KeptPathFields<Scalar> out;
  PathSelector prefix;
  auto starts_with = [](const PathSelector& full, const PathSelector& pre) {
    return std::equal(pre.branches.begin(), pre.branches.end(), full.branches.begin());
  };
  auto descend = [&](auto&& self, const BeamState<Scalar>& state, std::size_t blade) -> void {
    if (blade == spec.blades.size()) {
      const Branch at_phase = prefix.branches[static_cast<std::size_t>(spec.phase_after_blade - 1)];
      out.entries.push_back({at_phase == Branch::O ? +1 : -1, state, prefix});
      return;
    }
    for (const Branch g : {Branch::O, Branch::H}) {
      prefix.branches.push_back(g);
      const bool viable = std::any_of(kept.begin(), kept.end(),
                                      [&](const PathSelector& full) { return starts_with(full, prefix); });
      BeamState<Scalar> projected = project_branch(state, g);
      if (!viable) {
        out.discarded += projected.total_intensity();
      } else {
        self(self, propagate_blade(projected, spec.blades[blade]), blade + 1);
      }
      prefix.branches.pop_back();
    }
  };
  descend(descend, propagate_blade(input, spec.blades[0]), 1);
  return out;
}

}  // namespace detail

template <typename Scalar>
struct SimulationResult {
  BeamState<Scalar> psi_O;
  BeamState<Scalar> psi_H;
  Scalar intensity_O{};
  Scalar intensity_H{};
  Scalar intensity_discarded{};
};

namespace detail {

template <typename Scalar>
SimulationResult<Scalar> combine_fields(const KeptPathFields<Scalar>& fields, Scalar chi) {
  using Complex = std::complex<Scalar>;
  BeamState<Scalar> total;
  bool first = true;
  for (const auto& entry : fields.entries) {
    const Complex phase = std::polar(Scalar(1), Scalar(entry.phase_sign) * chi / 2);
    if (first) {
      total = entry.field;
      total.up *= phase;
      total.down *= phase;
      first = false;
    } else {
      total = linear_combination(Complex(1), total, phase, entry.field);
    }
  }
  SimulationResult<Scalar> result;
  result.psi_O = project_branch(total, Branch::O);
  result.psi_H = project_branch(total, Branch::H);
  result.intensity_O = result.psi_O.total_intensity();
  result.intensity_H = result.psi_H.total_intensity();
  result.intensity_discarded = fields.discarded;
  return result;
}

}  // namespace detail

/// Full device at one phase setting: kept-path output split into the O (up)
/// and H (down) beams plus the discarded weight.
template <typename Scalar>
SimulationResult<Scalar> simulate(const InterferometerSpec<Scalar>& spec, Scalar chi,
                                  const BeamState<Scalar>& input) {
  return detail::combine_fields(detail::kept_path_fields(spec, input), chi);
}

/// O/H/discarded intensities over a phase grid.
template <typename Scalar = double>
struct FringeSeries {
  struct Row {
    Scalar chi;
    Scalar intensity_O;
    Scalar intensity_H;
    Scalar intensity_discarded;
  };
  std::vector<Row> rows;
};

template <typename Scalar>
FringeSeries<Scalar> fringe_scan(const InterferometerSpec<Scalar>& spec,
                                 std::span<const Scalar> chi_grid, const BeamState<Scalar>& input) {
  if (chi_grid.empty()) throw InvalidParameterError("chi grid must be non-empty");
  const auto fields = detail::kept_path_fields(spec, input);
  FringeSeries<Scalar> series;
  series.rows.reserve(chi_grid.size());
  for (const Scalar chi : chi_grid) {
    const auto r = detail::combine_fields(fields, chi);
    series.rows.push_back({chi, r.intensity_O, r.intensity_H, r.intensity_discarded});
  }
  return series;
}

/// chi_k = 2 pi k / points, k = 0 .. points-1 (one full cycle, half-open).
template <typename Scalar = double>
std::vector<Scalar> full_cycle_grid(Index points) {
  if (points < 1) throw InvalidParameterError("grid needs at least one point");
  std::vector<Scalar> grid(static_cast<std::size_t>(points));
  for (Index k = 0; k < points; ++k) {
    grid[static_cast<std::size_t>(k)] =
        Scalar(2) * std::numbers::pi_v<Scalar> * static_cast<Scalar>(k) / static_cast<Scalar>(points);
  }
  return grid;
}

template <typename Scalar = double>
struct CosineFit {
  Scalar offset{};
  Scalar cos_coeff{};
  Scalar sin_coeff{};
  Scalar max_residual{};
};

/// Least-squares fit of offset + cos_coeff*cos(chi) + sin_coeff*sin(chi).
template <typename Scalar>
CosineFit<Scalar> fit_cosine(std::span<const Scalar> chi, std::span<const Scalar> values) {
  Eigen::Matrix<Scalar, 3, 3> normal = Eigen::Matrix<Scalar, 3, 3>::Zero();
  Eigen::Matrix<Scalar, 3, 1> rhs = Eigen::Matrix<Scalar, 3, 1>::Zero();
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const Eigen::Matrix<Scalar, 3, 1> basis(Scalar(1), std::cos(chi[i]), std::sin(chi[i]));
    normal += basis * basis.transpose();
    rhs += values[i] * basis;
  }
  const Eigen::Matrix<Scalar, 3, 1> x = normal.ldlt().solve(rhs);
  CosineFit<Scalar> fit{x[0], x[1], x[2], Scalar(0)};
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const Scalar model = x[0] + x[1] * std::cos(chi[i]) + x[2] * std::sin(chi[i]);
    fit.max_residual = std::max(fit.max_residual, std::abs(values[i] - model));
  }
  return fit;
}

template <typename Scalar = double>
struct OBeamLawFit {
  Scalar amplitude{};     // a in a*(1 + cos chi)
  Scalar max_residual{};
};

/// One-parameter fit of the O-beam law a*(1 + cos chi).
template <typename Scalar>
OBeamLawFit<Scalar> fit_o_beam_law(std::span<const Scalar> chi, std::span<const Scalar> values) {
  Scalar num = 0;
  Scalar den = 0;
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const Scalar w = Scalar(1) + std::cos(chi[i]);
    num += values[i] * w;
    den += w * w;
  }
  OBeamLawFit<Scalar> fit;
  fit.amplitude = den > Scalar(0) ? num / den : Scalar(0);
  for (std::size_t i = 0; i < chi.size(); ++i) {
    const Scalar model = fit.amplitude * (Scalar(1) + std::cos(chi[i]));
    fit.max_residual = std::max(fit.max_residual, std::abs(values[i] - model));
  }
  return fit;
}

/// Fringe visibilities. coeff_A and coeff_B come from the cosine fit of the
/// H beam (I_H = coeff_B - coeff_A cos chi); contrast_H = coeff_A/coeff_B.
/// contrast_O uses the (max-min)/(max+min) extraction on I_O; the *_fit and
/// *_extrema companions carry the other route for cross-checking.
template <typename Scalar = double>
struct ContrastResult {
  Scalar coeff_A{};
  Scalar coeff_B{};
  Scalar contrast_O{};
  Scalar contrast_H{};
  Scalar contrast_O_fit{};
  Scalar contrast_H_extrema{};
  Scalar residual_O{};
  Scalar residual_H{};
};

template <typename Scalar>
ContrastResult<Scalar> contrast(const FringeSeries<Scalar>& series) {
  const std::size_t n = series.rows.size();
  if (n < 8) throw InvalidParameterError("contrast extraction needs at least 8 fringe samples");
  std::vector<Scalar> chi(n);
  std::vector<Scalar> io(n);
  std::vector<Scalar> ih(n);
  for (std::size_t i = 0; i < n; ++i) {
    chi[i] = series.rows[i].chi;
    io[i] = series.rows[i].intensity_O;
    ih[i] = series.rows[i].intensity_H;
  }
  const auto [chi_lo, chi_hi] = std::minmax_element(chi.begin(), chi.end());
  const Scalar span = *chi_hi - *chi_lo;
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  // A uniform half-open grid covers the cycle once its span plus one step
  // reaches 2 pi.
  if (span * static_cast<Scalar>(n) / static_cast<Scalar>(n - 1) < two_pi * (1 - Scalar(1e-9))) {
    throw InvalidParameterError("fringe series must cover a full phase cycle");
  }

  const auto [io_lo, io_hi] = std::minmax_element(io.begin(), io.end());
  const auto [ih_lo, ih_hi] = std::minmax_element(ih.begin(), ih.end());
  auto degenerate = [](Scalar lo, Scalar hi) {
    const Scalar sum = hi + lo;
    return !(sum > Scalar(0)) || (hi - lo) <= sum * Scalar(1e-13);
  };
  if (degenerate(*io_lo, *io_hi) || degenerate(*ih_lo, *ih_hi)) {
    throw UndefinedContrastError("fringe series has no usable modulation");
  }

  const CosineFit<Scalar> fit_o = fit_cosine<Scalar>(chi, io);
  const CosineFit<Scalar> fit_h = fit_cosine<Scalar>(chi, ih);

  ContrastResult<Scalar> result;
  result.coeff_A = -fit_h.cos_coeff;
  result.coeff_B = fit_h.offset;
  result.contrast_O = (*io_hi - *io_lo) / (*io_hi + *io_lo);
  result.contrast_H = result.coeff_A / result.coeff_B;
  result.contrast_O_fit = std::hypot(fit_o.cos_coeff, fit_o.sin_coeff) / fit_o.offset;
  result.contrast_H_extrema = (*ih_hi - *ih_lo) / (*ih_hi + *ih_lo);
  result.residual_O = fit_o.max_residual;
  result.residual_H = fit_h.max_residual;
  return result;
}

/// Contrast of a three-blade device as a function of the per-blade plane
/// count. Rows carry (N, contrast_O, contrast_H); thetas with no modulation
/// (e.g. theta = 0) give NaN rows instead of aborting the sweep.
template <typename Scalar>
ScanSeries<Scalar> contrast_vs_planes(const SplitterParams<Scalar>& params, Index n_min, Index n_max,
                                      Index chi_points) {
  if (n_min < 1 || n_min > n_max) throw InvalidParameterError("plane range needs 1 <= n_min <= n_max");
  if (chi_points < 8) throw InvalidParameterError("contrast sweep needs at least 8 phase points");
  const std::vector<Scalar> grid = full_cycle_grid<Scalar>(chi_points);
  ScanSeries<Scalar> series;
  series.parameter_name = "N";
  series.rows.reserve(static_cast<std::size_t>(n_max - n_min + 1));
  for (Index n = n_min; n <= n_max; ++n) {
    const auto spec = InterferometerSpec<Scalar>::identical_blades(3, BladeSpec<Scalar>(n, params));
    const auto fringes = fringe_scan(spec, std::span<const Scalar>(grid), BeamState<Scalar>::single_up(0));
    Scalar c_o = std::numeric_limits<Scalar>::quiet_NaN();
    Scalar c_h = std::numeric_limits<Scalar>::quiet_NaN();
    try {
      const ContrastResult<Scalar> c = contrast(fringes);
      c_o = c.contrast_O;
      c_h = c.contrast_H;
    } catch (const UndefinedContrastError&) {
      // flagged as NaN row
    }
    series.rows.push_back({static_cast<Scalar>(n), c_o, c_h});
  }
  return series;
}

/// The eight beam profiles of a three-blade device: both beams after blade 1,
/// the four after blade 2 (first letter: branch at blade 1, second: outcome
/// at blade 2), and the O/H outputs after blade 3 at chi = 0.
template <typename Scalar>
std::map<std::string, IntensityProfile<Scalar>> blade_output_profiles(
    const InterferometerSpec<Scalar>& spec, const BeamState<Scalar>& input) {
  spec.validate();
  if (spec.blades.size() != 3) {
    throw UnsupportedGeometryError("beam-profile decomposition requires a three-blade device");
  }
  std::map<std::string, IntensityProfile<Scalar>> profiles;
  const BeamState<Scalar> s1 = propagate_blade(input, spec.blades[0]);
  profiles["1T"] = intensity_profile(project_branch(s1, Branch::O));
  profiles["1R"] = intensity_profile(project_branch(s1, Branch::H));
  const BeamState<Scalar> s2t = propagate_blade(project_branch(s1, Branch::O), spec.blades[1]);
  const BeamState<Scalar> s2r = propagate_blade(project_branch(s1, Branch::H), spec.blades[1]);
  profiles["2TT"] = intensity_profile(project_branch(s2t, Branch::O));
  profiles["2TR"] = intensity_profile(project_branch(s2t, Branch::H));
  profiles["2RR"] = intensity_profile(project_branch(s2r, Branch::O));
  profiles["2RT"] = intensity_profile(project_branch(s2r, Branch::H));
  const SimulationResult<Scalar> out = simulate(spec, Scalar(0), input);
  profiles["O"] = intensity_profile(out.psi_O);
  profiles["H"] = intensity_profile(out.psi_H);
  return profiles;
}

}  // namespace lauewalk
