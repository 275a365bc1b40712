#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <utility>

#include "lauewalk/common.hpp"
#include "lauewalk/errors.hpp"

namespace lauewalk {

/// Angles of one scattering node. theta sets the single-node transmission
/// probability cos^2(theta); xi and zeta are the transmission and reflection
/// phases. theta is folded into [0, pi] on construction; the fold flips the
/// sign of the reflection amplitudes, which leaves every intensity unchanged.
template <typename Scalar = double>
struct SplitterParams {
  Scalar xi{0};
  Scalar theta{0};
  Scalar zeta{0};
  bool theta_reduced = false;  // input theta was outside [0, pi]

  SplitterParams() = default;

  SplitterParams(Scalar xi_in, Scalar theta_in, Scalar zeta_in)
      : xi(xi_in), theta(theta_in), zeta(zeta_in) {
    if (!std::isfinite(xi) || !std::isfinite(theta) || !std::isfinite(zeta)) {
      throw InvalidParameterError("splitter angles must be finite");
    }
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    if (theta < Scalar(0) || theta > pi) {
      Scalar t = std::fmod(theta, Scalar(2) * pi);
      if (t < Scalar(0)) t += Scalar(2) * pi;
      if (t > pi) t = Scalar(2) * pi - t;
      theta = t;
      theta_reduced = true;
    }
  }
};

/// Complex amplitudes of one node: t_a, r_a act on the upward ray, r_b, t_b
/// on the downward ray. A valid set satisfies
///   |t_a|^2 + |r_a|^2 = 1,  |t_b|^2 + |r_b|^2 = 1,
///   t_a conj(r_b) + r_a conj(t_b) = 0.
template <typename Scalar = double>
struct NodeCoefficients {
  using Complex = std::complex<Scalar>;

  Complex t_a{1};
  Complex t_b{1};
  Complex r_a{0};
  Complex r_b{0};

  /// Largest violation of the three unitarity conditions.
  Scalar unitarity_residual() const {
    const Scalar row_a = std::abs(std::norm(t_a) + std::norm(r_a) - Scalar(1));
    const Scalar row_b = std::abs(std::norm(t_b) + std::norm(r_b) - Scalar(1));
    const Scalar cross = std::abs(t_a * std::conj(r_b) + r_a * std::conj(t_b));
    return std::max({row_a, row_b, cross});
  }

  bool is_unitary(Scalar tol = Scalar(1e-12)) const { return unitarity_residual() <= tol; }
};

/// t_a = e^{i xi} cos(theta),   t_b = e^{-i xi} cos(theta),
/// r_a = -e^{-i zeta} sin(theta), r_b = e^{i zeta} sin(theta).
/// The result satisfies the unitarity conditions identically.
template <typename Scalar>
NodeCoefficients<Scalar> derive_coefficients(const SplitterParams<Scalar>& params) {
  if (!std::isfinite(params.xi) || !std::isfinite(params.theta) || !std::isfinite(params.zeta)) {
    throw InvalidParameterError("splitter angles must be finite");
  }
  const Scalar c = std::cos(params.theta);
  const Scalar s = std::sin(params.theta);
  NodeCoefficients<Scalar> k;
  k.t_a = std::polar(Scalar(1), params.xi) * c;
  k.t_b = std::polar(Scalar(1), -params.xi) * c;
  k.r_a = -std::polar(Scalar(1), -params.zeta) * s;
  k.r_b = std::polar(Scalar(1), params.zeta) * s;
  return k;
}

/// The 50:50 node with the Hadamard sign pattern:
///   a -> (a + b)/sqrt2,  b -> (a - b)/sqrt2.
/// This determinant -1 matrix is outside the image of derive_coefficients
/// (which always has determinant +1); it differs from the (0, pi/4, 0) node
/// only by a node-diagonal sign gauge, so all intensities agree.
template <typename Scalar = double>
NodeCoefficients<Scalar> hadamard_coefficients() {
  const Scalar r = Scalar(1) / std::numbers::sqrt2_v<Scalar>;
  NodeCoefficients<Scalar> k;
  k.t_a = r;
  k.t_b = -r;
  k.r_a = r;
  k.r_b = r;
  return k;
}

/// Per-node parameter lookup for a blade: one uniform parameter set plus
/// sparse (plane, node) overrides. The override map is the hook for studying
/// single-node defects without touching the propagation kernel.
template <typename Scalar = double>
class NodeParameterSource {
 public:
  using Params = SplitterParams<Scalar>;
  using Coefficients = NodeCoefficients<Scalar>;
  using Key = std::pair<Index, Index>;  // (plane, node)

  NodeParameterSource() : NodeParameterSource(Params{}) {}

  explicit NodeParameterSource(const Params& uniform)
      : uniform_params_(uniform), uniform_coefficients_(derive_coefficients(uniform)) {}

  /// Direct coefficient construction, for node matrices that no angle triple
  /// reaches (e.g. the Hadamard pattern).
  explicit NodeParameterSource(const Coefficients& uniform) : uniform_coefficients_(uniform) {
    if (!uniform.is_unitary(Scalar(1e-10))) {
      throw InvalidParameterError("node coefficients violate unitarity");
    }
  }

  void set_override(Index plane, Index node, const Params& params) {
    if (plane < 0) throw InvalidParameterError("override plane index must be non-negative");
    overrides_.insert_or_assign(Key{plane, node}, derive_coefficients(params));
  }

  bool has_overrides() const { return !overrides_.empty(); }

  /// Largest plane index carrying an override, -1 if none.
  Index max_override_plane() const {
    return overrides_.empty() ? Index(-1) : overrides_.rbegin()->first.first;
  }

  bool plane_has_overrides(Index plane) const {
    auto it = overrides_.lower_bound(Key{plane, std::numeric_limits<Index>::min()});
    return it != overrides_.end() && it->first.first == plane;
  }

  const Coefficients& uniform_coefficients() const { return uniform_coefficients_; }
  const std::optional<Params>& uniform_params() const { return uniform_params_; }

  Coefficients coefficients(Index plane, Index node) const {
    if (!overrides_.empty()) {
      auto it = overrides_.find(Key{plane, node});
      if (it != overrides_.end()) return it->second;
    }
    return uniform_coefficients_;
  }

  /// fn(node, coefficients) for every override registered on `plane`.
  template <typename Fn>
  void for_each_override_in_plane(Index plane, Fn&& fn) const {
    for (auto it = overrides_.lower_bound(Key{plane, std::numeric_limits<Index>::min()});
         it != overrides_.end() && it->first.first == plane; ++it) {
      fn(it->first.second, it->second);
    }
  }

 private:
  std::optional<Params> uniform_params_;
  Coefficients uniform_coefficients_;
  std::map<Key, Coefficients> overrides_;
};

}  // namespace lauewalk
