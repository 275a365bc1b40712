#pragma once

#include <complex>
#include <cstdint>
#include <utility>

#include "lauewalk/beam_state.hpp"
#include "lauewalk/errors.hpp"
#include "lauewalk/splitter.hpp"

namespace lauewalk {

// One vertical plane of nodes scatters the two incident rays of every node:
//
//   a_j -> t_a a_{j+1} + r_a b_{j-1}
//   b_j -> r_b a_{j+1} + t_b b_{j-1}
//
// Both output cells of node j depend on the inputs of node j alone, so the
// step is a matrix-free scatter-add over the stored window. The window grows
// by exactly one node at each end per plane.

/// Apply one plane with the same coefficients at every node.
template <typename Scalar>
BeamState<Scalar> apply_plane(const BeamState<Scalar>& state, const NodeCoefficients<Scalar>& node) {
  BeamState<Scalar> out;
  out.base_index = state.base_index - 1;
  const Index n = state.size();
  out.up.setZero(n + 2);
  out.down.setZero(n + 2);
  if (n > 0) {
    out.up.segment(2, n) = node.t_a * state.up + node.r_b * state.down;
    out.down.segment(0, n) = node.r_a * state.up + node.t_b * state.down;
  }
  return out;
}

/// Apply one plane, honouring per-node overrides registered for `plane`.
template <typename Scalar>
BeamState<Scalar> apply_plane(const BeamState<Scalar>& state, const NodeParameterSource<Scalar>& source,
                              Index plane) {
  BeamState<Scalar> out = apply_plane(state, source.uniform_coefficients());
  source.for_each_override_in_plane(plane, [&](Index node, const NodeCoefficients<Scalar>& c) {
    if (!state.contains(node)) return;
    const Index p = node - state.base_index;
    out.up[p + 2] = c.t_a * state.up[p] + c.r_b * state.down[p];
    out.down[p] = c.r_a * state.up[p] + c.t_b * state.down[p];
  });
  return out;
}

namespace detail {

// Shared propagation loop. Allocates the final window once and ping-pongs
// between two buffers; written spans grow monotonically, so cells outside the
// active window stay zero without re-clearing. `after_plane(k, state)` sees
// the state after plane k (1-based), zero-padded to the final window.
template <typename Scalar, typename Observer>
BeamState<Scalar> propagate_observed(const BeamState<Scalar>& input, Index planes,
                                     const NodeParameterSource<Scalar>& source, Observer&& after_plane) {
  if (planes < 0) throw InvalidParameterError("plane count must be non-negative");
  if (source.max_override_plane() >= planes) {
    throw InvalidParameterError("node override registered beyond the last plane");
  }
  if (planes == 0) return input;

  const Index n0 = input.size();
  const Index width = n0 + 2 * planes;
  BeamState<Scalar> ping;
  BeamState<Scalar> pong;
  ping.base_index = pong.base_index = input.base_index - planes;
  ping.up.setZero(width);
  ping.down.setZero(width);
  pong.up.setZero(width);
  pong.down.setZero(width);
  if (n0 > 0) {
    ping.up.segment(planes, n0) = input.up;
    ping.down.segment(planes, n0) = input.down;
  }

  BeamState<Scalar>* src = &ping;
  BeamState<Scalar>* dst = &pong;
  const NodeCoefficients<Scalar>& uniform = source.uniform_coefficients();
  const bool any_overrides = source.has_overrides();
  for (Index k = 0; k < planes; ++k) {
    const Index s = planes - k;    // first active position in src
    const Index len = n0 + 2 * k;  // active span in src
    if (len > 0) {
      dst->up.segment(s + 1, len) =
          uniform.t_a * src->up.segment(s, len) + uniform.r_b * src->down.segment(s, len);
      dst->down.segment(s - 1, len) =
          uniform.r_a * src->up.segment(s, len) + uniform.t_b * src->down.segment(s, len);
    }
    if (any_overrides && source.plane_has_overrides(k)) {
      source.for_each_override_in_plane(k, [&](Index node, const NodeCoefficients<Scalar>& c) {
        const Index p = node - src->base_index;
        if (p < s || p >= s + len) return;
        dst->up[p + 1] = c.t_a * src->up[p] + c.r_b * src->down[p];
        dst->down[p - 1] = c.r_a * src->up[p] + c.t_b * src->down[p];
      });
    }
    std::swap(src, dst);
    after_plane(k + 1, static_cast<const BeamState<Scalar>&>(*src));
  }
  return std::move(*src);
}

}  // namespace detail

/// N successive plane applications.
template <typename Scalar>
BeamState<Scalar> propagate(const BeamState<Scalar>& state, Index planes,
                            const NodeParameterSource<Scalar>& source) {
  return detail::propagate_observed(state, planes, source, [](Index, const BeamState<Scalar>&) {});
}

template <typename Scalar>
struct SplitComponents {
  BeamState<Scalar> transmitted;  // up component, same window
  BeamState<Scalar> reflected;    // down component, same window
  Scalar weight_T{};
  Scalar weight_R{};
};

/// Separate the up (transmitted) and down (reflected) components. Neither
/// part is renormalized; the weights are the squared norms, and
/// weight_T + weight_R equals the input norm.
template <typename Scalar>
SplitComponents<Scalar> split_components(const BeamState<Scalar>& state) {
  SplitComponents<Scalar> out;
  out.transmitted.base_index = state.base_index;
  out.reflected.base_index = state.base_index;
  out.transmitted.up = state.up;
  out.transmitted.down = BeamState<Scalar>::AmplitudeVector::Zero(state.size());
  out.reflected.up = BeamState<Scalar>::AmplitudeVector::Zero(state.size());
  out.reflected.down = state.down;
  out.weight_T = state.up_intensity();
  out.weight_R = state.down_intensity();
  return out;
}

template <typename Scalar>
struct PathEnumeration {
  BeamState<Scalar> state;
  std::uint64_t path_count = 0;
  // Paths ending upward with an odd reflection count (or downward with an
  // even one). Structurally zero; tracked as a bookkeeping check.
  std::uint64_t parity_violations = 0;
};

/// Brute-force reference: sums amplitude products over all 2^N
/// transmit/reflect path histories. Deliberately independent of the plane
/// kernel so the two implementations can be checked against each other.
template <typename Scalar>
PathEnumeration<Scalar> enumerate_paths(Index start, Index planes,
                                        const NodeParameterSource<Scalar>& source) {
  constexpr Index kMaxPlanes = 20;
  if (planes < 0) throw InvalidParameterError("plane count must be non-negative");
  if (planes > kMaxPlanes) {
    throw InvalidParameterError("path enumeration cost is 2^N; refusing N > 20");
  }
  if (source.max_override_plane() >= planes) {
    throw InvalidParameterError("node override registered beyond the last plane");
  }

  using Complex = std::complex<Scalar>;
  PathEnumeration<Scalar> result;
  BeamState<Scalar>& acc = result.state;
  acc.base_index = start - planes;
  acc.up.setZero(2 * planes + 1);
  acc.down.setZero(2 * planes + 1);

  auto walk = [&](auto&& self, Index plane, Index node, bool moving_up, Complex amp,
                  int reflections) -> void {
    if (plane == planes) {
      ++result.path_count;
      const Index p = node - acc.base_index;
      const bool even = reflections % 2 == 0;
      if (moving_up) {
        acc.up[p] += amp;
        if (!even) ++result.parity_violations;
      } else {
        acc.down[p] += amp;
        if (even) ++result.parity_violations;
      }
      return;
    }
    const NodeCoefficients<Scalar> c = source.coefficients(plane, node);
    if (moving_up) {
      self(self, plane + 1, node + 1, true, amp * c.t_a, reflections);
      self(self, plane + 1, node - 1, false, amp * c.r_a, reflections + 1);
    } else {
      self(self, plane + 1, node + 1, true, amp * c.r_b, reflections + 1);
      self(self, plane + 1, node - 1, false, amp * c.t_b, reflections);
    }
  };
  walk(walk, 0, start, true, Complex(1), 0);
  return result;
}

/// Oracle state for an upward ray entering at `start`.
template <typename Scalar>
BeamState<Scalar> enumerate_paths_oracle(Index start, Index planes,
                                         const NodeParameterSource<Scalar>& source) {
  return enumerate_paths(start, planes, source).state;
}

}  // namespace lauewalk
