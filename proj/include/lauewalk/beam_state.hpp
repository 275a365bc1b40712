#pragma once

#include <algorithm>
#include <complex>

#include <Eigen/Core>

#include "lauewalk/common.hpp"

namespace lauewalk {

/// Two-ray lattice wavefunction: complex amplitudes over a contiguous window
/// of integer lattice nodes, split into an upward (a) and a downward (b)
/// component. Stored position p holds node base_index + p; both components
/// share the same window.
template <typename Scalar = double>
struct BeamState {
  using Complex = std::complex<Scalar>;
  using AmplitudeVector = Eigen::Array<Complex, Eigen::Dynamic, 1>;

  Index base_index = 0;
  AmplitudeVector up;
  AmplitudeVector down;

  /// Single upward ray |a_node>.
  static BeamState single_up(Index node) {
    BeamState s;
    s.base_index = node;
    s.up = AmplitudeVector::Constant(1, Complex(1));
    s.down = AmplitudeVector::Zero(1);
    return s;
  }

  /// Single downward ray |b_node>.
  static BeamState single_down(Index node) {
    BeamState s;
    s.base_index = node;
    s.up = AmplitudeVector::Zero(1);
    s.down = AmplitudeVector::Constant(1, Complex(1));
    return s;
  }

  Index size() const { return up.size(); }
  Index first_node() const { return base_index; }
  Index last_node() const { return base_index + size() - 1; }
  bool contains(Index node) const { return size() > 0 && node >= first_node() && node <= last_node(); }

  Complex up_at(Index node) const { return contains(node) ? up[node - base_index] : Complex(0); }
  Complex down_at(Index node) const { return contains(node) ? down[node - base_index] : Complex(0); }

  Scalar up_intensity() const { return size() > 0 ? up.abs2().sum() : Scalar(0); }
  Scalar down_intensity() const { return size() > 0 ? down.abs2().sum() : Scalar(0); }

  /// Sum of |amplitude|^2 over both components ("norm" of the state).
  Scalar total_intensity() const { return up_intensity() + down_intensity(); }
};

/// c1*a + c2*b over the union of the two windows.
template <typename Scalar>
BeamState<Scalar> linear_combination(std::complex<Scalar> c1, const BeamState<Scalar>& a,
                                     std::complex<Scalar> c2, const BeamState<Scalar>& b) {
  if (a.size() == 0 && b.size() == 0) return a;
  BeamState<Scalar> out;
  if (a.size() == 0) {
    out = b;
    out.up *= c2;
    out.down *= c2;
    return out;
  }
  if (b.size() == 0) {
    out = a;
    out.up *= c1;
    out.down *= c1;
    return out;
  }
  out.base_index = std::min(a.first_node(), b.first_node());
  const Index last = std::max(a.last_node(), b.last_node());
  const Index n = last - out.base_index + 1;
  out.up.setZero(n);
  out.down.setZero(n);
  out.up.segment(a.first_node() - out.base_index, a.size()) = c1 * a.up;
  out.down.segment(a.first_node() - out.base_index, a.size()) = c1 * a.down;
  out.up.segment(b.first_node() - out.base_index, b.size()) += c2 * b.up;
  out.down.segment(b.first_node() - out.base_index, b.size()) += c2 * b.down;
  return out;
}

/// Largest |amplitude difference| between two states, window-aligned.
template <typename Scalar>
Scalar max_amplitude_difference(const BeamState<Scalar>& a, const BeamState<Scalar>& b) {
  if (a.size() == 0 && b.size() == 0) return Scalar(0);
  const Index first = std::min(a.size() ? a.first_node() : b.first_node(),
                               b.size() ? b.first_node() : a.first_node());
  const Index last = std::max(a.size() ? a.last_node() : b.last_node(),
                              b.size() ? b.last_node() : a.last_node());
  Scalar worst = 0;
  for (Index j = first; j <= last; ++j) {
    worst = std::max(worst, std::abs(a.up_at(j) - b.up_at(j)));
    worst = std::max(worst, std::abs(a.down_at(j) - b.down_at(j)));
  }
  return worst;
}

}  // namespace lauewalk
