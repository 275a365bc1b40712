#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "lauewalk/lauewalk.hpp"

namespace testsupport {

using lauewalk::BeamState;
using lauewalk::Index;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline lauewalk::SplitterParams<double> random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> theta(0.0, std::numbers::pi);
  std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
  return {phase(rng), theta(rng), phase(rng)};
}

inline BeamState<double> random_normalized_state(std::mt19937_64& rng, Index half_width) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  BeamState<double> s;
  s.base_index = -half_width;
  const Index n = 2 * half_width + 1;
  s.up.resize(n);
  s.down.resize(n);
  for (Index i = 0; i < n; ++i) {
    s.up[i] = {gauss(rng), gauss(rng)};
    s.down[i] = {gauss(rng), gauss(rng)};
  }
  const double scale = 1.0 / std::sqrt(s.total_intensity());
  s.up *= scale;
  s.down *= scale;
  return s;
}

/// (node, weight) list of one profile column.
using WeightedNodes = std::vector<std::pair<Index, double>>;

inline WeightedNodes transmitted_points(const lauewalk::IntensityProfile<double>& profile) {
  WeightedNodes pts;
  for (const auto& row : profile.rows) {
    if (row.intensity_T > 0) pts.push_back({row.node, row.intensity_T});
  }
  return pts;
}

inline WeightedNodes reflected_points(const lauewalk::IntensityProfile<double>& profile) {
  WeightedNodes pts;
  for (const auto& row : profile.rows) {
    if (row.intensity_R > 0) pts.push_back({row.node, row.intensity_R});
  }
  return pts;
}

/// Largest |I(p) - I(mirror p)| over the support, relative to the peak.
inline double symmetry_residual(const WeightedNodes& pts) {
  double peak = 0;
  for (const auto& [j, v] : pts) peak = std::max(peak, v);
  double worst = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    worst = std::max(worst, std::abs(pts[i].second - pts[pts.size() - 1 - i].second));
  }
  return peak > 0 ? worst / peak : 0.0;
}

/// Standardized skewness m3 / m2^(3/2) of the node distribution.
inline double standardized_skew(const WeightedNodes& pts) {
  double w = 0, wx = 0;
  for (const auto& [j, v] : pts) {
    w += v;
    wx += v * static_cast<double>(j);
  }
  const double mean = wx / w;
  double m2 = 0, m3 = 0;
  for (const auto& [j, v] : pts) {
    const double d = static_cast<double>(j) - mean;
    m2 += v * d * d;
    m3 += v * d * d * d;
  }
  m2 /= w;
  m3 /= w;
  return m3 / std::pow(m2, 1.5);
}

/// Distance between the nodes where the cumulative weight crosses 25% / 75%.
inline double interquartile_width(const WeightedNodes& pts) {
  double w = 0;
  for (const auto& [j, v] : pts) w += v;
  double cum = 0;
  double q25 = 0, q75 = 0;
  bool got25 = false, got75 = false;
  for (const auto& [j, v] : pts) {
    cum += v;
    if (!got25 && cum >= 0.25 * w) {
      q25 = static_cast<double>(j);
      got25 = true;
    }
    if (!got75 && cum >= 0.75 * w) {
      q75 = static_cast<double>(j);
      got75 = true;
    }
  }
  return q75 - q25;
}

inline int count_local_maxima(std::span<const double> values) {
  int maxima = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] > values[i - 1] && values[i] > values[i + 1]) ++maxima;
  }
  return maxima;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

}  // namespace testsupport
