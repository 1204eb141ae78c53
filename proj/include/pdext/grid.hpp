// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "pdext/errors.hpp"

namespace pdext {

// Uniform one-dimensional grid t_k = start + k*step, k = 0..count-1.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 2;

  UniformGrid() = default;
  UniformGrid(double start_, double step_, std::size_t count_)
      : start(start_), step(step_), count(count_) {
    require(step > 0.0, errc::invalid_argument, "grid step must be positive");
    require(count >= 2, errc::invalid_argument, "grid needs at least two points");
  }

  double point(std::size_t k) const { return start + static_cast<double>(k) * step; }
  double back() const { return point(count - 1); }

  std::vector<double> points() const {
    std::vector<double> p(count);
    for (std::size_t k = 0; k < count; ++k) p[k] = point(k);
    return p;
  }

  // Symmetric grid covering [-extent, extent] with an odd point count, so
  // that 0 is an exact node.
  static UniformGrid symmetric(double extent, std::size_t half_count, double step) {
    require(extent > 0.0 || half_count > 0, errc::invalid_argument, "empty grid");
    return UniformGrid(-static_cast<double>(half_count) * step, step, 2 * half_count + 1);
  }
};

// Detects uniform spacing in a sorted point list; used by CSV loaders.
inline bool is_uniform(const std::vector<double>& t, double rel_tol = 1e-9) {
  if (t.size() < 2) return false;
  const double h = t[1] - t[0];
  if (!(h > 0.0)) return false;
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    if (std::abs((t[k + 1] - t[k]) - h) > rel_tol * std::abs(h)) return false;
  }
  return true;
}

}  // namespace pdext
