// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Smooth compactly supported test functions: scaled copies of the standard
// mollifier exp(-1/(1-u^2)) on |u|<1. Infinitely differentiable, so trapezoid
// quadrature against them converges faster than any power of the step.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include "pdext/errors.hpp"

namespace pdext {

struct BumpFunction {
  double center = 0.0;
  double width = 1.0;
  std::complex<double> amplitude = 1.0;

  BumpFunction() = default;
  BumpFunction(double c, double r, std::complex<double> a = 1.0)
      : center(c), width(r), amplitude(a) {
    require(r > 0.0, errc::invalid_argument, "bump width must be positive");
  }

  std::complex<double> value(double x) const {
    const double u = (x - center) / width;
    const double w = 1.0 - u * u;
    if (!(w > 0.0)) return 0.0;
    return amplitude * std::exp(-1.0 / w);
  }

  // d/dx of the profile: exp(-1/(1-u^2)) * (-2u/(1-u^2)^2) / width
  std::complex<double> derivative(double x) const {
    const double u = (x - center) / width;
    const double w = 1.0 - u * u;
    if (!(w > 0.0)) return 0.0;
    return amplitude * std::exp(-1.0 / w) * (-2.0 * u / (w * w)) / width;
  }

  double support_lo() const { return center - width; }
  double support_hi() const { return center + width; }
};

// Trapezoid resolution used when a check integrates over a bump's support.
struct QuadratureSpec {
  std::size_t nodes = 200;

  QuadratureSpec() = default;
  explicit QuadratureSpec(std::size_t n) : nodes(n) {
    require(n >= 32, errc::invalid_argument, "quadrature needs at least 32 nodes");
  }
};

}  // namespace pdext
