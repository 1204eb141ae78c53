// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Exponential families e^{2pi i lambda t} on unions of intervals: Gram
// matrices from closed-form antiderivatives (no quadrature error to argue
// about) and Parseval defects for gridded functions, where the coefficient
// integrals treat the linear interpolant exactly so oscillation never
// degrades into sampling noise.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "pdext/errors.hpp"
#include "pdext/grid.hpp"
#include "pdext/kernel.hpp"

namespace pdext {

struct ExponentialFamily {
  DomainSet omega;
  std::vector<double> lambdas;

  ExponentialFamily(DomainSet om, std::vector<double> ls)
      : omega(std::move(om)), lambdas(std::move(ls)) {
    for (const auto& [a, b] : omega.intervals)
      require(std::isfinite(a) && std::isfinite(b), errc::invalid_argument,
              "exponential family needs a bounded domain");
    require(!lambdas.empty(), errc::invalid_argument,
            "need at least one frequency");
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
      require(std::isfinite(lambdas[j]), errc::invalid_argument,
              "frequency must be finite");
      for (std::size_t k = j + 1; k < lambdas.size(); ++k)
        require(lambdas[j] != lambdas[k], errc::invalid_argument,
                "frequencies must be distinct");
    }
  }

  double measure() const {
    double m = 0.0;
    for (const auto& [a, b] : omega.intervals) m += b - a;
    return m;
  }
};

namespace detail {

// integral of e^{i theta t} over [a, b]; the midpoint-sinc form is stable
// for every theta including 0
inline cplx segment_integral(double a, double b, double theta) {
  const double half = 0.5 * theta * (b - a);
  const double s = half == 0.0 ? 1.0 : std::sin(half) / half;
  return (b - a) * s * std::polar(1.0, 0.5 * theta * (a + b));
}

// J0 = integral of e^{i theta u} du and J1 = integral of u e^{i theta u} du
// over [0, h]. J1's closed form loses phi^2 of its leading digits as
// phi = theta h shrinks, so small phases switch to the series
// h^2 sum (i phi)^n / (n! (n+2)).
inline cplx panel_j0(double theta, double h) {
  return segment_integral(0.0, h, theta);
}

inline cplx panel_j1(double theta, double h) {
  const double phi = theta * h;
  if (std::abs(phi) < 0.5) {
    cplx term = 1.0;  // (i phi)^n / n!
    cplx acc = 0.0;
    for (int n = 0; n <= 12; ++n) {
      acc += term / static_cast<double>(n + 2);
      term *= cplx(0.0, phi) / static_cast<double>(n + 1);
    }
    return h * h * acc;
  }
  const cplx itheta(0.0, theta);
  return (h * std::polar(1.0, phi) - panel_j0(theta, h)) / itheta;
}

}  // namespace detail

// G[j][k] = (1/|Omega|) integral over Omega of e^{2pi i (l_j - l_k) t} dt,
// exactly Hermitian with an exactly unit diagonal.
inline Eigen::MatrixXcd exponential_gram(const ExponentialFamily& fam) {
  const auto m = static_cast<Eigen::Index>(fam.lambdas.size());
  const double total = fam.measure();
  Eigen::MatrixXcd g(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    g(j, j) = 1.0;
    for (Eigen::Index k = j + 1; k < m; ++k) {
      const double theta =
          2.0 * M_PI * (fam.lambdas[static_cast<std::size_t>(j)] -
                        fam.lambdas[static_cast<std::size_t>(k)]);
      cplx acc = 0.0;
      for (const auto& [a, b] : fam.omega.intervals)
        acc += detail::segment_integral(a, b, theta);
      g(j, k) = acc / total;
      g(k, j) = std::conj(g(j, k));
    }
  }
  return g;
}

// A function given by linear interpolation on one uniform grid per domain
// component, endpoints included.
struct SectionFunction {
  std::vector<UniformGrid> grids;
  std::vector<std::vector<cplx>> values;
};

template <typename Fn>
SectionFunction sample_sections(const DomainSet& omega, std::size_t nodes,
                                Fn&& f) {
  require(nodes >= 2, errc::invalid_argument,
          "need at least two nodes per section");
  SectionFunction out;
  for (const auto& [a, b] : omega.intervals) {
    UniformGrid g(a, (b - a) / static_cast<double>(nodes - 1), nodes);
    std::vector<cplx> v(nodes);
    for (std::size_t k = 0; k < nodes; ++k) v[k] = f(g.point(k));
    out.grids.push_back(g);
    out.values.push_back(std::move(v));
  }
  return out;
}

// ||f||^2 - sum over the family of |<f, E_lambda>|^2, nonnegative up to
// frequency truncation and interpolation error. Both the norm and the
// coefficients integrate the piecewise-linear interpolant in closed form.
inline double parseval_defect(const ExponentialFamily& fam,
                              const SectionFunction& f) {
  require(f.grids.size() == fam.omega.intervals.size(),
          errc::invalid_argument,
          "function sections must match the domain components");
  for (std::size_t i = 0; i < f.grids.size(); ++i) {
    const auto& [a, b] = fam.omega.intervals[i];
    const auto& g = f.grids[i];
    require(f.values[i].size() == g.count, errc::invalid_argument,
            "section values must match their grid");
    const double scale = std::max(1.0, std::abs(b - a));
    require(std::abs(g.start - a) <= 1e-9 * scale &&
                std::abs(g.back() - b) <= 1e-9 * scale,
            errc::invalid_argument, "section grid must span its component");
  }

  double norm2 = 0.0;
  for (std::size_t i = 0; i < f.grids.size(); ++i) {
    const double h = f.grids[i].step;
    const auto& v = f.values[i];
    for (std::size_t k = 0; k + 1 < v.size(); ++k)
      norm2 += h *
               (std::norm(v[k]) + std::real(v[k] * std::conj(v[k + 1])) +
                std::norm(v[k + 1])) /
               3.0;
  }

  const double root_measure = std::sqrt(fam.measure());
  double captured = 0.0;
  for (const double lambda : fam.lambdas) {
    const double theta = -2.0 * M_PI * lambda;
    cplx c = 0.0;
    for (std::size_t i = 0; i < f.grids.size(); ++i) {
      const auto& g = f.grids[i];
      const double h = g.step;
      const cplx j0 = detail::panel_j0(theta, h);
      const cplx j1 = detail::panel_j1(theta, h);
      const auto& v = f.values[i];
      for (std::size_t k = 0; k + 1 < v.size(); ++k) {
        const cplx slope = (v[k + 1] - v[k]) / h;
        c += std::polar(1.0, theta * g.point(k)) * (v[k] * j0 + slope * j1);
      }
    }
    captured += std::norm(c / root_measure);
  }
  return norm2 - captured;
}

}  // namespace pdext
