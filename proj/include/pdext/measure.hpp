// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Finite positive measures on the line and their Fourier transforms
// mu_hat(t) = integral of e^{itx} dmu(x). Two concrete shapes: discrete atom
// lists and densities sampled on a uniform grid (trapezoid quadrature).

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pdext/errors.hpp"
#include "pdext/grid.hpp"
#include "pdext/io.hpp"

namespace pdext {

using cplx = std::complex<double>;

struct Measure {
  enum class kind_t { discrete, gridded_density };

  kind_t kind = kind_t::discrete;
  // discrete: atoms at positions[k] with mass weights[k]
  std::vector<double> positions;
  std::vector<double> weights;
  // gridded_density: density values[k] at grid.point(k)
  UniformGrid grid;
  std::vector<double> values;

  static Measure discrete(std::vector<double> pos, std::vector<double> w) {
    require(!pos.empty() && pos.size() == w.size(), errc::invalid_argument,
            "discrete measure needs matching nonempty positions and weights");
    for (std::size_t j = 0; j < pos.size(); ++j) {
      require(std::isfinite(pos[j]), errc::invalid_argument, "position not finite");
      require(std::isfinite(w[j]) && w[j] >= 0.0, errc::invalid_argument,
              "weights must be nonnegative");
      for (std::size_t k = j + 1; k < pos.size(); ++k)
        require(pos[j] != pos[k], errc::invalid_argument,
                "discrete positions must be pairwise distinct");
    }
    Measure mu;
    mu.kind = kind_t::discrete;
    mu.positions = std::move(pos);
    mu.weights = std::move(w);
    return mu;
  }

  static Measure gridded(UniformGrid g, std::vector<double> vals) {
    require(vals.size() == g.count, errc::invalid_argument,
            "density values must match grid size");
    for (double v : vals)
      require(std::isfinite(v) && v >= 0.0, errc::negative_density,
              "density values must be nonnegative");
    Measure mu;
    mu.kind = kind_t::gridded_density;
    mu.grid = g;
    mu.values = std::move(vals);
    return mu;
  }

  std::size_t size() const {
    return kind == kind_t::discrete ? positions.size() : values.size();
  }
};

namespace detail {

// Visits (x_k, w_k) so that integral f dmu = sum w_k f(x_k); trapezoid
// weights for gridded densities.
template <typename Fn>
void for_each_atom(const Measure& mu, Fn&& fn) {
  if (mu.kind == Measure::kind_t::discrete) {
    for (std::size_t k = 0; k < mu.positions.size(); ++k)
      fn(mu.positions[k], mu.weights[k]);
  } else {
    const double h = mu.grid.step;
    const std::size_t n = mu.grid.count;
    for (std::size_t k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
      fn(mu.grid.point(k), w * mu.values[k]);
    }
  }
}

// e^{i t_j x} along a uniform t-grid by phase stepping, with an exact polar
// recompute every 512 steps so rounding drift stays near 1e-13.
constexpr std::size_t phase_resync = 512;

template <typename Fn>
void phase_walk(const UniformGrid& ts, double x, Fn&& fn) {
  const cplx step = std::polar(1.0, ts.step * x);
  cplx p = 0.0;
  for (std::size_t j = 0; j < ts.count; ++j) {
    if (j % phase_resync == 0) p = std::polar(1.0, ts.point(j) * x);
    fn(j, p);
    p *= step;
  }
}

}  // namespace detail

// mu_hat(t). Gridded densities walk their own uniform grid with the phase
// recurrence, so one evaluation is O(n) with only occasional trig calls.
inline cplx fourier_transform(const Measure& mu, double t) {
  cplx acc = 0.0;
  if (mu.kind == Measure::kind_t::discrete) {
    detail::for_each_atom(mu, [&](double x, double w) {
      acc += w * std::polar(1.0, t * x);
    });
  } else {
    const double h = mu.grid.step;
    const std::size_t n = mu.grid.count;
    detail::phase_walk(mu.grid, t, [&](std::size_t k, cplx p) {
      const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
      acc += (w * mu.values[k]) * p;
    });
  }
  return acc;
}

// Vectorized transform on a uniform output grid. Same sums as the scalar
// path, but the recurrence runs along t instead, atom by atom.
inline std::vector<cplx> fourier_on_grid(const Measure& mu, const UniformGrid& ts) {
  std::vector<cplx> out(ts.count, cplx(0.0));
  detail::for_each_atom(mu, [&](double x, double w) {
    detail::phase_walk(ts, x, [&](std::size_t j, cplx p) { out[j] += w * p; });
  });
  return out;
}

inline double total_mass(const Measure& mu) {
  // e^{i*0*x} is exactly 1, so this is the plain weight sum in atom order.
  return fourier_transform(mu, 0.0).real();
}

namespace detail {

// Filon cosine weights for panel half-angle theta = t*h. The closed forms
// cancel badly as theta -> 0, so switch to series below 0.1.
struct filon_weights {
  double alpha, beta, gamma;
};

inline filon_weights filon_coeffs(double theta) {
  const double th = std::abs(theta);
  if (th < 0.1) {
    const double t2 = theta * theta;
    return {theta * t2 * (2.0 / 45.0 + t2 * (-2.0 / 315.0 + t2 * (2.0 / 4725.0))),
            2.0 / 3.0 + t2 * (2.0 / 15.0 + t2 * (-4.0 / 105.0 + t2 * (2.0 / 567.0))),
            4.0 / 3.0 + t2 * (-2.0 / 15.0 + t2 * (1.0 / 210.0 + t2 * (-1.0 / 11340.0)))};
  }
  const double s = std::sin(theta), c = std::cos(theta);
  const double t3 = theta * theta * theta;
  return {(theta * theta + theta * s * c - 2.0 * s * s) / t3,
          2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3,
          4.0 * (s - theta * c) / t3};
}

}  // namespace detail

// Spectral density A(t) = (1/2pi) * integral of e^{itx} g(x) dx for an even
// real g supported in [-support_radius, support_radius]. Composite Filon
// quadrature on [0, support_radius] keeps accuracy uniform in t, with the
// function evaluation budget fixed by x_budget. Values in [-tol_clamp, 0)
// are rounded up to 0; anything lower raises NegativeDensity.
inline Measure polya_density(const std::function<double(double)>& g,
                             double support_radius, const UniformGrid& ts,
                             std::size_t x_budget = 4096,
                             double tol_clamp = 1e-9) {
  require(support_radius > 0.0, errc::invalid_argument,
          "support radius must be positive");
  require(x_budget >= 5, errc::invalid_argument, "quadrature budget too small");

  // odd point count so panels pair up for the Filon rule
  const std::size_t n_pts = (x_budget % 2 == 1) ? x_budget : x_budget - 1;
  const std::size_t panels = n_pts - 1;
  const double h = support_radius / static_cast<double>(panels);

  std::vector<double> gv(n_pts);
  for (std::size_t j = 0; j < n_pts; ++j)
    gv[j] = g(static_cast<double>(j) * h);

  // Accumulate sums over even and odd x-nodes of g_j e^{i t x_j} for the
  // whole t-grid at once; the Filon combination is a cheap postpass.
  std::vector<cplx> s_even(ts.count, cplx(0.0));
  std::vector<cplx> s_odd(ts.count, cplx(0.0));
  for (std::size_t j = 0; j < n_pts; ++j) {
    if (gv[j] == 0.0) continue;
    auto& target = (j % 2 == 0) ? s_even : s_odd;
    detail::phase_walk(ts, static_cast<double>(j) * h,
                       [&](std::size_t k, cplx p) { target[k] += gv[j] * p; });
  }

  const double inv_pi = 1.0 / 3.14159265358979323846;
  std::vector<double> vals(ts.count);
  for (std::size_t k = 0; k < ts.count; ++k) {
    const double t = ts.point(k);
    const auto w = detail::filon_coeffs(t * h);
    const double tr = t * support_radius;
    const double endpoint = gv[n_pts - 1];
    const double c_even = s_even[k].real() - 0.5 * (gv[0] + endpoint * std::cos(tr));
    const double c_odd = s_odd[k].real();
    const double integral =
        h * (w.alpha * endpoint * std::sin(tr) + w.beta * c_even + w.gamma * c_odd);
    double a = inv_pi * integral;
    if (a < 0.0) {
      require(a >= -tol_clamp, errc::negative_density,
              "spectral density negative at t=" + format_double(t) +
                  " (value " + format_double(a) + ")");
      a = 0.0;
    }
    vals[k] = a;
  }
  return Measure::gridded(ts, std::move(vals));
}

// CSV: discrete rows are `position,weight`, gridded rows are `t,value`.
inline std::string measure_to_csv(const Measure& mu) {
  std::string body;
  if (mu.kind == Measure::kind_t::discrete) {
    for (std::size_t k = 0; k < mu.positions.size(); ++k)
      body += format_double(mu.positions[k]) + "," + format_double(mu.weights[k]) + "\n";
  } else {
    for (std::size_t k = 0; k < mu.grid.count; ++k)
      body += format_double(mu.grid.point(k)) + "," + format_double(mu.values[k]) + "\n";
  }
  return body;
}

inline Measure measure_from_csv(const std::string& path, Measure::kind_t kind) {
  const auto rows = read_csv_rows(path);
  require(!rows.empty(), errc::io_failure, "empty measure file " + path);
  std::vector<double> a(rows.size()), b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == 2, errc::io_failure,
            "expected two columns in " + path);
    a[r] = parse_double(rows[r][0]);
    b[r] = parse_double(rows[r][1]);
  }
  if (kind == Measure::kind_t::discrete) return Measure::discrete(a, b);
  require(is_uniform(a), errc::non_uniform_grid,
          "gridded measure needs uniformly spaced t in " + path);
  const double h = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
  return Measure::gridded(UniformGrid(a.front(), h, a.size()), std::move(b));
}

inline void save_measure_csv(const Measure& mu, const std::string& path) {
  write_text_file(path, measure_to_csv(mu));
}

}  // namespace pdext
