// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Candidate extensions of a locally defined kernel to the whole line:
// transforms of measures, the tangent-line (Polya) continuation, and the
// zero-pad construction together with the search for the point sets that
// expose its failure. Failure of zero padding is reported as data, not as an
// error: a discontinuous padded function cannot be positive definite, and the
// witness is the interesting output.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdext/errors.hpp"
#include "pdext/kernel.hpp"
#include "pdext/measure.hpp"
#include "pdext/rng.hpp"

namespace pdext {

// Tangent-line continuation bookkeeping: the kernel is kept on [0, corner),
// the line value + slope*(x - corner) carries it to zero at zero_abscissa,
// and the extension vanishes beyond.
struct PolyaPieces {
  double corner = 0.0;
  double value = 0.0;
  double slope = 0.0;
  double zero_abscissa = 0.0;
};

struct ExtensionCandidate {
  enum class provenance_t { measure, polya, zero_pad, user };

  provenance_t provenance = provenance_t::user;
  std::function<cplx(double)> global_function;
  std::shared_ptr<const Measure> backing_measure;  // null when not available
  std::optional<PolyaPieces> pieces;
  std::vector<std::string> warnings;
  // Estimated |G - mu_hat| contribution from truncating the spectral grid.
  // Separating it from the mathematical budget keeps a grid that is merely
  // too short from being misread as a wrong construction.
  double truncation_budget = 0.0;

  cplx value(double t) const {
    require(static_cast<bool>(global_function), errc::invalid_argument,
            "extension candidate has no global function");
    return global_function(t);
  }
};

inline ExtensionCandidate from_measure(Measure mu) {
  ExtensionCandidate c;
  c.provenance = ExtensionCandidate::provenance_t::measure;
  c.backing_measure = std::make_shared<const Measure>(std::move(mu));
  c.global_function = [m = c.backing_measure](double t) {
    return fourier_transform(*m, t);
  };
  return c;
}

// max |G(z) - F(z)| over the samples; every sample must lie in the set where
// F is defined (no silent extrapolation of the reference)
inline double restriction_residual(const ExtensionCandidate& cand,
                                   const LocalKernel& f,
                                   const std::vector<double>& samples) {
  require(!samples.empty(), errc::invalid_argument,
          "restriction residual needs sample points");
  double worst = 0.0;
  for (double z : samples) worst = std::max(worst, std::abs(cand.value(z) - f(z)));
  return worst;
}

// Gram verdict of the candidate on a global point set. Same eigenvalue
// convention as check_positive_definite, but the candidate may be evaluated
// anywhere on the line.
inline Verdict check_candidate_pd(const ExtensionCandidate& cand,
                                  const std::vector<double>& points,
                                  double tol = -1.0) {
  const auto n = static_cast<Eigen::Index>(points.size());
  require(n > 0, errc::invalid_argument, "point set must be nonempty");
  if (tol < 0.0) tol = 1e-10 * std::max(1.0, std::abs(cand.value(0.0)));
  Eigen::MatrixXcd k(n, n);
  const cplx diag = cand.value(0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = diag;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const cplx v = cand.value(points[i] - points[j]);
      k(i, j) = v;
      k(j, i) = std::conj(v);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  Verdict v;
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  v.max_eigenvalue = es.eigenvalues().maxCoeff();
  v.pass = v.min_eigenvalue >= -tol;
  return v;
}

namespace detail {

// 2 * (sup - inf) over the domain components; infinite for unbounded sets
inline double difference_set_diameter(const DomainSet& domain) {
  const double lo = domain.intervals.front().first;
  const double hi = domain.intervals.back().second;
  if (!std::isfinite(lo) || !std::isfinite(hi))
    return std::numeric_limits<double>::infinity();
  return 2.0 * (hi - lo);
}

// One-sided value and slope of F at the right edge r of its difference set.
// Analytic families get exact formulas; sampled tables fall back to a
// three-point backward difference with step 1e-5 * r.
inline std::pair<double, double> edge_tangent(const LocalKernel& f, double r) {
  if (f.def == LocalKernel::def_t::analytic) {
    const auto& p = f.params;
    const auto par = [&](const char* key, double fb) { return param(p, key, fb); };
    const double a = par("amplitude", 1.0);
    if (f.name == "exponential") {
      const double k = par("rate", 1.0);
      const double v = a * std::exp(-k * r);
      return {v, -k * v};
    }
    if (f.name == "gaussian") {
      const double w = par("width", 1.0);
      const double v = a * std::exp(-(r / w) * (r / w));
      return {v, -2.0 * r * v / (w * w)};
    }
    if (f.name == "triangle") {
      const double rad = par("radius", 1.0);
      if (r >= rad) return {0.0, 0.0};
      return {a * (1.0 - r / rad), -a / rad};
    }
    if (f.name == "windowed_triangle") {
      const double c = par("cutoff", 0.5);
      if (r >= c) return {0.0, 0.0};
      return {a * (1.0 - r), -a};
    }
    if (f.name == "constant") return {a, 0.0};
    if (f.name == "sinc") {
      if (r == 0.0) return {a, 0.0};
      return {a * std::sin(r) / r, a * (r * std::cos(r) - std::sin(r)) / (r * r)};
    }
    if (f.name == "power") {
      const double s = par("scale", 1.0);
      const double e = par("exponent", 1.0);
      return {par("offset", 0.0) + s * std::pow(r, e),
              s * e * std::pow(r, e - 1.0)};
    }
    if (f.name == "tangent_exponential") {
      const double k = par("rate", 1.0);
      const double d = par("corner", 1.0);
      if (r <= d) {
        const double v = a * std::exp(-k * r);
        return {v, -k * v};
      }
      const double lin = std::exp(-k * d) * (1.0 - k * (r - d));
      if (lin <= 0.0) return {0.0, 0.0};
      return {a * lin, -a * k * std::exp(-k * d)};
    }
  }
  // one-sided extrapolation to r from r-h, r-2h, r-3h, exact for quadratics
  const double h = 1e-5 * r;
  const double f1 = f(r - h).real();
  const double f2 = f(r - 2.0 * h).real();
  const double f3 = f(r - 3.0 * h).real();
  const double slope = (5.0 * f1 - 8.0 * f2 + 3.0 * f3) / (2.0 * h);
  return {3.0 * f1 - 3.0 * f2 + f3, slope};
}

// Crude bound on the mass a gridded density leaves outside its grid: read
// the magnitude of the tail on the outermost slice of nodes and charge it
// across an interval of the edge length. Zero for densities that have
// already decayed to zero at the edge.
inline double grid_truncation_budget(const Measure& mu) {
  if (mu.kind != Measure::kind_t::gridded_density) return 0.0;
  const std::size_t n = mu.grid.count;
  const std::size_t slice = std::max<std::size_t>(n / 128, std::min<std::size_t>(n, 8));
  double tail = 0.0;
  for (std::size_t k = 0; k < slice && k < n; ++k) {
    tail = std::max(tail, mu.values[k]);
    tail = std::max(tail, mu.values[n - 1 - k]);
  }
  const double edge = std::max(std::abs(mu.grid.start), std::abs(mu.grid.back()));
  return 2.0 * edge * tail;
}

}  // namespace detail

struct PolyaOptions {
  bool report_only = false;   // collect violations as warnings, do not throw
  bool with_measure = true;   // run the density transform for backing_measure
  // t-grid for the density: step pi/4 out to about +-5.1e4 keeps the
  // transform tail below the 1e-6 validation budget
  std::size_t density_nodes = (std::size_t{1} << 17) + 1;
  double density_step = 0.25 * 3.14159265358979323846;
  std::size_t x_budget = 4096;
};

// Tangent-line continuation of an even, real, nonincreasing, convex kernel:
// keep F on [0, r), follow the tangent at r^- down to zero, then stay at
// zero. cutoff must leave room for the tangent to reach zero.
inline ExtensionCandidate polya_extension(const LocalKernel& f, double cutoff,
                                          PolyaOptions opts = {}) {
  require(f.domain.connected(), errc::domain_not_interval,
          "tangent continuation needs a single-interval domain");
  const auto [dom_lo, dom_hi] = f.domain.intervals[0];
  require(std::isfinite(dom_lo) && std::isfinite(dom_hi),
          errc::domain_not_interval,
          "tangent continuation needs a bounded interval");
  const double r = dom_hi - dom_lo;

  ExtensionCandidate cand;
  cand.provenance = ExtensionCandidate::provenance_t::polya;
  auto complain = [&](errc code, const std::string& what) {
    if (opts.report_only)
      cand.warnings.push_back(std::string(errc_name(code)) + ": " + what);
    else
      raise(code, what);
  };

  // sample F on [0, r) and validate shape by finite differences
  const std::size_t m = 513;
  std::vector<double> xs(m), vs(m);
  const double scale = std::max(1.0, std::abs(f.f0()));
  for (std::size_t k = 0; k < m; ++k) {
    xs[k] = r * static_cast<double>(k) / static_cast<double>(m);
    const cplx v = f(xs[k]);
    require(std::abs(v.imag()) <= 1e-12 * scale, errc::invalid_argument,
            "tangent continuation needs a real kernel");
    require(std::abs(f(-xs[k]) - std::conj(v)) <= 1e-12 * scale,
            errc::asymmetric_data, "kernel must satisfy F(-z) = conj F(z)");
    vs[k] = v.real();
  }
  const double fd_tol = 1e-9 * scale;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (vs[k + 1] - vs[k] > fd_tol) {
      complain(errc::not_decreasing,
               "F increases between x=" + format_double(xs[k]) + " and x=" +
                   format_double(xs[k + 1]) + " (values " + format_double(vs[k]) +
                   ", " + format_double(vs[k + 1]) + ")");
      break;
    }
  }
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (vs[k - 1] - 2.0 * vs[k] + vs[k + 1] < -fd_tol) {
      complain(errc::not_convex,
               "second difference negative on the triple x=" +
                   format_double(xs[k - 1]) + ", " + format_double(xs[k]) + ", " +
                   format_double(xs[k + 1]));
      break;
    }
  }

  const auto [edge_value, edge_slope] = detail::edge_tangent(f, r);
  PolyaPieces pieces;
  pieces.corner = r;
  pieces.value = edge_value;
  pieces.slope = edge_slope;
  if (edge_value <= 0.0) {
    pieces.zero_abscissa = r;  // already at zero, nothing to continue
  } else if (edge_slope >= 0.0) {
    complain(errc::tangent_horizontal,
             "tangent at the edge does not descend (value " +
                 format_double(edge_value) + ", slope " +
                 format_double(edge_slope) + ")");
    pieces.zero_abscissa = r;
  } else {
    pieces.zero_abscissa = r - edge_value / edge_slope;
  }
  require(cutoff >= pieces.zero_abscissa - 1e-12 * std::max(1.0, r),
          errc::invalid_argument,
          "cutoff " + format_double(cutoff) + " is inside the tangent support; "
          "the tangent reaches zero at " + format_double(pieces.zero_abscissa));
  cand.pieces = pieces;

  cand.global_function = [f, pieces](double x) -> cplx {
    const double ax = std::abs(x);
    if (ax < pieces.corner) return f(ax);
    if (ax < pieces.zero_abscissa)
      return pieces.value + pieces.slope * (ax - pieces.corner);
    return 0.0;
  };

  if (opts.with_measure) {
    const double half = opts.density_step * static_cast<double>(opts.density_nodes - 1) / 2.0;
    const UniformGrid ts(-half, opts.density_step, opts.density_nodes);
    const auto& g = cand.global_function;
    const Measure mu = polya_density(
        [&](double x) { return g(x).real(); },
        std::max(pieces.zero_abscissa, 1e-12), ts, opts.x_budget);
    cand.truncation_budget = detail::grid_truncation_budget(mu);
    // transform round trip must reproduce the candidate within the
    // mathematical budget plus whatever the grid edge still carries
    const double mass = total_mass(mu);
    double dev = 0.0;
    for (int j = -4; j <= 4; ++j) {
      const double t = 0.5 * static_cast<double>(j);
      dev = std::max(dev, std::abs(fourier_transform(mu, t) - cand.value(t)));
    }
    if (dev > 1e-6 * std::max(mass, 1.0) + cand.truncation_budget)
      complain(errc::not_an_extension,
               "backing density round trip off by " + format_double(dev) +
                   " against truncation budget " +
                   format_double(cand.truncation_budget));
    cand.backing_measure = std::make_shared<const Measure>(std::move(mu));
  }
  return cand;
}

struct ZeroPadDiagnosis {
  bool witness_found = false;
  std::vector<double> witness_points;
  double min_eigenvalue = 0.0;
  std::size_t sets_checked = 0;
};

struct ZeroPadResult {
  ExtensionCandidate candidate;
  ZeroPadDiagnosis diagnosis;
};

// Pad F by zero outside its difference set and hunt for point sets whose
// Gram matrix goes negative. Arithmetic progressions excite the Toeplitz
// failure mode of a jump at the boundary; seeded random sets cover the rest.
// Iteration order is fixed, so the reported witness is deterministic.
inline ZeroPadResult zero_pad(const LocalKernel& f, std::uint64_t seed = 11) {
  ZeroPadResult out;
  out.candidate.provenance = ExtensionCandidate::provenance_t::zero_pad;
  out.candidate.global_function = [f](double z) -> cplx {
    return difference_set_contains(f.domain, z) ? f(z) : cplx(0.0);
  };

  const double diam = detail::difference_set_diameter(f.domain);
  const double reach = std::isfinite(diam) ? diam : 8.0;
  std::vector<double> steps;
  for (double s : {0.02, 0.05, 0.1, 0.25, 0.49, 0.7, 1.0, 1.5, 2.0, 3.0})
    if (s <= reach) steps.push_back(s);
  if (steps.empty()) steps.push_back(0.5 * reach);

  const double tol = 1e-10 * std::max(1.0, std::abs(out.candidate.value(0.0)));
  double worst = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& pts) {
    const auto verdict = check_candidate_pd(out.candidate, pts, tol);
    ++out.diagnosis.sets_checked;
    if (verdict.min_eigenvalue < worst) {
      worst = verdict.min_eigenvalue;
      out.diagnosis.witness_points = pts;
    }
  };

  for (const std::size_t n : {16, 40, 64})
    for (const double s : steps) {
      std::vector<double> pts(n);
      for (std::size_t k = 0; k < n; ++k)
        pts[k] = (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1)) * s;
      consider(pts);
    }

  auto rng = philox_stream(seed, 0);
  const double radius = std::min(reach, 8.0);
  for (const std::size_t n : {16, 24, 32, 40, 48, 64}) {
    std::vector<double> pts(n);
    for (std::size_t k = 0; k < n; ++k)
      pts[k] = radius * (2.0 * rng.uniform() - 1.0);
    consider(pts);
  }

  out.diagnosis.min_eigenvalue = worst;
  out.diagnosis.witness_found = worst <= -tol;
  if (!out.diagnosis.witness_found) out.diagnosis.witness_points.clear();
  return out;
}

// lambda * c1 + (1 - lambda) * c2, with the backing measures combined when
// their shapes line up; a shape mismatch drops the measure and leaves a
// warning, the combined function is returned either way
inline ExtensionCandidate convex_combination(const ExtensionCandidate& c1,
                                             const ExtensionCandidate& c2,
                                             double lambda) {
  require(lambda >= 0.0 && lambda <= 1.0, errc::invalid_argument,
          "lambda must lie in [0, 1]");
  ExtensionCandidate out;
  out.provenance = ExtensionCandidate::provenance_t::user;
  out.global_function = [g1 = c1.global_function, g2 = c2.global_function,
                         lambda](double t) {
    return lambda * g1(t) + (1.0 - lambda) * g2(t);
  };

  const auto mismatch = [&](const std::string& why) {
    out.warnings.push_back(std::string(errc_name(errc::measure_shape_mismatch)) +
                           ": " + why + "; combined function carries no measure");
  };
  if (static_cast<bool>(c1.backing_measure) != static_cast<bool>(c2.backing_measure)) {
    mismatch("only one candidate has a backing measure");
    return out;
  }
  if (!c1.backing_measure) return out;

  const Measure& m1 = *c1.backing_measure;
  const Measure& m2 = *c2.backing_measure;
  if (m1.kind != m2.kind) {
    mismatch("backing measures have different shapes");
    return out;
  }
  if (m1.kind == Measure::kind_t::discrete) {
    std::map<double, double> atoms;
    for (std::size_t k = 0; k < m1.positions.size(); ++k)
      atoms[m1.positions[k]] += lambda * m1.weights[k];
    for (std::size_t k = 0; k < m2.positions.size(); ++k)
      atoms[m2.positions[k]] += (1.0 - lambda) * m2.weights[k];
    std::vector<double> pos, w;
    for (const auto& [p, weight] : atoms) {
      pos.push_back(p);
      w.push_back(weight);
    }
    out.backing_measure =
        std::make_shared<const Measure>(Measure::discrete(std::move(pos), std::move(w)));
    return out;
  }
  if (m1.grid.start != m2.grid.start || m1.grid.step != m2.grid.step ||
      m1.grid.count != m2.grid.count) {
    mismatch("gridded measures live on different grids");
    return out;
  }
  std::vector<double> vals(m1.values.size());
  for (std::size_t k = 0; k < vals.size(); ++k)
    vals[k] = lambda * m1.values[k] + (1.0 - lambda) * m2.values[k];
  out.backing_measure =
      std::make_shared<const Measure>(Measure::gridded(m1.grid, std::move(vals)));
  return out;
}

struct CompactSupportReport {
  bool compact = false;
  double radius = 0.0;
  bool grid_truncated = false;  // density known only on its grid
  bool singleton_implied = false;  // compact support forces a unique extension
};

inline CompactSupportReport compact_support_flag(const ExtensionCandidate& cand) {
  require(static_cast<bool>(cand.backing_measure), errc::no_backing_measure,
          "candidate carries no backing measure");
  const Measure& mu = *cand.backing_measure;
  CompactSupportReport rep;
  rep.compact = true;
  if (mu.kind == Measure::kind_t::discrete) {
    for (double p : mu.positions) rep.radius = std::max(rep.radius, std::abs(p));
  } else {
    rep.radius = std::max(std::abs(mu.grid.start), std::abs(mu.grid.back()));
    rep.grid_truncated = true;
  }
  rep.singleton_implied = rep.compact;
  return rep;
}

}  // namespace pdext
