// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// The L^2(dmu) model of the extension machinery: kernel translates embed as
// complex exponentials, translation acts by unimodular multipliers, and the
// extension is read back from the pairing of an embedded point with its
// translate. scattering_operator compares the models of two different
// backing measures through the finite span of embedded anchors.
//
// Conventions, fixed once: gamma_a embeds as s -> e^{-i a s}, the inner
// product is linear in the first slot, and v_translate(t0) multiplies by
// e^{-i t0 s}. Under these, inner(gamma_b, gamma_a) = mu_hat(a-b),
// v_translate(a-b) maps gamma_b to gamma_a componentwise, and
// inner(gamma_x0, v_translate(t) gamma_x0) = mu_hat(t) for every x0.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pdext/errors.hpp"
#include "pdext/extend.hpp"
#include "pdext/kernel.hpp"
#include "pdext/measure.hpp"
#include "pdext/rkhs.hpp"

namespace pdext {

struct SpectralVector {
  std::shared_ptr<const Measure> measure;
  std::vector<cplx> values;  // one entry per atom or grid node
  // set when the vector is a known embedded translate, used by the
  // scattering report to measure gamma-to-gamma residuals
  std::optional<double> gamma_anchor;

  SpectralVector() = default;
  SpectralVector(std::shared_ptr<const Measure> mu, std::vector<cplx> vals)
      : measure(std::move(mu)), values(std::move(vals)) {
    require(static_cast<bool>(measure), errc::invalid_argument,
            "spectral vector needs a measure");
    require(values.size() == measure->size(), errc::measure_shape_mismatch,
            "value count must match the measure support");
  }
};

namespace detail {

// support point for index k, in the same order for_each_atom walks
inline double support_point(const Measure& mu, std::size_t k) {
  return mu.kind == Measure::kind_t::discrete ? mu.positions[k]
                                              : mu.grid.point(k);
}

inline void require_same_space(const SpectralVector& f, const SpectralVector& g) {
  if (f.measure == g.measure) return;
  require(static_cast<bool>(f.measure) && static_cast<bool>(g.measure) &&
              f.measure->kind == g.measure->kind &&
              f.measure->size() == g.measure->size(),
          errc::measure_shape_mismatch,
          "spectral vectors live over different measures");
}

// sum_k w_k e^{i x s_k} f_k, the pairing of gamma_x against f. Building the
// anchor Gram and the projection right side through this one sum keeps them
// bitwise consistent, which the same-measure identity checks rely on.
inline cplx gamma_pairing(const Measure& mu, double x, const std::vector<cplx>& f) {
  cplx acc = 0.0;
  if (mu.kind == Measure::kind_t::discrete) {
    for (std::size_t k = 0; k < mu.positions.size(); ++k)
      acc += mu.weights[k] * std::polar(1.0, x * mu.positions[k]) * f[k];
  } else {
    const double h = mu.grid.step;
    const std::size_t n = mu.grid.count;
    phase_walk(mu.grid, x, [&](std::size_t k, cplx p) {
      const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
      acc += (w * mu.values[k]) * p * f[k];
    });
  }
  return acc;
}

}  // namespace detail

// linear in the first argument, conjugated in the second
inline cplx spectral_inner(const SpectralVector& f, const SpectralVector& g) {
  detail::require_same_space(f, g);
  const Measure& mu = *f.measure;
  cplx acc = 0.0;
  std::size_t k = 0;
  detail::for_each_atom(mu, [&](double, double w) {
    acc += w * f.values[k] * std::conj(g.values[k]);
    ++k;
  });
  return acc;
}

inline double spectral_norm(const SpectralVector& f) {
  return std::sqrt(std::max(0.0, spectral_inner(f, f).real()));
}

inline SpectralVector embed_gamma(double a, std::shared_ptr<const Measure> mu) {
  require(static_cast<bool>(mu), errc::invalid_argument,
          "embedding needs a measure");
  std::vector<cplx> vals(mu->size());
  for (std::size_t k = 0; k < vals.size(); ++k)
    vals[k] = std::polar(1.0, -a * detail::support_point(*mu, k));
  SpectralVector f(std::move(mu), std::move(vals));
  f.gamma_anchor = a;
  return f;
}

inline SpectralVector embed_gamma(double a, const Measure& mu) {
  return embed_gamma(a, std::make_shared<const Measure>(mu));
}

inline SpectralVector v_translate(double t0, const SpectralVector& f) {
  SpectralVector out = f;
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] *= std::polar(1.0, -t0 * detail::support_point(*f.measure, k));
  if (f.gamma_anchor) out.gamma_anchor = *f.gamma_anchor + t0;
  return out;
}

// G(t) = inner(gamma_x0, v_translate(t, gamma_x0)); agrees with mu_hat(t)
// and is independent of x0 up to roundoff. Computed the long way on purpose,
// so that the independence is observed rather than assumed.
inline cplx extension_via_representation(const std::shared_ptr<const Measure>& mu,
                                         double x0, double t) {
  const auto g0 = embed_gamma(x0, mu);
  return spectral_inner(g0, v_translate(t, g0));
}

inline cplx extension_via_representation(const Measure& mu, double x0, double t) {
  return extension_via_representation(std::make_shared<const Measure>(mu), x0, t);
}

struct ScatterReport {
  std::size_t anchors = 0;
  std::size_t probes = 0;
  double residual_mu = 0.0;  // restriction residual of mu_hat against F
  double residual_nu = 0.0;
  std::vector<double> translations;
  std::vector<double> defects;  // per translation, worst over probes
  double worst_defect = 0.0;
  // per probe: |T gamma_a - gamma_a^nu| / |gamma_a^mu| when the probe is a
  // known embedded translate, NaN otherwise
  std::vector<double> gamma_residuals;
  bool rank_deficient = false;
  // pointwise multiplier read off T(gamma_0) at nu nodes carrying mass;
  // nodes without mass on either side are skipped and counted as gaps
  std::vector<std::pair<double, cplx>> multiplier_samples;
  std::size_t multiplier_gaps = 0;
};

struct ScatterOptions {
  std::vector<double> translations{0.1, 0.5, 1.0};
  double residual_budget = 2e-3;
  double gram_cutoff = 1e-12;          // relative to the top eigenvalue
  std::size_t multiplier_samples = 32;
  double mass_floor = 1e-9;            // relative node-mass cutoff for samples
};

namespace detail {

// least-squares coefficients of f on the embedded anchor span, through the
// pseudoinverse of the anchor Gram at the relative cutoff
struct SpanProjector {
  std::shared_ptr<const Measure> mu;
  std::vector<double> anchors;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig;
  double cutoff = 0.0;
  bool rank_deficient = false;

  SpanProjector(std::shared_ptr<const Measure> m, const std::vector<double>& pts,
                double rel_cutoff)
      : mu(std::move(m)), anchors(pts) {
    const auto n = static_cast<Eigen::Index>(anchors.size());
    Eigen::MatrixXcd g(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto gk = embed_gamma(anchors[static_cast<std::size_t>(k)], mu);
      for (Eigen::Index j = 0; j < n; ++j)
        g(j, k) = gamma_pairing(*mu, anchors[static_cast<std::size_t>(j)], gk.values);
    }
    eig.compute((g + g.adjoint()) / 2.0);
    cutoff = rel_cutoff * std::max(0.0, eig.eigenvalues().maxCoeff());
    rank_deficient = eig.eigenvalues().minCoeff() < cutoff;
  }

  Eigen::VectorXcd coeffs(const SpectralVector& f) const {
    const auto n = static_cast<Eigen::Index>(anchors.size());
    Eigen::VectorXcd b(n);
    for (Eigen::Index j = 0; j < n; ++j)
      b(j) = gamma_pairing(*mu, anchors[static_cast<std::size_t>(j)], f.values);
    const Eigen::VectorXcd y = eig.eigenvectors().adjoint() * b;
    Eigen::VectorXcd z(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const double lam = eig.eigenvalues()(k);
      z(k) = lam > cutoff ? y(k) / lam : cplx(0.0);
    }
    return eig.eigenvectors() * z;
  }
};

// e^{i x s_k} over the measure's support points, phase-stepped on grids
template <typename Fn>
void phase_walk_support(const Measure& mu, double x, Fn&& fn) {
  if (mu.kind == Measure::kind_t::discrete) {
    for (std::size_t k = 0; k < mu.positions.size(); ++k)
      fn(k, std::polar(1.0, x * mu.positions[k]));
  } else {
    phase_walk(mu.grid, x, std::forward<Fn>(fn));
  }
}

// sum_k c_k gamma_{x_k} realized concretely over the target measure
inline SpectralVector span_element(const std::shared_ptr<const Measure>& mu,
                                   const std::vector<double>& anchors,
                                   const Eigen::VectorXcd& c) {
  std::vector<cplx> vals(mu->size(), cplx(0.0));
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    const cplx ck = c(static_cast<Eigen::Index>(k));
    if (ck == cplx(0.0)) continue;
    phase_walk_support(*mu, -anchors[k], [&](std::size_t j, cplx p) {
      vals[j] += ck * p;
    });
  }
  return SpectralVector(mu, std::move(vals));
}

}  // namespace detail

// Finite-rank comparison of the mu and nu models of the same local kernel:
// project the probe onto the embedded anchor span in L^2(dmu), carry the
// coefficients to L^2(dnu), and measure how far that map is from commuting
// with translation.
inline ScatterReport scattering_operator(const LocalKernel& f,
                                         std::shared_ptr<const Measure> mu,
                                         std::shared_ptr<const Measure> nu,
                                         const AnchorSet& anchors,
                                         const std::vector<SpectralVector>& probes,
                                         ScatterOptions opts = {}) {
  require(static_cast<bool>(mu) && static_cast<bool>(nu), errc::invalid_argument,
          "scattering needs both measures");
  require(!probes.empty(), errc::invalid_argument, "scattering needs probes");

  ScatterReport rep;
  rep.anchors = anchors.size();
  rep.probes = probes.size();
  rep.translations = opts.translations;

  // both transforms must actually restrict to F before comparing models
  {
    std::vector<double> samples;
    for (int j = -9; j <= 9; ++j) samples.push_back(0.1 * static_cast<double>(j));
    std::vector<double> in_domain;
    for (double z : samples)
      if (difference_set_contains(f.domain, z)) in_domain.push_back(z);
    rep.residual_mu = restriction_residual(from_measure(*mu), f, in_domain);
    rep.residual_nu = restriction_residual(from_measure(*nu), f, in_domain);
    require(rep.residual_mu <= opts.residual_budget, errc::not_an_extension,
            "mu transform misses F by " + format_double(rep.residual_mu));
    require(rep.residual_nu <= opts.residual_budget, errc::not_an_extension,
            "nu transform misses F by " + format_double(rep.residual_nu));
  }

  detail::SpanProjector proj(mu, anchors.points, opts.gram_cutoff);
  rep.rank_deficient = proj.rank_deficient;

  rep.defects.assign(opts.translations.size(), 0.0);
  for (const auto& probe : probes) {
    require(probe.measure == mu || (probe.measure && probe.measure->size() == mu->size()),
            errc::measure_shape_mismatch, "probe must live over mu");
    const double fnorm = spectral_norm(probe);
    require(fnorm > 0.0, errc::invalid_argument, "probe must be nonzero");

    const Eigen::VectorXcd c0 = proj.coeffs(probe);
    const auto t_probe = detail::span_element(nu, anchors.points, c0);

    if (probe.gamma_anchor) {
      const auto target = embed_gamma(*probe.gamma_anchor, nu);
      std::vector<cplx> diff(t_probe.values);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= target.values[k];
      rep.gamma_residuals.push_back(
          spectral_norm(SpectralVector(nu, std::move(diff))) / fnorm);
    } else {
      rep.gamma_residuals.push_back(std::numeric_limits<double>::quiet_NaN());
    }

    for (std::size_t it = 0; it < opts.translations.size(); ++it) {
      const double t0 = opts.translations[it];
      // left: translate in the mu model, then carry over
      const Eigen::VectorXcd cl = proj.coeffs(v_translate(t0, probe));
      const auto left = detail::span_element(nu, anchors.points, cl);
      // right: carry over, then translate in the nu model
      const auto right = v_translate(t0, t_probe);
      std::vector<cplx> diff(left.values);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] -= right.values[k];
      const double d =
          spectral_norm(SpectralVector(nu, std::move(diff))) / fnorm;
      rep.defects[it] = std::max(rep.defects[it], d);
    }
  }
  rep.worst_defect =
      rep.defects.empty() ? 0.0 : *std::max_element(rep.defects.begin(), rep.defects.end());

  // multiplier readout from the canonical probe gamma_0 (identically one in
  // the mu model), sampled where both measures carry mass
  {
    const auto tg0 = detail::span_element(
        nu, anchors.points, proj.coeffs(embed_gamma(0.0, mu)));
    const Measure& m = *nu;
    double peak = 0.0;
    std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k)
      peak = std::max(peak, m.kind == Measure::kind_t::discrete ? m.weights[k]
                                                                : m.values[k]);
    const double mu_lo = mu->kind == Measure::kind_t::discrete
                             ? -std::numeric_limits<double>::infinity()
                             : mu->grid.start;
    const double mu_hi = mu->kind == Measure::kind_t::discrete
                             ? std::numeric_limits<double>::infinity()
                             : mu->grid.back();
    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < n; ++k) {
      const double s = detail::support_point(m, k);
      const double w =
          m.kind == Measure::kind_t::discrete ? m.weights[k] : m.values[k];
      if (w < opts.mass_floor * peak || s < mu_lo || s > mu_hi) continue;
      eligible.push_back(k);
    }
    rep.multiplier_gaps = n - eligible.size();
    const std::size_t want =
        std::min(std::max<std::size_t>(opts.multiplier_samples, 1), eligible.size());
    for (std::size_t j = 0; j < want; ++j) {
      const std::size_t k =
          eligible[j * (eligible.size() - 1) / std::max<std::size_t>(want - 1, 1)];
      if (!rep.multiplier_samples.empty() &&
          rep.multiplier_samples.back().first == detail::support_point(m, k))
        continue;
      rep.multiplier_samples.emplace_back(detail::support_point(m, k),
                                          tg0.values[k]);
    }
  }
  return rep;
}

}  // namespace pdext
