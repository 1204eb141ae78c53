// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// The Hilbert space spanned by kernel translates k_a = F(. - a): inner
// products, point evaluation, a membership functional for functions on the
// domain, and the derived uniqueness diagnostics.
//
// Membership hinges on whether q_N(g) = g^H K^+ g stays bounded as anchors
// refine. The Gram matrices involved turn numerically singular long before
// the growth trend is readable, so q is computed by a partial-pivoted LU in
// double-double arithmetic on double-double kernel entries; binary64
// eigendecomposition supplies the conditioning and range diagnostics.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pdext/dd.hpp"
#include "pdext/errors.hpp"
#include "pdext/kernel.hpp"

namespace pdext {

struct AnchorSet {
  std::vector<double> points;

  AnchorSet() = default;
  explicit AnchorSet(std::vector<double> pts) : points(std::move(pts)) {
    require(!points.empty(), errc::invalid_argument, "anchor set must be nonempty");
    for (std::size_t j = 0; j < points.size(); ++j)
      for (std::size_t k = j + 1; k < points.size(); ++k)
        require(points[j] != points[k], errc::invalid_argument,
                "anchors must be pairwise distinct");
  }

  // uniform anchors strictly inside (a, b), keeping a 1% edge margin so no
  // evaluation lands on the boundary of Omega-Omega
  static AnchorSet uniform_interior(double a, double b, std::size_t n,
                                    double margin_frac = 0.01) {
    require(n >= 1 && b > a, errc::invalid_argument, "bad anchor request");
    const double m = margin_frac * (b - a);
    std::vector<double> pts(n);
    if (n == 1) {
      pts[0] = 0.5 * (a + b);
    } else {
      for (std::size_t k = 0; k < n; ++k)
        pts[k] = a + m +
                 (b - a - 2.0 * m) * static_cast<double>(k) / static_cast<double>(n - 1);
    }
    return AnchorSet(std::move(pts));
  }

  std::size_t size() const { return points.size(); }
};

struct RkhsElement {
  AnchorSet anchors;
  std::vector<cplx> coeffs;

  RkhsElement(AnchorSet a, std::vector<cplx> c)
      : anchors(std::move(a)), coeffs(std::move(c)) {
    require(anchors.size() == coeffs.size(), errc::invalid_argument,
            "one coefficient per anchor");
  }

  // k_a itself
  static RkhsElement translate(double a) {
    return RkhsElement(AnchorSet({a}), {cplx(1.0)});
  }
};

// <u, v> = sum_{j,k} F(b_j - a_k) c_k conj(d_j) over the merged anchor set;
// this is d^H K c with K the Gram matrix of the union.
inline cplx rkhs_inner(const LocalKernel& f, const RkhsElement& u,
                       const RkhsElement& v) {
  std::vector<double> merged = u.anchors.points;
  for (double b : v.anchors.points)
    if (std::find(merged.begin(), merged.end(), b) == merged.end())
      merged.push_back(b);
  const auto n = static_cast<Eigen::Index>(merged.size());
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n);
  Eigen::VectorXcd d = Eigen::VectorXcd::Zero(n);
  for (std::size_t j = 0; j < u.anchors.size(); ++j) {
    const auto at = std::find(merged.begin(), merged.end(), u.anchors.points[j]);
    c(at - merged.begin()) += u.coeffs[j];
  }
  for (std::size_t j = 0; j < v.anchors.size(); ++j) {
    const auto at = std::find(merged.begin(), merged.end(), v.anchors.points[j]);
    d(at - merged.begin()) += v.coeffs[j];
  }
  const auto k = gram_matrix(f, merged);
  return (d.adjoint() * k * c)(0, 0);
}

inline double rkhs_norm(const LocalKernel& f, const RkhsElement& u) {
  const double n2 = rkhs_inner(f, u, u).real();
  return std::sqrt(std::max(0.0, n2));
}

// u(x) = sum_j c_j F(x - a_j)
inline cplx rkhs_evaluate(const LocalKernel& f, const RkhsElement& u, double x) {
  cplx acc = 0.0;
  for (std::size_t j = 0; j < u.anchors.size(); ++j)
    acc += u.coeffs[j] * f(x - u.anchors.points[j]);
  return acc;
}

// |u(a) - <u, k_a>|, zero up to rounding by the reproducing identity
inline double reproducing_defect(const LocalKernel& f, const RkhsElement& u,
                                 double a) {
  return std::abs(rkhs_evaluate(f, u, a) -
                  rkhs_inner(f, u, RkhsElement::translate(a)));
}

struct MembershipReport {
  double q = 0.0;            // g^H K^+ g, the squared best membership constant
  double range_defect = 0.0; // relative distance from g to the numerical range of K
  double condition = 0.0;    // lambda_max / lambda_min of the Gram matrix
  bool ill_conditioned = false;
};

namespace detail {

// Gram matrix in double-double: exact anchor differences fed to the dd
// kernel evaluator, mirrored across the diagonal so the result is exactly
// Hermitian.
inline std::vector<std::vector<ddc>> dd_gram(const LocalKernel& f,
                                             const std::vector<double>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::vector<ddc>> k(n, std::vector<ddc>(n));
  const ddc diag = dd_kernel_value(f, dd(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    k[j][j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      const ddc v = dd_kernel_value(f, dd_diff(pts[i], pts[j]));
      k[i][j] = v;
      k[j][i] = conj(v);
    }
  }
  return k;
}

// q = g^H K^{-1} g by LU with partial pivoting in double-double arithmetic.
// The extra ~16 digits let the divergence trend of q show through Gram
// matrices whose small eigenvalues are far below binary64 resolution.
// Pivots that come out exactly zero (degenerate tables like the all-ones
// Gram) are replaced by rel_floor * diagonal scale, which sends q to the
// huge values a lost direction deserves instead of NaN.
inline double dd_quadratic_inverse_form(std::vector<std::vector<ddc>> a,
                                        const Eigen::VectorXcd& g,
                                        double rel_floor = 1e-28) {
  const auto n = static_cast<Eigen::Index>(a.size());
  double max_diag = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    max_diag = std::max(max_diag, std::abs(a[j][j].re.value()));
  const double floor_val = rel_floor * std::max(max_diag, 1e-300);

  std::vector<ddc> y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = ddc(g(i));

  auto pivot_or_floor = [&](ddc& p) {
    if (std::abs(abs2(p).value()) < floor_val * floor_val) p = ddc(dd(floor_val));
    return p;
  };

  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index best = j;
    double best_mag = abs2(a[j][j]).value();
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double mag = abs2(a[i][j]).value();
      if (mag > best_mag) {
        best = i;
        best_mag = mag;
      }
    }
    if (best != j) {
      std::swap(a[best], a[j]);
      std::swap(y[best], y[j]);
    }
    const ddc piv = pivot_or_floor(a[j][j]);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const ddc m = a[i][j] / piv;
      for (Eigen::Index c = j + 1; c < n; ++c) a[i][c] = a[i][c] - m * a[j][c];
      y[i] = y[i] - m * y[j];
      a[i][j] = ddc();
    }
  }

  // back substitution, then q = g^H x
  std::vector<ddc> x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    ddc s = y[i];
    for (Eigen::Index c = i + 1; c < n; ++c) s = s - a[i][c] * x[c];
    x[i] = s / pivot_or_floor(a[i][i]);
  }
  dd q(0.0);
  for (Eigen::Index i = 0; i < n; ++i) q = q + (conj(ddc(g(i))) * x[i]).re;
  return q.value();
}

}  // namespace detail

inline MembershipReport membership_report(const LocalKernel& f,
                                          const std::function<cplx(double)>& g,
                                          const AnchorSet& anchors) {
  const auto n = static_cast<Eigen::Index>(anchors.size());
  const auto k = gram_matrix(f, anchors.points);
  Eigen::VectorXcd gv(n);
  for (Eigen::Index j = 0; j < n; ++j) gv(j) = g(anchors.points[j]);

  MembershipReport report;
  report.q = detail::dd_quadratic_inverse_form(detail::dd_gram(f, anchors.points), gv);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k);
  const auto& ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  const double lmin = ev.minCoeff();
  const double cutoff = 1e-12 * std::max(lmax, 0.0);
  report.condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  report.ill_conditioned = !(report.condition < 1e12);

  // distance from g to the span of the numerically surviving eigenvectors
  Eigen::VectorXcd residual = gv;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (ev(j) > cutoff) {
      const Eigen::VectorXcd vj = es.eigenvectors().col(j);
      residual -= vj * (vj.adjoint() * gv)(0, 0);
    }
  }
  const double gnorm = gv.norm();
  report.range_defect = gnorm > 0.0 ? residual.norm() / gnorm : 0.0;
  return report;
}

inline double membership_functional(const LocalKernel& f,
                                    const std::function<cplx(double)>& g,
                                    const AnchorSet& anchors) {
  return membership_report(f, g, anchors).q;
}

struct DefReport {
  struct Level {
    std::size_t anchors = 0;
    double q = 0.0;
    double range_defect = 0.0;
    bool ill_conditioned = false;
  };
  struct BasisTrace {
    std::string label;
    std::vector<Level> levels;
    double growth = 0.0;  // q at the finest level / q at the coarsest
    bool member = false;
  };
  std::vector<BasisTrace> basis;
  int dim = 0;
};

// Counts how many solutions of f'' = f on the interval domain lie in H_F.
// Bounded q across the refinement schedule (with g staying in the numerical
// range of the Gram matrix at every level) marks a member.
inline DefReport def_space_dimension(const LocalKernel& f,
                                     const std::vector<std::size_t>& schedule =
                                         {8, 16, 32, 64},
                                     double divergence_ratio = 10.0) {
  require(f.domain.connected(), errc::domain_not_interval,
          "Def(F) analysis needs a single-interval domain");
  const auto [p, r] = f.domain.intervals[0];
  require(std::isfinite(p) && std::isfinite(r), errc::domain_not_interval,
          "Def(F) analysis needs a bounded interval");
  require(schedule.size() >= 2, errc::invalid_argument,
          "refinement schedule needs at least two levels");

  const std::pair<std::string, std::function<cplx(double)>> basis[2] = {
      {"exp(-x)", [](double x) { return cplx(std::exp(-x)); }},
      {"exp(+x)", [](double x) { return cplx(std::exp(x)); }},
  };

  DefReport report;
  for (const auto& [label, g] : basis) {
    DefReport::BasisTrace trace;
    trace.label = label;
    bool in_range = true;
    for (std::size_t n : schedule) {
      const auto rep = membership_report(f, g, AnchorSet::uniform_interior(p, r, n));
      trace.levels.push_back({n, rep.q, rep.range_defect, rep.ill_conditioned});
      in_range = in_range && rep.range_defect <= 1e-6;
    }
    const double q0 = trace.levels.front().q;
    const double q1 = trace.levels.back().q;
    trace.growth = q0 > 0.0 ? q1 / q0 : (q1 > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    trace.member = in_range && trace.growth < divergence_ratio;
    if (trace.member) ++report.dim;
    report.basis.push_back(std::move(trace));
  }
  return report;
}

struct UniquenessReport {
  bool unique = false;
  int def_dim = 0;
  DefReport detail;
};

// The extension problem has a unique solution exactly when Def(F) = {0}.
inline UniquenessReport uniqueness_diagnostic(const LocalKernel& f,
                                              const std::vector<std::size_t>& schedule =
                                                  {8, 16, 32, 64},
                                              double divergence_ratio = 10.0) {
  UniquenessReport rep;
  rep.detail = def_space_dimension(f, schedule, divergence_ratio);
  rep.def_dim = rep.detail.dim;
  rep.unique = rep.def_dim == 0;
  return rep;
}

// Necessary condition on a candidate extension Gt: the slice y -> Gt(y - x)
// restricted to the anchors must sit in H_F with norm squared at most
// F(0) * Gt(0). values = {q, bound}.
inline Verdict interpolation_check(const LocalKernel& f, const LocalKernel& gt,
                                   double x, const AnchorSet& anchors,
                                   double tol = -1.0) {
  const double bound = f.f0() * gt.f0();
  if (tol < 0.0) tol = 1e-8 * bound + 1e-10;
  const auto rep = membership_report(
      f, [&](double y) { return gt(y - x); }, anchors);
  Verdict v;
  v.values = {rep.q, bound};
  v.pass = rep.q <= bound + tol;
  return v;
}

}  // namespace pdext
