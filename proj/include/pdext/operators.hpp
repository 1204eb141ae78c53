// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// The function system W_F = {F_phi}: convolution images of smooth bumps under
// a locally defined kernel, their inner products by double quadrature, and
// the sesquilinear-form view of the derivative operator S: F_phi -> -i F_phi'.
// S only makes sense through matrix elements here: differentiating a bump
// leaves any fixed finite bump span, so the operator is discretized as the
// pencil (M, G) rather than as an action on coefficients.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "pdext/bump.hpp"
#include "pdext/errors.hpp"
#include "pdext/kernel.hpp"
#include "pdext/parallel.hpp"

namespace pdext {

// A finite combination of bumps and bump derivatives. Complex weights live in
// the bump amplitudes.
struct BumpTerm {
  BumpFunction bump;
  bool differentiate = false;
};

struct BumpExpr {
  std::vector<BumpTerm> terms;

  BumpExpr() = default;
  BumpExpr(BumpFunction b) { terms.push_back({std::move(b), false}); }

  static BumpExpr d_dx(BumpFunction b) {
    BumpExpr e;
    e.terms.push_back({std::move(b), true});
    return e;
  }

  BumpExpr& add(BumpFunction b, bool differentiate = false) {
    terms.push_back({std::move(b), differentiate});
    return *this;
  }

  cplx operator()(double x) const {
    cplx acc = 0.0;
    for (const auto& t : terms)
      acc += t.differentiate ? t.bump.derivative(x) : t.bump.value(x);
    return acc;
  }

  bool empty() const { return terms.empty(); }

  double support_lo() const {
    double lo = terms.front().bump.support_lo();
    for (const auto& t : terms) lo = std::min(lo, t.bump.support_lo());
    return lo;
  }

  double support_hi() const {
    double hi = terms.front().bump.support_hi();
    for (const auto& t : terms) hi = std::max(hi, t.bump.support_hi());
    return hi;
  }
};

namespace detail {

// The closed support [lo, hi] must sit inside one component of the domain.
// Touching the open boundary is fine: the bump vanishes there and quadrature
// skips exact-zero nodes, so the kernel is never evaluated at the edge.
inline void require_support_in_domain(const DomainSet& domain, double lo,
                                      double hi) {
  for (const auto& [a, b] : domain.intervals)
    if (a <= lo && hi <= b) return;
  throw error(errc::out_of_domain,
              "bump support [" + format_double(lo) + ", " + format_double(hi) +
                  "] does not fit inside the domain");
}

inline void require_expr_in_domain(const DomainSet& domain, const BumpExpr& e) {
  for (const auto& t : e.terms)
    require_support_in_domain(domain, t.bump.support_lo(), t.bump.support_hi());
}

// plain double trapezoid of F(y - x) phi(x) conj(psi(y)); fixed summation
// order (y outer, x inner) keeps results deterministic
inline cplx wf_core(const LocalKernel& f, const BumpExpr& phi,
                    const BumpExpr& psi, const QuadratureSpec& q) {
  const std::size_t n = q.nodes;
  const double xlo = phi.support_lo();
  const double xh = (phi.support_hi() - xlo) / static_cast<double>(n - 1);
  const double ylo = psi.support_lo();
  const double yh = (psi.support_hi() - ylo) / static_cast<double>(n - 1);

  std::vector<double> xs(n);
  std::vector<cplx> pv(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = xlo + static_cast<double>(i) * xh;
    const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    pv[i] = w * phi(xs[i]);
  }

  cplx acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double y = ylo + static_cast<double>(j) * yh;
    cplx psv = std::conj(psi(y));
    if (psv == cplx(0.0)) continue;
    if (j == 0 || j == n - 1) psv *= 0.5;
    cplx row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pv[i] == cplx(0.0)) continue;
      row += f(y - xs[i]) * pv[i];
    }
    acc += row * psv;
  }
  return acc * (xh * yh);
}

}  // namespace detail

// F_phi(x) = integral of F(x - y) phi(y) dy by trapezoid over the support
inline cplx wf_evaluate(const LocalKernel& f, const BumpFunction& phi, double x,
                        const QuadratureSpec& q = {}) {
  detail::require_support_in_domain(f.domain, phi.support_lo(), phi.support_hi());
  require(f.domain.contains(x), errc::out_of_domain,
          "evaluation point x=" + format_double(x) + " is outside the domain");
  const std::size_t n = q.nodes;
  const double lo = phi.support_lo();
  const double h = (phi.support_hi() - lo) / static_cast<double>(n - 1);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = lo + static_cast<double>(i) * h;
    cplx v = phi.value(y);
    if (v == cplx(0.0)) continue;
    if (i == 0 || i == n - 1) v *= 0.5;
    acc += f(x - y) * v;
  }
  return acc * h;
}

// <F_phi, F_psi> = double integral of F(y - x) phi(x) conj psi(y), assembled
// as (core(phi,psi) + conj core(psi,phi)) / 2 so swapping the arguments
// conjugates the result exactly, not just up to quadrature rounding.
inline cplx wf_inner(const LocalKernel& f, const BumpExpr& phi,
                     const BumpExpr& psi, const QuadratureSpec& q = {}) {
  if (phi.empty() || psi.empty()) return 0.0;
  detail::require_expr_in_domain(f.domain, phi);
  detail::require_expr_in_domain(f.domain, psi);
  const cplx a = detail::wf_core(f, phi, psi, q);
  const cplx b = detail::wf_core(f, psi, phi, q);
  return 0.5 * (a + std::conj(b));
}

namespace detail {

// matrix element <S F_phi, F_psi> = <F_{-i phi'}, F_psi>
inline cplx s_element(const LocalKernel& f, const BumpFunction& phi,
                      const BumpFunction& psi, const QuadratureSpec& q) {
  BumpFunction dphi(phi.center, phi.width, phi.amplitude * cplx(0.0, -1.0));
  return wf_inner(f, BumpExpr::d_dx(dphi), BumpExpr(psi), q);
}

}  // namespace detail

struct PairDefect {
  std::size_t i = 0;
  std::size_t k = 0;
  double defect = 0.0;
};

// Per-pair residual of the identity <F_{phi_i'}, F_phi_k> + <F_phi_i,
// F_{phi_k'}> = 0, which integration by parts makes exact for the continuous
// forms; quadrature is the only error source.
inline std::vector<PairDefect> hermitian_defect_report(
    const LocalKernel& f, const std::vector<BumpFunction>& basis,
    const QuadratureSpec& q = {}, unsigned threads = 1) {
  require(!basis.empty(), errc::invalid_argument, "basis must be nonempty");
  std::vector<PairDefect> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = i; k < basis.size(); ++k) pairs.push_back({i, k, 0.0});
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const std::size_t i = pairs[p].i;
    const std::size_t k = pairs[p].k;
    const cplx left = wf_inner(f, BumpExpr::d_dx(basis[i]), BumpExpr(basis[k]), q);
    const cplx right = wf_inner(f, BumpExpr(basis[i]), BumpExpr::d_dx(basis[k]), q);
    pairs[p].defect = std::abs(left + right);
  });
  return pairs;
}

inline double hermitian_defect(const LocalKernel& f,
                               const std::vector<BumpFunction>& basis,
                               const QuadratureSpec& q = {},
                               unsigned threads = 1) {
  double worst = 0.0;
  for (const auto& p : hermitian_defect_report(f, basis, q, threads))
    worst = std::max(worst, p.defect);
  return worst;
}

// G[i][k] = <F_phi_i, F_phi_k>, the Gram matrix of the discretized span
inline Eigen::MatrixXcd wf_gram(const LocalKernel& f,
                                const std::vector<BumpFunction>& basis,
                                const QuadratureSpec& q = {},
                                unsigned threads = 1) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  require(n > 0, errc::invalid_argument, "basis must be nonempty");
  Eigen::MatrixXcd g(n, n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = i; k < n; ++k) pairs.emplace_back(i, k);
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const auto [i, k] = pairs[p];
    const cplx v = wf_inner(f, BumpExpr(basis[i]), BumpExpr(basis[k]), q);
    g(k, i) = v;
    g(i, k) = std::conj(v);
  });
  return g;
}

// M[i][k] = <S F_phi_i, F_phi_k>; Hermitian up to the hermitian_defect bound
inline Eigen::MatrixXcd sjf_matrix(const LocalKernel& f,
                                   const std::vector<BumpFunction>& basis,
                                   const QuadratureSpec& q = {},
                                   unsigned threads = 1) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  require(n > 0, errc::invalid_argument, "basis must be nonempty");
  Eigen::MatrixXcd m(n, n);
  parallel_for(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
               threads, [&](std::size_t p) {
                 const auto i = static_cast<Eigen::Index>(p) / n;
                 const auto k = static_cast<Eigen::Index>(p) % n;
                 m(i, k) = detail::s_element(f, basis[i], basis[k], q);
               });
  return m;
}

// Conjugation symmetry of S on an interval (p, r): with the reflection
// K(t) = -t + p + r, the antilinear map phi -> conj phi(K(.)) commutes with
// S, so matrix elements satisfy <S F_{phi_K}, F_{psi_K}> = conj <S F_phi,
// F_psi>. Returns the worst absolute residual over basis pairs. A bump
// reflects to another bump (mirrored center, conjugated amplitude), so the
// check stays inside the bump calculus.
inline double conjugation_check(const LocalKernel& f,
                                const std::vector<BumpFunction>& basis,
                                const QuadratureSpec& q = {},
                                unsigned threads = 1) {
  require(f.domain.connected(), errc::domain_not_interval,
          "conjugation symmetry needs a single-interval domain");
  const auto [p, r] = f.domain.intervals[0];
  require(std::isfinite(p) && std::isfinite(r), errc::domain_not_interval,
          "conjugation symmetry needs a bounded interval");
  require(!basis.empty(), errc::invalid_argument, "basis must be nonempty");

  const auto reflect = [&](const BumpFunction& b) {
    return BumpFunction(p + r - b.center, b.width, std::conj(b.amplitude));
  };

  const std::size_t n = basis.size();
  std::vector<double> defects(n * n, 0.0);
  parallel_for(n * n, threads, [&](std::size_t idx) {
    const std::size_t i = idx / n;
    const std::size_t k = idx % n;
    const cplx plain = detail::s_element(f, basis[i], basis[k], q);
    const cplx mirrored =
        detail::s_element(f, reflect(basis[i]), reflect(basis[k]), q);
    defects[idx] = std::abs(mirrored - std::conj(plain));
  });
  double worst = 0.0;
  for (double d : defects) worst = std::max(worst, d);
  return worst;
}

}  // namespace pdext
