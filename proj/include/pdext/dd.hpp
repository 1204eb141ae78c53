// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Double-double arithmetic (roughly 32 significant digits) built from
// error-free transformations. Used by the RKHS membership functional, whose
// Gram matrices lose their informative eigenvalues below the binary64 noise
// floor long before the quantities of interest converge.
//
// two_prod uses Dekker splitting rather than FMA so results do not depend on
// target instruction selection. Requires -ffp-contract=off (set by the build).

#include <cmath>
#include <complex>

namespace pdext {

struct dd {
  double hi = 0.0;
  double lo = 0.0;

  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {
  // Assumes |a| >= |b|.
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double ca = split * a;
  const double ahi = ca - (ca - a);
  const double alo = a - ahi;
  const double cb = split * b;
  const double bhi = cb - (cb - b);
  const double blo = b - bhi;
  const double err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
  return {p, err};
}

}  // namespace detail

inline dd operator+(dd a, dd b) {
  dd s = detail::two_sum(a.hi, b.hi);
  dd t = detail::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = detail::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return detail::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = detail::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return detail::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  dd r = a - dd(q1) * b;
  const double q2 = r.hi / b.hi;
  r = r - dd(q2) * b;
  const double q3 = r.hi / b.hi;
  dd q = detail::quick_two_sum(q1, q2);
  return q + dd(q3);
}

inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline dd dd_abs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

// Exact difference of two doubles.
inline dd dd_diff(double a, double b) {
  dd s = detail::two_sum(a, -b);
  return detail::quick_two_sum(s.hi, s.lo);
}

// Complex double-double, just enough for a Hermitian LDL^H factorization.
struct ddc {
  dd re, im;

  ddc() = default;
  ddc(dd r) : re(r), im(0.0) {}
  ddc(dd r, dd i) : re(r), im(i) {}
  ddc(std::complex<double> z) : re(z.real()), im(z.imag()) {}
};

inline ddc operator+(ddc a, ddc b) { return {a.re + b.re, a.im + b.im}; }
inline ddc operator-(ddc a, ddc b) { return {a.re - b.re, a.im - b.im}; }
inline ddc operator*(ddc a, ddc b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline ddc conj(ddc a) { return {a.re, -a.im}; }
inline ddc operator/(ddc a, dd d) { return {a.re / d, a.im / d}; }
inline dd abs2(ddc a) { return a.re * a.re + a.im * a.im; }
inline ddc operator/(ddc a, ddc b) { return (a * conj(b)) / abs2(b); }

// exp and sin for moderate arguments (|x| up to a few), enough to evaluate
// the builtin kernels on bounded domains at full double-double accuracy.
// exp: scale down by 512, short Taylor series, square back up.
inline dd dd_exp(dd x) {
  if (std::abs(x.hi) > 6.0) return dd(std::exp(x.hi));  // fallback accuracy
  const dd r = {x.hi / 512.0, x.lo / 512.0};
  dd term(1.0);
  dd sum(1.0);
  for (int n = 1; n <= 14; ++n) {
    term = term * r / dd(static_cast<double>(n));
    sum = sum + term;
  }
  for (int k = 0; k < 9; ++k) sum = sum * sum;
  return sum;
}

// sin by plain Taylor; callers keep |x| small (kernel arguments on bounded
// domains), where 26 terms reach the double-double noise floor.
inline dd dd_sin(dd x) {
  if (std::abs(x.hi) > 6.0) return dd(std::sin(x.hi));  // fallback accuracy
  const dd x2 = x * x;
  dd term = x;
  dd sum = x;
  for (int n = 1; n <= 26; ++n) {
    const double denom = (2.0 * n) * (2.0 * n + 1.0);
    term = term * x2 / dd(-denom);
    sum = sum + term;
    if (std::abs(term.hi) < 1e-40 * std::abs(sum.hi)) break;
  }
  return sum;
}

}  // namespace pdext
