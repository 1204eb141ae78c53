// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Locally defined kernels F on the difference set of an open domain, plus the
// definiteness checks (positive definite, conditionally negative definite,
// reflection positive). Evaluation outside the difference set is an error,
// never a silent zero, because values off Omega-Omega are exactly what an
// extension has to invent.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pdext/bump.hpp"
#include "pdext/dd.hpp"
#include "pdext/errors.hpp"
#include "pdext/grid.hpp"
#include "pdext/io.hpp"
#include "pdext/measure.hpp"

namespace pdext {

struct DomainSet {
  // open intervals (a, b), sorted, pairwise disjoint
  std::vector<std::pair<double, double>> intervals;

  explicit DomainSet(std::vector<std::pair<double, double>> iv)
      : intervals(std::move(iv)) {
    require(!intervals.empty(), errc::invalid_argument, "domain must be nonempty");
    std::sort(intervals.begin(), intervals.end());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
      require(intervals[i].first < intervals[i].second, errc::invalid_argument,
              "domain interval needs a < b");
      if (i > 0)
        require(intervals[i - 1].second <= intervals[i].first,
                errc::invalid_argument, "domain intervals must be disjoint");
    }
  }

  static DomainSet interval(double a, double b) { return DomainSet({{a, b}}); }

  static DomainSet real_line() {
    const double inf = std::numeric_limits<double>::infinity();
    return DomainSet({{-inf, inf}});
  }

  bool connected() const { return intervals.size() == 1; }

  bool contains(double x) const {
    for (const auto& [a, b] : intervals)
      if (a < x && x < b) return true;
    return false;
  }
};

// z in Omega-Omega iff z lands strictly inside some (a_i - b_j, b_i - a_j).
inline bool difference_set_contains(const DomainSet& domain, double z) {
  for (const auto& [ai, bi] : domain.intervals)
    for (const auto& [aj, bj] : domain.intervals)
      if (ai - bj < z && z < bi - aj) return true;
  return false;
}

using Params = std::map<std::string, double>;

namespace detail {

inline double param(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

struct analytic_family {
  std::set<std::string> keys;
  double (*eval)(const Params&, double);
};

inline const std::map<std::string, analytic_family>& analytic_catalog() {
  static const std::map<std::string, analytic_family> catalog = {
      {"triangle",
       {{"radius", "amplitude"},
        [](const Params& p, double z) {
          const double r = param(p, "radius", 1.0);
          return param(p, "amplitude", 1.0) * std::max(0.0, 1.0 - std::abs(z) / r);
        }}},
      {"exponential",
       {{"rate", "amplitude"},
        [](const Params& p, double z) {
          return param(p, "amplitude", 1.0) *
                 std::exp(-param(p, "rate", 1.0) * std::abs(z));
        }}},
      {"gaussian",
       {{"width", "amplitude"},
        [](const Params& p, double z) {
          const double u = z / param(p, "width", 1.0);
          return param(p, "amplitude", 1.0) * std::exp(-u * u);
        }}},
      {"sinc",
       {{"amplitude"},
        [](const Params& p, double z) {
          const double a = param(p, "amplitude", 1.0);
          return z == 0.0 ? a : a * std::sin(z) / z;
        }}},
      {"constant",
       {{"amplitude"},
        [](const Params& p, double) { return param(p, "amplitude", 1.0); }}},
      // triangle near the origin, hard zero beyond the cutoff
      {"windowed_triangle",
       {{"cutoff", "amplitude"},
        [](const Params& p, double z) {
          const double c = param(p, "cutoff", 0.5);
          if (std::abs(z) >= c) return 0.0;
          return param(p, "amplitude", 1.0) * (1.0 - std::abs(z));
        }}},
      // offset + scale * |z|^exponent; conditionally negative definite
      // material (fractional Brownian variograms), generally not PD
      {"power",
       {{"exponent", "scale", "offset"},
        [](const Params& p, double z) {
          return param(p, "offset", 0.0) +
                 param(p, "scale", 1.0) *
                     std::pow(std::abs(z), param(p, "exponent", 1.0));
        }}},
      // e^{-rate |z|} continued past |z|=corner by its tangent line down to
      // zero; the classic convex-minorant extension of the exponential
      {"tangent_exponential",
       {{"rate", "corner", "amplitude"},
        [](const Params& p, double z) {
          const double r = param(p, "rate", 1.0);
          const double d = param(p, "corner", 1.0);
          const double a = param(p, "amplitude", 1.0);
          const double x = std::abs(z);
          if (x <= d) return a * std::exp(-r * x);
          const double lin = std::exp(-r * d) * (1.0 - r * (x - d));
          return lin > 0.0 ? a * lin : 0.0;
        }}},
  };
  return catalog;
}

}  // namespace detail

struct LocalKernel {
  enum class def_t { analytic, sampled };

  DomainSet domain = DomainSet::real_line();
  def_t def = def_t::analytic;
  // analytic
  std::string name;
  Params params;
  // sampled: symmetric uniform grid on Omega-Omega, linear interpolation
  UniformGrid sgrid;
  std::vector<cplx> svalues;

  static LocalKernel analytic(std::string name, Params params, DomainSet domain) {
    const auto& catalog = detail::analytic_catalog();
    const auto it = catalog.find(name);
    require(it != catalog.end(), errc::invalid_argument,
            "unknown kernel family '" + name + "'");
    for (const auto& [key, _] : params)
      require(it->second.keys.count(key) == 1, errc::invalid_argument,
              "kernel family '" + name + "' has no parameter '" + key + "'");
    LocalKernel f;
    f.domain = std::move(domain);
    f.def = def_t::analytic;
    f.name = std::move(name);
    f.params = std::move(params);
    require(it->second.eval(f.params, 0.0) >= 0.0, errc::invalid_argument,
            "kernel must have F(0) >= 0");
    return f;
  }

  static LocalKernel sampled(UniformGrid grid, std::vector<cplx> values,
                             DomainSet domain, double sym_tol = 1e-12) {
    require(values.size() == grid.count, errc::invalid_argument,
            "sample table must match its grid");
    require(grid.count % 2 == 1, errc::invalid_argument,
            "sample grid needs an odd point count so 0 is a node");
    const double back = grid.back();
    require(std::abs(grid.start + back) <= sym_tol * std::max(1.0, std::abs(back)),
            errc::asymmetric_data, "sample grid must be symmetric about 0");
    double scale = 0.0;
    for (const auto& v : values) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < values.size(); ++k) {
      const auto mirror = std::conj(values[values.size() - 1 - k]);
      require(std::abs(values[k] - mirror) <= sym_tol * std::max(1.0, scale),
              errc::asymmetric_data,
              "sample table must satisfy F(-z) = conj F(z)");
    }
    const auto center = values[grid.count / 2];
    require(center.real() >= -sym_tol && std::abs(center.imag()) <= sym_tol,
            errc::asymmetric_data, "F(0) must be real and nonnegative");
    LocalKernel f;
    f.domain = std::move(domain);
    f.def = def_t::sampled;
    f.sgrid = grid;
    f.svalues = std::move(values);
    return f;
  }

  cplx operator()(double z) const {
    require(difference_set_contains(domain, z), errc::out_of_domain,
            "z=" + format_double(z) + " is outside Omega-Omega");
    if (def == def_t::analytic)
      return detail::analytic_catalog().at(name).eval(params, z);
    // linear interpolation, no extrapolation
    require(z >= sgrid.start && z <= sgrid.back(), errc::out_of_domain,
            "sample table does not cover z=" + format_double(z));
    const double pos = (z - sgrid.start) / sgrid.step;
    std::size_t k = static_cast<std::size_t>(pos);
    if (k >= sgrid.count - 1) k = sgrid.count - 2;
    const double u = (z - sgrid.point(k)) / sgrid.step;
    return (1.0 - u) * svalues[k] + u * svalues[k + 1];
  }

  double f0() const {
    if (def == def_t::analytic)
      return detail::analytic_catalog().at(name).eval(params, 0.0);
    return svalues[sgrid.count / 2].real();
  }
};

namespace detail {

// Kernel evaluation in double-double arithmetic for the analytic families
// whose formulas reduce to exp/sin and rational operations. The membership
// functional needs Gram entries accurate beyond binary64: with entries
// rounded to doubles, everything below a relative 1e-16 in the spectrum is
// noise and the growth trend of g^H K^+ g is unreadable. Families without a
// dd formula (power) and sampled tables fall back to the double value, which
// is all the data carries anyway.
inline ddc dd_kernel_value(const LocalKernel& f, dd z) {
  require(difference_set_contains(f.domain, z.value()), errc::out_of_domain,
          "z=" + format_double(z.value()) + " is outside Omega-Omega");
  if (f.def != LocalKernel::def_t::analytic) return ddc(f(z.value()));
  const auto& p = f.params;
  const dd az = dd_abs(z);
  if (f.name == "triangle") {
    const dd r(param(p, "radius", 1.0));
    const dd one_minus = dd(1.0) - az / r;
    if (one_minus.hi < 0.0) return ddc(dd(0.0));
    return ddc(dd(param(p, "amplitude", 1.0)) * one_minus);
  }
  if (f.name == "exponential")
    return ddc(dd(param(p, "amplitude", 1.0)) *
               dd_exp(-(dd(param(p, "rate", 1.0)) * az)));
  if (f.name == "gaussian") {
    const dd u = z / dd(param(p, "width", 1.0));
    return ddc(dd(param(p, "amplitude", 1.0)) * dd_exp(-(u * u)));
  }
  if (f.name == "sinc") {
    const dd a(param(p, "amplitude", 1.0));
    if (z.hi == 0.0 && z.lo == 0.0) return ddc(a);
    return ddc(a * dd_sin(z) / z);
  }
  if (f.name == "constant") return ddc(dd(param(p, "amplitude", 1.0)));
  if (f.name == "windowed_triangle") {
    if (!(az < dd(param(p, "cutoff", 0.5)))) return ddc(dd(0.0));
    return ddc(dd(param(p, "amplitude", 1.0)) * (dd(1.0) - az));
  }
  if (f.name == "tangent_exponential") {
    const dd r(param(p, "rate", 1.0));
    const dd d(param(p, "corner", 1.0));
    const dd a(param(p, "amplitude", 1.0));
    if (!(d < az)) return ddc(a * dd_exp(-(r * az)));
    const dd lin = dd_exp(-(r * d)) * (dd(1.0) - r * (az - d));
    if (lin.hi <= 0.0) return ddc(dd(0.0));
    return ddc(a * lin);
  }
  return ddc(f(z.value()));
}

}  // namespace detail

struct Verdict {
  bool pass = false;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  std::vector<double> values;  // one entry per test function (integral check)
};

inline double default_eig_tol(const LocalKernel& f) {
  return 1e-10 * std::max(1.0, f.f0());
}

// K[j][k] = F(x_j - x_k), assembled from the lower triangle so the result is
// exactly Hermitian.
inline Eigen::MatrixXcd gram_matrix(const LocalKernel& f,
                                    const std::vector<double>& points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  require(n > 0, errc::invalid_argument, "gram matrix needs points");
  Eigen::MatrixXcd k(n, n);
  const double diag = f.f0();
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = diag;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const cplx v = f(points[i] - points[j]);
      k(i, j) = v;
      k(j, i) = std::conj(v);
    }
  }
  return k;
}

inline Verdict check_positive_definite(const LocalKernel& f,
                                       const std::vector<double>& points,
                                       double tol = -1.0) {
  if (tol < 0.0) tol = default_eig_tol(f);
  const auto k = gram_matrix(f, points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k, Eigen::EigenvaluesOnly);
  Verdict v;
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  v.max_eigenvalue = es.eigenvalues().maxCoeff();
  v.pass = v.min_eigenvalue >= -tol;
  return v;
}

// Integral form of positive definiteness: for each test function phi,
// integral of F(y-x) phi(x) conj(phi(y)) dx dy must be (almost) nonnegative.
// Trapezoid nodes where phi vanishes are skipped, so kernel evaluations never
// touch the closure of Omega-Omega.
inline Verdict check_pd_integral(const LocalKernel& f,
                                 const std::vector<BumpFunction>& test_functions,
                                 const QuadratureSpec& quadrature,
                                 double tol = -1.0) {
  if (tol < 0.0) tol = default_eig_tol(f);
  Verdict verdict;
  verdict.pass = true;
  for (const auto& phi : test_functions) {
    const std::size_t n = quadrature.nodes;
    const double lo = phi.support_lo();
    const double h = (phi.support_hi() - lo) / static_cast<double>(n - 1);
    std::vector<double> xs;
    std::vector<cplx> c;
    xs.reserve(n);
    c.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = lo + static_cast<double>(j) * h;
      const double w = (j == 0 || j == n - 1) ? 0.5 * h : h;
      const cplx cv = w * phi.value(x);
      if (cv == cplx(0.0)) continue;
      xs.push_back(x);
      c.push_back(cv);
    }
    cplx acc = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      acc += std::norm(c[j]) * f.f0();
      for (std::size_t i = j + 1; i < xs.size(); ++i) {
        // pair (i,j) and (j,i) combined through the Hermitian symmetry
        acc += 2.0 * std::real(f(xs[i] - xs[j]) * c[i] * std::conj(c[j]));
      }
    }
    verdict.values.push_back(acc.real());
    if (acc.real() < -tol) verdict.pass = false;
  }
  verdict.min_eigenvalue =
      verdict.values.empty()
          ? 0.0
          : *std::min_element(verdict.values.begin(), verdict.values.end());
  return verdict;
}

// Conditional negative definiteness: the quadratic form is <= 0 on zero-sum
// coefficients, i.e. max eigenvalue of P M P is <= tol for the centering
// projector P = I - 11^T/m.
inline Verdict check_conditionally_negative(const LocalKernel& g,
                                            const std::vector<double>& points,
                                            double tol = -1.0) {
  if (tol < 0.0) tol = 1e-10 * std::max(1.0, std::abs(g.f0()));
  const auto m = static_cast<Eigen::Index>(points.size());
  require(m > 0, errc::invalid_argument, "need points");
  Eigen::MatrixXd mat(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = j; i < m; ++i) {
      const cplx v = i == j ? cplx(g.f0()) : g(points[i] - points[j]);
      require(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v)),
              errc::invalid_argument,
              "conditional negativity needs a real-valued kernel");
      mat(i, j) = v.real();
      mat(j, i) = v.real();
    }
  }
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m, m) -
                      Eigen::MatrixXd::Constant(m, m, 1.0 / static_cast<double>(m));
  Eigen::MatrixXd pmp = p * mat * p;
  pmp = 0.5 * (pmp + pmp.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pmp, Eigen::EigenvaluesOnly);
  Verdict v;
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  v.max_eigenvalue = es.eigenvalues().maxCoeff();
  v.pass = v.max_eigenvalue <= tol;
  return v;
}

// Reflection positivity: the matrix F(x_i + x_j) over points in [0, inf)
// must be PSD. Needs F real where it is sampled.
inline Verdict check_reflection_positive(const LocalKernel& f,
                                         const std::vector<double>& points,
                                         double tol = -1.0) {
  if (tol < 0.0) tol = default_eig_tol(f);
  const auto m = static_cast<Eigen::Index>(points.size());
  require(m > 0, errc::invalid_argument, "need points");
  Eigen::MatrixXd mat(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    require(points[j] >= 0.0, errc::invalid_argument,
            "reflection positivity samples points in [0, inf)");
    for (Eigen::Index i = j; i < m; ++i) {
      const cplx v = f(points[i] + points[j]);
      require(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v)),
              errc::invalid_argument, "reflection check needs real F(x+y)");
      mat(i, j) = v.real();
      mat(j, i) = v.real();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat, Eigen::EigenvaluesOnly);
  Verdict v;
  v.min_eigenvalue = es.eigenvalues().minCoeff();
  v.max_eigenvalue = es.eigenvalues().maxCoeff();
  v.pass = v.min_eigenvalue >= -tol;
  return v;
}

struct SymmetryReport {
  double max_defect = 0.0;     // max |F(-z) - conj F(z)|
  double worst_excess = 0.0;   // max |F(z)| - F(0)
  bool bound_violated = false; // some |F(z)| > F(0) + tol
};

inline SymmetryReport hermitian_symmetry_check(const LocalKernel& f,
                                               const std::vector<double>& samples,
                                               double tol = -1.0) {
  if (tol < 0.0) tol = default_eig_tol(f);
  SymmetryReport report;
  const double f0 = f.f0();
  for (double z : samples) {
    const cplx plus = f(z);
    const cplx minus = f(-z);
    report.max_defect = std::max(report.max_defect, std::abs(minus - std::conj(plus)));
    report.worst_excess = std::max(report.worst_excess, std::abs(plus) - f0);
  }
  report.bound_violated = report.worst_excess > tol;
  return report;
}

// Sampled kernel CSV: rows `z,re,im`, uniform symmetric z.
inline LocalKernel kernel_from_csv(const std::string& path, DomainSet domain) {
  const auto rows = read_csv_rows(path);
  require(!rows.empty(), errc::io_failure, "empty kernel file " + path);
  std::vector<double> z(rows.size());
  std::vector<cplx> vals(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == 3, errc::io_failure,
            "expected z,re,im rows in " + path);
    z[r] = parse_double(rows[r][0]);
    vals[r] = cplx(parse_double(rows[r][1]), parse_double(rows[r][2]));
  }
  require(is_uniform(z), errc::non_uniform_grid,
          "sampled kernel needs a uniform z grid in " + path);
  const double h = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
  return LocalKernel::sampled(UniformGrid(z.front(), h, z.size()), std::move(vals),
                              std::move(domain));
}

inline std::string kernel_to_csv(const LocalKernel& f) {
  require(f.def == LocalKernel::def_t::sampled, errc::invalid_argument,
          "only sampled kernels serialize to CSV");
  std::string body;
  for (std::size_t k = 0; k < f.sgrid.count; ++k)
    body += format_double(f.sgrid.point(k)) + "," +
            format_double(f.svalues[k].real()) + "," +
            format_double(f.svalues[k].imag()) + "\n";
  return body;
}

}  // namespace pdext
