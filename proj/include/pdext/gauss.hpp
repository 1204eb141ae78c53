// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Gaussian path sampling for the two process classes the kernel checks feed:
// stationary processes with covariance F(s-t), and stationary-increment
// processes with E|X_s-X_t|^2 = G(s-t) pinned at X_0 = 0. Draws are
// reproducible per (seed, path) stream, so thread count never changes output.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "pdext/errors.hpp"
#include "pdext/extend.hpp"
#include "pdext/kernel.hpp"
#include "pdext/parallel.hpp"
#include "pdext/rng.hpp"

namespace pdext {

struct GpPaths {
  std::vector<double> grid;
  Eigen::MatrixXd paths;  // one row per path, one column per grid point
  std::uint64_t seed = 0;
};

namespace detail {

inline double real_or_reject(cplx v) {
  require(std::abs(v.imag()) <= 1e-12 * std::max(1.0, std::abs(v)),
          errc::invalid_argument,
          "Gaussian sampling needs a real-valued kernel");
  return v.real();
}

// Symmetric square root of cov + jitter*I with small negative eigenvalues
// clipped to zero. Strict triangular factorizations refuse the near-singular
// Grams smooth kernels produce on fine grids; the clipped eigenfactor does
// the same job and degrades gracefully.
inline Eigen::MatrixXd gaussian_factor(Eigen::MatrixXd cov, double jitter,
                                       double clip_floor) {
  cov.diagonal().array() += jitter;
  cov = 0.5 * (cov + cov.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  require(es.info() == Eigen::Success, errc::not_psd,
          "covariance eigendecomposition failed");
  const double worst = es.eigenvalues().minCoeff();
  require(worst >= -clip_floor, errc::not_psd,
          "covariance has eigenvalue " + std::to_string(worst) +
              " below the clip floor; not positive semidefinite");
  Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

// Shared draw loop: paths.row(r) = factor * z_r with z_r from stream
// (seed, r). Each iteration writes only its own row.
inline GpPaths draw_paths(const Eigen::MatrixXd& factor,
                          std::vector<double> grid, std::size_t n_paths,
                          std::uint64_t seed, unsigned threads) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  GpPaths out;
  out.grid = std::move(grid);
  out.seed = seed;
  out.paths.resize(static_cast<Eigen::Index>(n_paths), n);
  parallel_for(n_paths, threads, [&](std::size_t r) {
    philox_stream rng(seed, r);
    Eigen::VectorXd z(n);
    for (Eigen::Index k = 0; k < n; ++k) z[k] = rng.normal();
    out.paths.row(static_cast<Eigen::Index>(r)) = (factor * z).transpose();
  });
  return out;
}

template <typename Eval>
GpPaths sample_stationary_impl(Eval&& value, double f0,
                               const std::vector<double>& grid,
                               std::size_t n_paths, std::uint64_t seed,
                               double jitter, unsigned threads) {
  require(!grid.empty(), errc::invalid_argument, "grid must be nonempty");
  require(n_paths >= 1, errc::invalid_argument, "need at least one path");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    cov(j, j) = f0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = real_or_reject(value(grid[i] - grid[j]));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
  if (jitter < 0.0) jitter = 1e-10 * std::abs(f0);
  const double clip = 1e-10 * std::max(1.0, std::abs(f0));
  return draw_paths(gaussian_factor(std::move(cov), jitter, clip), grid,
                    n_paths, seed, threads);
}

}  // namespace detail

inline GpPaths sample_stationary(const LocalKernel& f,
                                 const std::vector<double>& grid,
                                 std::size_t n_paths, std::uint64_t seed,
                                 double jitter = -1.0, unsigned threads = 0) {
  return detail::sample_stationary_impl(
      [&](double z) { return f(z); }, detail::real_or_reject(f.f0()), grid,
      n_paths, seed, jitter, threads);
}

inline GpPaths sample_stationary(const ExtensionCandidate& cand,
                                 const std::vector<double>& grid,
                                 std::size_t n_paths, std::uint64_t seed,
                                 double jitter = -1.0, unsigned threads = 0) {
  return detail::sample_stationary_impl(
      [&](double z) { return cand.value(z); },
      detail::real_or_reject(cand.value(0.0)), grid, n_paths, seed, jitter,
      threads);
}

// Stationary-increment sampling from a conditionally negative G with G(0)=0.
// The increment law E|X_s-X_t|^2 = G(s-t) plus the pinning X_0 = 0 force the
// covariance K(s,t) = (G(s)+G(t)-G(s-t))/2; the pinned coordinate is kept out
// of the jittered factorization so X_0 stays exactly zero.
inline GpPaths sample_stationary_increment(const LocalKernel& g,
                                           const std::vector<double>& grid,
                                           std::size_t n_paths,
                                           std::uint64_t seed,
                                           double jitter = -1.0,
                                           unsigned threads = 0) {
  require(!grid.empty() && grid.front() == 0.0, errc::invalid_argument,
          "increment grid must start at the pinned time 0");
  require(n_paths >= 1, errc::invalid_argument, "need at least one path");
  const double g0 = detail::real_or_reject(g.f0());
  std::vector<double> gval(grid.size());
  double scale = 1.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    gval[j] = detail::real_or_reject(g(grid[j]));
    scale = std::max(scale, std::abs(gval[j]));
  }
  require(std::abs(g0) <= 1e-12 * scale, errc::not_cnd,
          "stationary increments need G(0) = 0, got " + std::to_string(g0));
  const auto cnd = check_conditionally_negative(g, grid);
  require(cnd.pass, errc::not_cnd,
          "G is not conditionally negative on this grid (centered max "
          "eigenvalue " +
              std::to_string(cnd.max_eigenvalue) + ")");

  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n == 1)
    return detail::draw_paths(Eigen::MatrixXd::Zero(1, 1), grid, n_paths,
                              seed, threads);
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n - 1, n - 1);
  double max_diag = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double gd = detail::real_or_reject(g(grid[i] - grid[j]));
      const double v = 0.5 * (gval[i] + gval[j] - gd);
      cov(i - 1, j - 1) = v;
      cov(j - 1, i - 1) = v;
    }
    max_diag = std::max(max_diag, cov(j - 1, j - 1));
  }
  if (jitter < 0.0) jitter = 1e-10 * max_diag;
  const double clip = 1e-10 * std::max(1.0, max_diag);
  const Eigen::MatrixXd base =
      detail::gaussian_factor(std::move(cov), jitter, clip);
  Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(n, n);
  factor.bottomRightCorner(n - 1, n - 1) = base;
  return detail::draw_paths(factor, grid, n_paths, seed, threads);
}

// Sample second moment around zero: C[j][k] = (1/N) sum_r X_rj X_rk. No mean
// subtraction; the sampled laws are zero-mean by construction.
inline Eigen::MatrixXd empirical_covariance(const GpPaths& p) {
  const auto n_paths = p.paths.rows();
  require(n_paths >= 2, errc::too_few_paths,
          "empirical covariance needs at least two paths");
  return (p.paths.transpose() * p.paths) / static_cast<double>(n_paths);
}

}  // namespace pdext
