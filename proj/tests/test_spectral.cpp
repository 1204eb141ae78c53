// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "pdext/bump.hpp"
#include "pdext/spectral.hpp"

using namespace pdext;

namespace {

std::vector<double> quarter_lambdas() {
  std::vector<double> ls;
  for (int k = -5; k <= 5; ++k) {
    ls.push_back(static_cast<double>(k));
    if (k + 0.25 <= 5.0) ls.push_back(static_cast<double>(k) + 0.25);
  }
  return ls;
}

std::vector<double> half_lambdas() {
  std::vector<double> ls;
  for (int k = -10; k <= 10; ++k) ls.push_back(0.5 * static_cast<double>(k));
  return ls;
}

}  // namespace

TEST_CASE("quarter-shifted integers are orthonormal on the paired intervals") {
  ExponentialFamily fam(DomainSet({{0.0, 1.0}, {2.0, 3.0}}), quarter_lambdas());
  REQUIRE(fam.lambdas.size() == 21);
  auto g = exponential_gram(fam);
  const auto m = g.rows();
  CHECK((g - Eigen::MatrixXcd::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-12);
  // Hermitian and unit diagonal hold exactly by construction
  CHECK((g - g.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index j = 0; j < m; ++j) CHECK(g(j, j) == cplx(1.0));
}

TEST_CASE("both vanishing branches of the paired-interval Gram are exact") {
  // entries factor as (1/2) (1 + e^{4 pi i d}) int_0^1 e^{2 pi i d t} dt;
  // integer d kills the integral, quarter-shifted d kills the prefactor
  for (double d : {1.0, 2.0, 3.0, -4.0, 5.0})
    CHECK(std::abs(detail::segment_integral(0.0, 1.0, 2.0 * M_PI * d)) <=
          1e-12);
  for (double d : {0.25, 1.25, -0.75, 4.25, -3.75})
    CHECK(std::abs(cplx(1.0) + std::polar(1.0, 4.0 * M_PI * d)) <= 1e-12);
}

TEST_CASE("a single frequency gives the one-by-one identity") {
  ExponentialFamily fam(DomainSet({{0.0, 1.0}, {2.0, 3.0}}), {0.25});
  auto g = exponential_gram(fam);
  REQUIRE(g.rows() == 1);
  CHECK(g(0, 0) == cplx(1.0));
}

TEST_CASE("half-integers on the spread intervals fail orthonormality") {
  ExponentialFamily fam(DomainSet({{0.0, 1.0}, {3.0, 5.0}}), half_lambdas());
  auto g = exponential_gram(fam);
  double off = 0.0;
  for (Eigen::Index j = 0; j < g.rows(); ++j)
    for (Eigen::Index k = 0; k < g.cols(); ++k)
      if (j != k) off = std::max(off, std::abs(g(j, k)));
  CHECK(off >= 0.1);
  // neighboring half-integer pairs land exactly on 2/(3 pi)
  CHECK(off == Catch::Approx(2.0 / (3.0 * M_PI)).margin(1e-12));
}

TEST_CASE("in-family modes have no parseval defect") {
  DomainSet pair({{0.0, 1.0}, {2.0, 3.0}});
  ExponentialFamily fam(pair, quarter_lambdas());
  const double amp = 1.0 / std::sqrt(2.0);
  for (double l0 : {0.0, 0.25, 4.25, -4.75}) {
    auto f = sample_sections(pair, 2049, [&](double t) {
      return std::polar(amp, 2.0 * M_PI * l0 * t);
    });
    const double d = parseval_defect(fam, f);
    CHECK(d <= 1e-8);
    CHECK(d >= -1e-9);
  }

  // the residual is pure interpolation error, so it falls like h^4
  std::vector<double> ds;
  for (std::size_t nodes : {257, 1025, 4097}) {
    auto f = sample_sections(pair, nodes, [&](double t) {
      return std::polar(amp, 2.0 * M_PI * 4.25 * t);
    });
    ds.push_back(parseval_defect(fam, f));
  }
  CHECK(ds[1] < 1e-2 * ds[0]);
  CHECK(ds[2] < 1e-2 * ds[1]);

  auto zero = sample_sections(pair, 65, [](double) { return cplx(0.0); });
  CHECK(parseval_defect(fam, zero) == 0.0);
}

TEST_CASE("a bump exposes the incomplete family") {
  DomainSet pair({{0.0, 1.0}, {2.0, 3.0}});
  DomainSet spread({{0.0, 1.0}, {3.0, 5.0}});
  BumpFunction phi(0.5, 0.45, 1.0);
  auto on_pair =
      sample_sections(pair, 2049, [&](double t) { return phi.value(t); });
  auto on_spread =
      sample_sections(spread, 2049, [&](double t) { return phi.value(t); });
  const double d_pair =
      parseval_defect(ExponentialFamily(pair, quarter_lambdas()), on_pair);
  const double d_spread =
      parseval_defect(ExponentialFamily(spread, half_lambdas()), on_spread);
  // matched truncation, same profile: the orthonormal side only loses the
  // frequency tail, the spread side misses a macroscopic chunk
  CHECK(d_pair <= 1e-4);
  CHECK(d_spread >= 1e-2);
  CHECK(d_spread > 100.0 * d_pair);

  // Bessel monotonicity: more frequencies never increase the defect
  ExponentialFamily few(pair, {0.0, 1.0, 2.0});
  ExponentialFamily more(pair, {0.0, 1.0, 2.0, 0.25, -1.0});
  CHECK(parseval_defect(more, on_pair) <=
        parseval_defect(few, on_pair) + 1e-14);
}

TEST_CASE("families and sections validate their inputs") {
  DomainSet pair({{0.0, 1.0}, {2.0, 3.0}});
  try {
    ExponentialFamily(pair, {0.5, 0.5});
    FAIL("expected invalid_argument");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
  try {
    ExponentialFamily(DomainSet::real_line(), {0.0});
    FAIL("expected invalid_argument");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
  ExponentialFamily fam(pair, {0.0});
  // sections sampled over the wrong domain are refused
  auto wrong = sample_sections(DomainSet({{0.0, 1.0}, {2.0, 3.5}}), 65,
                               [](double) { return cplx(1.0); });
  try {
    parseval_defect(fam, wrong);
    FAIL("expected invalid_argument");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
}
