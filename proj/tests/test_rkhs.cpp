// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "pdext/rkhs.hpp"
#include "pdext/rng.hpp"

using namespace pdext;

namespace {

LocalKernel exp_kernel(double lo = 0.0, double hi = 1.0) {
  return LocalKernel::analytic("exponential", {}, DomainSet::interval(lo, hi));
}

RkhsElement random_element(std::uint64_t seed, std::size_t n) {
  philox_stream rng(seed, 0);
  std::vector<double> anchors(n);
  for (std::size_t k = 0; k < n; ++k)
    anchors[k] = (static_cast<double>(k) + 0.2 + 0.6 * rng.uniform()) /
                 static_cast<double>(n + 1);
  std::vector<cplx> coeffs(n);
  for (auto& c : coeffs) c = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return RkhsElement(AnchorSet(anchors), coeffs);
}

}  // namespace

TEST_CASE("inner products of kernel translates") {
  auto f = exp_kernel(-0.1, 1.1);
  auto ka = RkhsElement::translate(0.3);
  auto kb = RkhsElement::translate(0.8);
  CHECK(rkhs_inner(f, ka, ka).real() == 1.0);
  CHECK(rkhs_inner(f, ka, kb).real() == Catch::Approx(std::exp(-0.5)).epsilon(1e-14));

  auto diff = RkhsElement(AnchorSet({0.0, 1.0}), {cplx(1.0), cplx(-1.0)});
  const double n2 = rkhs_inner(f, diff, diff).real();
  CHECK(n2 == Catch::Approx(2.0 - 2.0 * std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("inner product is a hermitian form with psd diagonal") {
  auto f = exp_kernel();
  auto u = random_element(3, 6);
  auto v = random_element(4, 5);
  const auto uv = rkhs_inner(f, u, v);
  const auto vu = rkhs_inner(f, v, u);
  CHECK(std::abs(uv - std::conj(vu)) < 1e-14);
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    auto w = random_element(seed, 8);
    CHECK(rkhs_inner(f, w, w).real() >= -1e-12);
    CHECK(std::abs(rkhs_inner(f, w, w).imag()) < 1e-14);
  }
}

TEST_CASE("evaluation of spanned elements") {
  auto f = exp_kernel(-0.1, 1.1);
  auto ka = RkhsElement::translate(0.4);
  CHECK(rkhs_evaluate(f, ka, 0.4).real() == 1.0);

  auto diff = RkhsElement(AnchorSet({0.0, 1.0}), {cplx(1.0), cplx(-1.0)});
  CHECK(std::abs(rkhs_evaluate(f, diff, 0.5)) < 1e-16);
}

TEST_CASE("reproducing identity holds to rounding") {
  auto f = exp_kernel();
  auto kb = RkhsElement::translate(0.7);
  CHECK(reproducing_defect(f, kb, 0.2) == 0.0);

  auto u = random_element(7, 10);
  const double scale = rkhs_norm(f, u) * std::sqrt(f.f0());
  for (double a : {0.11, 0.42, 0.77, 0.93}) {
    CHECK(reproducing_defect(f, u, a) <= 1e-12 * std::max(1.0, scale));
  }
}

TEST_CASE("membership of a kernel translate equals F(0)") {
  auto f = exp_kernel();
  AnchorSet anchors({0.1, 0.25, 0.5, 0.75, 0.9});
  const double a = 0.5;
  auto g = [&](double y) { return f(y - a); };
  CHECK(membership_functional(f, g, anchors) == Catch::Approx(1.0).epsilon(1e-12));

  AnchorSet more({0.05, 0.2, 0.35, 0.5, 0.65, 0.8, 0.95});
  CHECK(membership_functional(f, g, more) == Catch::Approx(1.0).epsilon(1e-12));

  auto zero = [](double) { return cplx(0.0); };
  CHECK(membership_functional(f, zero, anchors) == 0.0);
}

TEST_CASE("membership functional grows along nested anchor chains") {
  auto f = exp_kernel();
  auto g = [](double y) { return cplx(std::cos(3.0 * y)); };
  std::vector<double> pts;
  philox_stream rng(20, 0);
  double prev = -1.0;
  for (int level = 0; level < 4; ++level) {
    for (int j = 0; j < 6; ++j) pts.push_back(0.02 + 0.96 * rng.uniform());
    const double q = membership_functional(f, g, AnchorSet(pts));
    CHECK(q >= prev - 1e-10);
    prev = q;
  }
}

TEST_CASE("membership series flat for the exponential slice") {
  auto f = exp_kernel();
  // e^{-x} extends to the norm-1 translate at the left endpoint
  auto g = [](double x) { return cplx(std::exp(-x)); };
  double q8 = 0.0, q64 = 0.0;
  for (std::size_t n : {8, 64}) {
    const auto rep = membership_report(f, g, AnchorSet::uniform_interior(0.0, 1.0, n));
    CHECK(rep.range_defect <= 1e-6);
    if (n == 8) q8 = rep.q;
    else q64 = rep.q;
  }
  CHECK(q8 <= 1.0 + 1e-10);
  CHECK(q64 <= 1.0 + 1e-10);
  CHECK(q64 / q8 < 1.1);
}

TEST_CASE("def space of the exponential kernel is two-dimensional") {
  auto rep = def_space_dimension(exp_kernel());
  CHECK(rep.dim == 2);
  REQUIRE(rep.basis.size() == 2);
  for (const auto& trace : rep.basis) {
    CHECK(trace.member);
    CHECK(trace.growth < 10.0);
  }
  // e^{+x} equals e * k_1 up to the boundary, so its norm approaches e^2
  const double q_plus = rep.basis[1].levels.back().q;
  CHECK(q_plus > 6.5);
  CHECK(q_plus < std::exp(2.0) + 1e-6);
}

TEST_CASE("def space of the sinc kernel is trivial") {
  auto sinc = LocalKernel::analytic("sinc", {}, DomainSet::interval(0.0, 1.0));
  auto rep = def_space_dimension(sinc);
  CHECK(rep.dim == 0);
  for (const auto& trace : rep.basis) {
    CHECK_FALSE(trace.member);
    CHECK(trace.growth > 10.0);
  }
}

TEST_CASE("def space of the constant kernel is trivial") {
  auto one = LocalKernel::analytic("constant", {}, DomainSet::interval(0.0, 1.0));
  auto rep = def_space_dimension(one);
  CHECK(rep.dim == 0);
  // the failure mode here is rank, not growth: e^{+-x} are far from the
  // one-dimensional numerical range of the all-ones Gram matrix
  for (const auto& trace : rep.basis) {
    bool range_ok = true;
    for (const auto& level : trace.levels) range_ok = range_ok && level.range_defect <= 1e-6;
    CHECK_FALSE(range_ok);
  }
}

TEST_CASE("uniqueness diagnostic") {
  auto sinc = LocalKernel::analytic("sinc", {}, DomainSet::interval(0.0, 1.0));
  CHECK(uniqueness_diagnostic(sinc).unique);

  auto expo = uniqueness_diagnostic(exp_kernel());
  CHECK_FALSE(expo.unique);
  CHECK(expo.def_dim == 2);

  auto one = LocalKernel::analytic("constant", {}, DomainSet::interval(0.0, 1.0));
  CHECK(uniqueness_diagnostic(one).unique);

  auto split = LocalKernel::analytic("windowed_triangle", {},
                                     DomainSet({{-0.25, 0.25}, {0.75, 1.0}}));
  CHECK_THROWS_AS(uniqueness_diagnostic(split), error);
}

TEST_CASE("interpolation check accepts valid extensions") {
  auto f = exp_kernel();
  auto anchors = AnchorSet::uniform_interior(0.0, 1.0, 24);

  auto g1 = LocalKernel::analytic("exponential", {}, DomainSet::real_line());
  auto v3 = interpolation_check(f, g1, 3.0, anchors);
  CHECK(v3.pass);
  CHECK(v3.values[0] <= 1.0);

  auto v0 = interpolation_check(f, g1, 0.0, anchors);
  CHECK(v0.pass);
  // the 1% anchor margin caps the projection at exp(-0.02) * F(0)
  CHECK(v0.values[0] == Catch::Approx(std::exp(-0.02)).margin(1e-4));

  auto g2 = LocalKernel::analytic("tangent_exponential", {}, DomainSet::real_line());
  CHECK(interpolation_check(f, g2, 1.5, anchors).pass);
  CHECK(interpolation_check(f, g2, -2.0, anchors).pass);
}

TEST_CASE("interpolation check rejects a wrong candidate") {
  auto f = exp_kernel();
  auto anchors = AnchorSet::uniform_interior(0.0, 1.0, 32);
  // G == 1 is positive definite but does not restrict to e^{-|x|}; the
  // constant slice has norm squared 3/2, above the F(0)*G(0) = 1 bound
  auto gone = LocalKernel::analytic("constant", {}, DomainSet::real_line());
  auto v = interpolation_check(f, gone, 0.5, anchors);
  CHECK_FALSE(v.pass);
  CHECK(v.values[0] > 1.2);
  CHECK(v.values[0] < 1.55);
}

TEST_CASE("anchor set validation") {
  CHECK_THROWS_AS(AnchorSet(std::vector<double>{}), error);
  CHECK_THROWS_AS(AnchorSet({0.5, 0.5}), error);
  auto a = AnchorSet::uniform_interior(0.0, 1.0, 8);
  CHECK(a.size() == 8);
  CHECK(a.points.front() == Catch::Approx(0.01));
  CHECK(a.points.back() == Catch::Approx(0.99));
}
