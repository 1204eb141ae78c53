// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "pdext/extend.hpp"
#include "pdext/rng.hpp"

using namespace pdext;

namespace {

LocalKernel exp_kernel() {
  return LocalKernel::analytic("exponential", {}, DomainSet::interval(0.0, 1.0));
}

// e^{-|x|} on [0,1], tangent line e^{-1}(2-|x|) out to 2, zero beyond
double tangent_exp_reference(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return std::exp(-ax);
  if (ax <= 2.0) return std::exp(-1.0) * (2.0 - ax);
  return 0.0;
}

PolyaOptions no_measure() {
  PolyaOptions o;
  o.with_measure = false;
  return o;
}

}  // namespace

TEST_CASE("measure transforms give candidates") {
  // a point mass transforms to the constant function
  auto pm = from_measure(Measure::discrete({0.0}, {1.0}));
  CHECK(pm.value(0.0) == cplx(1.0));
  CHECK(pm.value(3.7) == cplx(1.0));
  CHECK(pm.value(-12.0) == cplx(1.0));
  CHECK(pm.provenance == ExtensionCandidate::provenance_t::measure);
  REQUIRE(static_cast<bool>(pm.backing_measure));

  // uniform density of mass 1 on [-1,1] transforms to sin(t)/t
  const std::size_t n = 20001;
  UniformGrid g(-1.0, 2.0 / static_cast<double>(n - 1), n);
  auto uni = from_measure(Measure::gridded(g, std::vector<double>(n, 0.5)));
  for (double t : {0.31, 1.7, -2.9}) {
    CHECK(std::abs(uni.value(t) - cplx(std::sin(t) / t)) < 1e-7);
  }
  CHECK(std::abs(uni.value(0.0) - cplx(1.0)) < 1e-12);
}

TEST_CASE("cauchy measure restricts to the exponential") {
  // density 1/(pi(1+t^2)) truncated far out; the tail costs about 1/(pi T)
  const double reach = 2000.0;
  const std::size_t n = (std::size_t{1} << 16) + 1;
  UniformGrid g(-reach, 2.0 * reach / static_cast<double>(n - 1), n);
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = g.point(k);
    vals[k] = 1.0 / (M_PI * (1.0 + t * t));
  }
  auto cand = from_measure(Measure::gridded(g, std::move(vals)));

  auto f = exp_kernel();
  std::vector<double> samples;
  for (int j = -9; j <= 9; ++j) samples.push_back(0.1 * static_cast<double>(j));
  CHECK(restriction_residual(cand, f, samples) < 1e-3);

  // a candidate built from F's own formula restricts with zero residual
  ExtensionCandidate self;
  self.global_function = [](double t) { return cplx(std::exp(-std::abs(t))); };
  CHECK(restriction_residual(self, f, samples) == 0.0);
}

TEST_CASE("restriction residual rejects out-of-domain samples") {
  auto f = exp_kernel();
  ExtensionCandidate self;
  self.global_function = [](double t) { return cplx(std::exp(-std::abs(t))); };
  try {
    restriction_residual(self, f, {0.5, 1.5});
    FAIL("expected out_of_domain");
  } catch (const error& e) {
    CHECK(e.code() == errc::out_of_domain);
  }
}

TEST_CASE("tangent continuation of the exponential") {
  auto cand = polya_extension(exp_kernel(), 2.0, no_measure());
  REQUIRE(cand.pieces.has_value());
  CHECK(cand.pieces->corner == 1.0);
  CHECK(cand.pieces->value == std::exp(-1.0));
  CHECK(cand.pieces->slope == -std::exp(-1.0));
  CHECK(cand.pieces->zero_abscissa == 2.0);

  double worst = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double x = 2.0 * static_cast<double>(k) / 2000.0;
    worst = std::max(worst,
                     std::abs(cand.value(x).real() - tangent_exp_reference(x)));
    CHECK(cand.value(x).imag() == 0.0);
  }
  CHECK(worst <= 1e-12);
  // even, and dead beyond the tangent's zero
  CHECK(cand.value(-1.3) == cand.value(1.3));
  CHECK(cand.value(2.0) == cplx(0.0));
  CHECK(cand.value(5.1) == cplx(0.0));
}

TEST_CASE("tangent continuation carries a consistent density") {
  PolyaOptions opts;
  opts.density_nodes = (std::size_t{1} << 15) + 1;
  auto cand = polya_extension(exp_kernel(), 2.0, opts);
  REQUIRE(static_cast<bool>(cand.backing_measure));
  const Measure& mu = *cand.backing_measure;

  // center node reproduces the closed-form density at zero
  const double a0 = mu.values[mu.grid.count / 2];
  CHECK(a0 == Catch::Approx((2.0 - std::exp(-1.0)) / (2.0 * M_PI)).margin(1e-12));
  for (double v : {mu.values[0], mu.values[mu.grid.count - 1]})
    CHECK(v >= 0.0);

  // transform round trip within the truncation budget
  CHECK(cand.truncation_budget > 0.0);
  CHECK(cand.truncation_budget < 1e-3);
  double dev = 0.0;
  for (int j = -4; j <= 4; ++j) {
    const double t = 0.5 * static_cast<double>(j);
    dev = std::max(dev, std::abs(fourier_transform(mu, t) - cand.value(t)));
  }
  CHECK(dev <= 1e-6 * total_mass(mu) + cand.truncation_budget);

  // and the measure-backed candidate restricts back to F
  auto back = from_measure(mu);
  std::vector<double> samples;
  for (int j = -9; j <= 9; ++j) samples.push_back(0.1 * static_cast<double>(j));
  CHECK(restriction_residual(back, exp_kernel(), samples) < 1e-4);
}

TEST_CASE("round trip residual shrinks as the spectral grid grows") {
  std::vector<double> residuals;
  std::vector<double> samples;
  for (int j = -9; j <= 9; ++j) samples.push_back(0.1 * static_cast<double>(j));
  for (std::size_t sh : {12, 14, 16}) {
    PolyaOptions opts;
    opts.density_nodes = (std::size_t{1} << sh) + 1;
    auto cand = polya_extension(exp_kernel(), 2.0, opts);
    residuals.push_back(
        restriction_residual(from_measure(*cand.backing_measure), exp_kernel(), samples));
  }
  CHECK(residuals[1] < residuals[0]);
  CHECK(residuals[2] < residuals[1]);
  CHECK(residuals[2] < 1e-4);
}

TEST_CASE("triangle is its own tangent continuation") {
  auto tri = LocalKernel::analytic("triangle", {{"radius", 1.0}},
                                   DomainSet::interval(0.0, 1.0));
  auto cand = polya_extension(tri, 1.0, no_measure());
  CHECK(cand.pieces->zero_abscissa == 1.0);
  for (double x : {0.2, 0.6, 0.95}) {
    CHECK(std::abs(cand.value(x).real() - (1.0 - x)) < 1e-15);
    CHECK(std::abs(cand.value(x + 1.0)) == 0.0);
  }
}

TEST_CASE("gaussian tangent needs the report mode") {
  auto fg = LocalKernel::analytic("gaussian", {{"width", 1.0}},
                                  DomainSet::interval(0.0, 1.0));
  // concave near the origin, so the strict path refuses
  try {
    polya_extension(fg, 2.0, no_measure());
    FAIL("expected not_convex");
  } catch (const error& e) {
    CHECK(e.code() == errc::not_convex);
  }
  PolyaOptions lax = no_measure();
  lax.report_only = true;
  auto cand = polya_extension(fg, 2.0, lax);
  CHECK(cand.warnings.size() == 1);
  CHECK(cand.pieces->value == std::exp(-1.0));
  CHECK(cand.pieces->slope == -2.0 * std::exp(-1.0));
  CHECK(cand.pieces->zero_abscissa == 1.5);
}

TEST_CASE("tangent continuation rejects bad shapes") {
  // increasing data
  {
    const std::size_t n = 101;
    UniformGrid g(-1.0, 2.0 / static_cast<double>(n - 1), n);
    std::vector<cplx> vals(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = std::abs(g.point(k));
      vals[k] = 1.0 + x * x;
    }
    auto f = LocalKernel::sampled(g, vals, DomainSet::interval(0.0, 1.0));
    try {
      polya_extension(f, 3.0, no_measure());
      FAIL("expected not_decreasing");
    } catch (const error& e) {
      CHECK(e.code() == errc::not_decreasing);
    }
  }
  // flat and positive at the edge: the tangent never reaches zero
  {
    auto f = LocalKernel::analytic("constant", {{"amplitude", 2.0}},
                                   DomainSet::interval(0.0, 1.0));
    try {
      polya_extension(f, 100.0, no_measure());
      FAIL("expected tangent_horizontal");
    } catch (const error& e) {
      CHECK(e.code() == errc::tangent_horizontal);
    }
  }
  // cutoff shorter than the tangent support
  try {
    polya_extension(exp_kernel(), 1.5, no_measure());
    FAIL("expected invalid_argument");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
}

TEST_CASE("sampled tables use the interpolant's edge slope") {
  const std::size_t n = 8193;
  UniformGrid g(-1.0, 2.0 / static_cast<double>(n - 1), n);
  std::vector<cplx> vals(n);
  for (std::size_t k = 0; k < n; ++k) vals[k] = std::exp(-std::abs(g.point(k)));
  auto f = LocalKernel::sampled(g, vals, DomainSet::interval(0.0, 1.0));
  auto cand = polya_extension(f, 2.0, no_measure());
  // the chord slope of the last table segment bounds what a table can say
  CHECK(cand.pieces->value == Catch::Approx(std::exp(-1.0)).margin(1e-12));
  CHECK(cand.pieces->slope == Catch::Approx(-std::exp(-1.0)).margin(1e-4));
  CHECK(cand.pieces->zero_abscissa == Catch::Approx(2.0).margin(3e-4));
}

TEST_CASE("zero padding the exponential fails positive definiteness") {
  auto out = zero_pad(exp_kernel());
  CHECK(out.candidate.provenance == ExtensionCandidate::provenance_t::zero_pad);
  CHECK(out.candidate.value(0.5).real() == std::exp(-0.5));
  CHECK(out.candidate.value(1.5) == cplx(0.0));
  CHECK(out.diagnosis.witness_found);
  CHECK(out.diagnosis.min_eigenvalue < -1e-3);
  CHECK(!out.diagnosis.witness_points.empty());
  CHECK(out.diagnosis.sets_checked >= 30);

  // the reported witness reproduces its eigenvalue
  auto v = check_candidate_pd(out.candidate, out.diagnosis.witness_points);
  CHECK(v.min_eigenvalue == Catch::Approx(out.diagnosis.min_eigenvalue).margin(1e-12));
}

TEST_CASE("zero padding the triangle stays positive definite") {
  auto tri = LocalKernel::analytic("triangle", {{"radius", 1.0}},
                                   DomainSet::interval(0.0, 1.0));
  auto out = zero_pad(tri);
  CHECK(!out.diagnosis.witness_found);
  CHECK(out.diagnosis.min_eigenvalue >= -1e-10);
  CHECK(out.diagnosis.witness_points.empty());
}

TEST_CASE("zero padding the split-domain kernel finds a witness") {
  // locally a triangle around each difference component, discontinuous once
  // padded, and the equispaced sweep exposes it
  auto dom = DomainSet({{-0.25, 0.25}, {0.75, 1.0}});
  auto f = LocalKernel::analytic("windowed_triangle", {{"cutoff", 0.5}}, dom);
  auto out = zero_pad(f);
  CHECK(out.diagnosis.witness_found);
  CHECK(out.diagnosis.min_eigenvalue <= -1e-3);

  // the 40-point progression at step 0.49 is itself a witness
  std::vector<double> pts(40);
  for (std::size_t k = 0; k < pts.size(); ++k)
    pts[k] = (static_cast<double>(k) - 19.5) * 0.49;
  auto v = check_candidate_pd(out.candidate, pts);
  CHECK(v.min_eigenvalue <= -1e-3);
}

TEST_CASE("zero pad diagnosis is deterministic") {
  auto a = zero_pad(exp_kernel());
  auto b = zero_pad(exp_kernel());
  CHECK(a.diagnosis.min_eigenvalue == b.diagnosis.min_eigenvalue);
  CHECK(a.diagnosis.witness_points == b.diagnosis.witness_points);
}

TEST_CASE("convex combinations stay extensions") {
  PolyaOptions opts;
  opts.density_nodes = (std::size_t{1} << 14) + 1;
  auto c2 = polya_extension(exp_kernel(), 2.0, opts);

  const double reach = 500.0;
  const std::size_t n = 20001;
  UniformGrid g(-reach, 2.0 * reach / static_cast<double>(n - 1), n);
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = g.point(k);
    vals[k] = 1.0 / (M_PI * (1.0 + t * t));
  }
  auto c1 = from_measure(Measure::gridded(g, std::move(vals)));

  std::vector<double> samples;
  for (int j = -9; j <= 9; ++j) samples.push_back(0.1 * static_cast<double>(j));
  auto f = exp_kernel();
  const double r1 = restriction_residual(c1, f, samples);
  const double r2 = restriction_residual(c2, f, samples);

  // endpoints reproduce the inputs exactly
  auto at1 = convex_combination(c1, c2, 1.0);
  for (double t : {-1.7, 0.4, 6.0})
    CHECK(at1.value(t) == c1.value(t));

  // interior residual bounded by the worse input; PD survives on random grids
  auto mid = convex_combination(c1, c2, 0.3);
  CHECK(restriction_residual(mid, f, samples) <= std::max(r1, r2) + 1e-15);
  philox_stream rng(99, 0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> pts(24);
    for (auto& p : pts) p = 8.0 * (2.0 * rng.uniform() - 1.0);
    CHECK(check_candidate_pd(mid, pts, 1e-8).pass);
  }

  // mismatched shapes drop the measure but keep the function
  ExtensionCandidate bare;
  bare.global_function = [](double) { return cplx(1.0); };
  auto dropped = convex_combination(c1, bare, 0.5);
  CHECK(!dropped.backing_measure);
  REQUIRE(dropped.warnings.size() == 1);
  CHECK(dropped.warnings[0].find("MeasureShapeMismatch") != std::string::npos);
  CHECK(std::abs(dropped.value(0.3) - (0.5 * c1.value(0.3) + 0.5)) < 1e-15);
}

TEST_CASE("convex combination merges discrete atoms") {
  auto a = from_measure(Measure::discrete({0.0, 1.0}, {0.5, 0.5}));
  auto b = from_measure(Measure::discrete({0.0, 2.0}, {0.25, 0.75}));
  auto c = convex_combination(a, b, 0.5);
  REQUIRE(static_cast<bool>(c.backing_measure));
  const Measure& m = *c.backing_measure;
  REQUIRE(m.positions == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(m.weights == std::vector<double>{0.375, 0.25, 0.375});
  CHECK(std::abs(c.value(1.3) - fourier_transform(m, 1.3)) < 1e-15);

  try {
    convex_combination(a, b, 1.5);
    FAIL("expected invalid_argument");
  } catch (const error& e) {
    CHECK(e.code() == errc::invalid_argument);
  }
}

TEST_CASE("compact support reporting") {
  auto two = from_measure(Measure::discrete({-1.0, 1.0}, {0.5, 0.5}));
  auto rep = compact_support_flag(two);
  CHECK(rep.compact);
  CHECK(rep.radius == 1.0);
  CHECK(!rep.grid_truncated);
  CHECK(rep.singleton_implied);

  PolyaOptions opts;
  opts.density_nodes = (std::size_t{1} << 13) + 1;
  auto polya = polya_extension(exp_kernel(), 2.0, opts);
  auto prep = compact_support_flag(polya);
  CHECK(prep.compact);
  CHECK(prep.grid_truncated);
  CHECK(prep.radius == std::abs(polya.backing_measure->grid.start));

  ExtensionCandidate bare;
  bare.global_function = [](double) { return cplx(1.0); };
  try {
    compact_support_flag(bare);
    FAIL("expected no_backing_measure");
  } catch (const error& e) {
    CHECK(e.code() == errc::no_backing_measure);
  }
}

TEST_CASE("measure-backed candidates pass global grids") {
  PolyaOptions opts;
  opts.density_nodes = (std::size_t{1} << 14) + 1;
  auto polya = polya_extension(exp_kernel(), 2.0, opts);
  philox_stream rng(7, 0);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<double> pts(20);
    for (auto& p : pts) p = 6.0 * (2.0 * rng.uniform() - 1.0);
    auto v = check_candidate_pd(polya, pts, 1e-8);
    CHECK(v.pass);
  }
}
