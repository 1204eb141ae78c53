// Copyright (c) 2026 the pdext authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Subcommands map onto the library modules; every run
// emits one JSON report (stdout, or --out where noted) that embeds the
// resolved configuration, so identical inputs give byte-identical reports.
// Exit codes: 0 success, 1 the mathematics said no (failed check, witness
// found, non-unique extension, budget exceeded), 2 usage or config errors.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdext/extend.hpp"
#include "pdext/gauss.hpp"
#include "pdext/kernel.hpp"
#include "pdext/measure.hpp"
#include "pdext/operators.hpp"
#include "pdext/represent.hpp"
#include "pdext/rkhs.hpp"
#include "pdext/spectral.hpp"

using nlohmann::json;
using namespace pdext;

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(errc c) {
  switch (c) {
    case errc::not_convex:
    case errc::not_decreasing:
    case errc::tangent_horizontal:
    case errc::not_psd:
    case errc::not_cnd:
    case errc::not_an_extension:
      return 1;  // a well-posed question with a negative answer
    default:
      return 2;  // the question itself was malformed
  }
}

struct GlobalOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 11;
  double tol = -1.0;
  unsigned threads = 0;
};

json load_config(const std::string& path) {
  if (path.empty()) throw usage_error("--config is required");
  std::ifstream in(path);
  if (!in.good()) throw usage_error("cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw usage_error(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw usage_error("config root must be a JSON object");
  return j;
}

void ensure_keys(const json& j, std::initializer_list<const char*> allowed,
                 const std::string& ctx) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed)
      if (it.key() == a) {
        ok = true;
        break;
      }
    if (!ok) throw usage_error("unknown key '" + it.key() + "' in " + ctx);
  }
}

double need_number(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw usage_error(std::string("missing numeric '") + key + "' in " + ctx);
  return j[key].get<double>();
}

DomainSet domain_from_json(const json& cfg) {
  if (!cfg.contains("domain"))
    throw usage_error("config needs a 'domain' object");
  const json& d = cfg["domain"];
  ensure_keys(d, {"intervals"}, "domain");
  if (!d.contains("intervals") || !d["intervals"].is_array() ||
      d["intervals"].empty())
    throw usage_error("domain.intervals must be a nonempty array");
  std::vector<std::pair<double, double>> iv;
  for (const auto& e : d["intervals"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number())
      throw usage_error("each domain interval must be [a, b]");
    iv.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return DomainSet(std::move(iv));
}

// CSV kernel ingestion: rows may arrive shuffled, values may carry a small
// Hermitian defect. Sort, symmetrize, report the defect.
LocalKernel ingest_kernel_csv(const std::string& path, DomainSet domain,
                              double* sym_defect) {
  const auto rows = read_csv_rows(path);
  if (rows.empty()) throw usage_error("empty kernel file " + path);
  std::vector<std::pair<double, cplx>> table(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != 3)
      throw usage_error("expected z,re,im rows in " + path);
    table[r] = {parse_double(rows[r][0]),
                cplx(parse_double(rows[r][1]), parse_double(rows[r][2]))};
  }
  std::stable_sort(table.begin(), table.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::size_t n = table.size();
  std::vector<double> z(n);
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    z[k] = table[k].first;
    v[k] = table[k].second;
  }
  require(is_uniform(z), errc::non_uniform_grid,
          "sampled kernel needs a uniform z grid in " + path);
  double defect = 0.0;
  std::vector<cplx> sym(n);
  for (std::size_t k = 0; k < n; ++k) {
    sym[k] = 0.5 * (v[k] + std::conj(v[n - 1 - k]));
    defect = std::max(defect, std::abs(v[k] - sym[k]));
  }
  if (sym_defect) *sym_defect = defect;
  const double h = (z.back() - z.front()) / static_cast<double>(n - 1);
  return LocalKernel::sampled(UniformGrid(z.front(), h, n), std::move(sym),
                              std::move(domain));
}

LocalKernel kernel_from_json(const json& cfg, double* sym_defect = nullptr) {
  if (!cfg.contains("kernel"))
    throw usage_error("config needs a 'kernel' object");
  const json& k = cfg["kernel"];
  ensure_keys(k, {"type", "params", "path"}, "kernel");
  if (!k.contains("type") || !k["type"].is_string())
    throw usage_error("kernel.type must be a string");
  const std::string type = k["type"].get<std::string>();
  DomainSet domain = domain_from_json(cfg);
  if (type == "sampled") {
    if (!k.contains("path") || !k["path"].is_string())
      throw usage_error("sampled kernel needs kernel.path");
    return ingest_kernel_csv(k["path"].get<std::string>(), std::move(domain),
                             sym_defect);
  }
  Params params;
  if (k.contains("params")) {
    if (!k["params"].is_object())
      throw usage_error("kernel.params must be an object");
    for (auto it = k["params"].begin(); it != k["params"].end(); ++it) {
      if (!it.value().is_number())
        throw usage_error("kernel parameter '" + it.key() +
                          "' must be a number");
      params[it.key()] = it.value().get<double>();
    }
  }
  if (sym_defect) *sym_defect = 0.0;
  return LocalKernel::analytic(type, std::move(params), std::move(domain));
}

std::shared_ptr<const Measure> measure_from_json(const json& spec,
                                                 const LocalKernel& f,
                                                 const std::string& ctx) {
  ensure_keys(spec, {"path", "kind", "cauchy", "uniform_density", "polya"},
              ctx);
  if (spec.contains("path")) {
    const std::string kind =
        spec.contains("kind") ? spec["kind"].get<std::string>() : "gridded";
    Measure::kind_t k;
    if (kind == "gridded")
      k = Measure::kind_t::gridded_density;
    else if (kind == "discrete")
      k = Measure::kind_t::discrete;
    else
      throw usage_error(ctx + ".kind must be 'gridded' or 'discrete'");
    return std::make_shared<const Measure>(
        measure_from_csv(spec["path"].get<std::string>(), k));
  }
  if (spec.contains("cauchy")) {
    const json& c = spec["cauchy"];
    ensure_keys(c, {"reach", "nodes"}, ctx + ".cauchy");
    const double reach = need_number(c, "reach", ctx + ".cauchy");
    const auto nodes =
        static_cast<std::size_t>(need_number(c, "nodes", ctx + ".cauchy"));
    if (nodes < 3) throw usage_error(ctx + ".cauchy.nodes too small");
    UniformGrid g(-reach, 2.0 * reach / static_cast<double>(nodes - 1), nodes);
    std::vector<double> vals(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double t = g.point(j);
      vals[j] = 1.0 / (M_PI * (1.0 + t * t));
    }
    return std::make_shared<const Measure>(Measure::gridded(g, std::move(vals)));
  }
  if (spec.contains("uniform_density")) {
    const json& c = spec["uniform_density"];
    ensure_keys(c, {"lo", "hi", "value", "nodes"}, ctx + ".uniform_density");
    const double lo = need_number(c, "lo", ctx);
    const double hi = need_number(c, "hi", ctx);
    const double value = need_number(c, "value", ctx);
    const auto nodes = static_cast<std::size_t>(need_number(c, "nodes", ctx));
    if (!(hi > lo) || nodes < 3) throw usage_error("bad " + ctx);
    UniformGrid g(lo, (hi - lo) / static_cast<double>(nodes - 1), nodes);
    return std::make_shared<const Measure>(
        Measure::gridded(g, std::vector<double>(nodes, value)));
  }
  if (spec.contains("polya")) {
    const json& c = spec["polya"];
    ensure_keys(c, {"cutoff", "nodes"}, ctx + ".polya");
    PolyaOptions opts;
    if (c.contains("nodes"))
      opts.density_nodes =
          static_cast<std::size_t>(need_number(c, "nodes", ctx));
    auto cand = polya_extension(f, need_number(c, "cutoff", ctx), opts);
    return cand.backing_measure;
  }
  throw usage_error(ctx + " needs one of path/cauchy/uniform_density/polya");
}

json verdict_json(const Verdict& v) {
  json j;
  j["pass"] = v.pass;
  j["min_eig"] = v.min_eigenvalue;
  j["max_eig"] = v.max_eigenvalue;
  return j;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// check/gram/unique/bochner/scatter/spectral write their JSON to --out when
// given; extend and gp use --out for CSV data and always report on stdout.
void emit_report(const std::string& out_path, const json& report) {
  const std::string body = report.dump(2) + "\n";
  if (!out_path.empty())
    write_text_file(out_path, body);
  else
    std::fputs(body.c_str(), stdout);
}

std::vector<double> points_from_json(const json& spec, const DomainSet& dom,
                                     std::uint64_t seed, std::uint64_t stream,
                                     const std::string& ctx) {
  ensure_keys(spec, {"list", "uniform", "random"}, ctx);
  if (spec.contains("list")) {
    std::vector<double> pts;
    for (const auto& e : spec["list"]) {
      if (!e.is_number()) throw usage_error(ctx + ".list must hold numbers");
      pts.push_back(e.get<double>());
    }
    if (pts.empty()) throw usage_error(ctx + ".list must be nonempty");
    return pts;
  }
  // defaulted ranges shrink 1% from the component ends so point differences
  // stay strictly inside the open difference set
  const auto [a0, b0] = dom.intervals.front();
  const double margin = 0.01 * (b0 - a0);
  if (spec.contains("uniform")) {
    const json& u = spec["uniform"];
    ensure_keys(u, {"lo", "hi", "count"}, ctx + ".uniform");
    const auto n = static_cast<std::size_t>(need_number(u, "count", ctx));
    const double lo = u.contains("lo") ? u["lo"].get<double>() : a0 + margin;
    const double hi = u.contains("hi") ? u["hi"].get<double>() : b0 - margin;
    if (n < 2 || !(hi > lo)) throw usage_error("bad " + ctx + ".uniform");
    std::vector<double> pts(n);
    for (std::size_t k = 0; k < n; ++k)
      pts[k] = lo + (hi - lo) * static_cast<double>(k) /
                        static_cast<double>(n - 1);
    return pts;
  }
  if (spec.contains("random")) {
    const json& u = spec["random"];
    ensure_keys(u, {"lo", "hi", "count"}, ctx + ".random");
    const auto n = static_cast<std::size_t>(need_number(u, "count", ctx));
    const double lo = u.contains("lo") ? u["lo"].get<double>() : a0 + margin;
    const double hi = u.contains("hi") ? u["hi"].get<double>() : b0 - margin;
    if (n == 0 || !(hi > lo)) throw usage_error("bad " + ctx + ".random");
    philox_stream rng(seed, stream);
    std::vector<double> pts(n);
    for (auto& p : pts) p = lo + (hi - lo) * rng.uniform();
    return pts;
  }
  throw usage_error(ctx + " needs one of list/uniform/random");
}

// ---------------------------------------------------------------- check ----

int run_check(const GlobalOpts& g) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg, {"kernel", "domain", "checks"}, "config");
  double sym_defect = 0.0;
  auto f = kernel_from_json(cfg, &sym_defect);

  json checks = json::array();
  if (cfg.contains("checks")) {
    if (!cfg["checks"].is_array() || cfg["checks"].empty())
      throw usage_error("checks must be a nonempty array");
    checks = cfg["checks"];
  } else {
    checks.push_back({{"type", "pd"},
                      {"points", {{"uniform", {{"count", 16}}}}}});
  }

  bool all_pass = true;
  json results = json::array();
  std::uint64_t stream = 1000;
  for (const auto& c : checks) {
    ensure_keys(c, {"type", "points", "tol"}, "checks[]");
    if (!c.contains("type") || !c["type"].is_string())
      throw usage_error("each check needs a string 'type'");
    const std::string type = c["type"].get<std::string>();
    const json pspec = c.contains("points")
                           ? c["points"]
                           : json{{"uniform", {{"count", 16}}}};
    auto pts = points_from_json(pspec, f.domain, g.seed, stream++, "points");
    const double tol = c.contains("tol") ? c["tol"].get<double>() : g.tol;
    Verdict v;
    if (type == "pd")
      v = check_positive_definite(f, pts, tol);
    else if (type == "cnd")
      v = check_conditionally_negative(f, pts, tol);
    else if (type == "reflection")
      v = check_reflection_positive(f, pts, tol);
    else
      throw usage_error("unknown check type '" + type + "'");
    json r = verdict_json(v);
    r["type"] = type;
    r["points"] = pts.size();
    results.push_back(std::move(r));
    all_pass = all_pass && v.pass;
  }

  json report;
  report["command"] = "check";
  report["config"] = cfg;
  report["seed"] = g.seed;
  if (sym_defect > 0.0) report["symmetry_defect"] = sym_defect;
  report["checks"] = results;
  report["pass"] = all_pass;
  emit_report(g.out_path, report);
  return all_pass ? 0 : 1;
}

// ----------------------------------------------------------------- gram ----

int run_gram(const GlobalOpts& g) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg, {"kernel", "domain", "anchors", "membership"}, "config");
  auto f = kernel_from_json(cfg);
  const auto [a0, b0] = f.domain.intervals.front();

  AnchorSet anchors;
  if (cfg.contains("anchors")) {
    const json& a = cfg["anchors"];
    ensure_keys(a, {"count", "points"}, "anchors");
    if (a.contains("points")) {
      std::vector<double> pts;
      for (const auto& e : a["points"]) pts.push_back(e.get<double>());
      anchors = AnchorSet(std::move(pts));
    } else {
      anchors = AnchorSet::uniform_interior(
          a0, b0, static_cast<std::size_t>(need_number(a, "count", "anchors")));
    }
  } else {
    anchors = AnchorSet::uniform_interior(a0, b0, 16);
  }

  const auto k = gram_matrix(f, anchors.points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(k,
                                                     Eigen::EigenvaluesOnly);
  json report;
  report["command"] = "gram";
  report["config"] = cfg;
  report["anchors"] = anchors.size();
  report["eig_min"] = es.eigenvalues().minCoeff();
  report["eig_max"] = es.eigenvalues().maxCoeff();

  if (cfg.contains("membership")) {
    const json& m = cfg["membership"];
    ensure_keys(m, {"translate", "schedule"}, "membership");
    const double a = need_number(m, "translate", "membership");
    auto target = [&](double x) { return f(x - a); };
    std::vector<std::size_t> schedule;
    if (m.contains("schedule"))
      for (const auto& e : m["schedule"])
        schedule.push_back(e.get<std::size_t>());
    else
      schedule = {8, 16, 32, 64};
    json levels = json::array();
    for (std::size_t n : schedule) {
      auto lv = membership_report(
          f, target, AnchorSet::uniform_interior(a0, b0, n));
      levels.push_back({{"anchors", n},
                        {"q_value", lv.q},
                        {"range_defect", lv.range_defect},
                        {"flag", lv.ill_conditioned}});
    }
    report["membership"] = {{"translate", a}, {"levels", levels}};
  }
  emit_report(g.out_path, report);
  return 0;
}

// --------------------------------------------------------------- unique ----

int run_unique(const GlobalOpts& g) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg, {"kernel", "domain", "schedule", "divergence_ratio"},
              "config");
  auto f = kernel_from_json(cfg);
  std::vector<std::size_t> schedule = {8, 16, 32, 64};
  if (cfg.contains("schedule")) {
    schedule.clear();
    for (const auto& e : cfg["schedule"])
      schedule.push_back(e.get<std::size_t>());
  }
  const double ratio = cfg.contains("divergence_ratio")
                           ? cfg["divergence_ratio"].get<double>()
                           : 10.0;
  auto rep = uniqueness_diagnostic(f, schedule, ratio);

  json basis = json::array();
  for (const auto& b : rep.detail.basis) {
    json levels = json::array();
    for (const auto& lv : b.levels)
      levels.push_back({{"anchors", lv.anchors},
                        {"q_value", lv.q},
                        {"range_defect", lv.range_defect},
                        {"flag", lv.ill_conditioned}});
    basis.push_back({{"label", b.label},
                     {"levels", levels},
                     {"growth", b.growth},
                     {"member", b.member}});
  }
  json report;
  report["command"] = "unique";
  report["config"] = cfg;
  report["def_dim"] = rep.def_dim;
  report["unique"] = rep.unique;
  report["basis"] = basis;
  emit_report(g.out_path, report);
  return rep.unique ? 0 : 1;
}

// --------------------------------------------------------------- extend ----

int run_extend(const GlobalOpts& g, const std::string& method,
               const std::string& csv_out) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg,
              {"kernel", "domain", "cutoff", "polya", "measure",
               "output_grid", "pd_probe"},
              "config");
  auto f = kernel_from_json(cfg);

  json report;
  report["command"] = "extend";
  report["method"] = method;
  report["config"] = cfg;
  report["seed"] = g.seed;

  ExtensionCandidate cand;
  int code = 0;
  if (method == "polya") {
    PolyaOptions opts;
    if (cfg.contains("polya")) {
      const json& p = cfg["polya"];
      ensure_keys(p, {"report_only", "with_measure", "density_nodes"},
                  "polya");
      if (p.contains("report_only"))
        opts.report_only = p["report_only"].get<bool>();
      if (p.contains("with_measure"))
        opts.with_measure = p["with_measure"].get<bool>();
      if (p.contains("density_nodes"))
        opts.density_nodes =
            static_cast<std::size_t>(p["density_nodes"].get<double>());
    }
    const double cutoff = need_number(cfg, "cutoff", "config");
    cand = polya_extension(f, cutoff, opts);
    json pieces;
    if (cand.pieces) {
      pieces["corner"] = cand.pieces->corner;
      pieces["value"] = cand.pieces->value;
      pieces["slope"] = cand.pieces->slope;
      pieces["zero_abscissa"] = cand.pieces->zero_abscissa;
    }
    report["pieces"] = pieces;
    report["truncation_budget"] = cand.truncation_budget;
    if (cand.backing_measure)
      report["measure_mass"] = total_mass(*cand.backing_measure);
    report["verdict"] = cand.warnings.empty() ? "ok" : "warnings";
  } else if (method == "measure") {
    if (!cfg.contains("measure"))
      throw usage_error("measure method needs a 'measure' object");
    auto mu = measure_from_json(cfg["measure"], f, "measure");
    cand = from_measure(*mu);
    report["measure_mass"] = total_mass(*mu);
    // how well the transform restricts to F where both are defined
    std::vector<double> zs;
    const auto [a0, b0] = f.domain.intervals.front();
    for (int k = 0; k <= 8; ++k)
      zs.push_back((b0 - a0) * (static_cast<double>(k) / 8.0 - 0.5) * 1.8);
    double res = 0.0;
    for (double z : zs)
      if (difference_set_contains(f.domain, z))
        res = std::max(res, std::abs(cand.value(z) - f(z)));
    report["restriction_residual"] = res;
    report["verdict"] = "ok";
  } else if (method == "zero-pad") {
    auto zp = zero_pad(f, g.seed);
    cand = zp.candidate;
    json w = json::array();
    for (double x : zp.diagnosis.witness_points) w.push_back(x);
    report["witness_points"] = w;
    report["min_eig"] = zp.diagnosis.min_eigenvalue;
    report["sets_checked"] = zp.diagnosis.sets_checked;
    report["verdict"] =
        zp.diagnosis.witness_found ? "witness" : "no_witness";
    if (zp.diagnosis.witness_found) code = 1;
  } else {
    throw usage_error("unknown extend method '" + method + "'");
  }
  for (const auto& w : cand.warnings) report["warnings"].push_back(w);

  if (!csv_out.empty()) {
    double lo = -4.0, hi = 4.0;
    std::size_t count = 1601;
    if (cand.pieces) {
      hi = 1.25 * cand.pieces->zero_abscissa;
      lo = -hi;
    }
    if (cfg.contains("output_grid")) {
      const json& og = cfg["output_grid"];
      ensure_keys(og, {"lo", "hi", "count"}, "output_grid");
      lo = need_number(og, "lo", "output_grid");
      hi = need_number(og, "hi", "output_grid");
      count = static_cast<std::size_t>(need_number(og, "count", "output_grid"));
      if (!(hi > lo) || count < 2) throw usage_error("bad output_grid");
    }
    std::string body;
    for (std::size_t k = 0; k < count; ++k) {
      const double t = lo + (hi - lo) * static_cast<double>(k) /
                                static_cast<double>(count - 1);
      const cplx v = cand.value(t);
      body += format_double(t) + "," + format_double(v.real()) + "," +
              format_double(v.imag()) + "\n";
    }
    write_text_file(csv_out, body);
    report["candidate_csv"] = csv_out;
  }
  emit_report("", report);
  return code;
}

// -------------------------------------------------------------- bochner ----

int run_bochner(const GlobalOpts& g) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg, {"kernel", "domain", "bumps", "nodes"}, "config");
  auto f = kernel_from_json(cfg);

  std::vector<BumpFunction> basis;
  if (cfg.contains("bumps") && cfg["bumps"].is_array()) {
    for (const auto& b : cfg["bumps"]) {
      ensure_keys(b, {"center", "width"}, "bumps[]");
      basis.emplace_back(need_number(b, "center", "bumps[]"),
                         need_number(b, "width", "bumps[]"));
    }
  } else {
    std::size_t count = 4;
    if (cfg.contains("bumps")) {
      ensure_keys(cfg["bumps"], {"count"}, "bumps");
      count = static_cast<std::size_t>(
          need_number(cfg["bumps"], "count", "bumps"));
    }
    if (count < 1) throw usage_error("bumps.count must be positive");
    const auto [a0, b0] = f.domain.intervals.front();
    const double span = b0 - a0;
    for (std::size_t k = 0; k < count; ++k) {
      const double c =
          a0 + span * (static_cast<double>(k) + 1.0) /
                   (static_cast<double>(count) + 1.0);
      basis.emplace_back(c, 0.4 * span / (static_cast<double>(count) + 1.0));
    }
  }
  QuadratureSpec q;
  if (cfg.contains("nodes"))
    q = QuadratureSpec(
        static_cast<std::size_t>(cfg["nodes"].get<double>()));

  const auto pairs = hermitian_defect_report(f, basis, q, g.threads);
  double worst = 0.0;
  json records = json::array();
  for (const auto& p : pairs) {
    records.push_back({{"pair", {p.i, p.k}},
                       {"defect", p.defect},
                       {"nodes", q.nodes}});
    worst = std::max(worst, p.defect);
  }
  json report;
  report["command"] = "bochner";
  report["config"] = cfg;
  report["records"] = records;
  report["worst_defect"] = worst;
  report["bumps"] = basis.size();
  emit_report(g.out_path, report);
  return (g.tol >= 0.0 && worst > g.tol) ? 1 : 0;
}

// ------------------------------------------------------------------- gp ----

int run_gp(const GlobalOpts& g, std::size_t n_paths_flag,
           const std::string& csv_out) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg, {"kernel", "domain", "mode", "grid", "n_paths", "jitter"},
              "config");
  auto f = kernel_from_json(cfg);
  const std::string mode =
      cfg.contains("mode") ? cfg["mode"].get<std::string>() : "stationary";

  if (!cfg.contains("grid")) throw usage_error("gp config needs 'grid'");
  const json& gr = cfg["grid"];
  ensure_keys(gr, {"lo", "hi", "count"}, "grid");
  const double lo = need_number(gr, "lo", "grid");
  const double hi = need_number(gr, "hi", "grid");
  const auto count = static_cast<std::size_t>(need_number(gr, "count", "grid"));
  if (!(hi > lo) || count < 2) throw usage_error("bad gp grid");
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = lo + (hi - lo) * static_cast<double>(k) /
                       static_cast<double>(count - 1);

  std::size_t n_paths = 1000;
  if (cfg.contains("n_paths"))
    n_paths = static_cast<std::size_t>(cfg["n_paths"].get<double>());
  if (n_paths_flag > 0) n_paths = n_paths_flag;
  const double jitter =
      cfg.contains("jitter") ? cfg["jitter"].get<double>() : -1.0;

  GpPaths paths;
  if (mode == "stationary")
    paths = sample_stationary(f, grid, n_paths, g.seed, jitter, g.threads);
  else if (mode == "increment")
    paths = sample_stationary_increment(f, grid, n_paths, g.seed, jitter,
                                        g.threads);
  else
    throw usage_error("gp mode must be 'stationary' or 'increment'");

  json report;
  report["command"] = "gp";
  report["config"] = cfg;
  report["mode"] = mode;
  report["n_paths"] = n_paths;
  report["seed"] = g.seed;
  if (n_paths >= 2) {
    const auto c = empirical_covariance(paths);
    double err = 0.0;
    for (std::size_t j = 0; j < count; ++j)
      for (std::size_t k = 0; k < count; ++k) {
        double want;
        if (mode == "stationary") {
          want = f(grid[j] - grid[k]).real();
        } else {
          want = 0.5 * (f(grid[j]).real() + f(grid[k]).real() -
                        f(grid[j] - grid[k]).real());
        }
        err = std::max(err, std::abs(c(static_cast<Eigen::Index>(j),
                                       static_cast<Eigen::Index>(k)) -
                                     want));
      }
    report["max_cov_error"] = err;
  }
  if (!csv_out.empty()) {
    std::string body;
    for (std::size_t k = 0; k < count; ++k)
      body += (k ? "," : "") + format_double(grid[k]);
    body += "\n";
    for (Eigen::Index r = 0; r < paths.paths.rows(); ++r) {
      for (Eigen::Index k = 0; k < paths.paths.cols(); ++k)
        body += (k ? "," : "") + format_double(paths.paths(r, k));
      body += "\n";
    }
    write_text_file(csv_out, body);
    report["paths_csv"] = csv_out;
  }
  emit_report("", report);
  return 0;
}

// -------------------------------------------------------------- scatter ----

int run_scatter(const GlobalOpts& g, const std::string& mu_path,
                const std::string& nu_path, std::size_t anchors_flag) {
  json cfg = load_config(g.config_path);
  ensure_keys(cfg,
              {"kernel", "domain", "mu", "nu", "anchors", "probes",
               "translations", "budget"},
              "config");
  auto f = kernel_from_json(cfg);

  json mu_spec = cfg.contains("mu") ? cfg["mu"] : json::object();
  json nu_spec = cfg.contains("nu") ? cfg["nu"] : json::object();
  if (!mu_path.empty()) mu_spec = {{"path", mu_path}};
  if (!nu_path.empty()) nu_spec = {{"path", nu_path}};
  auto mu = measure_from_json(mu_spec, f, "mu");
  auto nu = measure_from_json(nu_spec, f, "nu");

  const auto [a0, b0] = f.domain.intervals.front();
  std::size_t n_anchors = 8;
  std::vector<double> anchor_pts;
  if (cfg.contains("anchors")) {
    if (cfg["anchors"].is_array())
      for (const auto& e : cfg["anchors"]) anchor_pts.push_back(e.get<double>());
    else
      n_anchors = static_cast<std::size_t>(cfg["anchors"].get<double>());
  }
  if (anchors_flag > 0) {
    anchor_pts.clear();
    n_anchors = anchors_flag;
  }
  if (anchor_pts.empty()) {
    if (n_anchors < 2) throw usage_error("need at least 2 anchors");
    for (std::size_t k = 0; k < n_anchors; ++k)
      anchor_pts.push_back(a0 + (b0 - a0) * static_cast<double>(k) /
                                    static_cast<double>(n_anchors - 1));
  }

  std::vector<SpectralVector> probes;
  json probe_list = json::array();
  if (cfg.contains("probes"))
    probe_list = cfg["probes"];
  else
    probe_list.push_back(0.0);
  for (const auto& e : probe_list)
    probes.push_back(embed_gamma(e.get<double>(), mu));

  ScatterOptions opts;
  if (cfg.contains("translations")) {
    opts.translations.clear();
    for (const auto& e : cfg["translations"])
      opts.translations.push_back(e.get<double>());
  }
  if (cfg.contains("budget")) opts.residual_budget = cfg["budget"].get<double>();

  auto rep = scattering_operator(f, mu, nu, AnchorSet(anchor_pts), probes,
                                 opts);

  json report;
  report["command"] = "scatter";
  report["config"] = cfg;
  report["anchors"] = rep.anchors;
  report["probes"] = rep.probes;
  report["residual_mu"] = rep.residual_mu;
  report["residual_nu"] = rep.residual_nu;
  report["translations"] = rep.translations;
  report["defects"] = rep.defects;
  report["worst_defect"] = rep.worst_defect;
  report["gamma_residuals"] = rep.gamma_residuals;
  report["rank_deficient"] = rep.rank_deficient;
  json samples = json::array();
  for (const auto& [s, v] : rep.multiplier_samples)
    samples.push_back({{"s", s}, {"value", complex_json(v)}});
  report["multiplier_samples"] = samples;
  report["multiplier_gaps"] = rep.multiplier_gaps;
  emit_report(g.out_path, report);
  return 0;
}

// ------------------------------------------------------------- spectral ----

std::vector<double> lambda_pattern(const std::string& pattern, double range) {
  std::vector<double> ls;
  if (pattern == "quarter") {
    for (int k = static_cast<int>(std::ceil(-range)); k <= range; ++k) {
      ls.push_back(k);
      if (k + 0.25 <= range) ls.push_back(k + 0.25);
    }
  } else if (pattern == "half") {
    for (int k = static_cast<int>(std::ceil(-2.0 * range));
         0.5 * k <= range; ++k)
      ls.push_back(0.5 * k);
  } else {
    throw usage_error("lambda pattern must be 'quarter' or 'half'");
  }
  return ls;
}

DomainSet omega_from_string(const std::string& s) {
  std::vector<std::pair<double, double>> iv;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto semi = s.find(';', pos);
    const std::string part =
        s.substr(pos, semi == std::string::npos ? std::string::npos
                                                : semi - pos);
    const auto comma = part.find(',');
    if (comma == std::string::npos)
      throw usage_error("omega intervals look like 'a,b;c,d'");
    iv.emplace_back(parse_double(part.substr(0, comma)),
                    parse_double(part.substr(comma + 1)));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (iv.empty()) throw usage_error("empty omega");
  return DomainSet(std::move(iv));
}

int run_spectral(const GlobalOpts& g, const std::string& omega_str,
                 const std::string& pattern, double range) {
  json cfg = g.config_path.empty() ? json::object() : load_config(g.config_path);
  ensure_keys(cfg,
              {"omega", "lambda_pattern", "range", "lambdas", "nodes"},
              "config");

  DomainSet omega = DomainSet::interval(0.0, 1.0);
  if (cfg.contains("omega")) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& e : cfg["omega"])
      iv.emplace_back(e[0].get<double>(), e[1].get<double>());
    omega = DomainSet(std::move(iv));
  }
  if (!omega_str.empty()) omega = omega_from_string(omega_str);

  std::vector<double> lambdas;
  if (cfg.contains("lambdas"))
    for (const auto& e : cfg["lambdas"]) lambdas.push_back(e.get<double>());
  std::string pat = pattern;
  if (pat.empty() && cfg.contains("lambda_pattern"))
    pat = cfg["lambda_pattern"].get<std::string>();
  double rng = range;
  if (rng <= 0.0 && cfg.contains("range")) rng = cfg["range"].get<double>();
  if (rng <= 0.0) rng = 5.0;
  if (!pat.empty()) lambdas = lambda_pattern(pat, rng);
  if (lambdas.empty()) throw usage_error("no frequencies specified");

  std::size_t nodes = 2049;
  if (cfg.contains("nodes"))
    nodes = static_cast<std::size_t>(cfg["nodes"].get<double>());

  ExponentialFamily fam(omega, lambdas);
  auto gram = exponential_gram(fam);
  double off = 0.0;
  for (Eigen::Index j = 0; j < gram.rows(); ++j)
    for (Eigen::Index k = 0; k < gram.cols(); ++k)
      if (j != k) off = std::max(off, std::abs(gram(j, k)));

  const double amp = 1.0 / std::sqrt(fam.measure());
  json defects = json::array();
  for (double l0 : lambdas) {
    auto fn = sample_sections(omega, nodes, [&](double t) {
      return std::polar(amp, 2.0 * M_PI * l0 * t);
    });
    defects.push_back(
        {{"lambda", l0}, {"defect", parseval_defect(fam, fn)}});
  }

  json report;
  report["command"] = "spectral";
  report["config"] = cfg;
  report["lambdas"] = lambdas.size();
  report["max_offdiag"] = off;
  report["parseval_defects"] = defects;
  emit_report(g.out_path, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally defined positive definite functions: checks, "
               "extensions, representations"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--config", g.config_path, "JSON config file");
  app.add_option("--out", g.out_path, "output path (JSON report or CSV)");
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--tol", g.tol, "tolerance override");
  app.add_option("--threads", g.threads, "worker threads (0 = auto)");

  auto* c_check = app.add_subcommand("check", "definiteness checks");
  auto* c_gram = app.add_subcommand("gram", "anchor Gram and membership");
  auto* c_unique = app.add_subcommand("unique", "extension uniqueness");
  auto* c_extend = app.add_subcommand("extend", "build candidate extensions");
  std::string method;
  c_extend->add_option("--method", method, "polya | measure | zero-pad")
      ->required();
  auto* c_bochner = app.add_subcommand("bochner", "windowed-system defects");
  auto* c_gp = app.add_subcommand("gp", "Gaussian path sampling");
  std::size_t n_paths_flag = 0;
  c_gp->add_option("--paths", n_paths_flag, "number of paths");
  auto* c_scatter = app.add_subcommand("scatter", "compare two extensions");
  std::string mu_path, nu_path;
  std::size_t anchors_flag = 0;
  c_scatter->add_option("--mu", mu_path, "first measure CSV");
  c_scatter->add_option("--nu", nu_path, "second measure CSV");
  c_scatter->add_option("--anchors", anchors_flag, "anchor count");
  auto* c_spectral = app.add_subcommand("spectral", "exponential families");
  std::string omega_str, pattern;
  double range = 0.0;
  c_spectral->add_option("--omega", omega_str, "intervals as 'a,b;c,d'");
  c_spectral->add_option("--lambda-pattern", pattern, "quarter | half");
  c_spectral->add_option("--range", range, "frequency window half-width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (c_check->parsed()) return run_check(g);
    if (c_gram->parsed()) return run_gram(g);
    if (c_unique->parsed()) return run_unique(g);
    if (c_extend->parsed()) return run_extend(g, method, g.out_path);
    if (c_bochner->parsed()) return run_bochner(g);
    if (c_gp->parsed()) return run_gp(g, n_paths_flag, g.out_path);
    if (c_scatter->parsed())
      return run_scatter(g, mu_path, nu_path, anchors_flag);
    if (c_spectral->parsed())
      return run_spectral(g, omega_str, pattern, range);
  } catch (const usage_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
