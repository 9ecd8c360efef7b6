#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "czt/errors.hpp"
#include "czt/extension.hpp"
#include "czt/seminorm.hpp"
#include "czt/singular.hpp"
#include "czt/t1.hpp"
#include "czt/whitney.hpp"

namespace czt::cli {
namespace {

const json& params(const RunContext& ctx) {
  static const json empty = json::object();
  if (!ctx.config.contains("params")) return empty;
  const json& p = ctx.config.at("params");
  if (!p.is_object()) throw ConfigError("config: 'params' must be an object");
  return p;
}

// Errors while reading descriptors are configuration errors, whatever the
// constructor threw.
template <class F>
auto descriptor(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("config: invalid " + what + ": " + e.what());
  }
}

Domain domain_of(const RunContext& ctx) {
  if (!ctx.config.contains("domain")) throw_config_missing("domain");
  return descriptor("domain", [&] { return domain_from_json(ctx.config.at("domain")); });
}

Kernel kernel_of(const json& j) {
  return descriptor("kernel", [&] { return kernel_from_json(j); });
}

Kernel kernel_of(const RunContext& ctx) {
  if (!ctx.config.contains("kernel")) throw_config_missing("kernel");
  return kernel_of(ctx.config.at("kernel"));
}

Modulus modulus_of(const json& j) {
  return descriptor("modulus", [&] { return modulus_from_json(j); });
}

Modulus modulus_of(const RunContext& ctx) {
  if (!ctx.config.contains("modulus")) throw_config_missing("modulus");
  return modulus_of(ctx.config.at("modulus"));
}

std::uint64_t seed_of(const RunContext& ctx) {
  if (ctx.seed) return *ctx.seed;
  return optional<std::uint64_t>(ctx.config, "seed", 1);
}

double tol_of(const RunContext& ctx, double fallback) {
  if (ctx.tol) return *ctx.tol;
  const double t = optional<double>(params(ctx), "tol", fallback);
  if (!(t > 0.0)) throw ConfigError("config: tol must be positive");
  return t;
}

// {"type":"constant","value":c} | {"type":"coordinate","axis":0|1} |
// {"type":"phi_tau","modulus":{...},"tau":[x,y]}, optionally "restricted":true.
ScalarField field_of(const RunContext& ctx, const Domain& d) {
  if (!ctx.config.contains("field")) throw_config_missing("field");
  const json& j = ctx.config.at("field");
  const auto type = required<std::string>(j, "type");
  ScalarField f;
  if (type == "constant") {
    f = fields::constant(required<double>(j, "value"));
  } else if (type == "coordinate") {
    const int axis = required<int>(j, "axis");
    if (axis != 0 && axis != 1) throw ConfigError("config: coordinate axis must be 0 or 1");
    f = fields::coordinate(axis);
  } else if (type == "phi_tau") {
    if (!j.contains("modulus")) throw_config_missing("modulus");
    if (!j.contains("tau")) throw_config_missing("tau");
    f = fields::phi_tau(modulus_of(j.at("modulus")), point_from_json(j.at("tau")));
  } else {
    throw ConfigError("config: unknown field type '" + type + "'");
  }
  if (optional<bool>(j, "restricted", false)) f = fields::restricted(std::move(f), d);
  return f;
}

class Output {
 public:
  Output(const RunContext& ctx, std::string command) : ctx_(ctx), command_(std::move(command)) {}

  void plan(const std::string& file) { files_.push_back(file); }

  // Prints the plan on a dry run and reports whether to stop.
  bool dry(const json& resolved) const {
    if (!ctx_.dry_run) return false;
    json p;
    p["command"] = command_;
    p["resolved"] = resolved;
    p["out"] = ctx_.out.string();
    p["files"] = files_;
    std::cout << p.dump(2) << "\n";
    return true;
  }

  std::ofstream open(const std::string& file) const {
    std::filesystem::create_directories(ctx_.out);
    std::ofstream os(ctx_.out / file);
    if (!os) throw ConfigError("cannot write " + (ctx_.out / file).string());
    return os;
  }

  void write_json(const std::string& file, const json& j, int indent = 2) const {
    auto os = open(file);
    os << j.dump(indent) << "\n";
  }

  // verdict.json plus a one-line summary on stdout.
  int verdict(json v, bool pass) const {
    v["command"] = command_;
    v["pass"] = pass;
    write_json("verdict.json", v);
    std::cout << command_ << ": " << (pass ? "pass" : "fail") << "\n";
    return pass ? 0 : 1;
  }

 private:
  const RunContext& ctx_;
  std::string command_;
  std::vector<std::string> files_;
};

json cube_json(const DyadicCube& c) { return {c.level, c.i, c.j}; }

json check_json(const WhitneyCheck& c) {
  json j;
  json items = json::array();
  for (std::size_t i = 0; i < c.violations.size(); ++i) {
    json item;
    item["item"] = i + 1;
    item["violations"] = c.violations[i].size();
    item["first"] = c.violations[i].empty() ? json() : json(c.violations[i].front());
    items.push_back(item);
  }
  j["items"] = items;
  j["total_violations"] = c.total_violations();
  j["overlap_max"] = c.overlap_max;
  j["covered_area"] = c.covered_area;
  j["deficit"] = c.deficit;
  j["collar_bound"] = c.collar_bound;
  j["uncovered_samples"] = c.uncovered_samples;
  j["samples"] = c.samples;
  j["ok"] = c.ok();
  return j;
}

json point_json(Point p) { return {p.x, p.y}; }

}  // namespace

int run_whitney(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const int min_level = optional<int>(p, "min_level", -8);
  const bool exterior = optional<bool>(p, "exterior", true);
  const int samples = optional<int>(p, "samples", 4000);
  const std::uint64_t seed = seed_of(ctx);
  Output out(ctx, "whitney");
  out.plan("covering.json");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)}, {"min_level", min_level}, {"exterior", exterior}, {"seed", seed}})) return 0;

  const WhitneyCovering in = build_whitney(d, CoveringSide::kInterior, min_level);
  json cov;
  cov["domain"] = to_json(d);
  cov["min_level"] = min_level;
  json cubes = json::array();
  for (const auto& c : in.cubes()) cubes.push_back(cube_json(c));
  cov["interior"] = cubes;
  json v;
  v["interior"] = check_json(verify_whitney(in, seed, samples));
  bool pass = v["interior"]["ok"].get<bool>();
  if (exterior) {
    // Same pairing as the extension operator: exterior two levels coarser.
    const WhitneyCovering ex = build_whitney(d, CoveringSide::kExterior, min_level + 2);
    json ecubes = json::array();
    for (const auto& c : ex.cubes()) ecubes.push_back(cube_json(c));
    cov["exterior"] = ecubes;
    cov["exterior_min_level"] = min_level + 2;
    const double cutoff = d.window_size();
    cov["reflection_cutoff"] = cutoff;
    cov["reflection"] = build_reflection(in, ex, cutoff);
    v["exterior"] = check_json(verify_whitney(ex, seed, samples));
    pass = pass && v["exterior"]["ok"].get<bool>();
  }
  v["cubes"] = {{"interior", in.size()}, {"exterior", cov.contains("exterior") ? cov["exterior"].size() : 0}};
  out.write_json("covering.json", cov, -1);
  return out.verdict(v, pass);
}

int run_extend(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const ScalarField f = field_of(ctx, d);
  const int min_level = optional<int>(p, "min_level", -8);
  const double cutoff = optional<double>(p, "cutoff", 0.0);
  const int raster = optional<int>(p, "raster", 128);
  const bool lemma2 = optional<bool>(p, "lemma2", true);
  if (raster < 2) throw ConfigError("config: raster must be >= 2");
  Output out(ctx, "extend");
  out.plan("extension_raster.csv");
  if (lemma2) out.plan("lemma2.csv");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)}, {"field", f.label}, {"min_level", min_level}, {"raster", raster}})) return 0;

  const ExtensionSetup s = make_extension_setup(d, min_level, cutoff);
  const ExtendedField ef = extend(f, s);
  const Box hull = ef.support_hull().inflated(0.05 * (ef.support_hull().hi.x - ef.support_hull().lo.x));
  auto os = out.open("extension_raster.csv");
  CsvWriter csv(os, "extension_raster", {"x", "y", "value", "in_domain"});
  double identity_gap = 0.0;
  double outside_max = 0.0;
  for (int j = 0; j < raster; ++j) {
    for (int i = 0; i < raster; ++i) {
      const Point x{hull.lo.x + (hull.hi.x - hull.lo.x) * i / (raster - 1),
                    hull.lo.y + (hull.hi.y - hull.lo.y) * j / (raster - 1)};
      const double v = ef(x);
      const bool inside = d.contains(x);
      if (inside) identity_gap = std::max(identity_gap, std::abs(v - f(x)));
      if (!ef.support_hull().contains(x)) outside_max = std::max(outside_max, std::abs(v));
      csv.row({x.x, x.y, v, static_cast<long long>(inside)});
    }
  }
  json v;
  v["cutoff"] = ef.cutoff();
  v["support_hull"] = {point_json(ef.support_hull().lo), point_json(ef.support_hull().hi)};
  v["identity_max_gap"] = identity_gap;
  v["outside_support_max"] = outside_max;
  bool pass = identity_gap == 0.0 && outside_max == 0.0;
  if (lemma2) {
    const Lemma2Report r = lemma2_check(ef);
    auto ls = out.open("lemma2.csv");
    CsvWriter lc(ls, "lemma2", {"level", "i", "j", "lhs", "rhs", "ratio"});
    for (const auto& row : r.rows) {
      lc.row({static_cast<long long>(row.cube.level), static_cast<long long>(row.cube.i),
              static_cast<long long>(row.cube.j), row.lhs, row.rhs, row.ratio});
    }
    v["lemma2"] = {{"c", r.c}, {"C", r.C}, {"r0", r.r0}, {"tried", r.tried}, {"constants", r.constants},
                   {"bound", kLemma2Bound}};
    pass = pass && r.c != 0;
  }
  return out.verdict(v, pass);
}

int run_seminorm(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const Modulus m = modulus_of(ctx);
  const ScalarField f = field_of(ctx, d);
  SamplerOptions so;
  const auto region = optional<std::string>(p, "region", "inside");
  if (region == "inside") {
    so.region = CubeRegion::kInside;
  } else if (region == "separated") {
    so.region = CubeRegion::kSeparated;
  } else if (region == "plane") {
    so.region = CubeRegion::kPlane;
  } else {
    throw ConfigError("config: region must be inside, separated or plane");
  }
  so.finest_level = optional<int>(p, "finest_level", -8);
  so.coarsest_level = optional<int>(p, "coarsest_level", 0);
  so.random = optional<int>(p, "random", 1000);
  so.seed = seed_of(ctx);
  const int lp = optional<int>(p, "p", 1);
  const int grid = optional<int>(p, "grid", 32);
  const double threshold = optional<double>(p, "threshold", 100.0);
  if (lp != 1 && lp != 2) throw ConfigError("config: p must be 1 or 2");
  Output out(ctx, "seminorm");
  out.plan("seminorm.csv");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)},
               {"modulus", to_json(m)},
               {"field", f.label},
               {"region", region},
               {"levels", {so.finest_level, so.coarsest_level}},
               {"seed", so.seed}})) {
    return 0;
  }

  const WhitneyCovering cov = build_whitney(d, CoveringSide::kInterior, so.finest_level);
  const WhitneyCovering* covs[] = {&cov};
  const CubeSampler sampler = sample_cubes(d, covs, so);
  const OscillationReport rep = campanato_seminorm(f, m, lp, sampler, grid);
  auto os = out.open("seminorm.csv");
  CsvWriter csv(os, "seminorm", {"cx", "cy", "side", "b", "osc", "ratio"});
  for (const auto& r : rep.rows) csv.row({r.cube.center.x, r.cube.center.y, r.cube.side, r.b, r.osc, r.ratio});
  const auto& worst = rep.rows[rep.argmax].cube;
  json v;
  v["sup_ratio"] = rep.sup_ratio;
  v["argmax"] = {{"center", point_json(worst.center)}, {"side", worst.side}};
  v["cubes"] = rep.rows.size();
  v["sampler"] = rep.sampler;
  v["p"] = lp;
  v["threshold"] = threshold;
  return out.verdict(v, rep.sup_ratio <= threshold);
}

int run_tchi(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const Kernel k = kernel_of(ctx);
  const int grid_n = optional<int>(p, "grid_n", 128);
  const double tol = tol_of(ctx, 1e-6);
  std::vector<Point> probes;
  for (const auto& q : optional<json>(p, "probes", json::array())) probes.push_back(point_from_json(q));
  Output out(ctx, "tchi");
  out.plan("tchi_grid.csv");
  if (!probes.empty()) out.plan("tchi_probes.csv");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)}, {"kernel", to_json(k)}, {"grid_n", grid_n}, {"tol", tol},
               {"probes", probes.size()}})) {
    return 0;
  }

  const auto field = tchi_field(d, k, grid_n, tol);
  auto os = out.open("tchi_grid.csv");
  CsvWriter csv(os, "tchi_grid", {"i", "j", "x", "y", "value"});
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const Point x = field->node(i, j);
      if (d.contains(x)) csv.row({static_cast<long long>(i), static_cast<long long>(j), x.x, x.y, field->node_value(i, j)});
    }
  }
  json v;
  v["grid_n"] = grid_n;
  v["spacing"] = field->spacing();
  v["collar"] = field->collar();
  v["tol"] = tol;
  v["evaluated"] = field->evaluated();
  json fails = json::array();
  for (const auto& f : field->failures()) fails.push_back({{"node", point_json(f.node)}, {"message", f.message}});
  v["failures"] = fails;
  if (!probes.empty()) {
    auto ps = out.open("tchi_probes.csv");
    CsvWriter pc(ps, "tchi_probes", {"x", "y", "value", "error", "cells"});
    for (Point y : probes) {
      const PvResult r = d.contains(y) ? pv_tchi(d, k, y, tol) : pv_tchi_exterior(d, k, y, tol);
      pc.row({y.x, y.y, r.value, r.error, static_cast<long long>(r.cells)});
    }
  }
  if (!field->failures().empty()) {
    out.verdict(v, false);
    throw QuadratureFailure(std::to_string(field->failures().size()) + " grid nodes failed; see verdict.json",
                            std::numeric_limits<double>::quiet_NaN(), 0.0);
  }
  return out.verdict(v, true);
}

int run_grad_profile(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const Kernel k = kernel_of(ctx);
  const Modulus m = modulus_of(ctx);
  const double lo = optional<double>(p, "delta_lo", 1e-4);
  const double hi = optional<double>(p, "delta_hi", 1e-1);
  const int count = optional<int>(p, "delta_count", 12);
  const int refinement = optional<int>(p, "refinement", 3);
  const double max_spread = optional<double>(p, "max_spread", 50.0);
  const auto slope_range = optional<std::vector<double>>(p, "slope_range", {-0.2, 0.2});
  if (slope_range.size() != 2) throw ConfigError("config: slope_range is [lo, hi]");
  if (!k.even()) throw CapabilityError("grad-profile needs an even kernel, got " + k.name());
  const std::vector<double> deltas = log_spaced(lo, hi, count);
  Output out(ctx, "grad-profile");
  out.plan("grad_profile.csv");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)}, {"kernel", to_json(k)}, {"modulus", to_json(m)}, {"deltas", deltas}})) {
    return 0;
  }

  const BlochProfile prof = bloch_profile(d, k, m, deltas, refinement);
  auto os = out.open("grad_profile.csv");
  CsvWriter csv(os, "grad_profile", {"delta", "y1", "y2", "grad", "ratio"});
  for (const auto& r : prof.rows) csv.row({r.delta, r.y.x, r.y.y, r.grad, r.ratio});
  json v;
  v["max_ratio"] = prof.max_ratio;
  v["min_ratio"] = prof.min_ratio;
  v["spread"] = prof.spread;
  v["slope"] = prof.slope;
  v["skipped"] = prof.skipped;
  v["max_spread"] = max_spread;
  v["slope_range"] = slope_range;
  const bool pass = !prof.rows.empty() && prof.spread <= max_spread && prof.slope >= slope_range[0] &&
                    prof.slope <= slope_range[1];
  return out.verdict(v, pass);
}

int run_t1check(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  const Kernel k = kernel_of(ctx);
  const Modulus m = modulus_of(ctx);
  T1Options opt;
  opt.grid_n = optional<int>(p, "grid_n", opt.grid_n);
  opt.tol = tol_of(ctx, opt.tol);
  opt.p = optional<int>(p, "p", opt.p);
  opt.cube_grid = optional<int>(p, "cube_grid", opt.cube_grid);
  opt.finest_level = optional<int>(p, "finest_level", opt.finest_level);
  opt.coarsest_level = optional<int>(p, "coarsest_level", opt.coarsest_level);
  opt.random = optional<int>(p, "random", opt.random);
  opt.seed = seed_of(ctx);
  opt.threshold = optional<double>(p, "threshold", opt.threshold);
  opt.slope_floor = optional<double>(p, "slope_floor", opt.slope_floor);
  opt.tilde = optional<bool>(p, "tilde", opt.tilde);
  Output out(ctx, "t1check");
  out.plan("t1_seminorm.csv");
  out.plan("t1_bloch.csv");
  out.plan("verdict.json");
  if (out.dry({{"domain", to_json(d)},
               {"kernel", to_json(k)},
               {"modulus", to_json(m)},
               {"grid_n", opt.grid_n},
               {"tol", opt.tol},
               {"seed", opt.seed}})) {
    return 0;
  }

  const T1Report rep = t1_check(d, k, m, opt);
  auto os = out.open("t1_seminorm.csv");
  CsvWriter csv(os, "t1_seminorm", {"cx", "cy", "side", "b", "osc", "ratio"});
  for (const auto& r : rep.seminorm.rows) {
    csv.row({r.cube.center.x, r.cube.center.y, r.cube.side, r.b, r.osc, r.ratio});
  }
  auto bs = out.open("t1_bloch.csv");
  CsvWriter bc(bs, "t1_bloch", {"delta", "y1", "y2", "grad", "ratio"});
  for (const auto& r : rep.bloch.rows) bc.row({r.delta, r.y.x, r.y.y, r.grad, r.ratio});

  const T1Verdict& t = rep.verdict;
  json levels = json::array();
  for (const auto& l : t.levels) levels.push_back({{"level", l.level}, {"max_ratio", l.max_ratio}, {"cubes", l.cubes}});
  json v;
  v["domain"] = rep.domain;
  v["kernel"] = rep.kernel;
  v["modulus"] = rep.modulus;
  v["seminorm_modulus"] = rep.seminorm_modulus;
  v["grid_n"] = rep.options.grid_n;
  v["grid_spacing"] = rep.grid_spacing;
  v["collar"] = rep.collar;
  v["tol"] = rep.options.tol;
  v["grid_evaluations"] = rep.grid_evaluations;
  v["levels_range"] = {rep.options.finest_level, rep.options.coarsest_level};
  v["cubes"] = rep.seminorm.rows.size();
  v["sampler"] = rep.seminorm.sampler;
  v["sup_ratio"] = t.sup_ratio;
  v["threshold"] = t.threshold;
  v["noise_floor"] = t.noise_floor;
  v["trend_slope"] = t.trend_slope;
  v["slope_floor"] = t.slope_floor;
  v["trend_cubes"] = t.trend_cubes;
  v["bounded"] = t.bounded;
  v["no_trend"] = t.no_trend;
  v["levels"] = levels;
  if (rep.bloch.rows.empty()) {
    v["bloch"] = {{"note", rep.bloch_note}};
  } else {
    v["bloch"] = {{"max_ratio", rep.bloch.max_ratio}, {"min_ratio", rep.bloch.min_ratio},
                  {"spread", rep.bloch.spread}, {"slope", rep.bloch.slope}};
  }
  return out.verdict(v, t.pass);
}

int run_cancellation(const RunContext& ctx) {
  const json& p = params(ctx);
  const Domain d = domain_of(ctx);
  if (d.kind() != DomainKind::kBall) throw ConfigError("cancellation needs a ball domain");
  std::vector<Kernel> kernels;
  if (ctx.config.contains("kernels")) {
    const json& ks = ctx.config.at("kernels");
    if (!ks.is_array() || ks.empty()) throw ConfigError("config: 'kernels' must be a non-empty array");
    for (const auto& kj : ks) kernels.push_back(kernel_of(kj));
  } else {
    kernels.push_back(kernel_of(ctx));
  }
  const int count = optional<int>(p, "probes", 50);
  const double threshold = optional<double>(p, "threshold", 1e-4);
  const double tol = tol_of(ctx, kDefaultPvTol);
  const std::uint64_t seed = seed_of(ctx);
  for (const auto& k : kernels) {
    if (!k.even()) throw CapabilityError("cancellation needs even kernels, got " + k.name());
  }
  Output out(ctx, "cancellation");
  out.plan("cancellation.csv");
  out.plan("verdict.json");
  json names = json::array();
  for (const auto& k : kernels) names.push_back(k.name());
  if (out.dry({{"domain", to_json(d)}, {"kernels", names}, {"probes", count}, {"tol", tol}, {"seed", seed}})) {
    return 0;
  }

  const std::vector<Point> probes = ball_probes(d, count, seed);
  auto os = out.open("cancellation.csv");
  CsvWriter csv(os, "cancellation", {"kernel", "x", "y", "value"});
  json per = json::object();
  double max_abs = 0.0;
  for (const auto& k : kernels) {
    const CancellationReport r = cancellation_report(d, k, probes, tol);
    for (std::size_t i = 0; i < probes.size(); ++i) csv.row({k.name(), probes[i].x, probes[i].y, r.values[i]});
    per[k.name()] = r.max_abs;
    max_abs = std::max(max_abs, r.max_abs);
  }
  json v;
  v["max_abs"] = max_abs;
  v["per_kernel"] = per;
  v["probes"] = count;
  v["tol"] = tol;
  v["threshold"] = threshold;
  return out.verdict(v, max_abs <= threshold);
}

}  // namespace czt::cli
