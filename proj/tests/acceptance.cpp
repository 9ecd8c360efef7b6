// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff every
// selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "czt/errors.hpp"
#include "czt/extension.hpp"
#include "czt/seminorm.hpp"
#include "czt/singular.hpp"
#include "czt/t1.hpp"
#include "czt/whitney.hpp"

using namespace czt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Domain notched_square() {
  return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0.55, 1}, {0.55, 0.6}, {0.45, 0.6}, {0.45, 1}, {0, 1}});
}

Domain graph_disk(const Modulus& m) { return Domain::graph_disk(m, 1.0, 0.1); }

// Interior points with rho >= margin, drawn uniformly from the bounding box.
std::vector<Point> interior_points(const Domain& d, int count, double margin, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Box b = d.bounding_box();
  std::uniform_real_distribution<double> ux(b.lo.x, b.hi.x);
  std::uniform_real_distribution<double> uy(b.lo.y, b.hi.y);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < count) {
    const Point p{ux(rng), uy(rng)};
    if (d.signed_distance(p) <= -margin) pts.push_back(p);
  }
  return pts;
}

// 1. Extra cancellation on the unit ball.
Outcome criterion1() {
  Clock clock;
  const Domain ball = Domain::ball({0, 0}, 1.0);
  const auto probes = ball_probes(ball, 50, 1);
  double worst = 0.0;
  std::string per;
  for (const char* name : {"beurling_re", "beurling_im", "riesz11", "riesz12"}) {
    const auto rep = cancellation_report(ball, Kernel::by_name(name), probes);
    worst = std::max(worst, rep.max_abs);
    per += fmt(" %s=%.1e", name, rep.max_abs);
  }
  const double t = clock.seconds();
  return {worst <= 1e-4 && t <= 120.0,
          fmt("max |T chi_B| = %.2e (<= 1e-4) over 4 kernels x 50 probes in %.1f s (<= 120 s);", worst, t) + per};
}

// 2. Boundary gradient formula against central differences of the PV.
Outcome criterion2() {
  const Kernel k = Kernel::beurling_re();
  const double h = 1e-3;
  double worst = 0.0;
  std::string per;
  for (const auto& [name, d] : {std::pair{"square", unit_square()},
                                std::pair{"graph_disk", graph_disk(Modulus::power(0.5))}}) {
    double local = 0.0;
    for (Point y : interior_points(d, 20, 0.02, 11)) {
      const Vec2 g = grad_tchi_boundary(d, k, y);
      const auto pv = [&](Point p) { return pv_tchi(d, k, p, 1e-10).value; };
      const Vec2 fd{(pv({y.x + h, y.y}) - pv({y.x - h, y.y})) / (2 * h),
                    (pv({y.x, y.y + h}) - pv({y.x, y.y - h})) / (2 * h)};
      local = std::max(local, norm(g - fd) / norm(g));
    }
    worst = std::max(worst, local);
    per += fmt(" %s=%.1e", name, local);
  }
  return {worst <= 1e-2, fmt("max relative error %.2e (<= 1e-2), 20 points per domain, h = 1e-3;", worst) + per};
}

// 3. Gradient profile along the normal line of the graph disk.
Outcome criterion3() {
  const auto deltas = log_spaced(1e-4, 1e-1, 12);
  bool pass = true;
  std::string detail;
  for (const auto& [name, m] : {std::pair{"power(0.5)", Modulus::power(0.5)},
                                std::pair{"log_power(0)", Modulus::log_power(0.0)}}) {
    const BlochProfile p = bloch_profile(graph_disk(m), Kernel::beurling_re(), m, deltas);
    const bool ok = p.rows.size() == deltas.size() && p.spread <= 50.0 && p.slope >= -0.2 && p.slope <= 0.2;
    pass = pass && ok;
    detail += fmt("%s%s: spread %.2f (<= 50), slope %+.3f (in [-0.2, 0.2]), ratio in [%.3g, %.3g]",
                  detail.empty() ? "" : "; ", name, p.spread, p.slope, p.min_ratio, p.max_ratio);
  }
  return {pass, detail};
}

// 4. Whitney coverings: items 1-6, vertical-line counts, covered area.
Outcome criterion4() {
  const int min_level = -12;
  const std::vector<std::pair<std::string, Domain>> fixtures = {
      {"ball", Domain::ball({0, 0}, 1.0)},
      {"square", unit_square()},
      {"notched", notched_square()},
      {"graph_disk", graph_disk(Modulus::power(0.5))}};
  bool pass = true;
  std::string detail;
  for (const auto& [name, d] : fixtures) {
    const WhitneyCovering in = build_whitney(d, CoveringSide::kInterior, min_level);
    const WhitneyCheck ci = verify_whitney(in);
    const WhitneyCheck ce = verify_whitney(build_whitney(d, CoveringSide::kExterior, min_level));
    const std::size_t violations = ci.total_violations() + ce.total_violations();
    const bool area_ok = ci.deficit <= ci.collar_bound;
    // Vertical-line constant per window over all levels down to min_level.
    std::vector<Point> anchors;
    for (Point f : d.feature_points()) anchors.push_back(f);
    for (const auto& node : d.boundary_quadrature(0)) {
      if (anchors.size() >= 8) break;
      anchors.push_back(node.x);
    }
    int line_const = 0;
    for (Point a : anchors) {
      const Window w = d.window_at(a);
      for (int l = min_level; l <= 0; ++l) line_const = std::max(line_const, vertical_line_count(in, w, l));
    }
    const bool ok = violations == 0 && area_ok && line_const > 0 && line_const <= 16;
    pass = pass && ok;
    detail += fmt("%s%s: %zu violations, deficit %.2e <= collar %.2e, line constant %d (<= 16) over %zu windows",
                  detail.empty() ? "" : "; ", name.c_str(), violations, ci.deficit, ci.collar_bound, line_const,
                  anchors.size());
  }
  return {pass, detail};
}

// Sum over interior Whitney cubes of psi_Q(x) w(l(Q)) xi_Q with xi_Q uniform
// on [-1, 1]: a smooth function with C_w oscillation at every scale.
ScalarField whitney_noise(std::shared_ptr<const WhitneyCovering> cov, const Modulus& m, std::uint64_t seed) {
  auto pu = std::make_shared<const PartitionOfUnity>(cov);
  auto xi = std::make_shared<std::vector<double>>(cov->size());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : *xi) v = u(rng);
  ScalarField f;
  f.value = [pu, xi, cov, m](Point x) {
    double s = 0.0;
    for (const auto& t : pu->evaluate(x)) s += t.value * m(cov->cubes()[t.cube].side()) * (*xi)[t.cube];
    return s;
  };
  f.label = "whitney_noise";
  return f;
}

double l1_norm(const ScalarField& f, const Domain& d, int n = 512) {
  const Box b = d.bounding_box();
  const double hx = (b.hi.x - b.lo.x) / n;
  const double hy = (b.hi.y - b.lo.y) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point p{b.lo.x + (i + 0.5) * hx, b.lo.y + (j + 0.5) * hy};
      if (d.contains(p)) acc += std::abs(f(p));
    }
  }
  return acc * hx * hy;
}

// 5. Extension operator: full-space seminorm against interior data.
Outcome criterion5() {
  const Domain d = notched_square();
  const ExtensionSetup s = make_extension_setup(d, -10);
  SamplerOptions inside;
  inside.region = CubeRegion::kInside;
  inside.finest_level = -8;
  inside.coarsest_level = 0;
  inside.random = 400;
  SamplerOptions plane = inside;
  plane.region = CubeRegion::kPlane;
  plane.box = s.exterior->domain().bounding_box().inflated(0.25);
  const WhitneyCovering* in_covs[] = {s.interior.get()};
  const WhitneyCovering* all_covs[] = {s.interior.get(), s.exterior.get()};
  const CubeSampler in_sampler = sample_cubes(d, in_covs, inside);
  const CubeSampler plane_sampler = sample_cubes(d, all_covs, plane);

  bool pass = true;
  std::string detail;
  for (const Modulus& m : {Modulus::constant(), Modulus::power(0.5)}) {
    const std::vector<ScalarField> family = {
        fields::phi_tau(m, {0.25, 0.3}), fields::phi_tau(m, {0.5, 0.3}), fields::phi_tau(m, {0.8, 0.75}),
        fields::coordinate(0), whitney_noise(s.interior, m, 5)};
    double cmin = 1e300;
    double cmax = 0.0;
    bool exact = true;
    bool support = true;
    for (const ScalarField& f : family) {
      const ExtendedField ef = extend(f, s);
      const ScalarField ft = ef.as_field();
      const double full = campanato_seminorm(ft, m, 1, plane_sampler, 16).sup_ratio;
      const double interior = campanato_seminorm(f, m, 1, in_sampler, 16).sup_ratio;
      const double c = full / (interior + l1_norm(f, d));
      if (std::getenv("CZT_VERBOSE")) {
        std::fprintf(stderr, "  %s %s: full %.4g interior %.4g l1 %.4g C %.4g\n", m.describe().c_str(),
                     f.label.c_str(), full, interior, l1_norm(f, d), c);
      }
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
      for (Point p : interior_points(d, 500, 0.0, 3)) exact = exact && ef(p) == f(p);
      const Box h = ef.support_hull();
      for (int k = 0; k < 400; ++k) {
        const double a = 2 * std::numbers::pi * k / 400;
        const Point p{0.5 + 2.0 * std::cos(a), 0.5 + 2.0 * std::sin(a)};
        support = support && !h.contains(p) && ef(p) == 0.0;
      }
    }
    const bool ok = exact && support && cmax / cmin <= 10.0;
    pass = pass && ok;
    detail += fmt("%s%s: C in [%.3g, %.3g], spread %.2f (<= 10), f~ = f on D %s, support %s",
                  detail.empty() ? "" : "; ", m.describe().c_str(), cmin, cmax, cmax / cmin, exact ? "yes" : "NO",
                  support ? "compact" : "NOT compact");
  }
  return {pass, detail};
}

// 6. Closed forms of tilde and the log-power collapse.
Outcome criterion6() {
  struct Case {
    Modulus m;
    std::function<double(double)> exact;
  };
  const std::vector<Case> cases = {
      {Modulus::constant(), [](double x) { return 1.0 / std::log(1.0 / x); }},
      {Modulus::power(0.25), [](double x) { return 0.25 * std::pow(x, 0.25) / (1 - std::pow(x, 0.25)); }},
      {Modulus::power(0.5), [](double x) { return 0.5 * std::pow(x, 0.5) / (1 - std::pow(x, 0.5)); }},
      {Modulus::power(0.75), [](double x) { return 0.75 * std::pow(x, 0.75) / (1 - std::pow(x, 0.75)); }},
      {Modulus::log_power(0.0), [](double x) { return 1.0 / std::log(1.0 / x); }},
      {Modulus::log_power(0.5), [](double x) { return 0.5 / std::log(1.0 / x); }},
  };
  double worst = 0.0;
  const auto grid = log_spaced(0x1p-30, 0x1p-2, 241);
  for (const Case& c : cases) {
    const Modulus t = tilde(c.m);
    for (double x : grid) worst = std::max(worst, std::abs(t(x) / c.exact(x) - 1.0));
  }
  const Modulus a = tilde(Modulus::log_power(0.0));
  const Modulus b = tilde(Modulus::log_power(0.5));
  double rmin = 1e300;
  double rmax = 0.0;
  for (double x : grid) {
    rmin = std::min(rmin, a(x) / b(x));
    rmax = std::max(rmax, a(x) / b(x));
  }
  const bool collapse = rmin >= 0.5 && rmax <= 2.0 * (1 + 1e-6);
  return {worst <= 1e-6 && collapse,
          fmt("max relative error %.2e (<= 1e-6) over 6 moduli on [2^-30, 2^-2]; collapse ratio in [%.6f, %.6f] "
              "(within factor 2)",
              worst, rmin, rmax)};
}

// 7. Mean growth of phi_tau for the constant modulus.
Outcome criterion7() {
  const Domain d = notched_square();
  const Modulus m = Modulus::constant();
  double lo = 1e300;
  double hi = 0.0;
  for (Point tau : {Point{0.25, 0.3}, Point{0.8, 0.75}}) {
    std::vector<GeneralCube> cubes;
    for (int k = 2; k <= 14; ++k) cubes.push_back({tau, std::ldexp(1.0, -k)});
    const auto rep = mean_growth_check(fields::restricted(fields::phi_tau(m, tau), d), m, cubes, 1.0);
    lo = std::min(lo, rep.min_ratio);
    hi = std::max(hi, rep.max_ratio);
  }
  return {lo > 0.0 && hi / lo <= 10.0,
          fmt("ratio (phi chi_D)_Q / ln(1/l) in [%.3f, %.3f], c > 0, C/c = %.3f (<= 10), l = 2^-2..2^-14, 2 centers",
              lo, hi, hi / lo)};
}

// 8. Seminorm machinery.
Outcome criterion8() {
  const Domain sq = unit_square();
  const WhitneyCovering cov = build_whitney(sq, CoveringSide::kInterior, -7);
  const WhitneyCovering* covs[] = {&cov};
  SamplerOptions so;
  so.region = CubeRegion::kInside;
  so.random = 300;
  so.finest_level = -10;
  so.coarsest_level = -1;
  const CubeSampler s = sample_cubes(sq, covs, so);

  double const_max = 0.0;
  for (const Modulus& m : {Modulus::constant(), Modulus::power(0.5), Modulus::log_power(0.5),
                           tilde(Modulus::constant())}) {
    const_max = std::max(const_max, campanato_seminorm(fields::constant(2.5), m, 1, s).sup_ratio);
  }

  const std::vector<std::pair<ScalarField, Modulus>> fixtures = {
      {fields::phi_tau(Modulus::constant(), {0.5, 0.5}), Modulus::constant()},
      {fields::phi_tau(Modulus::power(0.5), {0.3, 0.6}), Modulus::power(0.5)},
      {fields::coordinate(0), Modulus::power(0.5)}};
  double eq = 0.0;
  double refine = 0.0;
  for (const auto& [f, m] : fixtures) {
    eq = std::max(eq, lp_equivalence_check(f, m, s).max_ratio);
    const auto a = campanato_seminorm(f, m, 1, s, 32);
    const auto b = campanato_seminorm(f, m, 1, s, 64);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      if (b.rows[i].osc > 1e-12) refine = std::max(refine, std::abs(a.rows[i].osc - b.rows[i].osc) / b.rows[i].osc);
    }
  }

  // ln(1/rho) on the unit ball: Bloch seminorm 1, Campanato seminorm finite.
  const Domain ball = Domain::ball({0, 0}, 1.0);
  ScalarField lg;
  lg.value = [](Point p) { return -std::log(1.0 - norm(p)); };
  lg.gradient = [](Point p) { return p * (1.0 / (norm(p) * (1.0 - norm(p)))); };
  const double bloch = bloch_seminorm(lg, ball, Modulus::constant(), bloch_probes(ball)).sup_ratio;
  const WhitneyCovering bcov = build_whitney(ball, CoveringSide::kInterior, -10);
  const WhitneyCovering* bcovs[] = {&bcov};
  SamplerOptions bo;
  bo.region = CubeRegion::kSeparated;
  bo.random = 300;
  bo.finest_level = -10;
  bo.coarsest_level = -1;
  const double camp = campanato_seminorm(lg, Modulus::constant(), 1, sample_cubes(ball, bcovs, bo)).sup_ratio;
  const double imbed = camp / bloch;

  // Reverse imbedding for two harmonic functions.
  ScalarField quad;
  quad.value = [](Point p) { return p.x * p.x - p.y * p.y; };
  quad.gradient = [](Point p) { return Vec2{2 * p.x, -2 * p.y}; };
  ScalarField expc;
  expc.value = [](Point p) { return std::exp(p.x) * std::cos(p.y); };
  expc.gradient = [](Point p) { return Vec2{std::exp(p.x) * std::cos(p.y), -std::exp(p.x) * std::sin(p.y)}; };
  double harm = 0.0;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const Point x{u(rng), u(rng)};
    for (double r : {0.01, 0.05, 0.2}) {
      harm = std::max({harm, harmonic_gradient_ratio(quad, x, r), harmonic_gradient_ratio(expc, x, r)});
    }
  }
  const bool pass = const_max == 0.0 && eq <= 10.0 && refine <= 0.05 && std::isfinite(imbed) && imbed > 0.0 &&
                    harm <= kHarmonicBound;
  return {pass, fmt("constants %.1e (== 0), L1/L2 factor %.3f (<= 10), grid doubling change %.2f%% (<= 5%%), "
                    "imbedding constant %.3f (Bloch %.6f), harmonic ratio %.4f (<= 1/pi)",
                    const_max, eq, 100 * refine, imbed, bloch, harm)};
}

// 9. T1 pipeline.
Outcome criterion9() {
  Clock clock;
  const Kernel k = Kernel::beurling_re();
  T1Options opt;
  auto run = [&](const Domain& d, const Modulus& m, int n) {
    opt.grid_n = n;
    return t1_check(d, k, m, opt);
  };
  const Domain ball = Domain::ball({0, 0}, 1.0);
  const T1Report b = run(ball, Modulus::constant(), 128);
  const bool ball_ok = b.verdict.sup_ratio == 0.0 && b.verdict.pass;

  const Modulus mg = Modulus::power(0.5);
  const Domain gd = graph_disk(mg);
  const T1Report g1 = run(gd, mg, 128);
  const T1Report g2 = run(gd, mg, 256);
  const double gchange = std::abs(g2.verdict.sup_ratio - g1.verdict.sup_ratio) / g1.verdict.sup_ratio;
  const bool graph_ok = g1.verdict.pass && g2.verdict.pass && gchange <= 0.10;

  const T1Report s1 = run(unit_square(), Modulus::constant(), 128);
  const T1Report s2 = run(unit_square(), Modulus::constant(), 256);
  const double schange = std::abs(s2.verdict.sup_ratio - s1.verdict.sup_ratio) / s1.verdict.sup_ratio;
  const bool square_ok = std::isfinite(s1.verdict.sup_ratio) && schange <= 0.10;

  return {ball_ok && graph_ok && square_ok,
          fmt("ball sup %.2g %s; graph_disk sup %.4g -> %.4g (change %.2f%% <= 10%%, trend %+.3f / %+.3f >= -0.1) "
              "%s; square sup %.4g -> %.4g (change %.2f%% <= 10%%); %.0f s",
              b.verdict.sup_ratio, b.verdict.pass ? "pass" : "FAIL", g1.verdict.sup_ratio, g2.verdict.sup_ratio,
              100 * gchange, g1.verdict.trend_slope, g2.verdict.trend_slope,
              graph_ok ? "pass" : "FAIL", s1.verdict.sup_ratio, s2.verdict.sup_ratio, 100 * schange,
              clock.seconds())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--criterion", only, "Run only these criteria (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3,
                                                          criterion4, criterion5, criterion6,
                                                          criterion7, criterion8, criterion9};
  bool all = true;
  for (int i = 1; i <= 9; ++i) {
    if (!only.empty() && std::find(only.begin(), only.end(), i) == only.end()) continue;
    Clock clock;
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s  [%.1f s]\n", i, o.pass ? "PASS" : "FAIL", o.detail.c_str(), clock.seconds());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
