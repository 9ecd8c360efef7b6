#include "czt/t1.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/extension.hpp"
#include "czt/parallel.hpp"
#include "czt/whitney.hpp"

namespace czt {

namespace {

constexpr double kCollarFraction = 0x1p-10;

double hull_side(const Box& b) { return std::max(b.width(), b.height()); }

// A point at depth >= collar / 2 near the boundary point closest to p.
Point collar_point(const Domain& d, Point p, double collar) {
  const Domain::Projection pr = d.project(p);
  const Vec2 nu = d.pieces()[pr.piece].normal(pr.s);
  const Point first = pr.x - nu * collar;
  if (-d.signed_distance(first) >= 0.5 * collar) return first;
  // Near corners the normal of one side can run along the other; search a
  // small circle for the deepest point.
  Point best = first;
  double depth = -d.signed_distance(first);
  for (int k = 0; k < 32; ++k) {
    const double th = 2.0 * std::numbers::pi * k / 32;
    const Point q = pr.x + Vec2{std::cos(th), std::sin(th)} * (2.0 * collar);
    const double r = -d.signed_distance(q);
    if (r > depth) {
      depth = r;
      best = q;
    }
  }
  return best;
}

}  // namespace

TchiGrid::TchiGrid(const Domain& d, const Kernel& k, int grid_n, double tol)
    : d_(d), k_(k), n_(grid_n), tol_(tol) {
  if (grid_n < 64) throw ConfigError("tchi_field needs grid_n >= 64");
  if (!(tol > 0.0)) throw ConfigError("tchi_field needs tol > 0");
  const Box bb = d.bounding_box();
  const double side = hull_side(bb);
  const Point c = bb.center();
  lo_ = {c.x - 0.5 * side, c.y - 0.5 * side};
  h_ = side / (n_ - 1);
  collar_ = kCollarFraction * std::hypot(bb.width(), bb.height());
  const std::size_t total = static_cast<std::size_t>(n_) * n_;
  values_.assign(total, 0.0);
  std::vector<char> used(total, 0);
  std::vector<std::string> errors(total);
  parallel_for(total, [&](std::size_t idx) {
    const Point p = node(static_cast<int>(idx % n_), static_cast<int>(idx / n_));
    const double sd = d_.signed_distance(p);
    if (sd > 1.5 * h_) return;
    used[idx] = 1;
    const Point y = -sd >= collar_ ? p : collar_point(d_, p, collar_);
    try {
      values_[idx] = pv_tchi(d_, k_, y, tol_).value;
    } catch (const Error& e) {
      values_[idx] = std::numeric_limits<double>::quiet_NaN();
      errors[idx] = e.what();
    }
  });
  for (std::size_t idx = 0; idx < total; ++idx) {
    evaluated_ += used[idx];
    if (!errors[idx].empty()) {
      failures_.push_back({node(static_cast<int>(idx % n_), static_cast<int>(idx / n_)), errors[idx]});
    }
  }
}

double TchiGrid::value(Point p) const {
  if (!d_.contains(p)) return 0.0;
  const double u = std::clamp((p.x - lo_.x) / h_, 0.0, n_ - 1.0);
  const double v = std::clamp((p.y - lo_.y) / h_, 0.0, n_ - 1.0);
  const int i = std::min(static_cast<int>(u), n_ - 2);
  const int j = std::min(static_cast<int>(v), n_ - 2);
  const double s = u - i;
  const double t = v - j;
  return (1 - s) * (1 - t) * node_value(i, j) + s * (1 - t) * node_value(i + 1, j) +
         (1 - s) * t * node_value(i, j + 1) + s * t * node_value(i + 1, j + 1);
}

Vec2 TchiGrid::gradient(Point p) const {
  if (!d_.contains(p)) return {0.0, 0.0};
  return grad_tchi_boundary(d_, k_, p);
}

ScalarField TchiGrid::as_field() const {
  ScalarField f;
  f.value = [this](Point p) { return value(p); };
  if (k_.even()) f.gradient = [this](Point p) { return gradient(p); };
  f.support_hint = d_.bounding_box();
  f.label = "tchi[" + k_.name() + "]";
  return f;
}

std::shared_ptr<const TchiGrid> tchi_field(const Domain& d, const Kernel& k, int grid_n, double tol) {
  return std::make_shared<const TchiGrid>(d, k, grid_n, tol);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0 && hi >= lo) || n < 1) throw ConfigError("log_spaced needs 0 < lo <= hi and n >= 1");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
  }
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("least squares needs two or more points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw ConfigError("least squares needs distinct abscissae");
  return sxy / sxx;
}

BlochProfile bloch_profile(const Domain& d, const Kernel& k, const Modulus& m, const std::vector<double>& deltas,
                           int refinement) {
  Point a;
  Vec2 inward;
  switch (d.kind()) {
    case DomainKind::kGraphDisk:
      a = {0.0, 0.0};
      inward = {0.0, 1.0};
      break;
    case DomainKind::kBall:
      a = d.ball_center() - Vec2{0.0, d.ball_radius()};
      inward = {0.0, 1.0};
      break;
    case DomainKind::kPolygon: {
      const BoundaryPiece& pc = d.pieces()[0];
      a = pc.point(0.5);
      inward = -pc.normal(0.5);
      break;
    }
  }
  BlochProfile out;
  std::vector<BlochProfileRow> rows(deltas.size());
  std::vector<char> ok(deltas.size(), 0);
  parallel_for(deltas.size(), [&](std::size_t i) {
    const double delta = deltas[i];
    const Point y = a + inward * delta;
    if (!(delta >= kPvFloor) || -d.signed_distance(y) < kPvFloor) return;
    const double g = norm(grad_tchi_boundary(d, k, y, refinement));
    rows[i] = {delta, y, g, g * delta / m(delta)};
    ok[i] = 1;
  });
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (ok[i]) {
      out.rows.push_back(rows[i]);
    } else {
      out.skipped.push_back(deltas[i]);
    }
  }
  if (out.rows.empty()) return out;
  out.max_ratio = 0.0;
  out.min_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> lx;
  std::vector<double> ly;
  for (const auto& r : out.rows) {
    out.max_ratio = std::max(out.max_ratio, r.ratio);
    out.min_ratio = std::min(out.min_ratio, r.ratio);
    if (r.ratio > 0.0) {
      lx.push_back(std::log(r.delta));
      ly.push_back(std::log(r.ratio));
    }
  }
  out.spread = out.min_ratio > 0.0 ? out.max_ratio / out.min_ratio : std::numeric_limits<double>::infinity();
  if (lx.size() >= 2) out.slope = least_squares_slope(lx, ly);
  return out;
}

T1Verdict t1_verdict(const OscillationReport& rep, double threshold, double slope_floor, double noise_floor) {
  T1Verdict v;
  v.threshold = threshold;
  v.slope_floor = slope_floor;
  v.noise_floor = noise_floor;
  std::map<int, LevelMax> levels;
  std::vector<double> ratio(rep.rows.size());
  std::vector<int> level(rep.rows.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    ratio[i] = row.osc <= noise_floor ? 0.0 : row.ratio;
    level[i] = static_cast<int>(std::floor(std::log2(row.cube.side) + 1e-9));
    LevelMax& l = levels[level[i]];
    l.level = level[i];
    l.max_ratio = std::max(l.max_ratio, ratio[i]);
    ++l.cubes;
    if (!(ratio[i] <= v.sup_ratio)) v.sup_ratio = ratio[i];
  }
  for (const auto& [lvl, l] : levels) v.levels.push_back(l);
  v.bounded = std::isfinite(v.sup_ratio) && v.sup_ratio <= threshold;
  // Least squares of log ratio against log side over the cubes of the two
  // finest levels.
  std::vector<double> lx;
  std::vector<double> ly;
  const int cut = v.levels.size() >= 2 ? v.levels[1].level : (v.levels.empty() ? 0 : v.levels[0].level);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (level[i] > cut || !(ratio[i] > 0.0)) continue;
    lx.push_back(std::log(rep.rows[i].cube.side));
    ly.push_back(std::log(ratio[i]));
  }
  v.trend_cubes = lx.size();
  v.trend_slope = 0.0;
  if (lx.size() >= 2 && std::any_of(lx.begin(), lx.end(), [&](double x) { return x != lx[0]; })) {
    v.trend_slope = least_squares_slope(lx, ly);
  }
  v.no_trend = v.trend_slope >= slope_floor;
  v.pass = v.bounded && v.no_trend;
  return v;
}

T1Report t1_check(const Domain& d, const Kernel& k, const Modulus& m, const T1Options& opt) {
  const auto field = tchi_field(d, k, opt.grid_n, opt.tol);
  return t1_check(*field, m, opt);
}

T1Report t1_check(const TchiGrid& field, const Modulus& m, const T1Options& opt) {
  const Domain& d = field.domain();
  const Kernel& k = field.kernel();
  T1Report rep;
  rep.domain = d.describe();
  rep.kernel = k.name();
  rep.modulus = m.describe();
  rep.options = opt;
  rep.options.grid_n = field.grid_n();
  rep.options.tol = field.tol();
  rep.grid_spacing = field.spacing();
  rep.collar = field.collar();
  rep.grid_evaluations = field.evaluated();
  rep.failures = field.failures();
  if (!rep.failures.empty()) {
    std::ostringstream os;
    os << rep.failures.size() << " grid nodes failed; first at (" << rep.failures[0].node.x << ", "
       << rep.failures[0].node.y << "): " << rep.failures[0].message;
    throw QuadratureFailure(os.str(), std::numeric_limits<double>::quiet_NaN(), 0.0);
  }

  const Modulus sm = opt.tilde ? tilde(m) : m;
  rep.seminorm_modulus = sm.describe();
  int finest = opt.finest_level;
  if (finest == 0) {
    const double h128 = hull_side(d.bounding_box()) / 127.0;
    finest = static_cast<int>(std::ceil(std::log2(4.0 * h128)));
  }
  if (finest > opt.coarsest_level) throw ConfigError("t1_check: finest level above coarsest level");
  rep.options.finest_level = finest;

  const WhitneyCovering cov = build_whitney(d, CoveringSide::kInterior, finest);
  const WhitneyCovering* covs[] = {&cov};
  SamplerOptions so;
  so.region = CubeRegion::kSeparated;
  so.random = opt.random;
  so.seed = opt.seed;
  so.finest_level = finest;
  so.coarsest_level = opt.coarsest_level;
  CubeSampler sampler = sample_cubes(d, covs, so);
  const double top = std::ldexp(1.0, opt.coarsest_level);
  const double bottom = std::ldexp(1.0, finest);
  std::erase_if(sampler.cubes, [&](const GeneralCube& q) {
    return q.side > top * (1.0 + 1e-12) || q.side < bottom * (1.0 - 1e-12);
  });
  rep.seminorm = campanato_seminorm(field.as_field(), sm, opt.p, sampler, opt.cube_grid);
  rep.verdict = t1_verdict(rep.seminorm, opt.threshold, opt.slope_floor, field.tol());

  if (d.kind() == DomainKind::kGraphDisk && k.even()) {
    rep.bloch = bloch_profile(d, k, m, log_spaced(opt.bloch_lo, opt.bloch_hi, opt.bloch_points));
  } else if (!k.even()) {
    rep.bloch_note = "skipped: kernel " + k.name() + " is not even";
  } else {
    rep.bloch_note = "skipped: profile is defined along the graph-disk normal line";
  }
  return rep;
}

NecessityTable necessity_demo(const Domain& d, const Kernel& k, const Modulus& m, Point tau,
                              const std::vector<double>& sides, int n, double tol) {
  NecessityTable out;
  out.tau = tau;
  const Modulus mt = tilde(m);
  const ScalarField phi = fields::restricted(fields::phi_tau(m, tau), d);
  for (double ell : sides) {
    const GeneralCube q{tau, ell};
    if (!admissible(d, CubeRegion::kSeparated, q)) {
      std::ostringstream os;
      os << "necessity_demo: 2Q is not inside D for side " << ell;
      throw ConfigError(os.str());
    }
  }
  out.rows.resize(sides.size());
  parallel_for(sides.size(), [&](std::size_t r) {
    const double ell = sides[r];
    const GeneralCube q{tau, ell};
    NecessityRow row;
    row.ell = ell;
    row.phi_mean = cube_mean(phi, q);
    row.dini_lower = dini_integral(m, ell);
    row.mean_ratio = row.phi_mean / row.dini_lower;
    std::vector<double> v;
    const Box b = q.box();
    const double h = ell / n;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        v.push_back(pv_tchi(d, k, {b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h}, tol).value);
      }
    }
    std::vector<double> s = v;
    std::sort(s.begin(), s.end());
    const double med = 0.5 * (s[(s.size() - 1) / 2] + s[s.size() / 2]);
    double acc = 0.0;
    for (double x : v) acc += std::abs(x - med);
    row.tchi_osc = acc / static_cast<double>(v.size());
    row.tchi_ratio = row.tchi_osc / mt(ell);
    out.rows[r] = row;
  });
  out.min_mean_ratio = std::numeric_limits<double>::infinity();
  out.max_mean_ratio = 0.0;
  for (const auto& row : out.rows) {
    out.min_mean_ratio = std::min(out.min_mean_ratio, row.mean_ratio);
    out.max_mean_ratio = std::max(out.max_mean_ratio, row.mean_ratio);
  }
  return out;
}

}  // namespace czt
