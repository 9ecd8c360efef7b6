#include "czt/singular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/parallel.hpp"
#include "czt/quadrature.hpp"

namespace czt {

namespace {

constexpr double kPi = std::numbers::pi;
using Integrand = std::function<double(Point)>;

struct Estimate {
  double value;
  double error;
};

double tensor_gauss(const Integrand& g, const Box& b, int n) {
  const GaussRule& r = gauss_legendre(n);
  const double hx = 0.5 * b.width();
  const double hy = 0.5 * b.height();
  const Point c = b.center();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += r.weights[j] * g({c.x + hx * r.nodes[i], c.y + hy * r.nodes[j]});
    s += r.weights[i] * row;
  }
  return s * hx * hy;
}

void add_edge_crossings(const Domain& d, Point a, Point b, double u0, double len, std::vector<double>& out) {
  for (const auto& [t0, t1] : d.inside_intervals(a, b)) {
    if (t0 > 0.0) out.push_back(u0 + t0 * len);
    if (t1 < 1.0) out.push_back(u0 + t1 * len);
  }
}

// Breakpoints of the transverse coordinate for lines through a cut cell.
// Between consecutive breakpoints the crossing pattern of the lines does
// not change, so the line integrals vary smoothly.
std::vector<double> transverse_splits(const Domain& d, const Box& b, bool vertical) {
  std::vector<double> s;
  const double u0 = vertical ? b.lo.x : b.lo.y;
  const double u1 = vertical ? b.hi.x : b.hi.y;
  s.push_back(u0);
  s.push_back(u1);
  if (vertical) {
    add_edge_crossings(d, b.lo, {b.hi.x, b.lo.y}, u0, u1 - u0, s);
    add_edge_crossings(d, {b.lo.x, b.hi.y}, b.hi, u0, u1 - u0, s);
  } else {
    add_edge_crossings(d, b.lo, {b.lo.x, b.hi.y}, u0, u1 - u0, s);
    add_edge_crossings(d, {b.hi.x, b.lo.y}, b.hi, u0, u1 - u0, s);
  }
  const double pad = 1e-9 * (u1 - u0);
  for (const Point f : d.feature_points()) {
    const double v = vertical ? f.y : f.x;
    const double vlo = vertical ? b.lo.y : b.lo.x;
    const double vhi = vertical ? b.hi.y : b.hi.x;
    if (v >= vlo - pad && v <= vhi + pad) s.push_back(vertical ? f.x : f.y);
  }
  switch (d.kind()) {
    case DomainKind::kBall: {
      const Point c = d.ball_center();
      const double r = d.ball_radius();
      s.push_back((vertical ? c.x : c.y) - r);
      s.push_back((vertical ? c.x : c.y) + r);
      break;
    }
    case DomainKind::kGraphDisk: {
      const GraphDiskShape& sh = *d.graph_shape();
      const Point c = sh.disk_center();
      const double r = sh.disk_radius();
      s.push_back((vertical ? c.x : c.y) - r);
      s.push_back((vertical ? c.x : c.y) + r);
      break;
    }
    case DomainKind::kPolygon:
      break;
  }
  std::vector<double> out;
  for (double v : s) {
    if (v >= u0 && v <= u1) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [&](double a, double c) { return c - a <= 1e-14 * (u1 - u0); }),
            out.end());
  return out;
}

double line_rule(const Domain& d, const Integrand& g, const Box& b, bool vertical, const std::vector<double>& splits,
                 int n) {
  const GaussRule& r = gauss_legendre(n);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < splits.size(); ++k) {
    const double a = splits[k];
    const double c = splits[k + 1];
    const double hu = 0.5 * (c - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = a + hu * (r.nodes[i] + 1.0);
      const Point p0 = vertical ? Point{u, b.lo.y} : Point{b.lo.x, u};
      const Point p1 = vertical ? Point{u, b.hi.y} : Point{b.hi.x, u};
      const double len = vertical ? b.height() : b.width();
      double line = 0.0;
      for (const auto& [t0, t1] : d.inside_intervals(p0, p1)) {
        const double ht = 0.5 * (t1 - t0);
        double seg = 0.0;
        for (int j = 0; j < n; ++j) {
          const double t = t0 + ht * (r.nodes[j] + 1.0);
          seg += r.weights[j] * g(p0 + (p1 - p0) * t);
        }
        line += seg * ht * len;
      }
      s += r.weights[i] * line;
    }
    total += s * hu;
  }
  return total;
}

Estimate cut_cell(const Domain& d, const Integrand& g, const Box& b) {
  const Domain::Projection pr = d.project(b.center());
  const Vec2 nrm = d.pieces()[pr.piece].normal(pr.s);
  const bool vertical = std::abs(nrm.y) >= std::abs(nrm.x);
  const auto splits = transverse_splits(d, b, vertical);
  const double hi = line_rule(d, g, b, vertical, splits, 8);
  const double lo = line_rule(d, g, b, vertical, splits, 4);
  return {hi, std::abs(hi - lo)};
}

struct Cell {
  Vec2 rel;  // lower corner minus y, exact in binary
  double side;
  double value;
  double error;
  bool forced;
  BoxClass cls;
};

// Boundary integral of F(piece, s) |tangent| ds, with panels graded toward
// the parameter nearest y on every piece.
double boundary_integral(const Domain& d, Point y, const std::function<double(const BoundaryPiece&, double)>& f,
                         int refinement, double abs_tol) {
  double total = 0.0;
  const auto pieces = d.pieces();
  const double piece_tol = abs_tol / static_cast<double>(pieces.size());
  for (const BoundaryPiece& pc : pieces) {
    const int samples = 256;
    double best = std::numeric_limits<double>::infinity();
    double s_near = 0.0;
    for (int i = 0; i <= samples; ++i) {
      const double s = static_cast<double>(i) / samples;
      const double dist = distance(pc.point(s), y);
      if (dist < best) {
        best = dist;
        s_near = s;
      }
    }
    // Refine the nearest parameter by golden-section search on the bracket.
    double lo = std::max(0.0, s_near - 1.0 / samples);
    double hi = std::min(1.0, s_near + 1.0 / samples);
    for (int it = 0; it < 80; ++it) {
      const double m1 = lo + (hi - lo) * 0.381966;
      const double m2 = lo + (hi - lo) * 0.618034;
      if (distance(pc.point(m1), y) < distance(pc.point(m2), y)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    s_near = 0.5 * (lo + hi);
    const double speed = std::max(norm(pc.tangent(s_near)), 1e-300);
    const double scale = std::max(distance(pc.point(s_near), y) / speed, 1e-16);
    std::vector<double> br{0.0, 1.0, s_near};
    const int panels = 1 << std::clamp(refinement, 0, 12);
    for (int i = 1; i < panels; ++i) br.push_back(static_cast<double>(i) / panels);
    for (double w = scale; w < 1.0; w *= 4.0) {
      br.push_back(s_near - w);
      br.push_back(s_near + w);
    }
    for (double& b : br) b = std::clamp(b, 0.0, 1.0);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    auto integrand = [&](double s) { return f(pc, s) * norm(pc.tangent(s)); };
    const double sub_tol = piece_tol / static_cast<double>(br.size());
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      total += integrate_adaptive(integrand, br[i], br[i + 1], 1e-10, sub_tol, 20000).value;
    }
  }
  return total;
}

}  // namespace

PvResult integrate_domain(const Domain& d, const Integrand& g, Point y, double r, double tol, std::size_t budget) {
  const Box bb = d.bounding_box();
  double h0 = 0.0;
  for (Point c : {bb.lo, bb.hi, Point{bb.lo.x, bb.hi.y}, Point{bb.hi.x, bb.lo.y}}) {
    h0 = std::max({h0, std::abs(c.x - y.x), std::abs(c.y - y.y)});
  }
  double half = 0.0;
  if (r > 0.0) {
    const int k = std::max(0, static_cast<int>(std::ceil(std::log2(h0 / r))));
    half = std::ldexp(r, k);
  } else {
    half = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(std::max(h0, 1e-300)))));
  }
  const double min_side = half * 0x1p-50;

  std::vector<Cell> cells;
  // Children of cells that miss the boundary inherit the class.
  auto evaluate = [&](Vec2 rel, double side, BoxClass parent) {
    Cell c{rel, side, 0.0, 0.0, false, BoxClass::kCut};
    const Box b{y + rel, y + rel + Vec2{side, side}};
    const bool touches = rel.x <= 0.0 && rel.x + side >= 0.0 && rel.y <= 0.0 && rel.y + side >= 0.0;
    if (r > 0.0 && touches) {
      if (side > r * (1.0 + 1e-12)) c.forced = true;
      return c;  // part of the excluded square
    }
    c.cls = parent == BoxClass::kCut ? d.classify(b) : parent;
    switch (c.cls) {
      case BoxClass::kOutside:
        return c;
      case BoxClass::kInside: {
        const double hi = tensor_gauss(g, b, 6);
        const double lo4 = tensor_gauss(g, b, 4);
        c.value = hi;
        c.error = std::abs(hi - lo4);
        return c;
      }
      case BoxClass::kCut: {
        const Estimate e = cut_cell(d, g, b);
        c.value = e.value;
        c.error = e.error;
        return c;
      }
    }
    return c;
  };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  std::vector<char> leaf;
  double total_err = 0.0;
  int forced = 0;
  auto push = [&](const Cell& c) {
    cells.push_back(c);
    leaf.push_back(1);
    const std::size_t idx = cells.size() - 1;
    if (c.forced) {
      ++forced;
      queue.push({std::numeric_limits<double>::infinity(), idx});
    } else if (c.error > 0.0) {
      total_err += c.error;
      queue.push({c.error, idx});
    }
  };
  push(evaluate({-half, -half}, 2.0 * half, BoxClass::kCut));

  while (forced > 0 || total_err > tol) {
    if (queue.empty()) break;
    if (cells.size() > budget) {
      double v = 0.0;
      for (std::size_t i = 0; i < cells.size(); ++i) v += leaf[i] ? cells[i].value : 0.0;
      std::ostringstream os;
      os << "quadtree budget of " << budget << " cells exhausted (error " << total_err << " > tol " << tol << ")";
      throw QuadratureFailure(os.str(), v, total_err);
    }
    const auto [err, idx] = queue.top();
    queue.pop();
    const Cell parent = cells[idx];
    if (!parent.forced && parent.side < min_side) continue;  // cannot refine further; error stays counted
    leaf[idx] = 0;
    if (parent.forced) {
      --forced;
    } else {
      total_err -= parent.error;
    }
    const double hs = 0.5 * parent.side;
    for (int q = 0; q < 4; ++q) {
      push(evaluate({parent.rel.x + (q & 1) * hs, parent.rel.y + ((q >> 1) & 1) * hs}, hs, parent.cls));
    }
    if (total_err < 0.0) total_err = 0.0;
  }
  PvResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!leaf[i]) continue;
    out.value += cells[i].value;
    out.error += cells[i].error;
  }
  out.cells = cells.size();
  return out;
}

PvResult pv_tchi(const Domain& d, const Kernel& k, Point y, double tol, double radius_fraction, std::size_t budget) {
  const double rho = -d.signed_distance(y);
  if (!(rho >= kPvFloor)) {
    std::ostringstream os;
    os << "pv_tchi needs an interior point with rho >= 2^-20, got rho = " << rho;
    throw DomainError(os.str());
  }
  if (!(radius_fraction > 0.0 && radius_fraction * std::numbers::sqrt2 < 1.0)) {
    throw ConfigError("radius_fraction must keep the cancellation square inside D");
  }
  PvResult res = integrate_domain(
      d, [&](Point x) { return k.eval(y - x); }, y, radius_fraction * rho, tol, budget);
  res.value += k.square_correction();
  return res;
}

PvResult pv_tchi_exterior(const Domain& d, const Kernel& k, Point y, double tol, std::size_t budget) {
  const double rho = d.signed_distance(y);
  if (!(rho >= kPvFloor)) {
    std::ostringstream os;
    os << "pv_tchi_exterior needs an exterior point with dist >= 2^-20, got " << rho;
    throw DomainError(os.str());
  }
  return integrate_domain(
      d, [&](Point x) { return k.eval(y - x); }, y, 0.0, tol, budget);
}

double pv_tchi_flux(const Domain& d, const Kernel& k, Point y, double tol) {
  auto f = [&](const BoundaryPiece& pc, double s) {
    const Vec2 v = pc.point(s) - y;
    const double r2 = norm2(v);
    const Vec2 n = pc.normal(s);
    const double th = std::atan2(v.y, v.x);
    return k.primitive(th + kPi) * (-v.y * n.x + v.x * n.y) / r2;
  };
  return boundary_integral(d, y, f, 3, tol);
}

Vec2 grad_tchi_boundary(const Domain& d, const Kernel& k, Point y, int refinement) {
  if (!k.even()) throw CapabilityError("boundary gradient formula needs an even kernel, got " + k.name());
  const double rho = std::abs(d.signed_distance(y));
  if (!(rho > 1e-12)) throw DomainError("grad_tchi_boundary: point lies on the boundary");
  // The integrand scales like 1/rho; ask for a tolerance relative to that.
  const double tol = 1e-11 / rho;
  auto gx = [&](const BoundaryPiece& pc, double s) { return k.eval(y - pc.point(s)) * pc.normal(s).x; };
  auto gy = [&](const BoundaryPiece& pc, double s) { return k.eval(y - pc.point(s)) * pc.normal(s).y; };
  return {-boundary_integral(d, y, gx, refinement, tol), -boundary_integral(d, y, gy, refinement, tol)};
}

std::vector<Point> ball_probes(const Domain& ball, int count, std::uint64_t seed) {
  if (ball.kind() != DomainKind::kBall) throw ConfigError("ball_probes needs a ball");
  const Point c = ball.ball_center();
  const double r = ball.ball_radius();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Vec2 v{u(rng), u(rng)};
    if (norm(v) > 0.9) continue;
    out.push_back(c + v * r);
  }
  return out;
}

CancellationReport cancellation_report(const Domain& ball, const Kernel& k, const std::vector<Point>& probes,
                                       double tol) {
  if (ball.kind() != DomainKind::kBall) throw ConfigError("cancellation_report needs a ball");
  if (!k.even()) throw CapabilityError("cancellation holds for even kernels; " + k.name() + " is not even");
  CancellationReport rep;
  rep.probes = probes;
  rep.values.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) { rep.values[i] = pv_tchi(ball, k, probes[i], tol).value; });
  for (double v : rep.values) rep.max_abs = std::max(rep.max_abs, std::abs(v));
  return rep;
}

PvResult restricted_apply(const Domain& d, const Kernel& k, const ScalarField& f, Point y, double tol,
                          std::size_t budget) {
  const double fy = f(y);
  const PvResult base = pv_tchi(d, k, y, 0.5 * tol, 0.5, budget);
  const double rho = -d.signed_distance(y);
  const double r = 0.5 * rho;
  PvResult outer = integrate_domain(
      d, [&](Point x) { return (f(x) - fy) * k.eval(y - x); }, y, r, 0.25 * tol, budget);

  // Proper integral over the square [y - r, y + r]^2 in polar coordinates,
  // shell by shell toward y. Shells that keep contributing mean f is not
  // Dini continuous at y.
  const double shell_tol = 1e-3 * tol;
  auto radial = [&](Vec2 e, double reach) {
    auto g = [&](double s) { return (f(y + e * s) - fy) / s; };
    double sum = 0.0;
    int quiet = 0;
    double hi = reach;
    for (int j = 0; j < 44; ++j) {
      const double lo = 0.5 * hi;
      const double c = integrate_adaptive(g, lo, hi, 1e-10, 0.1 * shell_tol, 400).value;
      sum += c;
      quiet = std::abs(c) <= shell_tol ? quiet + 1 : 0;
      if (quiet >= 3) return sum;
      hi = lo;
    }
    std::ostringstream os;
    os << "oscillation of f does not decay toward y = (" << y.x << ", " << y.y << ")";
    throw RoughnessError(os.str());
  };
  double inner = 0.0;
  try {
    for (int o = 0; o < 8; ++o) {
      const double a = -kPi / 4 + o * kPi / 4;
      auto angular = [&](double th) {
        const Vec2 e{std::cos(th), std::sin(th)};
        return k.omega(th + kPi) * radial(e, r / std::max(std::abs(e.x), std::abs(e.y)));
      };
      inner += integrate_adaptive(angular, a, a + kPi / 4, 1e-10, 0.03 * tol, 2000).value;
    }
  } catch (const QuadratureFailure& e) {
    throw RoughnessError(std::string("oscillation integral does not converge near y: ") + e.what());
  }
  PvResult out;
  out.value = fy * base.value + outer.value + inner;
  out.error = std::abs(fy) * base.error + outer.error;
  out.cells = base.cells + outer.cells;
  return out;
}

}  // namespace czt
