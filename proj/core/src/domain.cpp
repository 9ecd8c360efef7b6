#include "czt/domain.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/quadrature.hpp"

namespace czt {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Quintic smooth step on [0, 1] with vanishing first and second derivatives
// at both ends.
double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }
double smoothstep_d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

// Minimizes f over [lo, hi] (Brent).
template <class F>
std::pair<double, double> brent_min(const F& f, double lo, double hi) {
  if (!(hi > lo)) return {lo, f(lo)};
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::brent_find_minima(f, lo, hi, std::numeric_limits<double>::digits / 2,
                                                 iters);
  // Endpoints are not probed by Brent.
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo < r.second) r = {lo, flo};
  if (fhi < r.second) r = {hi, fhi};
  return {r.first, r.second};
}

// Polyline approximation of curved boundaries with a bounding-volume tree.
struct PolySeg {
  Point a;
  Point b;
  std::size_t piece;
  double s0;
  double s1;
};

class SegmentTree {
 public:
  void build(std::vector<PolySeg> segs) {
    segs_ = std::move(segs);
    order_.resize(segs_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.clear();
    if (!segs_.empty()) build_node(0, segs_.size());
  }

  const std::vector<PolySeg>& segments() const { return segs_; }

  // Indices of all segments whose distance (by metric dist) is within slack of
  // the minimum. dist(seg) and bound(box) must satisfy bound <= dist.
  template <class SegDist, class BoxBound>
  std::vector<std::size_t> near(const SegDist& dist, const BoxBound& bound, double slack) const {
    double best = kInf;
    std::vector<std::pair<double, std::size_t>> hits;
    if (nodes_.empty()) return {};
    visit(0, dist, bound, slack, best, hits);
    std::vector<std::size_t> out;
    for (const auto& [d, i] : hits) {
      if (d <= best + slack) out.push_back(i);
    }
    return out;
  }

 private:
  struct Node {
    Box box;
    std::size_t begin;
    std::size_t end;
    int left = -1;
    int right = -1;
  };

  int build_node(std::size_t begin, std::size_t end) {
    Node n;
    n.begin = begin;
    n.end = end;
    for (std::size_t k = begin; k < end; ++k) {
      n.box.expand(segs_[order_[k]].a);
      n.box.expand(segs_[order_[k]].b);
    }
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(n);
    if (end - begin > 4) {
      const bool by_x = n.box.width() >= n.box.height();
      const std::size_t mid = (begin + end) / 2;
      std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                       [&](std::size_t p, std::size_t q) {
                         const Point cp = (segs_[p].a + segs_[p].b) * 0.5;
                         const Point cq = (segs_[q].a + segs_[q].b) * 0.5;
                         return by_x ? cp.x < cq.x : cp.y < cq.y;
                       });
      const int l = build_node(begin, mid);
      const int r = build_node(mid, end);
      nodes_[id].left = l;
      nodes_[id].right = r;
    }
    return id;
  }

  template <class SegDist, class BoxBound>
  void visit(int id, const SegDist& dist, const BoxBound& bound, double slack, double& best,
             std::vector<std::pair<double, std::size_t>>& hits) const {
    const Node& n = nodes_[id];
    if (bound(n.box) > best + slack) return;
    if (n.left < 0) {
      for (std::size_t k = n.begin; k < n.end; ++k) {
        const std::size_t i = order_[k];
        const double d = dist(segs_[i]);
        if (d <= best + slack) hits.emplace_back(d, i);
        best = std::min(best, d);
      }
      return;
    }
    const double bl = bound(nodes_[n.left].box);
    const double br = bound(nodes_[n.right].box);
    if (bl <= br) {
      visit(n.left, dist, bound, slack, best, hits);
      visit(n.right, dist, bound, slack, best, hits);
    } else {
      visit(n.right, dist, bound, slack, best, hits);
      visit(n.left, dist, bound, slack, best, hits);
    }
  }

  std::vector<PolySeg> segs_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

bool point_in_polygon(std::span<const Point> v, Point p) {
  bool inside = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      const double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

std::string to_string(DomainKind k) {
  switch (k) {
    case DomainKind::kBall:
      return "ball";
    case DomainKind::kPolygon:
      return "polygon";
    case DomainKind::kGraphDisk:
      return "graph_disk";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Boundary pieces

Point BoundaryPiece::point(double s) const {
  switch (kind) {
    case Kind::kSegment:
      return a + (b - a) * s;
    case Kind::kArc: {
      const double t = theta0 + s * (theta1 - theta0);
      return center + Vec2{std::cos(t), std::sin(t)} * radius;
    }
    case Kind::kGraph: {
      const double x = x0 + s * (x1 - x0);
      return {x, graph->A(x)};
    }
  }
  return {};
}

Vec2 BoundaryPiece::tangent(double s) const {
  switch (kind) {
    case Kind::kSegment:
      return b - a;
    case Kind::kArc: {
      const double t = theta0 + s * (theta1 - theta0);
      return Vec2{-std::sin(t), std::cos(t)} * (radius * (theta1 - theta0));
    }
    case Kind::kGraph: {
      const double x = x0 + s * (x1 - x0);
      return Vec2{1.0, graph->dA(x)} * (x1 - x0);
    }
  }
  return {};
}

Vec2 BoundaryPiece::normal(double s) const {
  const Vec2 t = tangent(s);
  return Vec2{t.y, -t.x} / norm(t);
}

// ---------------------------------------------------------------------------
// Graph-perturbed disk shape

GraphDiskShape::GraphDiskShape(Modulus m, double c0, double r0, double disk_radius)
    : m_(std::move(m)), c0_(c0), r0_(r0), r1_(2.0 * r0), rd_(disk_radius) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw GeometryError("graph_disk: c0 must be positive");
  if (!(disk_radius > 0.0)) throw GeometryError("graph_disk: disk radius must be positive");
  if (!(r0 > 0.0 && r0 <= 0.25 * disk_radius)) {
    throw GeometryError("graph_disk: r0 must lie in (0, disk_radius / 4]");
  }
  if (r1_ > m_.domain_max()) throw GeometryError("graph_disk: modulus undefined on the window");
  // The graph must stay strictly inside the band below the upper arc.
  for (int i = 0; i <= 256; ++i) {
    const double x = r1_ * i / 256.0;
    if (A(x) >= rd_) throw GeometryError("graph_disk: amplitude too large for the base disk");
  }
}

double GraphDiskShape::profile(double x) const {
  const double ax = std::abs(x);
  return ax > 0.0 ? c0_ * ax * m_(ax) : 0.0;
}

double GraphDiskShape::dprofile(double x) const {
  const double ax = std::abs(x);
  // For w(0+) > 0 the one-sided slopes at 0 are +-c0 w(0+); 0 is their mean.
  if (ax == 0.0) return 0.0;
  const double d = c0_ * m_(ax) * (1.0 + m_.log_slope(ax));
  return x < 0.0 ? -d : d;
}

double GraphDiskShape::lower_arc(double x) const { return rd_ - std::sqrt(rd_ * rd_ - x * x); }

double GraphDiskShape::lower_arc_slope(double x) const {
  return x / std::sqrt(rd_ * rd_ - x * x);
}

double GraphDiskShape::A(double x) const {
  const double ax = std::abs(x);
  if (ax <= r0_) return profile(ax);
  if (ax >= r1_) return lower_arc(ax);
  const double s = smoothstep((ax - r0_) / (r1_ - r0_));
  return (1.0 - s) * profile(ax) + s * lower_arc(ax);
}

double GraphDiskShape::dA(double x) const {
  const double ax = std::abs(x);
  double d;
  if (ax <= r0_) {
    d = dprofile(ax);
  } else if (ax >= r1_) {
    d = lower_arc_slope(ax);
  } else {
    const double u = (ax - r0_) / (r1_ - r0_);
    const double s = smoothstep(u);
    const double ds = smoothstep_d(u) / (r1_ - r0_);
    d = (1.0 - s) * dprofile(ax) + s * lower_arc_slope(ax) + ds * (lower_arc(ax) - profile(ax));
  }
  return x < 0.0 ? -d : d;
}

// ---------------------------------------------------------------------------
// Domain implementation

struct Domain::Impl {
  DomainKind kind = DomainKind::kBall;
  Box bbox;
  double delta = 0.0;
  double window = 0.0;
  double area = 0.0;
  double perimeter = 0.0;
  std::vector<BoundaryPiece> pieces;
  std::vector<Point> features;

  Point center;
  double radius = 0.0;
  std::vector<Point> verts;
  std::unique_ptr<GraphDiskShape> shape;
  SegmentTree tree;
  double sagitta = 0.0;

  bool contains(Point p) const {
    switch (kind) {
      case DomainKind::kBall:
        return norm2(p - center) < radius * radius;
      case DomainKind::kPolygon:
        return point_in_polygon(verts, p);
      case DomainKind::kGraphDisk: {
        const double rd = shape->disk_radius();
        if (std::abs(p.x) < shape->r1()) {
          return p.y > shape->A(p.x) && p.y < rd + std::sqrt(rd * rd - p.x * p.x);
        }
        return norm2(p - shape->disk_center()) < rd * rd;
      }
    }
    return false;
  }

  void build_polyline() {
    std::vector<PolySeg> segs;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const BoundaryPiece& pc = pieces[k];
      std::vector<double> s;
      const int uniform = pc.kind == BoundaryPiece::Kind::kArc ? 2048 : 512;
      for (int i = 0; i <= uniform; ++i) s.push_back(static_cast<double>(i) / uniform);
      for (int j = 0; j <= 160; ++j) {
        const double g = std::pow(2.0, -j / 4.0);
        if (pc.grade_start) s.push_back(g);
        if (pc.grade_end) s.push_back(1.0 - g);
      }
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        const Point a = pc.point(s[i]);
        const Point b = pc.point(s[i + 1]);
        const Point m = pc.point(0.5 * (s[i] + s[i + 1]));
        sagitta = std::max(sagitta, segment_distance(m, a, b));
        segs.push_back({a, b, k, s[i], s[i + 1]});
      }
    }
    sagitta = 2.0 * sagitta + 1e-15;
    tree.build(std::move(segs));
  }

  // Refines candidate polyline segments to the nearest curve parameter under
  // metric f(point).
  template <class F>
  std::pair<double, std::pair<std::size_t, double>> refine(const std::vector<std::size_t>& cand,
                                                            const F& f) const {
    double best = kInf;
    std::pair<std::size_t, double> arg{0, 0.0};
    const auto& segs = tree.segments();
    for (std::size_t i : cand) {
      const PolySeg& sg = segs[i];
      const BoundaryPiece& pc = pieces[sg.piece];
      const double w = sg.s1 - sg.s0;
      const double lo = std::max(0.0, sg.s0 - w);
      const double hi = std::min(1.0, sg.s1 + w);
      const auto [s, v] = brent_min([&](double ss) { return f(pc.point(ss)); }, lo, hi);
      if (v < best) {
        best = v;
        arg = {sg.piece, s};
      }
    }
    return {best, arg};
  }

  Projection project(Point p) const {
    Projection pr;
    switch (kind) {
      case DomainKind::kBall: {
        const Vec2 d = p - center;
        const double r = norm(d);
        const double th = r > 0.0 ? std::atan2(d.y, d.x) : 0.0;
        const double t = th < 0.0 ? th + 2.0 * kPi : th;
        pr.piece = 0;
        pr.s = t / (2.0 * kPi);
        pr.x = center + Vec2{std::cos(th), std::sin(th)} * radius;
        pr.distance = std::abs(r - radius);
        return pr;
      }
      case DomainKind::kPolygon: {
        pr.distance = kInf;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
          const Point a = pieces[k].a;
          const Point b = pieces[k].b;
          const Vec2 ab = b - a;
          const double t = std::clamp(dot(p - a, ab) / norm2(ab), 0.0, 1.0);
          const Point q = a + ab * t;
          const double d = distance(p, q);
          if (d < pr.distance) pr = {q, k, t, d};
        }
        return pr;
      }
      case DomainKind::kGraphDisk: {
        auto cand = tree.near([&](const PolySeg& s) { return segment_distance(p, s.a, s.b); },
                              [&](const Box& b) { return b.distance_to(p); }, sagitta);
        auto [d2, arg] = refine(cand, [&](Point q) { return norm2(q - p); });
        pr.piece = arg.first;
        pr.s = arg.second;
        pr.x = pieces[arg.first].point(arg.second);
        pr.distance = distance(p, pr.x);
        // Brent resolves s only to sqrt(eps); Gauss-Newton on the foot-point
        // condition (x(s) - p) . x'(s) = 0 recovers full precision.
        const BoundaryPiece& pc = pieces[pr.piece];
        for (int it = 0; it < 3; ++it) {
          const Vec2 t = pc.tangent(pr.s);
          const double s = std::clamp(pr.s - dot(pr.x - p, t) / norm2(t), 0.0, 1.0);
          const Point x = pc.point(s);
          const double dist = distance(p, x);
          if (!(dist < pr.distance)) break;
          pr.s = s;
          pr.x = x;
          pr.distance = dist;
        }
        return pr;
      }
    }
    return pr;
  }

  double box_distance(const Box& b) const {
    switch (kind) {
      case DomainKind::kBall: {
        const double dmin = b.distance_to(center);
        const double dmax = b.max_distance_to(center);
        if (radius < dmin) return dmin - radius;
        if (radius > dmax) return radius - dmax;
        return 0.0;
      }
      case DomainKind::kPolygon: {
        double d = kInf;
        for (const auto& pc : pieces) d = std::min(d, segment_box_distance(pc.a, pc.b, b));
        return d;
      }
      case DomainKind::kGraphDisk: {
        auto cand = tree.near([&](const PolySeg& s) { return segment_box_distance(s.a, s.b, b); },
                              [&](const Box& nb) { return nb.distance_to(b); }, sagitta);
        return refine(cand, [&](Point q) { return b.distance_to(q); }).first;
      }
    }
    return 0.0;
  }
};

namespace {

double circle_window_slope(double radius, double half) {
  return half / std::sqrt(radius * radius - half * half);
}

double boundary_perimeter(const std::vector<BoundaryPiece>& pieces) {
  const GaussRule& g = gauss_legendre(16);
  double sum = 0.0;
  for (const auto& pc : pieces) {
    const int panels = 512;
    for (int k = 0; k < panels; ++k) {
      const double a = static_cast<double>(k) / panels;
      const double h = 1.0 / panels;
      for (int i = 0; i < 16; ++i) {
        sum += 0.5 * h * g.weights[i] * norm(pc.tangent(a + 0.5 * h * (g.nodes[i] + 1.0)));
      }
    }
  }
  return sum;
}

}  // namespace

Domain Domain::ball(Point center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("ball radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::kBall;
  impl->center = center;
  impl->radius = radius;
  impl->bbox = {{center.x - radius, center.y - radius}, {center.x + radius, center.y + radius}};
  impl->window = 0.5 * radius;
  impl->delta = circle_window_slope(radius, 0.5 * impl->window);
  impl->area = kPi * radius * radius;
  impl->perimeter = 2.0 * kPi * radius;
  BoundaryPiece pc;
  pc.kind = BoundaryPiece::Kind::kArc;
  pc.center = center;
  pc.radius = radius;
  pc.theta0 = 0.0;
  pc.theta1 = 2.0 * kPi;
  impl->pieces.push_back(pc);
  return Domain(impl);
}

Domain Domain::polygon(std::vector<Point> v) {
  if (v.size() >= 2 && v.front() == v.back()) v.pop_back();
  const std::size_t n = v.size();
  if (n < 3) throw GeometryError("polygon needs at least three vertices");
  for (const Point& p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw GeometryError("polygon vertex not finite");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(v[i], v[(i + 1) % n]) == 0.0) throw GeometryError("polygon has a zero-length edge");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point c = v[j];
      const Point d = v[(j + 1) % n];
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        const Point shared = j == i + 1 ? b : a;
        const Point p = j == i + 1 ? a : b;
        const Point q = j == i + 1 ? d : c;
        const Vec2 e1 = p - shared;
        const Vec2 e2 = q - shared;
        if (cross(e1, e2) == 0.0 && dot(e1, e2) > 0.0) {
          throw GeometryError("polygon folds back on itself");
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        std::ostringstream os;
        os << "polygon is self-intersecting (edges " << i << " and " << j << ")";
        throw GeometryError(os.str());
      }
    }
  }
  double area = polygon_signed_area(v);
  if (area == 0.0) throw GeometryError("polygon has zero area");
  if (area < 0.0) {
    std::reverse(v.begin(), v.end());
    area = -area;
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::kPolygon;
  impl->verts = v;
  impl->area = area;
  double min_edge = kInf;
  double min_gap = kInf;
  double delta = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    impl->bbox.expand(v[i]);
    const Point a = v[i];
    const Point b = v[(i + 1) % n];
    min_edge = std::min(min_edge, distance(a, b));
    impl->perimeter += distance(a, b);
    const Vec2 ein = v[i] - v[(i + n - 1) % n];
    const Vec2 eout = b - a;
    const double turn = std::atan2(cross(ein, eout), dot(ein, eout));
    delta = std::max(delta, std::abs(std::tan(0.5 * turn)));
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Point c = v[j];
      const Point d = v[(j + 1) % n];
      const double gap = std::min({segment_distance(a, c, d), segment_distance(b, c, d),
                                   segment_distance(c, a, b), segment_distance(d, a, b)});
      min_gap = std::min(min_gap, gap);
    }
    BoundaryPiece pc;
    pc.kind = BoundaryPiece::Kind::kSegment;
    pc.a = a;
    pc.b = b;
    pc.grade_start = true;
    pc.grade_end = true;
    impl->pieces.push_back(pc);
    impl->features.push_back(a);
  }
  impl->delta = delta;
  impl->window = 0.5 * std::min(min_edge, min_gap);
  return Domain(impl);
}

Domain Domain::graph_disk(const Modulus& m, double c0, double r0, double disk_radius) {
  auto impl = std::make_shared<Impl>();
  impl->kind = DomainKind::kGraphDisk;
  impl->shape = std::make_unique<GraphDiskShape>(m, c0, r0, disk_radius);
  const GraphDiskShape* sh = impl->shape.get();
  const double r1 = sh->r1();
  const double rd = disk_radius;

  BoundaryPiece left;
  left.kind = BoundaryPiece::Kind::kGraph;
  left.graph = sh;
  left.x0 = -r1;
  left.x1 = 0.0;
  left.grade_end = true;
  BoundaryPiece right = left;
  right.x0 = 0.0;
  right.x1 = r1;
  right.grade_start = true;
  right.grade_end = false;
  BoundaryPiece arc;
  arc.kind = BoundaryPiece::Kind::kArc;
  arc.center = sh->disk_center();
  arc.radius = rd;
  const double phi = std::asin(r1 / rd);
  arc.theta0 = -0.5 * kPi + phi;
  arc.theta1 = 1.5 * kPi - phi;
  impl->pieces = {right, arc, left};
  impl->features = {{0.0, 0.0}, {r1, sh->A(r1)}, {-r1, sh->A(-r1)}};

  double ymin = 0.0;
  for (int i = 0; i <= 1024; ++i) ymin = std::min(ymin, sh->A(r1 * i / 1024.0));
  impl->bbox = {{-rd, ymin}, {rd, 2.0 * rd}};
  impl->window = r0;
  double slope = circle_window_slope(rd, 0.5 * r0);
  for (int i = 1; i <= 4096; ++i) slope = std::max(slope, std::abs(sh->dA(r1 * i / 4096.0)));
  impl->delta = slope;
  impl->perimeter = boundary_perimeter(impl->pieces);
  impl->build_polyline();

  Domain d(impl);
  double area = 0.0;
  for (const auto& nd : d.boundary_quadrature(8)) area += 0.5 * dot(nd.x, nd.normal) * nd.weight;
  impl->area = area;
  return d;
}

DomainKind Domain::kind() const { return impl_->kind; }

std::string Domain::describe() const {
  std::ostringstream os;
  switch (impl_->kind) {
    case DomainKind::kBall:
      os << "ball(center=(" << impl_->center.x << "," << impl_->center.y
         << "), radius=" << impl_->radius << ")";
      break;
    case DomainKind::kPolygon:
      os << "polygon(" << impl_->verts.size() << " vertices)";
      break;
    case DomainKind::kGraphDisk:
      os << "graph_disk(" << impl_->shape->modulus().describe() << ", c0=" << impl_->shape->c0()
         << ", r0=" << impl_->shape->r0() << ", disk_radius=" << impl_->shape->disk_radius() << ")";
      break;
  }
  return os.str();
}

Box Domain::bounding_box() const { return impl_->bbox; }
bool Domain::contains(Point p) const { return impl_->contains(p); }

double Domain::signed_distance(Point p) const {
  if (impl_->kind == DomainKind::kBall) return norm(p - impl_->center) - impl_->radius;
  const double d = impl_->project(p).distance;
  return impl_->contains(p) ? -d : d;
}

double Domain::distance_to_boundary(const Box& b) const { return impl_->box_distance(b); }

BoxClass Domain::classify(const Box& b) const {
  // Corners on both sides settle the common cut case without a distance query.
  const bool c0 = impl_->contains(b.lo);
  if (c0 != impl_->contains(b.hi) || c0 != impl_->contains({b.lo.x, b.hi.y}) ||
      c0 != impl_->contains({b.hi.x, b.lo.y})) {
    return BoxClass::kCut;
  }
  if (impl_->box_distance(b) > 0.0) {
    return impl_->contains(b.center()) ? BoxClass::kInside : BoxClass::kOutside;
  }
  return BoxClass::kCut;
}

double Domain::lipschitz_delta() const { return impl_->delta; }
double Domain::window_size() const { return impl_->window; }
double Domain::area() const { return impl_->area; }
double Domain::perimeter() const { return impl_->perimeter; }
Point Domain::ball_center() const { return impl_->center; }
double Domain::ball_radius() const { return impl_->radius; }
std::span<const Point> Domain::vertices() const { return impl_->verts; }
const GraphDiskShape* Domain::graph_shape() const { return impl_->shape.get(); }
std::span<const BoundaryPiece> Domain::pieces() const { return impl_->pieces; }
std::span<const Point> Domain::feature_points() const { return impl_->features; }
Domain::Projection Domain::project(Point p) const { return impl_->project(p); }

std::vector<BoundaryNode> Domain::boundary_quadrature(int refinement) const {
  if (refinement < 0) throw DomainError("boundary_quadrature: refinement must be >= 0");
  const GaussRule& g = gauss_legendre(16);
  const int panels = 1 << std::min(refinement, 24);
  const int grading = 20 + refinement;
  std::vector<BoundaryNode> out;
  auto emit = [&](const BoundaryPiece& pc, double a, double b) {
    const double h = 0.5 * (b - a);
    for (int i = 0; i < 16; ++i) {
      const double s = a + h * (g.nodes[i] + 1.0);
      const Vec2 t = pc.tangent(s);
      const double len = norm(t);
      out.push_back({pc.point(s), Vec2{t.y, -t.x} / len, g.weights[i] * h * len});
    }
  };
  for (const auto& pc : impl_->pieces) {
    const double h = 1.0 / panels;
    for (int k = 0; k < panels; ++k) {
      const double a = k * h;
      const double b = (k + 1) * h;
      const bool first = k == 0 && pc.grade_start;
      const bool last = k == panels - 1 && pc.grade_end;
      if (!first && !last) {
        emit(pc, a, b);
        continue;
      }
      // Geometric panels toward the graded end(s).
      std::vector<double> cuts;
      if (first && last) {
        cuts = {0.0, 0.5, 1.0};
      } else {
        cuts = {a, b};
      }
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = cuts[c + 1];
        const bool toward_lo = (first && lo == 0.0);
        const bool toward_hi = (last && hi == 1.0);
        if (!toward_lo && !toward_hi) {
          emit(pc, lo, hi);
          continue;
        }
        const double len = hi - lo;
        for (int j = 0; j < grading; ++j) {
          const double f0 = std::ldexp(1.0, -j - 1);
          const double f1 = std::ldexp(1.0, -j);
          if (toward_lo) {
            emit(pc, lo + f0 * len, lo + f1 * len);
          } else {
            emit(pc, hi - f1 * len, hi - f0 * len);
          }
        }
        const double tail = std::ldexp(1.0, -grading) * len;
        if (toward_lo) {
          emit(pc, lo, lo + tail);
        } else {
          emit(pc, hi - tail, hi);
        }
      }
    }
  }
  return out;
}

Window Domain::window_at(Point a, int samples) const {
  const double sd = signed_distance(a);
  if (std::abs(sd) > 1e-9) {
    std::ostringstream os;
    os << "window anchor (" << a.x << ", " << a.y << ") is " << sd << " from the boundary";
    throw DomainError(os.str());
  }
  if (samples < 3) samples = 3;
  const double half = 0.5 * impl_->window;

  // Candidate vertical directions: the normal at the anchor and, near
  // polygon corners, the inward corner bisectors.
  std::vector<Vec2> normals;
  const Projection pr = project(a);
  normals.push_back(-impl_->pieces[pr.piece].normal(pr.s));
  if (impl_->kind == DomainKind::kPolygon) {
    const auto& v = impl_->verts;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (distance(v[i], a) > half * std::sqrt(2.0) + 1e-12) continue;
      const Vec2 ein = normalized(v[i] - v[(i + n - 1) % n]);
      const Vec2 eout = normalized(v[(i + 1) % n] - v[i]);
      const Vec2 bis = perp(ein) + perp(eout);
      if (norm(bis) > 1e-12) normals.push_back(normalized(bis));
    }
  }

  auto graph_of = [&](Vec2 e2, Window& w) {
    w.origin = a;
    w.e2 = e2;
    w.e1 = -perp(e2);
    w.half_size = half;
    w.u.assign(samples, 0.0);
    w.a.assign(samples, 0.0);
    bool ok = true;
    for (int k = 0; k < samples && ok; ++k) {
      const double u = -half + 2.0 * half * k / (samples - 1);
      w.u[k] = u;
      // First outside-to-inside transition along the vertical line, searched
      // over twice the window height so steep corners stay inside the range.
      const int probes = 128;
      double prev_v = -2.0 * half;
      bool prev_in = contains(w.to_world(u, prev_v));
      bool found = false;
      for (int j = 1; j <= probes && !found; ++j) {
        const double v = -2.0 * half + 4.0 * half * j / probes;
        const bool in = contains(w.to_world(u, v));
        if (!prev_in && in) {
          double lo = prev_v;
          double hi = v;
          for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (contains(w.to_world(u, mid)) ? hi : lo) = mid;
          }
          w.a[k] = 0.5 * (lo + hi);
          found = true;
        }
        prev_v = v;
        prev_in = in;
      }
      ok = found;
    }
    if (!ok) {
      w.max_slope = kInf;
      return;
    }
    w.max_slope = 0.0;
    for (int k = 1; k < samples; ++k) {
      w.max_slope = std::max(w.max_slope, std::abs(w.a[k] - w.a[k - 1]) / (w.u[k] - w.u[k - 1]));
    }
  };

  Window best;
  best.max_slope = kInf;
  for (const Vec2& e2 : normals) {
    Window w;
    graph_of(e2, w);
    if (w.max_slope < best.max_slope || best.u.empty()) best = std::move(w);
  }
  // Chord slopes of a sampled graph never exceed the true maximum slope.
  best.slope_ok = best.max_slope <= impl_->delta * (1.0 + 1e-6) + 1e-9;
  return best;
}

}  // namespace czt

namespace czt {

namespace {

void circle_roots(Point a, Vec2 d, Point c, double r, std::vector<double>& out) {
  const Vec2 f = a - c;
  const double qa = norm2(d);
  const double qb = 2.0 * dot(f, d);
  const double qc = norm2(f) - r * r;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc <= 0.0 || qa == 0.0) return;
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
  out.push_back(q / qa);
  if (q != 0.0) out.push_back(qc / q);
}

// Sign changes of g on [t0, t1] located by sampling, then bracketed root
// finding.
template <class G>
void sampled_roots(const G& g, double t0, double t1, int samples, std::vector<double>& out) {
  double prev_t = t0;
  double prev = g(t0);
  for (int i = 1; i <= samples; ++i) {
    const double t = t0 + (t1 - t0) * i / samples;
    const double v = g(t);
    if (prev == 0.0) {
      out.push_back(prev_t);
    } else if ((prev < 0.0) != (v < 0.0) && v != 0.0) {
      std::uintmax_t iters = 100;
      const auto [lo, hi] = boost::math::tools::toms748_solve(g, prev_t, t, prev, v,
                                                              boost::math::tools::eps_tolerance<double>(52), iters);
      out.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev = v;
  }
  if (prev == 0.0) out.push_back(prev_t);
}

}  // namespace

std::vector<std::pair<double, double>> Domain::inside_intervals(Point a, Point b) const {
  const Impl& im = *impl_;
  const Vec2 d = b - a;
  std::vector<double> ts{0.0, 1.0};
  switch (im.kind) {
    case DomainKind::kBall:
      circle_roots(a, d, im.center, im.radius, ts);
      break;
    case DomainKind::kPolygon:
      for (std::size_t i = 0; i < im.verts.size(); ++i) {
        const Point p = im.verts[i];
        const Vec2 e = im.verts[(i + 1) % im.verts.size()] - p;
        const double den = cross(d, e);
        if (den == 0.0) continue;
        const double t = cross(p - a, e) / den;
        const double u = cross(p - a, d) / den;
        if (u >= 0.0 && u <= 1.0) ts.push_back(t);
      }
      break;
    case DomainKind::kGraphDisk: {
      const GraphDiskShape& sh = *im.shape;
      circle_roots(a, d, sh.disk_center(), sh.disk_radius(), ts);
      const double r1 = sh.r1();
      if (d.x == 0.0) {
        if (std::abs(a.x) < r1 && d.y != 0.0) ts.push_back((sh.A(a.x) - a.y) / d.y);
        break;
      }
      // Portion of the segment with |x| < r1, where the graph bounds D.
      double lo = (-r1 - a.x) / d.x;
      double hi = (r1 - a.x) / d.x;
      if (lo > hi) std::swap(lo, hi);
      ts.push_back(lo);
      ts.push_back(hi);
      lo = std::max(lo, 0.0);
      hi = std::min(hi, 1.0);
      if (lo < hi) {
        const double ex = (-a.x) / d.x;
        auto g = [&](double t) {
          const Point p = a + d * t;
          return p.y - sh.A(p.x);
        };
        // Short segments see a nearly straight graph and need few samples.
        const int samples = std::clamp(static_cast<int>(std::ceil(64.0 * std::abs(d.x) / r1)), 4, 64);
        // Split at x = 0 where A is least smooth.
        if (ex > lo && ex < hi) {
          ts.push_back(ex);
          sampled_roots(g, lo, ex, samples, ts);
          sampled_roots(g, ex, hi, samples, ts);
        } else {
          sampled_roots(g, lo, hi, samples, ts);
        }
      }
      break;
    }
  }
  for (double& t : ts) t = std::clamp(t, 0.0, 1.0);
  std::sort(ts.begin(), ts.end());
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t0 = ts[i];
    const double t1 = ts[i + 1];
    if (t1 <= t0) continue;
    if (!im.contains(a + d * (0.5 * (t0 + t1)))) continue;
    if (!out.empty() && out.back().second == t0) {
      out.back().second = t1;
    } else {
      out.emplace_back(t0, t1);
    }
  }
  return out;
}

}  // namespace czt
