#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "czt/moduli.hpp"
#include "czt/point.hpp"

namespace czt {

enum class DomainKind { kBall, kPolygon, kGraphDisk };
enum class BoxClass { kInside, kOutside, kCut };

std::string to_string(DomainKind k);

class GraphDiskShape;

// One C^1 arc of the boundary, parametrized by s in [0, 1] in the
// counterclockwise direction.
struct BoundaryPiece {
  enum class Kind { kSegment, kArc, kGraph };
  Kind kind = Kind::kSegment;
  Point a;
  Point b;  // segment endpoints
  Point center;
  double radius = 0.0;
  double theta0 = 0.0;
  double theta1 = 0.0;  // arc angles
  double x0 = 0.0;
  double x1 = 0.0;  // graph abscissae
  const GraphDiskShape* graph = nullptr;
  bool grade_start = false;
  bool grade_end = false;

  Point point(double s) const;
  Vec2 tangent(double s) const;  // d point / ds
  Vec2 normal(double s) const;   // unit outward normal
};

struct BoundaryNode {
  Point x;
  Vec2 normal;
  double weight;
};

// Local frame of an R-window: x = origin + u e1 + v e2, the domain lies
// above the graph v = A(u) for |u| <= half_size.
struct Window {
  Point origin;
  Vec2 e1;
  Vec2 e2;
  double half_size = 0.0;
  std::vector<double> u;
  std::vector<double> a;
  double max_slope = 0.0;
  bool slope_ok = false;

  Point to_world(double uu, double vv) const { return origin + e1 * uu + e2 * vv; }
  Vec2 to_local(Point p) const { return {dot(p - origin, e1), dot(p - origin, e2)}; }
};

// Boundary of the graph-perturbed disk near the origin: x2 = A(x1).
class GraphDiskShape {
 public:
  GraphDiskShape(Modulus m, double c0, double r0, double disk_radius);

  double A(double x) const;
  double dA(double x) const;
  // c0 |x| w(|x|), the profile the graph follows on |x| < r0.
  double profile(double x) const;

  const Modulus& modulus() const { return m_; }
  double c0() const { return c0_; }
  double r0() const { return r0_; }
  double r1() const { return r1_; }
  double disk_radius() const { return rd_; }
  Point disk_center() const { return {0.0, rd_}; }

 private:
  double lower_arc(double x) const;
  double lower_arc_slope(double x) const;
  double dprofile(double x) const;

  Modulus m_;
  double c0_;
  double r0_;
  double r1_;
  double rd_;
};

class Domain {
 public:
  static Domain ball(Point center, double radius);
  // Simple polygon; reoriented counterclockwise. Throws GeometryError when
  // self-intersecting or degenerate.
  static Domain polygon(std::vector<Point> vertices);
  // Disk of radius disk_radius tangent to the x1-axis at the origin whose
  // boundary on |x1| <= r0 is the graph x2 = c0 |x1| w(|x1|), blended
  // C^2-smoothly into the disk arc on [r0, 2 r0].
  static Domain graph_disk(const Modulus& m, double c0, double r0, double disk_radius = 0.5);

  DomainKind kind() const;
  std::string describe() const;
  Box bounding_box() const;
  bool contains(Point p) const;
  // Negative inside.
  double signed_distance(Point p) const;
  // Distance from the closed rectangle to the boundary (0 if they meet).
  double distance_to_boundary(const Box& b) const;
  BoxClass classify(const Box& b) const;

  double lipschitz_delta() const;
  double window_size() const;
  double area() const;
  double perimeter() const;

  // Ball data (kind() == kBall).
  Point ball_center() const;
  double ball_radius() const;
  // Polygon vertices, counterclockwise (kind() == kPolygon).
  std::span<const Point> vertices() const;
  const GraphDiskShape* graph_shape() const;

  std::span<const BoundaryPiece> pieces() const;
  // Points where the boundary is not smooth or changes description.
  std::span<const Point> feature_points() const;

  // 2^refinement panels per piece, geometric grading toward corners and the
  // graph origin, 16-point Gauss per panel.
  std::vector<BoundaryNode> boundary_quadrature(int refinement) const;

  // Nearest boundary point and the piece / parameter realizing it.
  struct Projection {
    Point x;
    std::size_t piece = 0;
    double s = 0.0;
    double distance = 0.0;
  };
  Projection project(Point p) const;

  Window window_at(Point a, int samples = 129) const;

  // Parameter intervals [t0, t1] within [0, 1] of the segment a + t (b - a)
  // that lie in D, sorted and disjoint.
  std::vector<std::pair<double, double>> inside_intervals(Point a, Point b) const;

  struct Impl;

 private:
  explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace czt
