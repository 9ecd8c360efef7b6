#include "czt/point.hpp"

namespace czt {

namespace {

double orient(Point a, Point b, Point c) { return cross(b - a, c - a); }

bool on_segment(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const double d1 = orient(c, d, a);
  const double d2 = orient(c, d, b);
  const double d3 = orient(a, b, c);
  const double d4 = orient(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(c, d, a)) return true;
  if (d2 == 0 && on_segment(c, d, b)) return true;
  if (d3 == 0 && on_segment(a, b, c)) return true;
  if (d4 == 0 && on_segment(a, b, d)) return true;
  return false;
}

double segment_box_distance(Point a, Point b, const Box& box) {
  if (box.contains(a) || box.contains(b)) return 0.0;
  const Point c00 = box.lo;
  const Point c10{box.hi.x, box.lo.y};
  const Point c11 = box.hi;
  const Point c01{box.lo.x, box.hi.y};
  if (segments_intersect(a, b, c00, c10) || segments_intersect(a, b, c10, c11) ||
      segments_intersect(a, b, c11, c01) || segments_intersect(a, b, c01, c00)) {
    return 0.0;
  }
  double d = std::min(box.distance_to(a), box.distance_to(b));
  for (Point c : {c00, c10, c11, c01}) d = std::min(d, segment_distance(c, a, b));
  return d;
}

}  // namespace czt
