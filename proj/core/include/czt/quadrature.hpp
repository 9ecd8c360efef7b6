#pragma once

#include <functional>
#include <span>
#include <vector>

#include "czt/point.hpp"

namespace czt {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Cached n-point rule, 1 <= n <= 64.
const GaussRule& gauss_legendre(int n);

struct Integral1D {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]. Stops when the summed
// error estimate is below max(abs_tol, rel_tol * |value|). Throws
// QuadratureFailure carrying the worst interval when max_intervals is reached.
Integral1D integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol = 0.0, int max_intervals = 4000);

// Integral of a smooth function over the triangle (a, b, c) with a collapsed
// tensor Gauss rule of order n. Signed: negative for clockwise triangles.
template <class F>
double integrate_triangle(const F& f, Point a, Point b, Point c, int n = 6) {
  const GaussRule& g = gauss_legendre(n);
  const double area2 = cross(b - a, c - a);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = 0.5 * (g.nodes[i] + 1.0);
    const double wu = 0.5 * g.weights[i];
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (g.nodes[j] + 1.0);
      const double wv = 0.5 * g.weights[j];
      // Duffy map (u, v) -> (u, u v) onto the reference triangle.
      const double s = u * (1.0 - v);
      const double t = u * v;
      const Point p = a + (b - a) * s + (c - a) * t;
      sum += wu * wv * u * f(p);
    }
  }
  return sum * area2;
}

// Signed fan integral over a closed polygon. Valid for non-convex simple
// polygons as long as f is smooth on their convex hull.
template <class F>
double integrate_polygon(const F& f, std::span<const Point> poly, int n = 6) {
  if (poly.size() < 3) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    sum += integrate_triangle(f, poly[0], poly[i], poly[i + 1], n);
  }
  return sum;
}

double polygon_signed_area(std::span<const Point> poly);

}  // namespace czt
