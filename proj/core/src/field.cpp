#include "czt/field.hpp"

#include <cmath>
#include <sstream>

#include "czt/errors.hpp"

namespace czt::fields {

ScalarField constant(double c) {
  ScalarField f;
  f.value = [c](Point) { return c; };
  f.gradient = [](Point) { return Vec2{0.0, 0.0}; };
  std::ostringstream os;
  os << "constant(" << c << ")";
  f.label = os.str();
  return f;
}

ScalarField coordinate(int axis) {
  if (axis != 0 && axis != 1) throw ConfigError("coordinate axis must be 0 or 1");
  ScalarField f;
  f.value = [axis](Point p) { return axis == 0 ? p.x : p.y; };
  f.gradient = [axis](Point) { return axis == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0}; };
  f.label = axis == 0 ? "x1" : "x2";
  return f;
}

ScalarField phi_tau(const Modulus& m, Point tau) {
  ScalarField f;
  f.value = [m, tau](Point p) { return extremal_phi(m, p - tau); };
  f.gradient = [m, tau](Point p) {
    const Vec2 t = p - tau;
    const double r = norm(t);
    if (r >= 1.0 || r == 0.0) return Vec2{0.0, 0.0};
    return t * (-m(r) / (r * r));
  };
  f.support_hint = {{tau.x - 1.0, tau.y - 1.0}, {tau.x + 1.0, tau.y + 1.0}};
  std::ostringstream os;
  os << "phi_tau(" << m.describe() << ", " << tau.x << ", " << tau.y << ")";
  f.label = os.str();
  return f;
}

ScalarField restricted(ScalarField f, const Domain& d) {
  ScalarField g;
  g.value = [f, d](Point p) { return d.contains(p) ? f.value(p) : 0.0; };
  if (f.has_gradient()) {
    g.gradient = [f, d](Point p) { return d.contains(p) ? f.gradient(p) : Vec2{0.0, 0.0}; };
  }
  g.support_hint = d.bounding_box();
  g.label = f.label + " chi_D";
  return g;
}

}  // namespace czt::fields

namespace czt {

GradientCheck check_gradient(const ScalarField& f, const std::vector<Point>& points, double h, double floor) {
  if (!f.has_gradient()) throw CapabilityError("field " + f.label + " has no gradient");
  GradientCheck out;
  for (const Point p : points) {
    const Vec2 g = f.gradient(p);
    const Vec2 fd{(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2 * h), (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2 * h)};
    const double e = norm(g - fd) / std::max(norm(g), floor);
    if (e > out.max_rel_error) {
      out.max_rel_error = e;
      out.worst = p;
    }
    ++out.points;
  }
  return out;
}

}  // namespace czt
