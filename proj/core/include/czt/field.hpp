#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "czt/domain.hpp"
#include "czt/moduli.hpp"
#include "czt/point.hpp"

namespace czt {

// Evaluable real function on the plane, optionally with its gradient.
struct ScalarField {
  std::function<double(Point)> value;
  std::function<Vec2(Point)> gradient;  // empty when unavailable
  Box support_hint;                     // empty box: no hint
  std::string label;

  double operator()(Point p) const { return value(p); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
};

namespace fields {

ScalarField constant(double c);
// x_1 (axis 0) or x_2 (axis 1).
ScalarField coordinate(int axis);
// phi(x - tau) for the extremal function of m, with gradient.
ScalarField phi_tau(const Modulus& m, Point tau);
// f chi_D; the gradient, if any, is kept inside D and zero outside.
ScalarField restricted(ScalarField f, const Domain& d);

}  // namespace fields

struct GradientCheck {
  double max_rel_error = 0.0;
  Point worst;
  std::size_t points = 0;
};

// Compares the gradient with central differences of step h at the given
// points. Relative error is measured against max(|grad|, floor).
GradientCheck check_gradient(const ScalarField& f, const std::vector<Point>& points, double h,
                             double floor = 1e-8);

}  // namespace czt
